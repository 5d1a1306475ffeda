//! `lca` — instance generation, point queries, sweeps, verification,
//! parameter checks and scaling benchmarks for the query oracles.
//!
//! Exit codes: 0 success, 1 verification violation, 2 query FAIL,
//! 3 usage/parse error.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod bench;
mod formats;

use formats::{parse_seed, OutputFormat};

#[derive(Parser)]
#[command(
    name = "lca",
    version,
    about = "Point-query oracles for MIS, broadcast scheduling, hypergraph 2-coloring and k-CNF",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Mis,
    Isc,
    Broadcast,
    Color,
    Cnf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InstanceKind {
    Graph,
    Hypergraph,
    Cnf,
}

/// Instance source: a file of the matching kind, or a generator spec.
#[derive(Args, Debug)]
struct InstanceArgs {
    /// Graph file (header "n m d", then edge lines "u v")
    #[arg(long)]
    graph: Option<String>,
    /// Hypergraph file (header "m N k d", then N lines of k vertex ids)
    #[arg(long)]
    hypergraph: Option<String>,
    /// DIMACS CNF file
    #[arg(long)]
    cnf: Option<String>,
    /// Generate the instance: "n,d" for graphs, "n,d,k,N" for hypergraphs
    /// and formulas (n entities, intersection bound d, width k, N members)
    #[arg(long, value_name = "SPEC")]
    gen: Option<String>,
}

/// Session constant overrides.
#[derive(Args, Debug, Clone, Copy)]
struct Overrides {
    /// Cap scale c in the MIS/cover Phase-2 component cap
    #[arg(long)]
    c: Option<f64>,
    /// Phase-2 component cap scale (coloring/CNF)
    #[arg(long)]
    c1: Option<f64>,
    /// Phase-3 component cap scale (coloring/CNF)
    #[arg(long)]
    c2: Option<f64>,
    /// Retry budget scale (coloring/CNF)
    #[arg(long)]
    c3: Option<f64>,
    /// Phase-1 round count override (MIS/cover/broadcast)
    #[arg(long)]
    rounds: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance and print it
    Gen {
        #[arg(long, value_enum)]
        kind: InstanceKind,
        /// "n,d" for graphs; "n,d,k,N" otherwise
        #[arg(long, value_name = "SPEC")]
        gen: String,
        #[arg(long, env = "LCA_SEED", default_value = "0", value_parser = parse_seed)]
        seed: u64,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<String>,
    },
    /// Answer a single point query
    Query {
        #[arg(long, value_enum)]
        algo: Algo,
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, env = "LCA_SEED", default_value = "0", value_parser = parse_seed)]
        seed: u64,
        /// Entity to query (vertex or variable id)
        #[arg(long)]
        vertex: usize,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Query every entity and emit the full solution plus a report
    Sweep {
        #[arg(long, value_enum)]
        algo: Algo,
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, env = "LCA_SEED", default_value = "0", value_parser = parse_seed)]
        seed: u64,
        /// "ascending" or "random" / "random:SEED"
        #[arg(long, default_value = "ascending")]
        order: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        out: Option<String>,
    },
    /// Check a solution file against its instance
    Verify {
        #[arg(long, value_enum)]
        algo: Algo,
        #[command(flatten)]
        instance: InstanceArgs,
        /// Solution file as produced by `sweep`
        #[arg(long)]
        solution: String,
        #[arg(long, env = "LCA_SEED", default_value = "0", value_parser = parse_seed)]
        seed: u64,
    },
    /// Print the feasible width split "k1 k2 k3" for (k, d), or INFEASIBLE
    Params {
        /// color or cnf
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
    },
    /// Sweep generated instances across a size ladder and emit per-query cost rows
    Bench {
        #[arg(long, value_enum)]
        algo: Algo,
        /// Size ladder: "a:b" doubles from a to b, or a comma list "a,b,c"
        #[arg(long)]
        sizes: String,
        /// Max degree (graphs) or intersection bound (hypergraphs/formulas)
        #[arg(long, default_value = "4")]
        d: usize,
        /// Constraint width for color/cnf benches
        #[arg(long, default_value = "6")]
        k: usize,
        #[arg(long, env = "LCA_SEED", default_value = "0", value_parser = parse_seed)]
        seed: u64,
        /// Independent seeds per size
        #[arg(long, default_value = "3")]
        repeat: usize,
        /// Worker threads across seeds/instances
        #[arg(long, default_value = "1")]
        jobs: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
        #[command(flatten)]
        overrides: Overrides,
    },
}

pub enum CliError {
    Usage(String),
    Violation(String),
    Fail(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Fail(_) => 2,
            CliError::Usage(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Violation(m) | CliError::Fail(m) => m,
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen { kind, gen, seed, out } => cmd_gen(kind, &gen, seed, out.as_deref()),
        Command::Query { algo, instance, seed, vertex, overrides } => {
            cmd_query(algo, &instance, seed, vertex, overrides)
        }
        Command::Sweep { algo, instance, seed, order, format, overrides, out } => {
            cmd_sweep(algo, &instance, seed, &order, format, overrides, out.as_deref())
        }
        Command::Verify { algo, instance, solution, seed } => {
            cmd_verify(algo, &instance, &solution, seed)
        }
        Command::Params { algo, k, d } => cmd_params(algo, k, d),
        Command::Bench { algo, sizes, d, k, seed, repeat, jobs, format, overrides } => {
            bench::cmd_bench(algo, &sizes, d, k, seed, repeat, jobs, format, overrides)
        }
    }
}

// ----- instance loading ----------------------------------------------------

fn parse_gen_spec(spec: &str) -> Result<Vec<usize>, CliError> {
    spec.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| usage(format!("bad --gen field '{s}'"))))
        .collect()
}

fn gen_graph_from_spec(spec: &str, seed: u64) -> Result<lca::Graph, CliError> {
    let fields = parse_gen_spec(spec)?;
    if fields.len() != 2 {
        return Err(usage("graph --gen spec is 'n,d'"));
    }
    Ok(lca::gen_graph(fields[0], fields[1], seed))
}

fn gen_hypergraph_from_spec(spec: &str, seed: u64) -> Result<lca::Hypergraph, CliError> {
    let fields = parse_gen_spec(spec)?;
    if fields.len() != 4 {
        return Err(usage("hypergraph --gen spec is 'n,d,k,N'"));
    }
    lca::gen_hypergraph(fields[0], fields[3], fields[2], fields[1], seed)
        .map_err(|e| usage(e.to_string()))
}

fn gen_cnf_from_spec(spec: &str, seed: u64) -> Result<lca::CnfFormula, CliError> {
    let fields = parse_gen_spec(spec)?;
    if fields.len() != 4 {
        return Err(usage("cnf --gen spec is 'n,d,k,N'"));
    }
    lca::gen_cnf(fields[0], fields[3], fields[2], fields[1], seed).map_err(|e| usage(e.to_string()))
}

fn open(path: &str) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(|e| usage(format!("{path}: {e}")))
}

fn load_graph(args: &InstanceArgs, seed: u64) -> Result<lca::Graph, CliError> {
    match (&args.graph, &args.gen) {
        (Some(path), None) => lca::Graph::parse(open(path)?).map_err(|e| usage(e.to_string())),
        (None, Some(spec)) => gen_graph_from_spec(spec, seed),
        _ => Err(usage("this algorithm needs exactly one of --graph or --gen")),
    }
}

fn load_hypergraph(args: &InstanceArgs, seed: u64) -> Result<lca::Hypergraph, CliError> {
    match (&args.hypergraph, &args.gen) {
        (Some(path), None) => lca::Hypergraph::parse(open(path)?).map_err(|e| usage(e.to_string())),
        (None, Some(spec)) => gen_hypergraph_from_spec(spec, seed),
        _ => Err(usage("this algorithm needs exactly one of --hypergraph or --gen")),
    }
}

fn load_cnf(args: &InstanceArgs, seed: u64) -> Result<lca::CnfFormula, CliError> {
    match (&args.cnf, &args.gen) {
        (Some(path), None) => lca::CnfFormula::parse(open(path)?).map_err(|e| usage(e.to_string())),
        (None, Some(spec)) => gen_cnf_from_spec(spec, seed),
        _ => Err(usage("this algorithm needs exactly one of --cnf or --gen")),
    }
}

fn mis_config(o: Overrides) -> lca::MisConfig {
    let mut config = lca::MisConfig::default();
    if let Some(c) = o.c {
        config.cap_scale = c;
    }
    config.rounds = o.rounds;
    config
}

fn isc_config(o: Overrides) -> lca::isc::IscConfig {
    let mut config = lca::isc::IscConfig::default();
    if let Some(c) = o.c {
        config.cap_scale = c;
    }
    config.rounds = o.rounds;
    config
}

fn lll_config(o: Overrides) -> lca::LllConfig {
    let mut config = lca::LllConfig::default();
    if let Some(c1) = o.c1 {
        config.c1 = c1;
    }
    if let Some(c2) = o.c2 {
        config.c2 = c2;
    }
    if let Some(c3) = o.c3 {
        config.c3 = c3;
    }
    config
}

// ----- subcommands ----------------------------------------------------------

fn cmd_gen(kind: InstanceKind, spec: &str, seed: u64, out: Option<&str>) -> Result<(), CliError> {
    let mut buf: Vec<u8> = Vec::new();
    match kind {
        InstanceKind::Graph => gen_graph_from_spec(spec, seed)?.write(&mut buf),
        InstanceKind::Hypergraph => gen_hypergraph_from_spec(spec, seed)?.write(&mut buf),
        InstanceKind::Cnf => gen_cnf_from_spec(spec, seed)?.write(&mut buf),
    }
    .map_err(|e| usage(e.to_string()))?;
    write_output(out, &buf)
}

fn write_output(out: Option<&str>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut f = File::create(path).map_err(|e| usage(format!("{path}: {e}")))?;
            f.write_all(bytes).map_err(|e| usage(e.to_string()))
        }
        None => std::io::stdout().write_all(bytes).map_err(|e| usage(e.to_string())),
    }
}

fn cmd_query(
    algo: Algo,
    instance: &InstanceArgs,
    seed: u64,
    vertex: usize,
    overrides: Overrides,
) -> Result<(), CliError> {
    let fail = |e: String| CliError::Fail(e);
    match algo {
        Algo::Mis => {
            let g = load_graph(instance, seed)?;
            check_entity(vertex, g.vertex_count())?;
            let mut s = lca::MisSession::with_config(&g, seed, mis_config(overrides));
            let answer = s.query(vertex).map_err(|e| fail(e.to_string()))?;
            let name = match answer {
                lca::MisAnswer::In => "in",
                lca::MisAnswer::Out => "out",
            };
            println!("{name} touched={}", s.touched());
        }
        Algo::Isc | Algo::Broadcast => {
            let g = load_graph(instance, seed)?;
            check_entity(vertex, g.vertex_count())?;
            let square = algo == Algo::Broadcast;
            let mut s = lca::IscSession::with_config(&g, seed, square, isc_config(overrides));
            let round = s.round(vertex).map_err(|e| fail(e.to_string()))?;
            println!("{round} touched={}", s.touched());
        }
        Algo::Color => {
            let h = load_hypergraph(instance, seed)?;
            check_entity(vertex, h.vertex_count())?;
            let mut s = lca::ColoringSession::with_config(&h, seed, lll_config(overrides))
                .map_err(|e| usage(e.to_string()))?;
            let color = s.query(vertex).map_err(|e| fail(e.to_string()))?;
            println!("{color} touched={}", s.touched());
        }
        Algo::Cnf => {
            let f = load_cnf(instance, seed)?;
            check_entity(vertex, f.num_vars())?;
            let mut s = lca::CnfSession::with_config(&f, seed, lll_config(overrides))
                .map_err(|e| usage(e.to_string()))?;
            let value = s.query(vertex).map_err(|e| fail(e.to_string()))?;
            println!("{value} touched={}", s.touched());
        }
    }
    Ok(())
}

fn check_entity(id: usize, count: usize) -> Result<(), CliError> {
    if id >= count {
        return Err(usage(format!("entity {id} out of range, instance has {count}")));
    }
    Ok(())
}

fn parse_order(text: &str) -> Result<lca::SweepOrder, CliError> {
    if text == "ascending" {
        return Ok(lca::SweepOrder::Ascending);
    }
    if text == "random" {
        return Ok(lca::SweepOrder::Shuffled(0));
    }
    if let Some(seed) = text.strip_prefix("random:") {
        let seed = parse_seed(seed).map_err(usage)?;
        return Ok(lca::SweepOrder::Shuffled(seed));
    }
    Err(usage(format!("bad --order '{text}', expected ascending|random[:seed]")))
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    algo: Algo,
    instance: &InstanceArgs,
    seed: u64,
    order: &str,
    format: OutputFormat,
    overrides: Overrides,
    out: Option<&str>,
) -> Result<(), CliError> {
    let order = parse_order(order)?;
    let mut buf: Vec<u8> = Vec::new();
    let fail_count = match algo {
        Algo::Mis => {
            let g = load_graph(instance, seed)?;
            let mut s = lca::MisSession::with_config(&g, seed, mis_config(overrides));
            let report = lca::sweep::sweep_mis(&mut s, order);
            formats::render_mis(&mut buf, &report, format);
            report.fail_count
        }
        Algo::Isc | Algo::Broadcast => {
            let g = load_graph(instance, seed)?;
            let square = algo == Algo::Broadcast;
            let mut s = lca::IscSession::with_config(&g, seed, square, isc_config(overrides));
            let report = lca::sweep::sweep_isc(&mut s, order);
            formats::render_rounds(&mut buf, &report, format);
            report.fail_count
        }
        Algo::Color => {
            let h = load_hypergraph(instance, seed)?;
            let mut s = lca::ColoringSession::with_config(&h, seed, lll_config(overrides))
                .map_err(|e| usage(e.to_string()))?;
            let report = lca::sweep::sweep_lll(&mut s, order);
            formats::render_colors(&mut buf, &report, format);
            report.fail_count
        }
        Algo::Cnf => {
            let f = load_cnf(instance, seed)?;
            let mut s = lca::CnfSession::with_config(&f, seed, lll_config(overrides))
                .map_err(|e| usage(e.to_string()))?;
            let report = lca::sweep::sweep_lll(&mut s, order);
            formats::render_assignment(&mut buf, &report, format);
            report.fail_count
        }
    };
    write_output(out, &buf)?;
    if fail_count > 0 {
        return Err(CliError::Fail(format!("{fail_count} queries failed")));
    }
    Ok(())
}

fn cmd_params(algo: Algo, k: usize, d: usize) -> Result<(), CliError> {
    let split = match algo {
        Algo::Color => lca::coloring_params(k, d),
        Algo::Cnf => lca::cnf_params(k, d),
        _ => return Err(usage("params applies to --algo color or cnf")),
    };
    match split {
        Some(s) => {
            println!("{s}");
            Ok(())
        }
        None => {
            println!("INFEASIBLE");
            Err(usage(format!("no feasible width split for k={k} d={d}")))
        }
    }
}

fn cmd_verify(
    algo: Algo,
    instance: &InstanceArgs,
    solution: &str,
    seed: u64,
) -> Result<(), CliError> {
    let violation = |v: lca::Violation| CliError::Violation(v.to_string());
    let mut text = String::new();
    open(solution)?.read_to_string(&mut text).map_err(|e| usage(format!("{solution}: {e}")))?;
    match algo {
        Algo::Mis => {
            let g = load_graph(instance, seed)?;
            let in_set = formats::parse_mis_solution(&text, g.vertex_count())?;
            lca::verify_mis(&g, &in_set).map_err(violation)?;
        }
        Algo::Isc => {
            let g = load_graph(instance, seed)?;
            let rounds = formats::parse_round_solution(&text, g.vertex_count())?;
            lca::verify_isc(&rounds, |v| g.neighbors(v).to_vec()).map_err(violation)?;
        }
        Algo::Broadcast => {
            let g = load_graph(instance, seed)?;
            let rounds = formats::parse_round_solution(&text, g.vertex_count())?;
            lca::verify_broadcast(&g, &rounds).map_err(violation)?;
            // a broadcast schedule is an independent set cover of the square
            lca::verify_isc(&rounds, |v| g.square_neighbors(v)).map_err(violation)?;
        }
        Algo::Color => {
            let h = load_hypergraph(instance, seed)?;
            let colors = formats::parse_color_solution(&text, h.vertex_count())?;
            lca::verify_coloring(&h, &colors).map_err(violation)?;
        }
        Algo::Cnf => {
            let f = load_cnf(instance, seed)?;
            let assignment = formats::parse_assignment_solution(&text, f.num_vars())?;
            lca::verify_sat(&f, &assignment).map_err(violation)?;
        }
    }
    println!("ok");
    Ok(())
}
