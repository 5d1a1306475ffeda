//! Scaling benchmarks: full sweeps over generated instances across a size
//! ladder, aggregated into per-query cost rows.
//!
//! Touched-state counts are deterministic per seed; the microsecond column is
//! wall-clock and machine-dependent. Rows are emitted in ladder order no
//! matter how many worker threads run.

use std::io::Write;

use serde::Serialize;

use lca::sweep::{sweep_isc, sweep_lll, sweep_mis, SweepOrder, SweepReport};

use crate::formats::OutputFormat;
use crate::{isc_config, lll_config, mis_config, usage, Algo, CliError, Overrides};

#[derive(Debug, Clone, Copy, Serialize)]
struct BenchRow {
    n: usize,
    mean_touched_states: f64,
    mean_us_per_query: f64,
    fail_rate: f64,
}

/// "a:b" doubles from a to b inclusive; "a,b,c" is explicit.
fn parse_sizes(spec: &str) -> Result<Vec<usize>, CliError> {
    if let Some((lo, hi)) = spec.split_once(':') {
        let lo: usize = lo.parse().map_err(|_| usage(format!("bad size '{lo}'")))?;
        let hi: usize = hi.parse().map_err(|_| usage(format!("bad size '{hi}'")))?;
        if lo == 0 || hi < lo {
            return Err(usage("size range must satisfy 0 < a <= b"));
        }
        let mut sizes = Vec::new();
        let mut n = lo;
        while n <= hi {
            sizes.push(n);
            match n.checked_mul(2) {
                Some(next) => n = next,
                None => break,
            }
        }
        Ok(sizes)
    } else {
        spec.split(',')
            .map(|s| s.trim().parse().map_err(|_| usage(format!("bad size '{s}'"))))
            .collect()
    }
}

struct Sample {
    mean_touched: f64,
    mean_nanos: f64,
    fail_rate: f64,
}

fn sample<A>(report: &SweepReport<A>) -> Sample {
    Sample {
        mean_touched: report.mean_touched(),
        mean_nanos: report.mean_nanos_per_query(),
        fail_rate: report.fail_rate(),
    }
}

fn run_one(
    algo: Algo,
    n: usize,
    d: usize,
    k: usize,
    seed: u64,
    overrides: Overrides,
) -> Result<Sample, CliError> {
    match algo {
        Algo::Mis => {
            let g = lca::gen_graph(n, d, seed);
            let mut s = lca::MisSession::with_config(&g, seed, mis_config(overrides));
            Ok(sample(&sweep_mis(&mut s, SweepOrder::Ascending)))
        }
        Algo::Isc | Algo::Broadcast => {
            let g = lca::gen_graph(n, d, seed);
            let square = algo == Algo::Broadcast;
            let mut s = lca::IscSession::with_config(&g, seed, square, isc_config(overrides));
            Ok(sample(&sweep_isc(&mut s, SweepOrder::Ascending)))
        }
        Algo::Color => {
            // n counts hyperedges here; vertices get packing slack
            let m = 2 * k * n;
            let h = lca::gen_hypergraph(m, n, k, d, seed).map_err(|e| usage(e.to_string()))?;
            let mut s = lca::ColoringSession::with_config(&h, seed, lll_config(overrides))
                .map_err(|e| usage(e.to_string()))?;
            Ok(sample(&sweep_lll(&mut s, SweepOrder::Ascending)))
        }
        Algo::Cnf => {
            let m = 2 * k * n;
            let f = lca::gen_cnf(m, n, k, d, seed).map_err(|e| usage(e.to_string()))?;
            let mut s = lca::CnfSession::with_config(&f, seed, lll_config(overrides))
                .map_err(|e| usage(e.to_string()))?;
            Ok(sample(&sweep_lll(&mut s, SweepOrder::Ascending)))
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_bench(
    algo: Algo,
    sizes: &str,
    d: usize,
    k: usize,
    seed: u64,
    repeat: usize,
    jobs: usize,
    format: OutputFormat,
    overrides: Overrides,
) -> Result<(), CliError> {
    if repeat == 0 {
        return Err(usage("--repeat must be at least 1"));
    }
    let sizes = parse_sizes(sizes)?;
    let tasks: Vec<(usize, u64)> = sizes
        .iter()
        .flat_map(|&n| (0..repeat).map(move |r| (n, seed.wrapping_add(r as u64))))
        .collect();

    let jobs = jobs.max(1).min(tasks.len().max(1));
    let mut samples: Vec<Option<Result<Sample, CliError>>> =
        (0..tasks.len()).map(|_| None).collect();
    let counter = std::sync::atomic::AtomicUsize::new(0);
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for _ in 0..jobs {
            let counter = &counter;
            let tasks = &tasks;
            handles.push(scope.spawn(move || {
                let mut local = Vec::new();
                loop {
                    let i = counter.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if i >= tasks.len() {
                        return local;
                    }
                    let (n, s) = tasks[i];
                    local.push((i, run_one(algo, n, d, k, s, overrides)));
                }
            }));
        }
        for handle in handles {
            for (i, result) in handle.join().expect("bench worker panicked") {
                samples[i] = Some(result);
            }
        }
    });

    let mut rows = Vec::new();
    for (si, &n) in sizes.iter().enumerate() {
        let mut touched = 0.0;
        let mut nanos = 0.0;
        let mut fails = 0.0;
        for r in 0..repeat {
            let s = samples[si * repeat + r].take().expect("every task ran")?;
            touched += s.mean_touched;
            nanos += s.mean_nanos;
            fails += s.fail_rate;
        }
        rows.push(BenchRow {
            n,
            mean_touched_states: touched / repeat as f64,
            mean_us_per_query: nanos / repeat as f64 / 1_000.0,
            fail_rate: fails / repeat as f64,
        });
    }

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match format {
        OutputFormat::Csv => {
            writeln!(out, "n,mean_touched_states,mean_us_per_query,fail_rate")
                .map_err(|e| usage(e.to_string()))?;
            for row in rows {
                writeln!(
                    out,
                    "{},{},{},{}",
                    row.n, row.mean_touched_states, row.mean_us_per_query, row.fail_rate
                )
                .map_err(|e| usage(e.to_string()))?;
            }
        }
        OutputFormat::Json => {
            writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("serializable"))
                .map_err(|e| usage(e.to_string()))?;
        }
    }
    Ok(())
}
