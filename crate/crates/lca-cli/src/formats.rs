//! Solution and report serialization.
//!
//! CSV solutions carry a header row and one comma-separated row per entity,
//! LF-terminated, followed by the sweep report as `# key=value` comment
//! lines. CNF solutions use the conventional `v ... 0` assignment lines
//! instead of CSV rows. JSON output is a single object with `answers` and
//! `report` fields. Timing fields are reported but excluded from any
//! determinism guarantee; touched-state counts are the portable cost metric.

use clap::ValueEnum;
use serde::Serialize;

use lca::coloring::Color;
use lca::mis::MisAnswer;
use lca::sweep::SweepReport;

use crate::{usage, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Seeds are decimal or 0x-prefixed hex.
pub fn parse_seed(text: &str) -> Result<u64, String> {
    let text = text.trim();
    if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16).map_err(|e| format!("bad hex seed '{text}': {e}"))
    } else {
        text.parse().map_err(|e| format!("bad seed '{text}': {e}"))
    }
}

#[derive(Serialize)]
struct ReportJson {
    fail_count: usize,
    fail_rate: f64,
    max_component: usize,
    mean_touched: f64,
    total_nanos: u128,
}

fn report_json<A>(report: &SweepReport<A>) -> ReportJson {
    ReportJson {
        fail_count: report.fail_count,
        fail_rate: report.fail_rate(),
        max_component: report.max_component,
        mean_touched: report.mean_touched(),
        total_nanos: report.total_nanos,
    }
}

fn push_report_comments<A>(out: &mut Vec<u8>, report: &SweepReport<A>) {
    let r = report_json(report);
    let mut line = |s: String| out.extend_from_slice(s.as_bytes());
    line(format!("# fail_count={}\n", r.fail_count));
    line(format!("# fail_rate={}\n", r.fail_rate));
    line(format!("# max_component={}\n", r.max_component));
    line(format!("# mean_touched={}\n", r.mean_touched));
    line(format!("# total_nanos={}\n", r.total_nanos));
}

#[derive(Serialize)]
struct SweepJson<'a> {
    answers: Vec<Option<String>>,
    report: &'a ReportJson,
}

fn render_json<A>(out: &mut Vec<u8>, report: &SweepReport<A>, display: impl Fn(&A) -> String) {
    let r = report_json(report);
    let doc = SweepJson {
        answers: report.answers.iter().map(|a| a.as_ref().map(&display)).collect(),
        report: &r,
    };
    out.extend_from_slice(serde_json::to_string_pretty(&doc).expect("serializable").as_bytes());
    out.push(b'\n');
}

fn render_csv<A>(
    out: &mut Vec<u8>,
    report: &SweepReport<A>,
    header: &str,
    display: impl Fn(&A) -> String,
) {
    out.extend_from_slice(header.as_bytes());
    out.push(b'\n');
    for (v, answer) in report.answers.iter().enumerate() {
        let text = answer.as_ref().map_or_else(|| "fail".to_string(), &display);
        out.extend_from_slice(format!("{v},{text}\n").as_bytes());
    }
    push_report_comments(out, report);
}

pub fn render_mis(out: &mut Vec<u8>, report: &SweepReport<MisAnswer>, format: OutputFormat) {
    let display = |a: &MisAnswer| match a {
        MisAnswer::In => "in".to_string(),
        MisAnswer::Out => "out".to_string(),
    };
    match format {
        OutputFormat::Csv => render_csv(out, report, "vertex,answer", display),
        OutputFormat::Json => render_json(out, report, display),
    }
}

pub fn render_rounds(out: &mut Vec<u8>, report: &SweepReport<u32>, format: OutputFormat) {
    match format {
        OutputFormat::Csv => render_csv(out, report, "vertex,round", u32::to_string),
        OutputFormat::Json => render_json(out, report, u32::to_string),
    }
}

pub fn render_colors(out: &mut Vec<u8>, report: &SweepReport<Color>, format: OutputFormat) {
    match format {
        OutputFormat::Csv => render_csv(out, report, "vertex,color", Color::to_string),
        OutputFormat::Json => render_json(out, report, Color::to_string),
    }
}

/// CNF assignments use `v` lines with 1-based signed literals and a final 0,
/// like SAT solvers print them.
pub fn render_assignment(out: &mut Vec<u8>, report: &SweepReport<bool>, format: OutputFormat) {
    match format {
        OutputFormat::Json => {
            render_json(out, report, |v| if *v { "1".into() } else { "-1".into() })
        }
        OutputFormat::Csv => {
            let mut line = String::from("v");
            for (var, value) in report.answers.iter().enumerate() {
                let Some(value) = value else { continue };
                let lit = if *value { (var + 1) as i64 } else { -((var + 1) as i64) };
                line.push_str(&format!(" {lit}"));
                if line.len() > 72 {
                    out.extend_from_slice(line.as_bytes());
                    out.push(b'\n');
                    line = String::from("v");
                }
            }
            line.push_str(" 0\n");
            out.extend_from_slice(line.as_bytes());
            for (var, value) in report.answers.iter().enumerate() {
                if value.is_none() {
                    out.extend_from_slice(format!("# fail variable={var}\n").as_bytes());
                }
            }
            push_report_comments(out, report);
        }
    }
}

// ----- solution parsing (for `verify`) ---------------------------------------

fn csv_rows(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(lineno, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("vertex,") {
            None
        } else {
            Some((lineno + 1, line))
        }
    })
}

fn parse_csv_pairs(text: &str, n: usize) -> Result<Vec<Option<String>>, CliError> {
    let mut answers: Vec<Option<String>> = vec![None; n];
    for (lineno, line) in csv_rows(text) {
        let (v, value) = line
            .split_once(',')
            .ok_or_else(|| usage(format!("solution line {lineno}: expected 'entity,value'")))?;
        let v: usize = v
            .trim()
            .parse()
            .map_err(|_| usage(format!("solution line {lineno}: bad entity '{v}'")))?;
        if v >= n {
            return Err(usage(format!("solution line {lineno}: entity {v} out of range")));
        }
        answers[v] = Some(value.trim().to_string());
    }
    Ok(answers)
}

pub fn parse_mis_solution(text: &str, n: usize) -> Result<Vec<bool>, CliError> {
    let mut in_set = vec![false; n];
    for (v, answer) in parse_csv_pairs(text, n)?.into_iter().enumerate() {
        match answer.as_deref() {
            Some("in") => in_set[v] = true,
            Some("out") => {}
            Some("fail") | None => {
                return Err(usage(format!("solution has no usable answer for vertex {v}")))
            }
            Some(other) => return Err(usage(format!("bad answer '{other}' for vertex {v}"))),
        }
    }
    Ok(in_set)
}

pub fn parse_round_solution(text: &str, n: usize) -> Result<Vec<Option<u32>>, CliError> {
    parse_csv_pairs(text, n)?
        .into_iter()
        .enumerate()
        .map(|(v, answer)| match answer.as_deref() {
            None | Some("fail") => Ok(None),
            Some(r) => {
                r.parse().map(Some).map_err(|_| usage(format!("bad round '{r}' for vertex {v}")))
            }
        })
        .collect()
}

pub fn parse_color_solution(text: &str, n: usize) -> Result<Vec<Option<Color>>, CliError> {
    parse_csv_pairs(text, n)?
        .into_iter()
        .enumerate()
        .map(|(v, answer)| match answer.as_deref() {
            None | Some("fail") => Ok(None),
            Some("red") => Ok(Some(Color::Red)),
            Some("blue") => Ok(Some(Color::Blue)),
            Some(other) => Err(usage(format!("bad color '{other}' for vertex {v}"))),
        })
        .collect()
}

/// Parses `v ... 0` assignment lines (1-based signed literals).
pub fn parse_assignment_solution(text: &str, n: usize) -> Result<Vec<Option<bool>>, CliError> {
    let mut assignment = vec![None; n];
    for line in text.lines() {
        let line = line.trim();
        let Some(body) = line.strip_prefix('v') else { continue };
        for token in body.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| usage(format!("bad literal '{token}'")))?;
            if lit == 0 {
                continue;
            }
            let var = lit.unsigned_abs() as usize - 1;
            if var >= n {
                return Err(usage(format!("literal {lit} out of range for {n} variables")));
            }
            assignment[var] = Some(lit > 0);
        }
    }
    Ok(assignment)
}
