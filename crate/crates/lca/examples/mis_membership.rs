//! Query MIS membership point by point, then sweep and verify.
//!
//! Run with `cargo run --example mis_membership`.

use lca::graph::gen_graph;
use lca::mis::{MisAnswer, MisSession};
use lca::sweep::{sweep_mis, SweepOrder};
use lca::verify::verify_mis;

fn main() {
    // ANCHOR: point_queries
    let graph = gen_graph(100_000, 4, 1);
    let mut session = MisSession::new(&graph, 7);

    // three point queries; nothing global is ever materialized
    for v in [0, 31_337, 99_999] {
        let answer = session.query(v).expect("component cap not hit");
        println!("vertex {v}: {answer:?} (work so far: {})", session.touched());
    }
    // ANCHOR_END: point_queries

    // ANCHOR: sweep_and_verify
    // a fresh session with the same seed gives the same solution; sweeping
    // it answers every vertex and the validator checks the whole set
    let mut session = MisSession::new(&graph, 7);
    let report = sweep_mis(&mut session, SweepOrder::Ascending);
    let in_set: Vec<bool> = report.answers.iter().map(|a| *a == Some(MisAnswer::In)).collect();
    verify_mis(&graph, &in_set).expect("the assembled set is a valid MIS");
    println!(
        "swept {} vertices: {} in the set, {:.2} work units per query",
        in_set.len(),
        in_set.iter().filter(|&&b| b).count(),
        report.mean_touched()
    );
    // ANCHOR_END: sweep_and_verify
}
