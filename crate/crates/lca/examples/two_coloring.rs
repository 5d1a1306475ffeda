//! Color a hypergraph one vertex at a time.
//!
//! Run with `cargo run --example two_coloring`.

use lca::coloring::ColoringSession;
use lca::hypergraph::gen_hypergraph;
use lca::params::coloring_params;
use lca::sweep::{sweep_lll, SweepOrder};
use lca::verify::verify_coloring;

fn main() {
    // ANCHOR: feasibility
    // width 6 with intersection degree 1 splits into per-phase budgets
    let split = coloring_params(6, 1).expect("feasible");
    println!("width split: k1={} k2={} k3={}", split.k1, split.k2, split.k3);
    // ANCHOR_END: feasibility

    // ANCHOR: color
    let hypergraph = gen_hypergraph(120_000, 10_000, 6, 1, 3).unwrap();
    let mut session = ColoringSession::new(&hypergraph, 17).unwrap();

    let c = session.query(5_000).unwrap();
    println!("vertex 5000 is {c}");

    let report = sweep_lll(&mut session, SweepOrder::Ascending);
    verify_coloring(&hypergraph, &report.answers).expect("no monochromatic hyperedge");
    let stats = session.stats();
    println!(
        "swept {} vertices; {} hyperedges went dangerous, {} deferred recolorings, {} exhaustive finishes",
        hypergraph.vertex_count(),
        stats.dangerous1_transitions,
        stats.phase2_invocations,
        stats.phase3_searches,
    );
    // ANCHOR_END: color
}
