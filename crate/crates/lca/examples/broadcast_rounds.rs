//! Schedule radio broadcasts: each vertex asks for its own round.
//!
//! Run with `cargo run --example broadcast_rounds`.

use lca::graph::gen_graph;
use lca::isc::IscSession;
use lca::verify::verify_broadcast;

fn main() {
    // ANCHOR: schedule
    let network = gen_graph(2_000, 3, 11);
    // the broadcast oracle is the cover oracle over the square view:
    // vertices within distance two must transmit in distinct rounds
    let mut session = IscSession::over_square(&network, 5);

    let sample: Vec<(usize, u32)> =
        [4, 400, 1400].iter().map(|&v| (v, session.round(v).unwrap())).collect();
    for (v, round) in &sample {
        println!("vertex {v} broadcasts in round {round}");
    }
    println!("round numbers never exceed {}", session.max_round());
    // ANCHOR_END: schedule

    // ANCHOR: verify
    let rounds: Vec<Option<u32>> =
        (0..network.vertex_count()).map(|v| session.round(v).ok()).collect();
    verify_broadcast(&network, &rounds).expect("collision-free schedule");
    let used = rounds.iter().map(|r| r.unwrap()).max().unwrap();
    println!("full schedule verified, {used} rounds used");
    // ANCHOR_END: verify
}
