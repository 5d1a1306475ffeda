//! Adversarial stress for the three-phase constraint machine: heavily biased
//! coins push far more constraints through the dangerous/trouble cascades
//! than fair coins ever would, and the full invariant checker runs after
//! every single query.

use lca::cnf::gen_cnf;
use lca::coins::{CoinSource, CoinTape, StreamTag};
use lca::coloring::ColoringSession;
use lca::hypergraph::gen_hypergraph;
use lca::lll::LllConfig;
use lca::sat::CnfSession;
use lca::sweep::{order_indices, SweepOrder};
use lca::verify::{verify_coloring, verify_sat};

/// A coin source whose bottom bit comes up 1 with probability ~1/4, biasing
/// colorings deep into the monochromatic danger zone.
fn biased(seed: u64) -> impl Fn(StreamTag, u64, u64, u64) -> u64 {
    let tape = CoinTape::new(seed);
    move |tag, entity, round, epoch| {
        let word = tape.word(tag, entity, round, epoch);
        u64::from(word < (u64::MAX / 4))
    }
}

#[test]
fn biased_coloring_survives_full_validation() {
    for instance_seed in 0..5 {
        let h = gen_hypergraph(2000, 80, 6, 1, 900 + instance_seed).unwrap();
        let mut session = ColoringSession::with_stub_coins(
            &h,
            biased(7_000 + instance_seed),
            LllConfig::default(),
        )
        .unwrap();
        let mut failures = 0usize;
        let mut colors = vec![None; h.vertex_count()];
        for x in order_indices(h.vertex_count(), SweepOrder::Shuffled(instance_seed)) {
            match session.query(x) {
                Ok(c) => colors[x] = Some(c),
                Err(_) => failures += 1,
            }
            session.validate().unwrap_or_else(|e| panic!("seed {instance_seed}, after {x}: {e}"));
        }
        let stats = session.stats();
        assert!(stats.dangerous1_transitions > 0, "bias should arm constraints");
        if failures == 0 {
            verify_coloring(&h, &colors).unwrap();
        }
    }
}

#[test]
fn biased_wide_coloring_exercises_deep_cascades() {
    // width 19 with intersection degree 2: chains of surviving hyperedges,
    // multi-edge phase-3 components, retry traffic
    for instance_seed in 0..3 {
        let h = gen_hypergraph(40_000, 200, 19, 2, 950 + instance_seed).unwrap();
        let mut session = ColoringSession::with_stub_coins(
            &h,
            biased(8_000 + instance_seed),
            LllConfig::default(),
        )
        .unwrap();
        let mut failures = 0usize;
        let mut colors = vec![None; h.vertex_count()];
        for x in order_indices(h.vertex_count(), SweepOrder::Shuffled(instance_seed)) {
            match session.query(x) {
                Ok(c) => colors[x] = Some(c),
                Err(_) => failures += 1,
            }
        }
        session.validate().unwrap();
        let stats = *session.stats();
        assert!(stats.dangerous1_transitions > 0);
        assert!(stats.phase2_invocations > 0);
        if failures == 0 {
            verify_coloring(&h, &colors).unwrap();
        }
        // replaying the same order with the same stub reproduces everything,
        // failures included
        let mut replay = ColoringSession::with_stub_coins(
            &h,
            biased(8_000 + instance_seed),
            LllConfig::default(),
        )
        .unwrap();
        for x in order_indices(h.vertex_count(), SweepOrder::Shuffled(instance_seed)) {
            assert_eq!(replay.query(x).ok(), colors[x], "replay diverged at {x}");
        }
    }
}

#[test]
fn biased_cnf_survives_full_validation() {
    for instance_seed in 0..5 {
        let f = gen_cnf(1_000, 100, 5, 1, 970 + instance_seed).unwrap();
        let mut session =
            CnfSession::with_stub_coins(&f, biased(9_000 + instance_seed), LllConfig::default())
                .unwrap();
        let mut failures = 0usize;
        let mut assignment = vec![None; f.num_vars()];
        for x in order_indices(f.num_vars(), SweepOrder::Shuffled(instance_seed)) {
            match session.query(x) {
                Ok(v) => assignment[x] = Some(v),
                Err(_) => failures += 1,
            }
            session.validate().unwrap_or_else(|e| panic!("seed {instance_seed}, after {x}: {e}"));
        }
        if failures == 0 {
            verify_sat(&f, &assignment).unwrap();
        }
    }
}
