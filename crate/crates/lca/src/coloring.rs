//! Point-query oracle for a proper two-coloring of a k-uniform hypergraph.
//!
//! Queries return the color of a single vertex; all answers agree with one
//! coloring in which no hyperedge is monochromatic. The heavy lifting lives
//! in the generic three-phase machine ([`crate::lll`]); this module binds it
//! to hyperedges, whose two forbidden patterns are all-red and all-blue.
//!
//! ```
//! use lca::coloring::ColoringSession;
//! use lca::hypergraph::gen_hypergraph;
//! use lca::verify::verify_coloring;
//!
//! let h = gen_hypergraph(1200, 100, 6, 1, 5).unwrap();
//! let mut session = ColoringSession::new(&h, 42).unwrap();
//! let colors: Vec<_> = (0..h.vertex_count())
//!     .map(|x| session.query(x).ok())
//!     .collect();
//! assert!(verify_coloring(&h, &colors).is_ok());
//! ```

use crate::coins::{CoinSource, CoinTape, StreamTag};
use crate::hypergraph::Hypergraph;
use crate::lll::{LllConfig, LllProblem, LllSession, SessionError};
use crate::params::{coloring_params, WidthSplit};

/// A vertex color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

impl std::fmt::Display for Color {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Blue => "blue",
        })
    }
}

/// The fair color coin for `(vertex, epoch)`; epoch 0 is the Phase-1 draw and
/// later epochs belong to Phase-2 recoloring attempts.
pub fn color_coin(coins: &impl CoinSource, vertex: usize, epoch: u64) -> Color {
    if coins.word(StreamTag::Coloring, vertex as u64, 0, epoch) & 1 == 1 {
        Color::Blue
    } else {
        Color::Red
    }
}

/// Hyperedge semantics for the generic machine.
pub struct ColoringProblem<'h> {
    hypergraph: &'h Hypergraph,
}

impl LllProblem for ColoringProblem<'_> {
    type Value = Color;

    fn constraint_count(&self) -> usize {
        self.hypergraph.edge_count()
    }

    fn entity_count(&self) -> usize {
        self.hypergraph.vertex_count()
    }

    fn width(&self) -> usize {
        self.hypergraph.width()
    }

    fn intersection_degree(&self) -> usize {
        self.hypergraph.intersection_degree()
    }

    fn member(&self, c: usize, slot: usize) -> usize {
        self.hypergraph.edge(c)[slot]
    }

    fn containing(&self, entity: usize) -> &[usize] {
        self.hypergraph.edges_of(entity)
    }

    // two ways to be monochromatic
    fn modes(&self) -> u32 {
        2
    }

    fn mode_value(&self, _c: usize, _slot: usize, mode: u32) -> Color {
        if mode == 0 {
            Color::Red
        } else {
            Color::Blue
        }
    }

    fn stream(&self) -> StreamTag {
        StreamTag::Coloring
    }

    fn decode(word: u64) -> Color {
        if word & 1 == 1 {
            Color::Blue
        } else {
            Color::Red
        }
    }

    fn value_for_bit(bit: bool) -> Color {
        if bit {
            Color::Blue
        } else {
            Color::Red
        }
    }

    fn feasible_split(k: usize, d: usize) -> Option<WidthSplit> {
        coloring_params(k, d)
    }
}

/// A two-coloring query session.
pub type ColoringSession<'h, C = CoinTape> = LllSession<ColoringProblem<'h>, C>;

impl<'h> ColoringSession<'h> {
    /// Session with the default constants; fails if no feasible width split
    /// exists for the instance's `(k, d)`.
    pub fn new(hypergraph: &'h Hypergraph, seed: u64) -> Result<Self, SessionError> {
        Self::with_config(hypergraph, seed, LllConfig::default())
    }

    pub fn with_config(
        hypergraph: &'h Hypergraph,
        seed: u64,
        config: LllConfig,
    ) -> Result<Self, SessionError> {
        Self::with_coins(ColoringProblem { hypergraph }, CoinTape::new(seed), config)
    }
}

impl<'h, C: CoinSource> ColoringSession<'h, C> {
    pub fn with_stub_coins(
        hypergraph: &'h Hypergraph,
        coins: C,
        config: LllConfig,
    ) -> Result<Self, SessionError> {
        Self::with_coins(ColoringProblem { hypergraph }, coins, config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coins::CoinTape;
    use crate::hypergraph::gen_hypergraph;
    use crate::lll::{ConstraintState, EntityState, LllFail};
    use crate::verify::verify_coloring;

    fn single_edge(k: usize) -> Hypergraph {
        Hypergraph::new(k, k, vec![(0..k).collect()]).unwrap()
    }

    fn stub_config(split: WidthSplit) -> LllConfig {
        LllConfig { split: Some(split), ..Default::default() }
    }

    #[test]
    fn empty_hypergraph_returns_the_coin() {
        let h = Hypergraph::new(10, 0, vec![]).unwrap();
        let mut s = ColoringSession::new(&h, 3).unwrap();
        let tape = CoinTape::new(3);
        for x in 0..10 {
            assert_eq!(s.query(x).unwrap(), color_coin(&tape, x, 0));
        }
        s.validate().unwrap();
    }

    #[test]
    fn first_vertex_of_an_edge_arms_it_with_k1_of_one() {
        // with k1 = 1 the first colored vertex makes the edge dangerous and
        // troubles the other five
        let h = single_edge(6);
        let mut s = ColoringSession::with_stub_coins(
            &h,
            CoinTape::new(9),
            stub_config(WidthSplit { k1: 1, k2: 1, k3: 4 }),
        )
        .unwrap();
        let c0 = s.query(0).unwrap();
        assert_eq!(s.entity_state(0), EntityState::Set(c0));
        assert_eq!(s.constraint_state(0), ConstraintState::Dangerous1);
        for x in 1..6 {
            assert_eq!(s.entity_state(x), EntityState::Trouble1, "vertex {x}");
        }
        s.validate().unwrap();
    }

    #[test]
    fn phase3_takes_first_lexicographic_fix() {
        // all coins red: phase 1 arms the edge, the first recoloring attempt
        // pushes it to dangerous-2 at k1+k2 = 2 reds, and phase 3 settles the
        // remaining four vertices on the lexicographically first pattern that
        // breaks the monochromatic edge: red red red blue
        let h = single_edge(6);
        let all_red = |_: StreamTag, _: u64, _: u64, _: u64| 0u64;
        let mut s = ColoringSession::with_stub_coins(
            &h,
            all_red,
            stub_config(WidthSplit { k1: 1, k2: 1, k3: 4 }),
        )
        .unwrap();
        assert_eq!(s.query(0).unwrap(), Color::Red);
        assert_eq!(s.query(1).unwrap(), Color::Red); // phase 2 assigns the epoch coin
        assert_eq!(s.constraint_state(0), ConstraintState::Dangerous2);
        for x in 2..6 {
            assert_eq!(s.entity_state(x), EntityState::Trouble2, "vertex {x}");
        }
        // phase 3 on vertex 2: candidates in order RRRR, RRRB -> first fix
        assert_eq!(s.query(2).unwrap(), Color::Red);
        assert_eq!(s.query(3).unwrap(), Color::Red);
        assert_eq!(s.query(4).unwrap(), Color::Red);
        assert_eq!(s.query(5).unwrap(), Color::Blue);
        assert_eq!(s.constraint_state(0), ConstraintState::Safe);
        s.validate().unwrap();
        let colors: Vec<_> = (0..6).map(|x| s.query(x).ok()).collect();
        assert!(verify_coloring(&h, &colors).is_ok());
    }

    #[test]
    fn same_component_answers_come_from_one_assignment() {
        // query vertices of one trouble-2 component in two different orders;
        // the memoized assignment must be identical
        let h = single_edge(6);
        let all_red = |_: StreamTag, _: u64, _: u64, _: u64| 0u64;
        let split = WidthSplit { k1: 1, k2: 1, k3: 4 };
        let mut a = ColoringSession::with_stub_coins(&h, all_red, stub_config(split)).unwrap();
        let mut b = ColoringSession::with_stub_coins(&h, all_red, stub_config(split)).unwrap();
        let _ = a.query(0);
        let _ = a.query(1);
        let _ = b.query(0);
        let _ = b.query(1);
        let fwd: Vec<_> = (2..6).map(|x| a.query(x).unwrap()).collect();
        let rev: Vec<_> = (2..6).rev().map(|x| b.query(x).unwrap()).collect();
        assert_eq!(fwd, rev.into_iter().rev().collect::<Vec<_>>());
    }

    #[test]
    fn replaying_a_query_sequence_reproduces_answers() {
        let h = gen_hypergraph(600, 50, 6, 1, 8).unwrap();
        let order: Vec<usize> = (0..h.vertex_count()).rev().collect();
        let run = |seed: u64| -> Vec<Result<Color, LllFail>> {
            let mut s = ColoringSession::new(&h, seed).unwrap();
            order.iter().map(|&x| s.query(x)).collect()
        };
        assert_eq!(run(11), run(11));
    }

    #[test]
    fn sweeps_produce_proper_colorings() {
        for seed in 0..10 {
            let h = gen_hypergraph(1200, 100, 6, 1, seed).unwrap();
            let mut s = ColoringSession::new(&h, seed).unwrap();
            let colors: Vec<_> = (0..h.vertex_count()).map(|x| s.query(x).ok()).collect();
            assert!(colors.iter().all(Option::is_some), "seed {seed} failed a query");
            verify_coloring(&h, &colors).unwrap();
            s.validate().unwrap();
        }
    }

    #[test]
    fn any_query_order_completes_to_a_proper_coloring() {
        // order-sensitive, but every completed sweep must still be valid
        use crate::sweep::{sweep_lll, SweepOrder};
        let h = gen_hypergraph(1200, 100, 6, 1, 31).unwrap();
        for shuffle in 0..5 {
            let mut s = ColoringSession::new(&h, 31).unwrap();
            let report = sweep_lll(&mut s, SweepOrder::Shuffled(shuffle));
            assert_eq!(report.fail_count, 0);
            verify_coloring(&h, &report.answers).unwrap();
            s.validate().unwrap();
        }
    }

    #[test]
    fn cap_and_retry_formulas() {
        // 65536 constraints: phase-2 cap ⌈8·log2(N+1)⌉ = 129, phase-3 cap
        // ⌈8·log2(log2(N+2)+1)⌉ = 33, retries ⌈1·log2(N+1)/log2(log2(N+2)+2)⌉ = 4
        let n_edges = 65_536;
        let k = 6;
        let edges: Vec<Vec<usize>> = (0..n_edges).map(|e| (e * k..(e + 1) * k).collect()).collect();
        let h = Hypergraph::new(n_edges * k, k, edges).unwrap();
        let s = ColoringSession::with_config(&h, 0, LllConfig { c3: 1.0, ..Default::default() })
            .unwrap();
        assert_eq!(s.phase2_cap(), 129);
        assert_eq!(s.phase3_cap(), 33);
        assert_eq!(s.retries(), 4);
    }

    #[test]
    fn growth_cap_breach_fails_the_query() {
        // a chain of width-3 edges sharing endpoints; with k1 = 1 and all-red
        // coins every edge survives phase 1, so a tiny cap must trip
        let edges =
            vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 6], vec![6, 7, 8], vec![8, 9, 10]];
        let h = Hypergraph::new(11, 3, edges).unwrap();
        let all_red = |_: StreamTag, _: u64, _: u64, _: u64| 0u64;
        let mut s = ColoringSession::with_stub_coins(
            &h,
            all_red,
            LllConfig {
                c1: 0.1, // cap clamps to 1 surviving edge
                split: Some(WidthSplit { k1: 1, k2: 1, k3: 1 }),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(s.query(0).unwrap(), Color::Red);
        let err = s.query(1).unwrap_err();
        assert!(matches!(err, LllFail::GrowthCap { cap: 1, .. }), "{err:?}");
        assert_eq!(s.stats().phase2_growth_failures, 1);
        s.validate().unwrap();
    }

    #[test]
    fn chained_edges_resolve_through_a_multi_edge_search() {
        // three width-19 edges chained through shared vertices, all coins
        // red: every edge marches dangerous-1 -> dangerous-2, the surviving
        // component spans the whole chain, and the exhaustive finish must
        // fix all three edges in one assignment
        let k = 19;
        let edges = vec![
            (0..k).collect::<Vec<_>>(),
            (k - 1..2 * k - 1).collect(),
            (2 * k - 2..3 * k - 2).collect(),
        ];
        let h = Hypergraph::new(3 * k - 2, k, edges).unwrap();
        assert_eq!(h.intersection_degree(), 2);
        let all_red = |_: StreamTag, _: u64, _: u64, _: u64| 0u64;
        let mut s = ColoringSession::with_stub_coins(
            &h,
            all_red,
            stub_config(WidthSplit { k1: 7, k2: 7, k3: 5 }),
        )
        .unwrap();
        let colors: Vec<_> = (0..h.vertex_count()).map(|x| s.query(x).ok()).collect();
        assert!(colors.iter().all(Option::is_some));
        verify_coloring(&h, &colors).unwrap();
        s.validate().unwrap();
        let stats = s.stats();
        assert_eq!(stats.dangerous1_transitions, 3);
        assert_eq!(stats.max_phase3_component, 3, "the search should span the chain");
        for e in 0..3 {
            assert_eq!(s.constraint_state(e), ConstraintState::Safe);
        }
    }

    #[test]
    fn infeasible_width_is_rejected() {
        let h = single_edge(3);
        let err = match ColoringSession::new(&h, 0) {
            Err(e) => e,
            Ok(_) => panic!("width 3 must be infeasible"),
        };
        assert_eq!(err, SessionError::Infeasible { width: 3, degree: 0 });
    }
}
