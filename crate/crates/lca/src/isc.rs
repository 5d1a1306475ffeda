//! Round-number oracle for independent set covers, and broadcast scheduling
//! on top of it.
//!
//! An independent set cover (ISC) partitions the vertices into independent
//! sets S₁, …, S_t; the index of the set containing `v` is `v`'s *round
//! number*. Phase 1 hands out round numbers by replaying the randomized
//! selection process: in round `i`, `v` gets round `i` iff it is the unique
//! chooser in its closed neighborhood. Unlike MIS, a neighbor's success never
//! removes `v` — it just keeps trying. Phase 2 partitions the surviving
//! components with the deterministic greedy cover, offset past the Phase-1
//! rounds so labels never collide.
//!
//! Scheduling radio broadcasts reduces to an ISC of the *square view* of the
//! graph: vertices at distance one or two must broadcast in distinct rounds,
//! which is exactly independence at distance two. [`IscSession::over_square`]
//! runs the same oracle on that view without ever materializing the square
//! graph.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::coins::{CoinSource, CoinTape, StreamTag};
use crate::explore::explore_component;
use crate::graph::Graph;
use crate::mis::{effective_degree, rounds_for};

/// Memoized Phase-1 outcome for one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase1 {
    Round(u32),
    Survivor,
}

/// The component cap was breached while resolving a survivor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("survivor component around vertex {vertex} exceeds cap {cap}")]
pub struct IscFail {
    pub vertex: usize,
    pub cap: usize,
}

/// Tuning knobs for a session.
#[derive(Debug, Clone, Copy)]
pub struct IscConfig {
    /// Scale `c` in the Phase-2 component cap `⌈c·d³·log₂(n+1)⌉` over the
    /// view degree.
    pub cap_scale: f64,
    pub component_cap: Option<usize>,
    /// Tighter bound on the view degree, if the caller knows one. For the
    /// square view the default is `max_degree²`.
    pub view_degree: Option<usize>,
    /// Phase-1 round count override.
    pub rounds: Option<u32>,
}

impl Default for IscConfig {
    fn default() -> Self {
        IscConfig { cap_scale: 8.0, component_cap: None, view_degree: None, rounds: None }
    }
}

/// A query session answering "in which round does `v` broadcast / which
/// cover set contains `v`".
///
/// Phase-1 answers depend only on the coins of the closed neighborhood, so
/// the oracle is oblivious to query order.
pub struct IscSession<'g, C: CoinSource = CoinTape> {
    graph: &'g Graph,
    square: bool,
    d_view: usize,
    d_eff: u64,
    rounds: u32,
    cap: usize,
    coins: C,
    phase1: Vec<Option<Phase1>>,
    component_of: HashMap<usize, usize>,
    resolved: HashMap<usize, HashMap<usize, u32>>,
    touched: u64,
    fail_count: u64,
    max_component: usize,
}

impl<'g> IscSession<'g, CoinTape> {
    /// Cover oracle over the graph itself.
    pub fn new(graph: &'g Graph, seed: u64) -> Self {
        Self::with_coins(graph, CoinTape::new(seed), false, IscConfig::default())
    }

    /// Broadcast oracle: the cover oracle over the square view (distance one
    /// or two).
    pub fn over_square(graph: &'g Graph, seed: u64) -> Self {
        Self::with_coins(graph, CoinTape::new(seed), true, IscConfig::default())
    }

    pub fn with_config(graph: &'g Graph, seed: u64, square: bool, config: IscConfig) -> Self {
        Self::with_coins(graph, CoinTape::new(seed), square, config)
    }
}

impl<'g, C: CoinSource> IscSession<'g, C> {
    pub fn with_coins(graph: &'g Graph, coins: C, square: bool, config: IscConfig) -> Self {
        let n = graph.vertex_count();
        let d = graph.max_degree();
        let d_view = config.view_degree.unwrap_or(if square { d * d } else { d });
        let cap = config
            .component_cap
            .unwrap_or_else(|| {
                let dv = d_view.max(1) as f64;
                (config.cap_scale * dv.powi(3) * ((n + 1) as f64).log2()).ceil() as usize
            })
            .max(1);
        IscSession {
            graph,
            square,
            d_view,
            d_eff: effective_degree(d_view) as u64,
            rounds: config.rounds.unwrap_or_else(|| rounds_for(d_view)),
            cap,
            coins,
            phase1: vec![None; n],
            component_of: HashMap::new(),
            resolved: HashMap::new(),
            touched: 0,
            fail_count: 0,
            max_component: 0,
        }
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Degree bound of the view in use.
    pub fn view_degree(&self) -> usize {
        self.d_view
    }

    /// Largest round number the session can hand out.
    pub fn max_round(&self) -> u32 {
        self.rounds + self.d_view as u32 + 1
    }

    pub fn touched(&self) -> u64 {
        self.touched
    }

    pub fn fail_count(&self) -> u64 {
        self.fail_count
    }

    pub fn max_component_seen(&self) -> usize {
        self.max_component
    }

    fn view_neighbors(&self, v: usize) -> Vec<usize> {
        if self.square {
            self.graph.square_neighbors(v)
        } else {
            self.graph.neighbors(v).to_vec()
        }
    }

    fn chose(&mut self, v: usize, round: u32) -> bool {
        self.touched += 1;
        self.coins.bernoulli(StreamTag::Isc, v as u64, u64::from(round), 0, 1, 2 * self.d_eff)
    }

    // Phase 1: the first round in which v is the unique chooser among its
    // closed view-neighborhood. Every neighbor flips its round-i coin when
    // consulted, whether or not it was selected earlier; with pure coins that
    // costs nothing and keeps v's outcome a function of its own neighborhood.
    fn phase1(&mut self, v: usize) -> Phase1 {
        if let Some(p) = self.phase1[v] {
            return p;
        }
        let neighbors = self.view_neighbors(v);
        let mut outcome = Phase1::Survivor;
        for i in 1..=self.rounds {
            if !self.chose(v, i) {
                continue;
            }
            if neighbors.iter().all(|&u| !self.chose(u, i)) {
                outcome = Phase1::Round(i);
                break;
            }
        }
        self.phase1[v] = Some(outcome);
        outcome
    }

    /// The round number of `v`: Phase-1 rounds lie in `1..=rounds()`,
    /// survivor rounds in `rounds()+1 ..= max_round()`.
    ///
    /// Survivors are resolved by exploring their component (a survivor test
    /// is just a memoized Phase-1 run on the candidate) and partitioning it
    /// with [`greedy_isc`]; the greedy set index is offset by `rounds()` so
    /// Phase-1 and Phase-2 labels never collide.
    pub fn round(&mut self, v: usize) -> Result<u32, IscFail> {
        match self.phase1(v) {
            Phase1::Round(i) => Ok(i),
            Phase1::Survivor => {
                if let Some(&cid) = self.component_of.get(&v) {
                    return Ok(self.rounds + self.resolved[&cid][&v]);
                }
                let cap = self.cap;
                let graph = self.graph;
                let square = self.square;
                let view = |u: usize, buf: &mut Vec<usize>| {
                    if square {
                        buf.extend(graph.square_neighbors(u));
                    } else {
                        buf.extend_from_slice(graph.neighbors(u));
                    }
                };
                let explored = explore_component(
                    [v],
                    cap,
                    |u| self.phase1(u) == Phase1::Survivor,
                    |u, buf| view(u, buf),
                );
                let component = match explored {
                    Ok(c) => c,
                    Err(_) => {
                        self.fail_count += 1;
                        return Err(IscFail { vertex: v, cap });
                    }
                };
                self.touched += component.len() as u64;
                self.max_component = self.max_component.max(component.len());
                let in_component = component.clone();
                let partition = greedy_isc(&component, |u| {
                    let mut buf = Vec::new();
                    view(u, &mut buf);
                    buf.retain(|w| in_component.contains(w));
                    buf
                });
                let cid = *component.first().expect("component contains the queried vertex");
                for &u in &component {
                    self.component_of.insert(u, cid);
                }
                let answer = self.rounds + partition[&v];
                self.resolved.insert(cid, partition);
                Ok(answer)
            }
        }
    }
}

/// Greedy independent set cover of an induced subgraph, deterministic in
/// ascending id order.
///
/// Repeatedly: take the greedy MIS of what remains (scan ids ascending, add
/// a vertex unless a smaller already-taken vertex neighbors it), assign those
/// vertices the next set index, remove them, repeat. Produces at most
/// `max_degree + 1` sets; indices start at 1.
pub fn greedy_isc(
    vertices: &BTreeSet<usize>,
    mut neighbors: impl FnMut(usize) -> Vec<usize>,
) -> HashMap<usize, u32> {
    let mut assignment = HashMap::new();
    let mut remaining = vertices.clone();
    let mut index = 1u32;
    while !remaining.is_empty() {
        let mut level: BTreeSet<usize> = BTreeSet::new();
        for &v in &remaining {
            if !neighbors(v).iter().any(|u| level.contains(u)) {
                level.insert(v);
            }
        }
        for &v in &level {
            assignment.insert(v, index);
            remaining.remove(&v);
        }
        index += 1;
    }
    assignment
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coins::CoinTape;
    use crate::graph::{gen_graph, Graph};
    use crate::verify::{verify_broadcast, verify_isc};

    fn adjacency(g: &Graph) -> impl Fn(usize) -> Vec<usize> + '_ {
        |v| g.neighbors(v).to_vec()
    }

    #[test]
    fn greedy_isc_edgeless() {
        let vs = BTreeSet::from([3, 9]);
        let assignment = greedy_isc(&vs, |_| Vec::new());
        assert_eq!(assignment[&3], 1);
        assert_eq!(assignment[&9], 1);
    }

    #[test]
    fn greedy_isc_path() {
        // path 0-1-2: {0,2} first, then {1}
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let assignment = greedy_isc(&BTreeSet::from([0, 1, 2]), adjacency(&g));
        assert_eq!(assignment[&0], 1);
        assert_eq!(assignment[&2], 1);
        assert_eq!(assignment[&1], 2);
    }

    #[test]
    fn greedy_isc_triangle_needs_three_sets() {
        // hand-trace: each greedy pass takes a single vertex, so the triangle
        // needs max_degree + 1 = 3 sets, one more than its degree bound of 2
        let g = Graph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let assignment = greedy_isc(&BTreeSet::from([0, 1, 2]), adjacency(&g));
        assert_eq!(assignment[&0], 1);
        assert_eq!(assignment[&1], 2);
        assert_eq!(assignment[&2], 3);
    }

    #[test]
    fn isolated_vertex_round_matches_tape() {
        // direct tape evaluation: first chosen round, else r + 1
        let g = Graph::new(1, &[]).unwrap();
        for seed in 0..30 {
            let mut s = IscSession::new(&g, seed);
            let tape = CoinTape::new(seed);
            let expected = (1..=s.rounds())
                .find(|&i| tape.bernoulli(StreamTag::Isc, 0, u64::from(i), 0, 1, 4))
                .unwrap_or(s.rounds() + 1);
            assert_eq!(s.round(0).unwrap(), expected, "seed {seed}");
        }
    }

    #[test]
    fn forced_survivors_get_offset_greedy_rounds() {
        // nobody ever chooses: the triangle survives whole and Phase 2 labels
        // it r+1, r+2, r+3
        let g = Graph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let never = |_: StreamTag, _: u64, _: u64, _: u64| u64::MAX;
        let mut s = IscSession::with_coins(&g, never, false, IscConfig::default());
        let r = s.rounds();
        assert_eq!(s.round(0).unwrap(), r + 1);
        assert_eq!(s.round(1).unwrap(), r + 2);
        assert_eq!(s.round(2).unwrap(), r + 3);
        assert!(s.max_round() >= r + 3);
    }

    #[test]
    fn sweep_forms_a_cover() {
        for seed in 0..10 {
            let g = gen_graph(300, 4, seed);
            let mut s = IscSession::new(&g, seed);
            let rounds: Vec<Option<u32>> = (0..300).map(|v| s.round(v).ok()).collect();
            assert_eq!(s.fail_count(), 0);
            verify_isc(&rounds, |v| g.neighbors(v).to_vec()).unwrap();
            let max = rounds.iter().map(|r| r.unwrap()).max().unwrap();
            assert!(max <= s.max_round());
        }
    }

    #[test]
    fn isolated_vertex_square_round_in_range() {
        let g = Graph::new(1, &[]).unwrap();
        for seed in 0..10 {
            let mut s = IscSession::over_square(&g, seed);
            let round = s.round(0).unwrap();
            assert!((1..=s.rounds() + 1).contains(&round), "seed {seed} round {round}");
        }
    }

    #[test]
    fn star_square_rounds_are_distinct() {
        // the square view of a star is complete, so all four vertices end up
        // in distinct rounds
        let g = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        for seed in 0..20 {
            let mut s = IscSession::over_square(&g, seed);
            let rounds: Vec<u32> = (0..4).map(|v| s.round(v).unwrap()).collect();
            let mut sorted = rounds.clone();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), 4, "seed {seed} rounds {rounds:?}");
        }
    }

    #[test]
    fn path_broadcast_rounds_pairwise_distinct() {
        // a and c are square-adjacent through b, so all three rounds differ
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        for seed in 0..20 {
            let mut s = IscSession::over_square(&g, seed);
            let rounds: Vec<Option<u32>> = (0..3).map(|v| s.round(v).ok()).collect();
            verify_broadcast(&g, &rounds).unwrap();
            let mut values: Vec<u32> = rounds.iter().map(|r| r.unwrap()).collect();
            values.sort_unstable();
            values.dedup();
            assert_eq!(values.len(), 3);
        }
    }

    #[test]
    fn broadcast_sweep_verifies() {
        for seed in 0..5 {
            let g = gen_graph(200, 3, seed);
            let mut s = IscSession::over_square(&g, seed);
            let rounds: Vec<Option<u32>> = (0..200).map(|v| s.round(v).ok()).collect();
            assert_eq!(s.fail_count(), 0);
            verify_broadcast(&g, &rounds).unwrap();
        }
    }
}
