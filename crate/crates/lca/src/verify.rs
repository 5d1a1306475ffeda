//! Global validators and reference oracles.
//!
//! Everything here is decidable by definition-chasing over the whole
//! instance: no randomness, no caps, no shortcuts. The validators are the
//! acceptance authority for the query oracles, and [`global_luby`] is an
//! independent whole-graph implementation of the Phase-1 process used to
//! pin the memoized oracle exactly.

use std::fmt;

use crate::cnf::CnfFormula;
use crate::coins::{CoinSource, StreamTag};
use crate::coloring::Color;
use crate::graph::Graph;
use crate::hypergraph::Hypergraph;
use crate::mis::{effective_degree, MisState};

/// A named witness of a broken solution, one line, machine readable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// An answer is missing for an entity that needed one.
    MissingAnswer { entity: usize },
    /// Both endpoints of an edge are in the independent set.
    EdgeInsideSet { u: usize, v: usize },
    /// A vertex outside the set has no neighbor inside it.
    NotMaximal { vertex: usize },
    /// Two vertices of one cover class are adjacent in the view.
    IntraClassEdge { class: u32, u: usize, v: usize },
    /// A vertex would receive two transmissions in the same round.
    BroadcastCollision { receiver: usize, round: u32, first: usize, second: usize },
    /// Both endpoints of an edge broadcast in the same round.
    SharedEdgeRound { u: usize, v: usize, round: u32 },
    /// A hyperedge came out single-colored.
    MonochromaticEdge { edge: usize },
    /// A clause came out falsified.
    UnsatisfiedClause { clause: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::MissingAnswer { entity } => write!(f, "missing-answer {entity}"),
            Violation::EdgeInsideSet { u, v } => write!(f, "edge-inside-set {u} {v}"),
            Violation::NotMaximal { vertex } => write!(f, "not-maximal {vertex}"),
            Violation::IntraClassEdge { class, u, v } => {
                write!(f, "intra-class-edge {class} {u} {v}")
            }
            Violation::BroadcastCollision { receiver, round, first, second } => {
                write!(f, "broadcast-collision {receiver} {round} {first} {second}")
            }
            Violation::SharedEdgeRound { u, v, round } => {
                write!(f, "shared-edge-round {u} {v} {round}")
            }
            Violation::MonochromaticEdge { edge } => write!(f, "monochromatic-edge {edge}"),
            Violation::UnsatisfiedClause { clause } => write!(f, "unsatisfied-clause {clause}"),
        }
    }
}

impl std::error::Error for Violation {}

/// Checks that `in_set` is an independent set and maximal: no edge inside the
/// set, and every outside vertex has an inside neighbor.
pub fn verify_mis(graph: &Graph, in_set: &[bool]) -> Result<(), Violation> {
    assert_eq!(in_set.len(), graph.vertex_count());
    for (u, v) in graph.edges() {
        if in_set[u] && in_set[v] {
            return Err(Violation::EdgeInsideSet { u, v });
        }
    }
    for v in 0..graph.vertex_count() {
        if !in_set[v] && !graph.neighbors(v).iter().any(|&u| in_set[u]) {
            return Err(Violation::NotMaximal { vertex: v });
        }
    }
    Ok(())
}

/// Checks that the round classes form an independent set cover of the view:
/// the map is total and no two view-adjacent vertices share a class.
/// Disjointness and coverage are inherent in a total map.
pub fn verify_isc(
    rounds: &[Option<u32>],
    mut view_neighbors: impl FnMut(usize) -> Vec<usize>,
) -> Result<(), Violation> {
    for (v, r) in rounds.iter().enumerate() {
        let Some(class) = *r else {
            return Err(Violation::MissingAnswer { entity: v });
        };
        for u in view_neighbors(v) {
            if rounds[u] == Some(class) {
                return Err(Violation::IntraClassEdge { class, u: u.min(v), v: u.max(v) });
            }
        }
    }
    Ok(())
}

/// Checks the three broadcast properties on the graph itself: every vertex
/// broadcasts exactly once (totality), no vertex hears two neighbors in one
/// round, and the endpoints of every edge broadcast in distinct rounds.
pub fn verify_broadcast(graph: &Graph, rounds: &[Option<u32>]) -> Result<(), Violation> {
    assert_eq!(rounds.len(), graph.vertex_count());
    for (v, r) in rounds.iter().enumerate() {
        if r.is_none() {
            return Err(Violation::MissingAnswer { entity: v });
        }
        let mut heard: Vec<(u32, usize)> =
            graph.neighbors(v).iter().map(|&u| (rounds[u].unwrap_or(u32::MAX), u)).collect();
        heard.sort_unstable();
        for w in heard.windows(2) {
            if w[0].0 == w[1].0 && w[0].0 != u32::MAX {
                return Err(Violation::BroadcastCollision {
                    receiver: v,
                    round: w[0].0,
                    first: w[0].1,
                    second: w[1].1,
                });
            }
        }
    }
    for (u, v) in graph.edges() {
        if rounds[u] == rounds[v] {
            return Err(Violation::SharedEdgeRound { u, v, round: rounds[u].unwrap() });
        }
    }
    Ok(())
}

/// Checks that no hyperedge is monochromatic under a total coloring.
pub fn verify_coloring(hypergraph: &Hypergraph, colors: &[Option<Color>]) -> Result<(), Violation> {
    assert_eq!(colors.len(), hypergraph.vertex_count());
    for e in 0..hypergraph.edge_count() {
        let mut reds = 0usize;
        let mut blues = 0usize;
        for &x in hypergraph.edge(e) {
            match colors[x] {
                None => return Err(Violation::MissingAnswer { entity: x }),
                Some(Color::Red) => reds += 1,
                Some(Color::Blue) => blues += 1,
            }
        }
        if reds == 0 || blues == 0 {
            return Err(Violation::MonochromaticEdge { edge: e });
        }
    }
    Ok(())
}

/// Checks that every clause has a true literal under a total assignment.
pub fn verify_sat(formula: &CnfFormula, assignment: &[Option<bool>]) -> Result<(), Violation> {
    assert_eq!(assignment.len(), formula.num_vars());
    for j in 0..formula.clause_count() {
        let mut satisfied = false;
        for lit in formula.clause(j) {
            match assignment[lit.var] {
                None => return Err(Violation::MissingAnswer { entity: lit.var }),
                Some(value) => satisfied |= lit.satisfied_by(value),
            }
        }
        if !satisfied {
            return Err(Violation::UnsatisfiedClause { clause: j });
        }
    }
    Ok(())
}

/// Round-synchronous whole-graph run of the Phase-1 selection process, using
/// byte-identical coin keys to the query oracle.
///
/// Returns states indexed `[round][vertex]` for rounds `0..=r`. This is the
/// reference the memoized oracle is tested against exactly; deletions carry
/// the same one-round discovery delay.
///
/// Materializes the whole evolution; guarded to small instances.
pub fn global_luby(graph: &Graph, coins: &impl CoinSource, rounds: u32) -> Vec<Vec<MisState>> {
    let n = graph.vertex_count();
    assert!(n <= 100_000, "global simulation is for reference-scale instances");
    let d_eff = effective_degree(graph.max_degree()) as u64;
    let chose =
        |v: usize, i: u32| coins.bernoulli(StreamTag::Mis, v as u64, u64::from(i), 0, 1, 2 * d_eff);
    let mut history = Vec::with_capacity(rounds as usize + 1);
    history.push(vec![MisState::Bot; n]);
    for i in 1..=rounds {
        let prev = history.last().unwrap();
        let mut next = prev.clone();
        for v in 0..n {
            if prev[v] != MisState::Bot {
                continue;
            }
            if graph.neighbors(v).iter().any(|&u| prev[u] == MisState::Selected) {
                next[v] = MisState::Deleted;
                continue;
            }
            if chose(v, i)
                && graph.neighbors(v).iter().all(|&u| prev[u] != MisState::Bot || !chose(u, i))
            {
                next[v] = MisState::Selected;
            }
        }
        history.push(next);
    }
    history
}

/// Sizes of the connected components of the surviving (still undecided)
/// vertices, descending. The input is the final-round state vector.
pub fn survivor_components(graph: &Graph, final_states: &[MisState]) -> Vec<usize> {
    let n = graph.vertex_count();
    assert_eq!(final_states.len(), n);
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    for v in 0..n {
        if seen[v] || final_states[v] != MisState::Bot {
            continue;
        }
        let mut size = 0usize;
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(u) = stack.pop() {
            size += 1;
            for &w in graph.neighbors(u) {
                if !seen[w] && final_states[w] == MisState::Bot {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coins::CoinTape;
    use crate::graph::gen_graph;
    use crate::mis::rounds_for;

    #[test]
    fn mis_validator_examples() {
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(verify_mis(&k2, &[true, true]), Err(Violation::EdgeInsideSet { u: 0, v: 1 }));
        assert_eq!(verify_mis(&k2, &[false, false]), Err(Violation::NotMaximal { vertex: 0 }));
        let path = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(verify_mis(&path, &[true, false, true]), Ok(()));
    }

    #[test]
    fn broadcast_validator_examples() {
        let star = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        // two leaves share a round: the center hears both
        let rounds = vec![Some(1), Some(2), Some(2), Some(3)];
        assert_eq!(
            verify_broadcast(&star, &rounds),
            Err(Violation::BroadcastCollision { receiver: 0, round: 2, first: 1, second: 2 })
        );
        // four distinct rounds are fine
        let ok = vec![Some(1), Some(2), Some(3), Some(4)];
        assert_eq!(verify_broadcast(&star, &ok), Ok(()));
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(
            verify_broadcast(&k2, &[Some(5), Some(5)]),
            Err(Violation::SharedEdgeRound { u: 0, v: 1, round: 5 })
        );
    }

    #[test]
    fn isc_validator_flags_intra_class_edges() {
        let path = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let rounds = vec![Some(1), Some(1), Some(2)];
        assert_eq!(
            verify_isc(&rounds, |v| path.neighbors(v).to_vec()),
            Err(Violation::IntraClassEdge { class: 1, u: 0, v: 1 })
        );
        assert_eq!(
            verify_isc(&[Some(1), Some(2), Some(1)], |v| path.neighbors(v).to_vec()),
            Ok(())
        );
        assert_eq!(
            verify_isc(&[Some(1), None, Some(1)], |v| path.neighbors(v).to_vec()),
            Err(Violation::MissingAnswer { entity: 1 })
        );
    }

    #[test]
    fn coloring_validator_names_the_edge() {
        let h = Hypergraph::new(4, 2, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let all_red = vec![Some(Color::Red); 4];
        assert_eq!(verify_coloring(&h, &all_red), Err(Violation::MonochromaticEdge { edge: 0 }));
        let ok = vec![Some(Color::Red), Some(Color::Blue), Some(Color::Blue), Some(Color::Red)];
        assert_eq!(verify_coloring(&h, &ok), Ok(()));
    }

    #[test]
    fn sat_validator_names_the_clause() {
        use crate::cnf::Lit;
        let f = CnfFormula::new(2, vec![vec![Lit::new(0, true), Lit::new(1, false)]]).unwrap();
        assert_eq!(
            verify_sat(&f, &[Some(false), Some(true)]),
            Err(Violation::UnsatisfiedClause { clause: 0 })
        );
        assert_eq!(verify_sat(&f, &[Some(true), Some(true)]), Ok(()));
    }

    #[test]
    fn global_round_zero_all_undecided() {
        let g = gen_graph(30, 3, 0);
        let history = global_luby(&g, &CoinTape::new(0), 5);
        assert!(history[0].iter().all(|&s| s == MisState::Bot));
    }

    #[test]
    fn global_never_selects_adjacent_pairs() {
        for seed in 0..20 {
            let g = Graph::new(2, &[(0, 1)]).unwrap();
            let history = global_luby(&g, &CoinTape::new(seed), rounds_for(1));
            for states in &history {
                assert!(
                    !(states[0] == MisState::Selected && states[1] == MisState::Selected),
                    "seed {seed}"
                );
            }
        }
    }

    #[test]
    fn survivor_component_sizes() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let states =
            vec![MisState::Bot, MisState::Deleted, MisState::Bot, MisState::Bot, MisState::Bot];
        assert_eq!(survivor_components(&g, &states), vec![2, 1, 1]);
    }
}
