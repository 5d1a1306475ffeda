//! Bounded component exploration shared by all oracles.
//!
//! Every Phase-2-style step in this crate boils down to the same primitive:
//! close a set of start entities under an adjacency relation restricted to
//! "alive" entities, giving up the moment the component exceeds a cap.

use std::collections::{BTreeSet, HashMap, VecDeque};

/// The component exceeded the cap before closure was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TooLarge;

/// BFS closure of `start` under `neighbors`, restricted to entities for which
/// `alive` holds.
///
/// Returns the closed component as a sorted set, or [`TooLarge`] the moment
/// more than `cap` entities have been collected. The `alive` predicate is
/// invoked at most once per entity; it may itself do arbitrary oracle work.
/// The resulting set depends only on `(start, alive, neighbors)`, never on
/// traversal order.
pub fn explore_component(
    start: impl IntoIterator<Item = usize>,
    cap: usize,
    mut alive: impl FnMut(usize) -> bool,
    mut neighbors: impl FnMut(usize, &mut Vec<usize>),
) -> Result<BTreeSet<usize>, TooLarge> {
    assert!(cap >= 1, "component cap must be at least 1");
    let mut checked: HashMap<usize, bool> = HashMap::new();
    let mut component = BTreeSet::new();
    let mut queue = VecDeque::new();
    let mut buf = Vec::new();

    let mut admit = |e: usize,
                     checked: &mut HashMap<usize, bool>,
                     component: &mut BTreeSet<usize>,
                     queue: &mut VecDeque<usize>|
     -> Result<(), TooLarge> {
        let live = *checked.entry(e).or_insert_with(|| alive(e));
        if live && component.insert(e) {
            if component.len() > cap {
                return Err(TooLarge);
            }
            queue.push_back(e);
        }
        Ok(())
    };

    for e in start {
        admit(e, &mut checked, &mut component, &mut queue)?;
    }
    while let Some(e) = queue.pop_front() {
        buf.clear();
        neighbors(e, &mut buf);
        for &u in &buf {
            admit(u, &mut checked, &mut component, &mut queue)?;
        }
    }
    Ok(component)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_graph, Graph};
    use proptest::prelude::*;

    fn explore_graph(
        g: &Graph,
        start: usize,
        cap: usize,
        alive: impl Fn(usize) -> bool,
    ) -> Result<BTreeSet<usize>, TooLarge> {
        explore_component([start], cap, alive, |v, buf| buf.extend_from_slice(g.neighbors(v)))
    }

    #[test]
    fn dead_neighbors_give_singleton() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let c = explore_graph(&g, 1, 10, |v| v == 1).unwrap();
        assert_eq!(c, BTreeSet::from([1]));
    }

    #[test]
    fn cap_breach_on_path() {
        // path of 5 alive vertices, cap 3, start in the middle
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(explore_graph(&g, 2, 3, |_| true), Err(TooLarge));
        assert_eq!(explore_graph(&g, 2, 5, |_| true).unwrap().len(), 5);
    }

    #[test]
    fn star_fits_exactly() {
        // hand-traced BFS: center plus three leaves, cap 4
        let g = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let c = explore_graph(&g, 0, 4, |_| true).unwrap();
        assert_eq!(c, BTreeSet::from([0, 1, 2, 3]));
    }

    #[test]
    fn alive_checked_at_most_once() {
        let g = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let mut calls = std::collections::HashMap::new();
        let result = explore_component(
            [0],
            10,
            |v| {
                *calls.entry(v).or_insert(0) += 1;
                true
            },
            |v, buf| buf.extend_from_slice(g.neighbors(v)),
        )
        .unwrap();
        assert_eq!(result.len(), 4);
        assert!(calls.values().all(|&c| c == 1), "{calls:?}");
    }

    /// Ground-truth component via union-find over alive vertices.
    fn oracle_component(g: &Graph, start: usize, alive: &[bool]) -> BTreeSet<usize> {
        let n = g.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = x;
            while parent[c] != c {
                let next = parent[c];
                parent[c] = r;
                c = next;
            }
            r
        }
        for (u, v) in g.edges() {
            if alive[u] && alive[v] {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                parent[ru] = rv;
            }
        }
        let root = find(&mut parent, start);
        (0..n).filter(|&v| alive[v] && find(&mut parent, v) == root).collect()
    }

    proptest! {
        #[test]
        fn closure_matches_union_find(n in 1usize..50, d in 0usize..5, seed in 0u64..300, mask in 0u64..u64::MAX) {
            let g = gen_graph(n, d, seed);
            let alive: Vec<bool> = (0..n).map(|v| mask.rotate_left(v as u32) & 1 == 1).collect();
            for start in 0..n {
                if !alive[start] { continue; }
                let got = explore_graph(&g, start, n, |v| alive[v]).unwrap();
                prop_assert_eq!(got, oracle_component(&g, start, &alive));
            }
        }
    }
}
