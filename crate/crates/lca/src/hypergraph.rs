//! k-uniform hypergraphs with bounded hyperedge intersection.
//!
//! The incidence structure is stored doubly indexed: each hyperedge knows its
//! vertices and each vertex knows its incident hyperedges, so both directions
//! of the incidence matrix can be walked in constant time per entry.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GenError, ParseError};

/// An immutable k-uniform hypergraph.
///
/// Invariants: every hyperedge has exactly `width` distinct vertices, sorted
/// ascending; `intersection_degree` is the true maximum number of other
/// hyperedges any hyperedge shares a vertex with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    vertex_count: usize,
    width: usize,
    intersection_degree: usize,
    edge_vertices: Vec<Vec<usize>>,
    vertex_edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds and validates a hypergraph from its edge lists.
    pub fn new(
        vertex_count: usize,
        width: usize,
        edges: Vec<Vec<usize>>,
    ) -> Result<Self, ParseError> {
        let mut edge_vertices = edges;
        for (e, vs) in edge_vertices.iter_mut().enumerate() {
            if vs.len() != width {
                return Err(ParseError::invalid(format!(
                    "hyperedge {e} has {} vertices, expected {width}",
                    vs.len()
                )));
            }
            vs.sort_unstable();
            if vs.windows(2).any(|w| w[0] == w[1]) {
                return Err(ParseError::invalid(format!("hyperedge {e} repeats a vertex")));
            }
            if let Some(&v) = vs.last() {
                if v >= vertex_count {
                    return Err(ParseError::invalid(format!(
                        "hyperedge {e} references vertex {v} >= {vertex_count}"
                    )));
                }
            }
        }
        let mut vertex_edges = vec![Vec::new(); vertex_count];
        for (e, vs) in edge_vertices.iter().enumerate() {
            for &v in vs {
                vertex_edges[v].push(e);
            }
        }
        let intersection_degree = max_intersection_degree(&edge_vertices, &vertex_edges);
        Ok(Hypergraph { vertex_count, width, intersection_degree, edge_vertices, vertex_edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_vertices.len()
    }

    /// Uniform hyperedge size k.
    pub fn width(&self) -> usize {
        self.width
    }

    /// True maximum number of other hyperedges any hyperedge intersects.
    pub fn intersection_degree(&self) -> usize {
        self.intersection_degree
    }

    /// Sorted vertices of hyperedge `e`.
    pub fn edge(&self, e: usize) -> &[usize] {
        &self.edge_vertices[e]
    }

    /// Hyperedges incident to vertex `v`, in insertion (= edge id) order.
    pub fn edges_of(&self, v: usize) -> &[usize] {
        &self.vertex_edges[v]
    }

    /// Distinct hyperedges sharing at least one vertex with `e`, excluding
    /// `e` itself. At most `intersection_degree` entries.
    pub fn intersecting(&self, e: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &v in &self.edge_vertices[e] {
            for &f in &self.vertex_edges[v] {
                if f != e {
                    out.push(f);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Parses the text format: header `m N k d` followed by `N` lines of `k`
    /// vertex ids. The declared intersection degree `d` is validated as an
    /// upper bound; the true value is stored.
    pub fn parse(reader: impl BufRead) -> Result<Self, ParseError> {
        let mut lines = reader.lines().enumerate();
        let (m, n_edges, k, d) = loop {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| ParseError::invalid("empty input, expected header 'm N k d'"))?;
            let line = line?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let fields: Vec<usize> = text
                .split_whitespace()
                .map(|s| {
                    s.parse().map_err(|_| ParseError::at(lineno + 1, format!("bad number '{s}'")))
                })
                .collect::<Result<_, _>>()?;
            if fields.len() != 4 {
                return Err(ParseError::at(lineno + 1, "header must be 'm N k d'"));
            }
            break (fields[0], fields[1], fields[2], fields[3]);
        };
        let mut edges = Vec::with_capacity(n_edges);
        for (lineno, line) in lines {
            let line = line?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            if edges.len() == n_edges {
                return Err(ParseError::at(lineno + 1, format!("more than {n_edges} hyperedges")));
            }
            let vs: Vec<usize> = text
                .split_whitespace()
                .map(|s| {
                    s.parse().map_err(|_| ParseError::at(lineno + 1, format!("bad vertex '{s}'")))
                })
                .collect::<Result<_, _>>()?;
            if vs.len() != k {
                return Err(ParseError::at(
                    lineno + 1,
                    format!("expected {k} vertices, got {}", vs.len()),
                ));
            }
            edges.push(vs);
        }
        if edges.len() != n_edges {
            return Err(ParseError::invalid(format!(
                "header declared {n_edges} hyperedges, found {}",
                edges.len()
            )));
        }
        let h = Self::new(m, k, edges)?;
        if h.intersection_degree() > d {
            return Err(ParseError::invalid(format!(
                "intersection degree {} exceeds declared bound {d}",
                h.intersection_degree()
            )));
        }
        Ok(h)
    }

    /// Writes the text format accepted by [`Hypergraph::parse`].
    pub fn write(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(
            out,
            "{} {} {} {}",
            self.vertex_count,
            self.edge_count(),
            self.width,
            self.intersection_degree
        )?;
        for vs in &self.edge_vertices {
            let words: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", words.join(" "))?;
        }
        Ok(())
    }
}

fn max_intersection_degree(edge_vertices: &[Vec<usize>], vertex_edges: &[Vec<usize>]) -> usize {
    let mut best = 0;
    let mut seen = vec![usize::MAX; edge_vertices.len()];
    for (e, vs) in edge_vertices.iter().enumerate() {
        let mut count = 0;
        for &v in vs {
            for &f in &vertex_edges[v] {
                if f != e && seen[f] != e {
                    seen[f] = e;
                    count += 1;
                }
            }
        }
        best = best.max(count);
    }
    best
}

/// Generates a random k-uniform hypergraph on `m` vertices with `n_edges`
/// hyperedges, each intersecting at most `d` others; deterministic per seed.
///
/// Candidate hyperedges are drawn uniformly and rejected whenever accepting
/// one would push any intersection count above `d`. Gives up after `100 *
/// n_edges` rejected proposals.
pub fn gen_hypergraph(
    m: usize,
    n_edges: usize,
    k: usize,
    d: usize,
    seed: u64,
) -> Result<Hypergraph, GenError> {
    gen_hypergraph_with_budget(m, n_edges, k, d, seed, 100usize.saturating_mul(n_edges).max(100))
}

/// [`gen_hypergraph`] with an explicit rejection budget.
pub fn gen_hypergraph_with_budget(
    m: usize,
    n_edges: usize,
    k: usize,
    d: usize,
    seed: u64,
    budget: usize,
) -> Result<Hypergraph, GenError> {
    if k == 0 || k > m {
        return Err(GenError::BadParameters(format!("width {k} not in 1..={m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(crate::coins::mix(seed ^ 0x0068_7970_6572));
    let mut builder = IntersectionBuilder::new(m, d);
    let mut rejected = 0usize;
    while builder.edges.len() < n_edges {
        let vs = sample_distinct(&mut rng, m, k);
        if !builder.try_accept(vs) {
            rejected += 1;
            if rejected >= budget {
                return Err(GenError::BudgetExhausted {
                    proposals: rejected,
                    placed: builder.edges.len(),
                    wanted: n_edges,
                });
            }
        }
    }
    Hypergraph::new(m, k, builder.edges).map_err(|e| GenError::BadParameters(e.to_string()))
}

/// Shared rejection bookkeeping for the hypergraph and CNF generators: a
/// candidate is admissible iff it intersects at most `d` existing members and
/// every intersected member stays at or below `d`.
pub(crate) struct IntersectionBuilder {
    pub(crate) edges: Vec<Vec<usize>>,
    member_of: Vec<Vec<usize>>,
    counts: Vec<usize>,
    bound: usize,
}

impl IntersectionBuilder {
    pub(crate) fn new(m: usize, bound: usize) -> Self {
        IntersectionBuilder {
            edges: Vec::new(),
            member_of: vec![Vec::new(); m],
            counts: Vec::new(),
            bound,
        }
    }

    pub(crate) fn try_accept(&mut self, mut vs: Vec<usize>) -> bool {
        vs.sort_unstable();
        let mut touched: Vec<usize> =
            vs.iter().flat_map(|&v| self.member_of[v].iter().copied()).collect();
        touched.sort_unstable();
        touched.dedup();
        if touched.len() > self.bound || touched.iter().any(|&f| self.counts[f] + 1 > self.bound) {
            return false;
        }
        let e = self.edges.len();
        for &f in &touched {
            self.counts[f] += 1;
        }
        self.counts.push(touched.len());
        for &v in &vs {
            self.member_of[v].push(e);
        }
        self.edges.push(vs);
        true
    }
}

pub(crate) fn sample_distinct(rng: &mut ChaCha8Rng, m: usize, k: usize) -> Vec<usize> {
    let mut picked = Vec::with_capacity(k);
    while picked.len() < k {
        let v = rng.random_range(0..m);
        if !picked.contains(&v) {
            picked.push(v);
        }
    }
    picked
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Cursor;

    #[test]
    fn forced_single_edge() {
        let h = gen_hypergraph(6, 1, 6, 1, 3).unwrap();
        assert_eq!(h.edge(0), &[0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn infeasible_packing_gives_up() {
        // at most two disjoint 3-sets fit in 6 vertices
        let err = gen_hypergraph(6, 10, 3, 0, 1).unwrap_err();
        assert!(matches!(err, GenError::BudgetExhausted { .. }), "{err}");
    }

    #[test]
    fn deterministic_per_seed() {
        let a = gen_hypergraph(100, 30, 4, 2, 9).unwrap();
        let b = gen_hypergraph(100, 30, 4, 2, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parse_round_trip() {
        let h = gen_hypergraph(40, 10, 3, 2, 5).unwrap();
        let mut buf = Vec::new();
        h.write(&mut buf).unwrap();
        let back = Hypergraph::parse(Cursor::new(buf)).unwrap();
        assert_eq!(h, back);
    }

    #[test]
    fn parse_rejects_wrong_width() {
        let text = "4 1 3 0\n0 1\n";
        assert!(Hypergraph::parse(Cursor::new(text)).is_err());
    }

    #[test]
    fn parse_rejects_undeclared_intersections() {
        // two edges share vertex 0 but the header claims d = 0
        let text = "5 2 2 0\n0 1\n0 2\n";
        assert!(Hypergraph::parse(Cursor::new(text)).is_err());
    }

    /// Brute-force intersection count, quadratic on purpose.
    fn oracle_intersections(h: &Hypergraph) -> usize {
        let n = h.edge_count();
        let mut best = 0;
        for e in 0..n {
            let a: std::collections::BTreeSet<_> = h.edge(e).iter().collect();
            let count =
                (0..n).filter(|&f| f != e && h.edge(f).iter().any(|v| a.contains(v))).count();
            best = best.max(count);
        }
        best
    }

    proptest! {
        #[test]
        fn generator_respects_intersection_bound(
            m in 6usize..60, n_edges in 0usize..20, k in 2usize..5, d in 0usize..4, seed in 0u64..100
        ) {
            prop_assume!(k <= m);
            if let Ok(h) = gen_hypergraph(m, n_edges, k, d, seed) {
                prop_assert_eq!(h.edge_count(), n_edges);
                prop_assert!(oracle_intersections(&h) <= d);
                prop_assert_eq!(oracle_intersections(&h), h.intersection_degree());
                for e in 0..h.edge_count() {
                    prop_assert_eq!(h.edge(e).len(), k);
                }
            }
        }

        #[test]
        fn incidence_views_agree(m in 4usize..40, n_edges in 0usize..15, seed in 0u64..100) {
            if let Ok(h) = gen_hypergraph(m, n_edges, 3, 3, seed) {
                for v in 0..m {
                    for &e in h.edges_of(v) {
                        prop_assert!(h.edge(e).contains(&v));
                    }
                }
                for e in 0..h.edge_count() {
                    for &v in h.edge(e) {
                        prop_assert!(h.edges_of(v).contains(&e));
                    }
                }
            }
        }
    }
}
