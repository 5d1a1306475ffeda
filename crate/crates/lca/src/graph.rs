//! Bounded-degree undirected graphs in adjacency-list form.
//!
//! Vertices are dense ids `0..n`. Adjacency lists are kept sorted, and the
//! stored maximum degree is always the true maximum over the instance, so
//! sessions can size their round counts and coin biases from it directly.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::ParseError;

/// An immutable simple undirected graph.
///
/// Invariants: adjacency is symmetric, self-loop free and duplicate free;
/// every list is sorted ascending; `max_degree` equals the true maximum
/// degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    max_degree: usize,
}

impl Graph {
    /// Builds a graph from an edge list over vertices `0..n`.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, ParseError> {
        let mut adjacency = vec![Vec::new(); n];
        for (idx, &(u, v)) in edges.iter().enumerate() {
            if u == v {
                return Err(ParseError::invalid(format!("edge {idx} is a self-loop at {u}")));
            }
            if u >= n || v >= n {
                return Err(ParseError::invalid(format!(
                    "edge {idx} ({u},{v}) references a vertex >= {n}"
                )));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (v, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(ParseError::invalid(format!("duplicate edge at vertex {v}")));
            }
        }
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Graph { adjacency, max_degree })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// True maximum degree of the instance.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// All edges as `(u, v)` pairs with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adjacency.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Sorted distinct vertices at distance one or two from `v`, computed on
    /// the fly from two levels of adjacency. The square of the graph is never
    /// materialized.
    ///
    /// The result has at most `max_degree²` entries.
    pub fn square_neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &u in &self.adjacency[v] {
            out.push(u);
            for &w in &self.adjacency[u] {
                if w != v {
                    out.push(w);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Parses the plain text format: a header line `n m d` (vertex count,
    /// edge count, declared maximum degree) followed by `m` lines `u v` with
    /// `0 <= u < v < n`.
    ///
    /// The declared degree is an upper bound the file promises; the parsed
    /// graph stores the true maximum degree, which may be smaller.
    pub fn parse(reader: impl BufRead) -> Result<Self, ParseError> {
        let mut lines = reader.lines().enumerate();
        let (n, m, d) = loop {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| ParseError::invalid("empty input, expected header 'n m d'"))?;
            let line = line?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = text.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(ParseError::at(lineno + 1, "header must be 'n m d'"));
            }
            let parse = |s: &str, what| {
                s.parse::<usize>()
                    .map_err(|_| ParseError::at(lineno + 1, format!("bad {what} '{s}'")))
            };
            break (
                parse(fields[0], "vertex count")?,
                parse(fields[1], "edge count")?,
                parse(fields[2], "max degree")?,
            );
        };

        let mut degrees = vec![0usize; n];
        let mut edges = Vec::with_capacity(m);
        let mut read = 0usize;
        for (lineno, line) in lines {
            let line = line?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            if read == m {
                return Err(ParseError::at(lineno + 1, format!("more than {m} edges")));
            }
            let fields: Vec<&str> = text.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(ParseError::at(lineno + 1, "edge line must be 'u v'"));
            }
            let u: usize = fields[0]
                .parse()
                .map_err(|_| ParseError::at(lineno + 1, format!("bad vertex '{}'", fields[0])))?;
            let v: usize = fields[1]
                .parse()
                .map_err(|_| ParseError::at(lineno + 1, format!("bad vertex '{}'", fields[1])))?;
            if u >= v {
                return Err(ParseError::at(
                    lineno + 1,
                    format!("edges require u < v, got {u} {v}"),
                ));
            }
            if v >= n {
                return Err(ParseError::at(
                    lineno + 1,
                    format!("vertex {v} out of range (n = {n})"),
                ));
            }
            degrees[u] += 1;
            degrees[v] += 1;
            if degrees[u] > d || degrees[v] > d {
                let w = if degrees[u] > d { u } else { v };
                return Err(ParseError::at(
                    lineno + 1,
                    format!("vertex {w} exceeds declared max degree {d}"),
                ));
            }
            edges.push((u, v));
            read += 1;
        }
        if read != m {
            return Err(ParseError::invalid(format!("header declared {m} edges, found {read}")));
        }
        Self::new(n, &edges)
    }

    /// Writes the text format accepted by [`Graph::parse`]. The emitted
    /// header carries the true maximum degree.
    pub fn write(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "{} {} {}", self.vertex_count(), self.edge_count(), self.max_degree)?;
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Generates a random graph on `n` vertices with maximum degree at most `d`,
/// deterministic per `(n, d, seed)`.
///
/// Uniform edge proposals are drawn and rejected whenever either endpoint is
/// already at degree `d`; generation stops at `⌊nd/2⌋` accepted edges. A
/// fixed proposal budget ends the tail when the remaining degree slots can no
/// longer be packed, so dense instances may come out slightly below the
/// target edge count.
pub fn gen_graph(n: usize, d: usize, seed: u64) -> Graph {
    gen_graph_with_edges(n, d, n * d / 2, seed)
}

/// Like [`gen_graph`] but stops at `min(target_edges, ⌊nd/2⌋)` edges.
pub fn gen_graph_with_edges(n: usize, d: usize, target_edges: usize, seed: u64) -> Graph {
    assert!(n >= 1, "graph needs at least one vertex");
    let target = target_edges.min(n * d / 2);
    let mut rng = ChaCha8Rng::seed_from_u64(crate::coins::mix(seed ^ 0x0067_7261_7068));
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut accepted = 0usize;
    let mut budget = 20usize.saturating_mul(n).saturating_mul(d.max(1)).saturating_add(1000);
    while accepted < target && budget > 0 {
        budget -= 1;
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v || adjacency[u].len() >= d || adjacency[v].len() >= d {
            continue;
        }
        if adjacency[u].contains(&v) {
            continue;
        }
        adjacency[u].push(v);
        adjacency[v].push(u);
        accepted += 1;
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
    Graph { adjacency, max_degree }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Cursor;

    fn parse_str(s: &str) -> Result<Graph, ParseError> {
        Graph::parse(Cursor::new(s))
    }

    #[test]
    fn parse_minimal() {
        let g = parse_str("2 1 1\n0 1\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.max_degree(), 1);
        assert_eq!(g.neighbors(0), &[1]);
    }

    #[test]
    fn parse_isolated_vertex() {
        let g = parse_str("1 0 0\n").unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.max_degree(), 0);
    }

    #[test]
    fn parse_rejects_degree_overflow() {
        // vertex 1 would reach degree 2 > declared 1
        let err = parse_str("3 2 1\n0 1\n1 2\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("max degree"), "{msg}");
    }

    #[test]
    fn parse_rejects_unordered_edge() {
        assert!(parse_str("3 1 2\n2 1\n").is_err());
        assert!(parse_str("3 1 2\n1 1\n").is_err());
    }

    #[test]
    fn parse_rejects_duplicate_edge() {
        assert!(parse_str("3 2 2\n0 1\n0 1\n").is_err());
    }

    #[test]
    fn round_trip() {
        let g = gen_graph(50, 3, 99);
        let mut buf = Vec::new();
        g.write(&mut buf).unwrap();
        let back = Graph::parse(Cursor::new(buf)).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn gen_single_vertex() {
        let g = gen_graph(1, 0, 5);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn gen_deterministic() {
        let a = gen_graph(500, 4, 123);
        let b = gen_graph(500, 4, 123);
        assert_eq!(a, b);
        let c = gen_graph(500, 4, 124);
        assert_ne!(a, c);
    }

    #[test]
    fn gen_respects_degree_bound() {
        let g = gen_graph(10_000, 5, 7);
        for v in 0..g.vertex_count() {
            assert!(g.degree(v) <= 5);
        }
        assert_eq!(g.max_degree(), 5);
    }

    /// Independent oracle: distances by BFS over the whole graph.
    fn bfs_within_two(g: &Graph, v: usize) -> Vec<usize> {
        let n = g.vertex_count();
        let mut dist = vec![usize::MAX; n];
        dist[v] = 0;
        let mut queue = std::collections::VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            if dist[u] == 2 {
                continue;
            }
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        (0..n).filter(|&u| u != v && dist[u] <= 2).collect()
    }

    #[test]
    fn square_neighbors_of_path() {
        // path a-b-c: square_neighbors(a) = {b, c}
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.square_neighbors(0), vec![1, 2]);
        assert_eq!(g.square_neighbors(1), vec![0, 2]);
    }

    #[test]
    fn square_neighbors_of_star_leaf() {
        // star with center 0 and leaves 1,2,3: a leaf sees the center and the
        // other leaves
        let g = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(g.square_neighbors(1), bfs_within_two(&g, 1));
        assert_eq!(g.square_neighbors(1), vec![0, 2, 3]);
    }

    #[test]
    fn square_neighbors_isolated() {
        let g = Graph::new(1, &[]).unwrap();
        assert!(g.square_neighbors(0).is_empty());
    }

    proptest! {
        #[test]
        fn square_matches_bfs_oracle(n in 1usize..40, d in 0usize..6, seed in 0u64..500) {
            let g = gen_graph(n, d, seed);
            for v in 0..n {
                prop_assert_eq!(g.square_neighbors(v), bfs_within_two(&g, v));
            }
        }

        #[test]
        fn square_degree_bounded(n in 1usize..60, d in 0usize..6, seed in 0u64..200) {
            let g = gen_graph(n, d, seed);
            let dd = g.max_degree() * g.max_degree();
            for v in 0..n {
                prop_assert!(g.square_neighbors(v).len() <= dd);
            }
        }

        #[test]
        fn generated_graphs_satisfy_invariants(n in 1usize..80, d in 0usize..7, seed in 0u64..300) {
            let g = gen_graph(n, d, seed);
            // full independent scan of the declared invariants
            let mut maxdeg = 0;
            for v in 0..n {
                let list = g.neighbors(v);
                maxdeg = maxdeg.max(list.len());
                prop_assert!(list.windows(2).all(|w| w[0] < w[1]));
                for &u in list {
                    prop_assert!(u != v);
                    prop_assert!(g.neighbors(u).contains(&v));
                }
                prop_assert!(list.len() <= d);
            }
            prop_assert_eq!(maxdeg, g.max_degree());
        }
    }
}
