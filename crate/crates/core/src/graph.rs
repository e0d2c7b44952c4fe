//! Simple undirected graphs on at most 64 vertices.
//!
//! Adjacency is kept as one `u64` row per vertex, which keeps every
//! exponential routine in this crate (coloring, clique search, the
//! brute-force oracle) on cheap mask arithmetic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

/// Iterator over the set bits of a mask, lowest first.
#[derive(Clone, Copy, Debug)]
pub struct Bits(u64);

impl Iterator for Bits {
    type Item = Vertex;

    fn next(&mut self) -> Option<Vertex> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as Vertex;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Bits {}

pub fn bits(mask: u64) -> Bits {
    Bits(mask)
}

#[inline]
pub fn bit(v: Vertex) -> u64 {
    1u64 << v
}

/// Mask with the lowest `n` bits set.
#[inline]
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// An ordered, duplicate-free set of vertices, kept ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new(mut vertices: Vec<Vertex>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        VertexSet(vertices)
    }

    pub fn from_mask(mask: u64) -> Self {
        VertexSet(bits(mask).collect())
    }

    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &v| m | bit(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }
}

impl From<Vec<Vertex>> for VertexSet {
    fn from(v: Vec<Vertex>) -> Self {
        VertexSet::new(v)
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Correspondence between the vertices of a graph and one of its induced
/// subgraphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMap {
    /// Indexed by original vertex; `None` for deleted vertices.
    pub old_to_new: Vec<Option<Vertex>>,
    /// Indexed by new vertex.
    pub new_to_old: Vec<Vertex>,
}

impl VertexMap {
    /// Image of an original vertex mask in the subgraph; deleted vertices are dropped.
    pub fn forward_mask(&self, mask: u64) -> u64 {
        bits(mask)
            .filter_map(|v| self.old_to_new.get(v).copied().flatten())
            .fold(0, |m, v| m | bit(v))
    }

    pub fn backward_mask(&self, mask: u64) -> u64 {
        bits(mask).fold(0, |m, v| m | bit(self.new_to_old[v]))
    }
}

/// A finite simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "graph",
                size: n,
                cap: MAX_VERTICES,
            });
        }
        Ok(Graph {
            n,
            adj: vec![0; n],
            labels: None,
        })
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.check(u)?;
            g.check(v)?;
            if u == v {
                return Err(Error::Precondition(format!("self-loop at vertex {u}")));
            }
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from adjacency rows; the rows are symmetrised and the
    /// diagonal cleared.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let n = rows.len();
        let mut g = Graph::empty(n)?;
        let all = full_mask(n);
        for (u, row) in rows.into_iter().enumerate() {
            for v in bits(row & all & !bit(u)) {
                g.insert_edge(u, v);
            }
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Precondition(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub(crate) fn insert_edge(&mut self, u: Vertex, v: Vertex) {
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
    }

    pub(crate) fn remove_edge(&mut self, u: Vertex, v: Vertex) {
        self.adj[u] &= !bit(v);
        self.adj[v] &= !bit(u);
    }

    fn check(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                order: self.n,
            })
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn vertex_mask(&self) -> u64 {
        full_mask(self.n)
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.adj[u] & bit(v) != 0
    }

    /// Open neighbourhood as a mask. Panics on an out-of-range vertex.
    #[inline]
    pub fn nbrs(&self, v: Vertex) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).min().unwrap_or(0)
    }

    pub fn neighbors(&self, v: Vertex) -> Result<VertexSet> {
        self.check(v)?;
        Ok(VertexSet::from_mask(self.adj[v]))
    }

    pub fn closed_neighbors(&self, v: Vertex) -> Result<VertexSet> {
        self.check(v)?;
        Ok(VertexSet::from_mask(self.adj[v] | bit(v)))
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n).flat_map(move |u| bits(self.adj[u] >> u >> 1).map(move |d| (u, u + 1 + d)))
    }

    pub fn is_complete_set(&self, mask: u64) -> bool {
        bits(mask).all(|v| mask & !bit(v) & !self.adj[v] == 0)
    }

    pub fn is_stable_set(&self, mask: u64) -> bool {
        bits(mask).all(|v| self.adj[v] & mask == 0)
    }

    /// True for a maximal complete set.
    pub fn is_clique(&self, mask: u64) -> bool {
        if mask & !self.vertex_mask() != 0 || !self.is_complete_set(mask) {
            return false;
        }
        let common = bits(mask).fold(self.vertex_mask(), |m, v| m & self.adj[v]);
        common & !mask == 0 && (mask != 0 || self.n == 0)
    }

    /// Induced subgraph on `keep`, reindexed densely in ascending order.
    pub fn induced(&self, keep: u64) -> (Graph, VertexMap) {
        let keep = keep & self.vertex_mask();
        let new_to_old: Vec<Vertex> = bits(keep).collect();
        let mut old_to_new = vec![None; self.n];
        for (i, &v) in new_to_old.iter().enumerate() {
            old_to_new[v] = Some(i);
        }
        let rows = new_to_old
            .iter()
            .map(|&v| {
                bits(self.adj[v] & keep).fold(0u64, |m, w| m | bit(old_to_new[w].unwrap()))
            })
            .collect::<Vec<_>>();
        let labels = self
            .labels
            .as_ref()
            .map(|ls| new_to_old.iter().map(|&v| ls[v].clone()).collect());
        let g = Graph {
            n: new_to_old.len(),
            adj: rows,
            labels,
        };
        (
            g,
            VertexMap {
                old_to_new,
                new_to_old,
            },
        )
    }

    pub fn delete_vertex(&self, v: Vertex) -> Result<(Graph, VertexMap)> {
        self.check(v)?;
        Ok(self.induced(self.vertex_mask() & !bit(v)))
    }

    pub fn delete_edge(&self, u: Vertex, v: Vertex) -> Result<Graph> {
        self.check(u)?;
        self.check(v)?;
        if !self.has_edge(u, v) {
            return Err(Error::MissingEdge { u, v });
        }
        let mut g = self.clone();
        g.remove_edge(u, v);
        Ok(g)
    }

    /// Adds a new vertex adjacent to `nbrs`, returning its index.
    pub fn with_vertex(&self, nbrs: u64) -> Result<(Graph, Vertex)> {
        let v = self.n;
        let mut rows = self.adj.clone();
        rows.push(nbrs & self.vertex_mask());
        let mut g = Graph::from_rows(rows)?;
        if let Some(ls) = &self.labels {
            let mut ls = ls.clone();
            ls.push(v.to_string());
            g.labels = Some(ls);
        }
        Ok((g, v))
    }

    pub fn with_edge(&self, u: Vertex, v: Vertex) -> Result<Graph> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(Error::Precondition(format!("self-loop at vertex {u}")));
        }
        let mut g = self.clone();
        g.insert_edge(u, v);
        Ok(g)
    }

    pub fn are_true_twins(&self, x: Vertex, y: Vertex) -> bool {
        x != y
            && x < self.n
            && y < self.n
            && self.has_edge(x, y)
            && self.adj[x] & !bit(y) == self.adj[y] & !bit(x)
    }

    /// Connected components as vertex masks, ordered by lowest member.
    pub fn components(&self) -> Vec<u64> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen & bit(s) != 0 {
                continue;
            }
            let mut comp = bit(s);
            let mut frontier = bit(s);
            while frontier != 0 {
                let next = bits(frontier).fold(0, |m, v| m | self.adj[v]) & !comp;
                comp |= next;
                frontier = next;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// All cliques (maximal complete sets), each once, sorted
    /// lexicographically by their ascending member lists.
    pub fn enumerate_cliques(&self) -> Vec<VertexSet> {
        let mut out = Vec::new();
        if self.n > 0 {
            self.bron_kerbosch(0, self.vertex_mask(), 0, &mut out);
        }
        let mut sets: Vec<VertexSet> = out.into_iter().map(VertexSet::from_mask).collect();
        sets.sort();
        sets
    }

    pub fn clique_masks(&self) -> Vec<u64> {
        self.enumerate_cliques().iter().map(VertexSet::mask).collect()
    }

    // Pivot: the candidate of P ∪ X with most neighbours in P, lowest index on ties.
    fn bron_kerbosch(&self, r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
        if p == 0 {
            if x == 0 {
                out.push(r);
            }
            return;
        }
        let pivot = bits(p | x)
            .max_by_key(|&u| ((self.adj[u] & p).count_ones(), std::cmp::Reverse(u)))
            .expect("non-empty candidate set");
        for v in bits(p & !self.adj[pivot]) {
            self.bron_kerbosch(r | bit(v), p & self.adj[v], x & self.adj[v], out);
            p &= !bit(v);
            x |= bit(v);
        }
    }

    /// Largest clique, lowest in the lexicographic clique order on ties.
    pub fn maximum_clique(&self) -> VertexSet {
        let mut best = VertexSet::default();
        for c in self.enumerate_cliques() {
            if c.len() > best.len() {
                best = c;
            }
        }
        best
    }

    /// Size of a largest stable set, by exhaustive branching.
    pub fn independence_number(&self) -> usize {
        fn go(g: &Graph, cand: u64) -> usize {
            if cand == 0 {
                return 0;
            }
            let v = cand.trailing_zeros() as Vertex;
            let with = 1 + go(g, cand & !g.adj[v] & !bit(v));
            let without = go(g, cand & !bit(v));
            with.max(without)
        }
        go(self, self.vertex_mask())
    }

    pub fn complement(&self) -> Graph {
        let all = self.vertex_mask();
        Graph {
            n: self.n,
            adj: (0..self.n).map(|v| all & !self.adj[v] & !bit(v)).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Relabels the graph so that vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[Vertex]) -> Graph {
        let mut rows = vec![0u64; self.n];
        for (u, v) in self.edges() {
            rows[perm[u]] |= bit(perm[v]);
            rows[perm[v]] |= bit(perm[u]);
        }
        Graph {
            n: self.n,
            adj: rows,
            labels: None,
        }
    }

    /// Same vertices and edges, ignoring labels.
    pub fn same_structure(&self, other: &Graph) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

/// Small named graphs used throughout tests and fixtures.
pub mod named {
    use super::*;

    pub fn complete(n: usize) -> Graph {
        let all = full_mask(n);
        Graph::from_rows((0..n).map(|_| all).collect()).expect("n within range")
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("n within range")
    }

    pub fn cycle(n: usize) -> Graph {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges).expect("n within range")
    }

    /// K_{1,leaves} with centre 0.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges).expect("n within range")
    }

    /// A cycle on `rim` vertices `0..rim` plus hub `rim` adjacent to all.
    pub fn wheel(rim: usize) -> Graph {
        let mut edges: Vec<_> = (0..rim).map(|i| (i, (i + 1) % rim)).collect();
        edges.extend((0..rim).map(|i| (i, rim)));
        Graph::from_edges(rim + 1, &edges).expect("n within range")
    }

    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, &edges).expect("n within range")
    }
}
