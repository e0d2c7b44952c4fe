//! Path-in-tree representations: a host tree plus one path per graph vertex.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, Graph, Vertex, VertexSet};

pub type Node = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHostTree", into = "RawHostTree")]
pub struct HostTree {
    nodes: usize,
    edges: Vec<(Node, Node)>,
    adj: Vec<Vec<Node>>,
}

#[derive(Serialize, Deserialize)]
struct RawHostTree {
    nodes: usize,
    edges: Vec<(Node, Node)>,
}

impl TryFrom<RawHostTree> for HostTree {
    type Error = Error;

    fn try_from(raw: RawHostTree) -> Result<Self> {
        HostTree::new(raw.nodes, raw.edges)
    }
}

impl From<HostTree> for RawHostTree {
    fn from(t: HostTree) -> Self {
        RawHostTree {
            nodes: t.nodes,
            edges: t.edges,
        }
    }
}

impl HostTree {
    /// Validates that `edges` form a spanning tree on `0..nodes`.
    pub fn new(nodes: usize, edges: Vec<(Node, Node)>) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::Precondition("host tree needs at least one node".into()));
        }
        if edges.len() != nodes - 1 {
            return Err(Error::Precondition(format!(
                "{} edges cannot span a tree on {nodes} nodes",
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); nodes];
        for &(a, b) in &edges {
            if a >= nodes || b >= nodes || a == b {
                return Err(Error::Precondition(format!("bad host edge {a}-{b}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        let t = HostTree { nodes, edges, adj };
        if t.component_of(0, usize::MAX).len() != nodes {
            return Err(Error::Precondition("host edges do not connect all nodes".into()));
        }
        Ok(t)
    }

    pub fn single() -> Self {
        HostTree::new(1, Vec::new()).expect("one node is a tree")
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[(Node, Node)] {
        &self.edges
    }

    /// Neighbours in ascending order.
    pub fn neighbors(&self, q: Node) -> &[Node] {
        &self.adj[q]
    }

    pub fn degree(&self, q: Node) -> usize {
        self.adj[q].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.nodes).map(|q| self.degree(q)).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.nodes).map(|q| self.degree(q)).collect()
    }

    /// Nodes reachable from `start` without passing through `blocked`, ascending.
    fn component_of(&self, start: Node, blocked: Node) -> Vec<Node> {
        let mut seen = vec![false; self.nodes];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &y in &self.adj[x] {
                if y != blocked && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.nodes).filter(|&x| seen[x]).collect()
    }

    /// True when `set` (ascending, duplicate-free) induces a path.
    pub fn is_path(&self, set: &[Node]) -> bool {
        if set.is_empty() || set.iter().any(|&x| x >= self.nodes) {
            return false;
        }
        if set.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        let inside = |x: Node| set.binary_search(&x).is_ok();
        let mut inner_edges = 0;
        for &x in set {
            let d = self.adj[x].iter().filter(|&&y| inside(y)).count();
            if d > 2 {
                return false;
            }
            inner_edges += d;
        }
        // a forest inside a tree is connected iff it has |set| - 1 edges
        inner_edges / 2 == set.len() - 1
    }

    /// Nodes of the unique path between `a` and `b`, in walking order.
    pub fn path_between(&self, a: Node, b: Node) -> Vec<Node> {
        let mut parent = vec![usize::MAX; self.nodes];
        parent[a] = a;
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            for &y in &self.adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    stack.push(y);
                }
            }
        }
        let mut out = vec![b];
        let mut x = b;
        while x != a {
            x = parent[x];
            out.push(x);
        }
        out.reverse();
        out
    }

    fn add_node(&mut self) -> Node {
        self.nodes += 1;
        self.adj.push(Vec::new());
        self.nodes - 1
    }

    fn relink(&mut self, a: Node, old: Node, new: Node) {
        for e in &mut self.edges {
            if *e == (a, old) || *e == (old, a) {
                *e = (a.min(new), a.max(new));
            }
        }
        self.adj[old].retain(|&y| y != a);
        self.adj[a].retain(|&y| y != old);
        self.adj[new].push(a);
        self.adj[a].push(new);
        self.adj[new].sort_unstable();
        self.adj[a].sort_unstable();
        self.adj[old].sort_unstable();
    }

    fn link(&mut self, a: Node, b: Node) {
        self.edges.push((a.min(b), a.max(b)));
        self.adj[a].push(b);
        self.adj[b].push(a);
        self.adj[a].sort_unstable();
        self.adj[b].sort_unstable();
    }
}

/// A host tree and, for every graph vertex, the node set of its path
/// (ascending node order).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    pub host: HostTree,
    pub paths: Vec<Vec<Node>>,
}

/// First violated clause of a representation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum Violation {
    VertexCount { graph: usize, paths: usize },
    UnknownNode { vertex: Vertex, node: Node },
    NotAPath { vertex: Vertex },
    Adjacency { u: Vertex, v: Vertex, adjacent_in_graph: bool },
    DegreeExceeded { node: Node, degree: usize, cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Valid,
    Invalid(Violation),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

fn intersects(a: &[Node], b: &[Node]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

fn common(a: &[Node], b: &[Node]) -> Vec<Node> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

/// Checks, in order, that every path is a path of the host, that the paths'
/// intersection graph is exactly `g`, and that the host respects `cap`.
pub fn verify_representation(g: &Graph, r: &Representation, cap: Option<usize>) -> Verdict {
    if r.paths.len() != g.order() {
        return Verdict::Invalid(Violation::VertexCount {
            graph: g.order(),
            paths: r.paths.len(),
        });
    }
    for (v, p) in r.paths.iter().enumerate() {
        if let Some(&node) = p.iter().find(|&&x| x >= r.host.node_count()) {
            return Verdict::Invalid(Violation::UnknownNode { vertex: v, node });
        }
        if !r.host.is_path(p) {
            return Verdict::Invalid(Violation::NotAPath { vertex: v });
        }
    }
    for u in g.vertices() {
        for v in u + 1..g.order() {
            let meet = intersects(&r.paths[u], &r.paths[v]);
            if meet != g.has_edge(u, v) {
                return Verdict::Invalid(Violation::Adjacency {
                    u,
                    v,
                    adjacent_in_graph: g.has_edge(u, v),
                });
            }
        }
    }
    if let Some(cap) = cap {
        for q in 0..r.host.node_count() {
            if r.host.degree(q) > cap {
                return Verdict::Invalid(Violation::DegreeExceeded {
                    node: q,
                    degree: r.host.degree(q),
                    cap,
                });
            }
        }
    }
    Verdict::Valid
}

/// Result of evaluating fullness at a node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fullness {
    Full,
    /// First branch pair (by index) without a linking path with private
    /// neighbours on both sides.
    MissingPair { i: usize, j: usize },
}

impl Representation {
    pub fn new(host: HostTree, paths: Vec<Vec<Node>>) -> Self {
        let paths = paths
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                p.dedup();
                p
            })
            .collect();
        Representation { host, paths }
    }

    pub fn vertex_count(&self) -> usize {
        self.paths.len()
    }

    fn check_node(&self, q: Node) -> Result<()> {
        if q < self.host.node_count() {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{q} is not a host node")))
        }
    }

    /// Graph vertices whose paths contain `q`.
    pub fn complete_at(&self, q: Node) -> Result<VertexSet> {
        self.check_node(q)?;
        Ok(self
            .paths
            .iter()
            .enumerate()
            .filter(|(_, p)| p.binary_search(&q).is_ok())
            .map(|(v, _)| v)
            .collect())
    }

    /// Components of the host minus `q`; branch `i` contains the `i`-th
    /// neighbour of `q` in ascending order.
    pub fn branches_at(&self, q: Node) -> Result<Vec<Vec<Node>>> {
        self.check_node(q)?;
        Ok(self
            .host
            .neighbors(q)
            .iter()
            .map(|&qi| self.host.component_of(qi, q))
            .collect())
    }

    /// Vertices whose paths contain the neighbours of `q` heading branches
    /// `i` and `j`.
    pub fn links(&self, q: Node, i: usize, j: usize) -> Result<Vec<Vertex>> {
        self.check_node(q)?;
        let nb = self.host.neighbors(q);
        if i == j {
            return Err(Error::Precondition("a branch is not linked to itself".into()));
        }
        if i >= nb.len() || j >= nb.len() {
            return Err(Error::Precondition(format!("node {q} has only {} branches", nb.len())));
        }
        let (qi, qj) = (nb[i], nb[j]);
        Ok(self
            .paths
            .iter()
            .enumerate()
            .filter(|(_, p)| p.binary_search(&qi).is_ok() && p.binary_search(&qj).is_ok())
            .map(|(v, _)| v)
            .collect())
    }

    /// Lowest branch pair `(i, j)` linked by no path.
    pub fn unlinked_pair(&self, q: Node) -> Result<Option<(usize, usize)>> {
        let d = self.host.degree(q);
        for i in 0..d {
            for j in i + 1..d {
                if self.links(q, i, j)?.is_empty() {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    /// For every branch pair there must be a linking path meeting a path
    /// inside each of the two branches.
    pub fn is_full_at(&self, q: Node) -> Result<Fullness> {
        let branches = self.branches_at(q)?;
        let inside: Vec<Vec<Vertex>> = branches
            .iter()
            .map(|b| {
                (0..self.paths.len())
                    .filter(|&v| self.paths[v].iter().all(|x| b.binary_search(x).is_ok()))
                    .collect()
            })
            .collect();
        for i in 0..branches.len() {
            for j in i + 1..branches.len() {
                let ok = self.links(q, i, j)?.into_iter().any(|v| {
                    let pv = &self.paths[v];
                    let meets = |w: &Vertex| intersects(&self.paths[*w], pv);
                    inside[i].iter().any(meets) && inside[j].iter().any(meets)
                });
                if !ok {
                    return Ok(Fullness::MissingPair { i, j });
                }
            }
        }
        Ok(Fullness::Full)
    }

    /// Splits off the lowest unlinked branch pair at `q` behind a new node
    /// `q'`: the two branches hang from `q'`, `q'` hangs from `q`, and every
    /// path entering either branch through `q` also covers `q'`. Afterwards
    /// `q'` has degree 3, `q` has degree one less, all other degrees are kept.
    pub fn reduce_degree(&self, q: Node) -> Result<Representation> {
        self.check_node(q)?;
        let d = self.host.degree(q);
        if d < 4 {
            return Err(Error::Precondition(format!(
                "node {q} has degree {d}; the rewrite needs degree at least 4"
            )));
        }
        let (i, j) = self.unlinked_pair(q)?.ok_or_else(|| {
            Error::Precondition(format!("every pair of branches at node {q} is linked"))
        })?;
        let (qi, qj) = (self.host.neighbors(q)[i], self.host.neighbors(q)[j]);
        let mut host = self.host.clone();
        let fresh = host.add_node();
        host.relink(qi, q, fresh);
        host.relink(qj, q, fresh);
        host.link(q, fresh);
        let paths = self
            .paths
            .iter()
            .map(|p| {
                let has = |x: Node| p.binary_search(&x).is_ok();
                let mut p = p.clone();
                if has(q) && (has(qi) || has(qj)) {
                    p.push(fresh);
                }
                p
            })
            .collect();
        Ok(Representation::new(host, paths))
    }

    /// Shrinks path ends that no intersection depends on, until no end can
    /// be dropped. The represented graph is unchanged.
    pub fn trim_paths(&self) -> Representation {
        let mut paths = self.paths.clone();
        loop {
            let mut changed = false;
            for v in 0..paths.len() {
                while paths[v].len() >= 2 {
                    let ends = self.path_ends(&paths[v]);
                    let removable = ends.into_iter().find(|&x| {
                        (0..paths.len()).all(|u| {
                            u == v || {
                                let c = common(&paths[u], &paths[v]);
                                c.is_empty() || c != [x]
                            }
                        })
                    });
                    match removable {
                        Some(x) => {
                            paths[v].retain(|&y| y != x);
                            changed = true;
                        }
                        None => break,
                    }
                }
            }
            if !changed {
                return Representation {
                    host: self.host.clone(),
                    paths,
                };
            }
        }
    }

    /// End nodes of a path, ascending.
    fn path_ends(&self, p: &[Node]) -> Vec<Node> {
        p.iter()
            .copied()
            .filter(|&x| {
                self.host
                    .neighbors(x)
                    .iter()
                    .filter(|y| p.binary_search(y).is_ok())
                    .count()
                    <= 1
            })
            .collect()
    }

    /// Intersection graph of the paths.
    pub fn intersection_graph(&self) -> Result<Graph> {
        let n = self.paths.len();
        let mut rows = vec![0u64; n];
        for u in 0..n {
            for v in u + 1..n {
                if intersects(&self.paths[u], &self.paths[v]) {
                    rows[u] |= bit(v);
                    rows[v] |= bit(u);
                }
            }
        }
        Graph::from_rows(rows)
    }

    /// Text form: `nodes edges`, one `a b` line per host edge, the vertex
    /// count, then one line per vertex with its path nodes ascending.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.host.node_count(), self.host.edges().len());
        for &(a, b) in self.host.edges() {
            let _ = writeln!(s, "{a} {b}");
        }
        let _ = writeln!(s, "{}", self.paths.len());
        for p in &self.paths {
            let line: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Representation> {
        let lines: Vec<&str> = text.lines().collect();
        let err = |line: usize, message: String| Error::Parse {
            line: line + 1,
            offset: 0,
            message,
        };
        let ints = |i: usize| -> Result<Vec<usize>> {
            let l = lines.get(i).ok_or_else(|| err(i, "unexpected end of input".into()))?;
            l.split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| err(i, format!("`{t}` is not an integer"))))
                .collect()
        };
        let header = ints(0)?;
        let [nodes, m] = header[..] else {
            return Err(err(0, "expected `nodes edges`".into()));
        };
        let mut edges = Vec::with_capacity(m);
        for i in 1..=m {
            match ints(i)?[..] {
                [a, b] => edges.push((a, b)),
                _ => return Err(err(i, "expected a host edge `a b`".into())),
            }
        }
        let host = HostTree::new(nodes, edges).map_err(|e| err(0, e.to_string()))?;
        let count = match ints(m + 1)?[..] {
            [c] => c,
            _ => return Err(err(m + 1, "expected the vertex count".into())),
        };
        let mut paths = Vec::with_capacity(count);
        for k in 0..count {
            let i = m + 2 + k;
            if i >= lines.len() {
                return Err(err(i, "missing path line".into()));
            }
            let p = ints(i)?;
            if p.windows(2).any(|w| w[0] >= w[1]) {
                return Err(err(i, "path nodes must be strictly ascending".into()));
            }
            paths.push(p);
        }
        if lines[m + 2 + count..].iter().any(|l| !l.trim().is_empty()) {
            return Err(err(m + 2 + count, "trailing content".into()));
        }
        Ok(Representation { host, paths })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    fn star_host(leaves: usize) -> HostTree {
        HostTree::new(leaves + 1, (1..=leaves).map(|i| (0, i)).collect()).unwrap()
    }

    #[test]
    fn host_tree_validation() {
        assert!(HostTree::new(3, vec![(0, 1), (1, 2)]).is_ok());
        assert!(HostTree::new(3, vec![(0, 1)]).is_err());
        assert!(HostTree::new(4, vec![(0, 1), (1, 0), (2, 3)]).is_err());
        assert!(HostTree::new(0, vec![]).is_err());
    }

    #[test]
    fn path_sets() {
        let t = star_host(3);
        assert!(t.is_path(&[0]));
        assert!(t.is_path(&[0, 1, 2]));
        assert!(!t.is_path(&[0, 1, 2, 3]));
        assert!(!t.is_path(&[1, 2]));
        assert_eq!(t.path_between(1, 3), vec![1, 0, 3]);
    }

    #[test]
    fn triangle_on_one_node() {
        let r = Representation::new(HostTree::single(), vec![vec![0]; 3]);
        assert!(verify_representation(&named::complete(3), &r, Some(2)).is_valid());
        assert_eq!(r.complete_at(0).unwrap().len(), 3);
    }

    #[test]
    fn violations_are_named() {
        let g = named::path(3);
        let t = HostTree::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let bad = Representation::new(t.clone(), vec![vec![0], vec![0, 1], vec![0]]);
        assert_eq!(
            verify_representation(&g, &bad, None),
            Verdict::Invalid(Violation::Adjacency { u: 0, v: 2, adjacent_in_graph: false })
        );
        let gap = Representation::new(t.clone(), vec![vec![0, 2], vec![0, 1], vec![2]]);
        assert_eq!(
            verify_representation(&g, &gap, None),
            Verdict::Invalid(Violation::NotAPath { vertex: 0 })
        );
        let unknown = Representation::new(t, vec![vec![7], vec![0], vec![1]]);
        assert!(matches!(
            verify_representation(&g, &unknown, None),
            Verdict::Invalid(Violation::UnknownNode { vertex: 0, node: 7 })
        ));
    }

    #[test]
    fn branches_and_links() {
        let r = Representation::new(star_host(3), vec![vec![0, 1, 2], vec![3]]);
        let b = r.branches_at(0).unwrap();
        assert_eq!(b, vec![vec![1], vec![2], vec![3]]);
        assert_eq!(r.branches_at(1).unwrap().len(), 1);
        assert_eq!(r.links(0, 0, 1).unwrap(), vec![0]);
        assert!(r.links(0, 0, 2).unwrap().is_empty());
        assert!(r.links(0, 1, 1).is_err());
        assert!(r.complete_at(3).unwrap() == VertexSet::new(vec![1]));
    }

    #[test]
    fn fullness_on_leaf_is_vacuous() {
        let r = Representation::new(star_host(3), vec![vec![0, 1], vec![2]]);
        assert_eq!(r.is_full_at(1).unwrap(), Fullness::Full);
    }

    #[test]
    fn fullness_of_two_node_fixture() {
        // K_2 on host 0-1: vertex 0 covers both nodes, vertex 1 only node 1.
        // At node 0 there is a single branch, so fullness holds vacuously;
        // at node 1 likewise.
        let t = HostTree::new(2, vec![(0, 1)]).unwrap();
        let r = Representation::new(t, vec![vec![0, 1], vec![1]]);
        assert!(verify_representation(&named::complete(2), &r, None).is_valid());
        assert_eq!(r.is_full_at(0).unwrap(), Fullness::Full);
        assert_eq!(r.is_full_at(1).unwrap(), Fullness::Full);
    }

    #[test]
    fn full_star_centre() {
        // claw-free triangle of linking paths with private leaves in every branch
        let t = star_host(3);
        let r = Representation::new(
            t,
            vec![vec![0, 1, 2], vec![0, 2, 3], vec![0, 1, 3], vec![1], vec![2], vec![3]],
        );
        assert_eq!(r.is_full_at(0).unwrap(), Fullness::Full);
        let g = r.intersection_graph().unwrap();
        assert!(g.is_clique(r.complete_at(0).unwrap().mask()));
        let partial = Representation::new(star_host(3), vec![vec![0, 1, 2], vec![1], vec![2], vec![3]]);
        assert_eq!(partial.is_full_at(0).unwrap(), Fullness::MissingPair { i: 0, j: 2 });
    }

    #[test]
    fn reduce_degree_on_star() {
        let r = Representation::new(star_host(4), vec![vec![1], vec![2], vec![3], vec![4]]);
        let g = r.intersection_graph().unwrap();
        let out = r.reduce_degree(0).unwrap();
        assert!(verify_representation(&g, &out, None).is_valid());
        assert_eq!(out.host.degree(0), 3);
        assert_eq!(out.host.degree(5), 3);
        assert_eq!(out.host.max_degree(), 3);
    }

    #[test]
    fn reduce_degree_preconditions() {
        let low = Representation::new(star_host(3), vec![vec![1], vec![2], vec![3]]);
        assert!(low.reduce_degree(0).is_err());
        // every pair linked
        let mut paths = Vec::new();
        for i in 1..=4 {
            for j in i + 1..=4 {
                paths.push(vec![0, i, j]);
            }
        }
        let linked = Representation::new(star_host(4), paths);
        assert!(linked.reduce_degree(0).is_err());
    }

    #[test]
    fn trimming_is_idempotent_and_preserves_graph() {
        let t = HostTree::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let r = Representation::new(t, vec![vec![0, 1, 2, 3], vec![1], vec![3]]);
        let g = r.intersection_graph().unwrap();
        let trimmed = r.trim_paths();
        assert_eq!(trimmed.paths[0], vec![1, 2, 3]);
        assert!(verify_representation(&g, &trimmed, None).is_valid());
        assert_eq!(trimmed.trim_paths(), trimmed);
    }

    #[test]
    fn text_round_trip() {
        let r = Representation::new(star_host(3), vec![vec![0, 1], vec![2], vec![], vec![0, 2, 3]]);
        let text = r.to_text();
        let back = Representation::from_text(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_text(), text);
        assert!(Representation::from_text("2 1\n0 1\n1\n1 0\n").is_err());
    }
}
