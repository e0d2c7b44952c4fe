//! Chordality, clique trees and VPT recognition.
//!
//! Clique trees of a chordal graph are exactly the maximum-weight spanning
//! trees of its clique intersection graph (weight `|Ci ∩ Cj|`). They are
//! enumerated weight class by weight class: a spanning tree is of maximum
//! weight iff, for every threshold `w`, its edges of weight `>= w` connect
//! the same cliques as all intersection edges of weight `>= w` do. VPT
//! recognition runs the same enumeration, pruning any partial tree in which
//! some vertex's cliques already branch.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, bits, Graph, Vertex, VertexSet};
use crate::representation::{HostTree, Representation};

pub const DEFAULT_CLIQUE_TREE_BUDGET: u64 = 1_000_000;

/// Perfect elimination ordering by maximum cardinality search, or `None`
/// when `g` has a chordless cycle of length at least four.
pub fn is_chordal(g: &Graph) -> Option<Vec<Vertex>> {
    let n = g.order();
    let mut numbered = 0u64;
    let mut weight = vec![0usize; n];
    let mut visit = Vec::with_capacity(n);
    for _ in 0..n {
        let v = bits(g.vertex_mask() & !numbered)
            .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
            .expect("unnumbered vertex");
        visit.push(v);
        numbered |= bit(v);
        for w in bits(g.nbrs(v) & !numbered) {
            weight[w] += 1;
        }
    }
    visit.reverse();
    is_perfect_elimination_ordering(g, &visit).then_some(visit)
}

/// Each vertex's neighbours later in `order` must be pairwise adjacent.
pub fn is_perfect_elimination_ordering(g: &Graph, order: &[Vertex]) -> bool {
    if order.len() != g.order() {
        return false;
    }
    let mut later = g.vertex_mask();
    for &v in order {
        later &= !bit(v);
        if !g.is_complete_set(g.nbrs(v) & later) {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueTreeEdge {
    pub a: usize,
    pub b: usize,
    pub weight: usize,
}

/// A spanning tree on the cliques of a chordal graph in which the cliques
/// containing any given vertex induce a subtree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueTree {
    pub cliques: Vec<VertexSet>,
    pub edges: Vec<CliqueTreeEdge>,
}

impl CliqueTree {
    pub fn total_weight(&self) -> usize {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|e| e.a == node || e.b == node).count()
    }

    /// Indices of the cliques containing `v`.
    pub fn nodes_of(&self, v: Vertex) -> Vec<usize> {
        (0..self.cliques.len()).filter(|&i| self.cliques[i].contains(v)).collect()
    }

    fn restricted_degrees(&self, v: Vertex) -> (usize, Vec<usize>) {
        let mut deg = vec![0; self.cliques.len()];
        let mut count = 0;
        for e in &self.edges {
            if self.cliques[e.a].contains(v) && self.cliques[e.b].contains(v) {
                deg[e.a] += 1;
                deg[e.b] += 1;
                count += 1;
            }
        }
        (count, deg)
    }

    /// Induced-subtree property for every vertex of `g`.
    pub fn has_subtree_property(&self, g: &Graph) -> bool {
        g.vertices().all(|v| {
            let (edges, _) = self.restricted_degrees(v);
            edges + 1 == self.nodes_of(v).len()
        })
    }

    /// Every vertex's cliques induce a path.
    pub fn has_path_property(&self, g: &Graph) -> bool {
        self.has_subtree_property(g)
            && g.vertices().all(|v| self.restricted_degrees(v).1.iter().all(|&d| d <= 2))
    }

    pub fn host_tree(&self) -> HostTree {
        HostTree::new(
            self.cliques.len(),
            self.edges.iter().map(|e| (e.a, e.b)).collect(),
        )
        .expect("clique tree is a tree")
    }
}

/// A clique tree whose vertex subtrees are all paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PathCliqueTree(pub CliqueTree);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Any,
    /// Each vertex's cliques must induce a path.
    VertexPaths,
    /// The tree itself must be a path.
    CliquePath,
}

#[derive(Clone, Debug)]
struct Frame {
    pos: usize,
    chosen: Vec<usize>,
}

/// Depth-first enumeration of maximum-weight spanning trees of the clique
/// intersection graph, in lexicographic include-before-exclude order.
pub struct CliqueTrees {
    cliques: Vec<VertexSet>,
    masks: Vec<u64>,
    edges: Vec<(usize, usize, usize)>,
    /// Component count reached by all edges of weight >= the class of each position.
    target: Vec<usize>,
    /// End (exclusive) of the weight class of each position.
    class_end: Vec<usize>,
    shape: Shape,
    stack: Vec<Frame>,
    budget: u64,
    steps: u64,
    failed: bool,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn component_count(nodes: usize, edges: impl Iterator<Item = (usize, usize)>) -> usize {
    let mut parent: Vec<usize> = (0..nodes).collect();
    let mut count = nodes;
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            count -= 1;
        }
    }
    count
}

impl CliqueTrees {
    fn new(g: &Graph, shape: Shape, budget: u64) -> Result<Self> {
        if is_chordal(g).is_none() {
            return Err(Error::NotChordal);
        }
        let cliques = g.enumerate_cliques();
        let masks: Vec<u64> = cliques.iter().map(VertexSet::mask).collect();
        let k = cliques.len();
        let mut edges = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                let w = (masks[a] & masks[b]).count_ones() as usize;
                if w > 0 {
                    edges.push((a, b, w));
                }
            }
        }
        // Components of a disconnected graph are chained through their
        // lowest cliques by fixed zero-weight edges.
        let firsts: Vec<usize> = g
            .components()
            .iter()
            .map(|&comp| (0..k).find(|&i| masks[i] & comp != 0).expect("every vertex is in a clique"))
            .collect();
        for pair in firsts.windows(2) {
            edges.push((pair[0].min(pair[1]), pair[0].max(pair[1]), 0));
        }
        edges.sort_by(|x, y| y.2.cmp(&x.2).then((x.0, x.1).cmp(&(y.0, y.1))));
        let mut target = vec![0; edges.len()];
        let mut class_end = vec![0; edges.len()];
        let mut start = 0;
        while start < edges.len() {
            let w = edges[start].2;
            let end = edges[start..]
                .iter()
                .position(|e| e.2 != w)
                .map_or(edges.len(), |p| start + p);
            let t = component_count(k, edges[..end].iter().map(|e| (e.0, e.1)));
            for p in start..end {
                target[p] = t;
                class_end[p] = end;
            }
            start = end;
        }
        let stack = if k == 0 {
            Vec::new()
        } else {
            vec![Frame {
                pos: 0,
                chosen: Vec::new(),
            }]
        };
        Ok(CliqueTrees {
            cliques,
            masks,
            edges,
            target,
            class_end,
            shape,
            stack,
            budget,
            steps: 0,
            failed: false,
        })
    }

    /// Search steps spent so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn can_include(&self, chosen: &[usize], e: usize) -> bool {
        let (a, b, _) = self.edges[e];
        let mut parent: Vec<usize> = (0..self.cliques.len()).collect();
        for &c in chosen {
            let (x, y, _) = self.edges[c];
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            parent[rx] = ry;
        }
        if find(&mut parent, a) == find(&mut parent, b) {
            return false;
        }
        match self.shape {
            Shape::Any => true,
            Shape::CliquePath => {
                let deg = |x: usize| {
                    chosen
                        .iter()
                        .filter(|&&c| self.edges[c].0 == x || self.edges[c].1 == x)
                        .count()
                };
                deg(a) < 2 && deg(b) < 2
            }
            Shape::VertexPaths => {
                let shared = self.masks[a] & self.masks[b];
                bits(shared).all(|v| {
                    let deg = |x: usize| {
                        chosen
                            .iter()
                            .filter(|&&c| {
                                let (p, q, _) = self.edges[c];
                                (p == x || q == x) && self.masks[p] & self.masks[q] & bit(v) != 0
                            })
                            .count()
                    };
                    deg(a) < 2 && deg(b) < 2
                })
            }
        }
    }

    fn can_exclude(&self, chosen: &[usize], pos: usize) -> bool {
        let rest = pos + 1..self.class_end[pos];
        let reached = component_count(
            self.cliques.len(),
            chosen
                .iter()
                .chain(rest.clone().collect::<Vec<_>>().iter())
                .map(|&c| (self.edges[c].0, self.edges[c].1)),
        );
        reached == self.target[pos]
    }

    fn build(&self, chosen: &[usize]) -> CliqueTree {
        CliqueTree {
            cliques: self.cliques.clone(),
            edges: chosen
                .iter()
                .map(|&c| {
                    let (a, b, weight) = self.edges[c];
                    CliqueTreeEdge { a, b, weight }
                })
                .collect(),
        }
    }
}

impl Iterator for CliqueTrees {
    type Item = Result<CliqueTree>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        while let Some(frame) = self.stack.pop() {
            self.steps += 1;
            if self.steps > self.budget {
                self.failed = true;
                self.stack.clear();
                return Some(Err(Error::BudgetExceeded {
                    budget: self.budget,
                }));
            }
            if frame.chosen.len() + 1 == self.cliques.len() {
                // spanning tree complete; later edges can only be excluded
                return Some(Ok(self.build(&frame.chosen)));
            }
            if frame.pos == self.edges.len() {
                continue;
            }
            let pos = frame.pos;
            if self.can_exclude(&frame.chosen, pos) {
                self.stack.push(Frame {
                    pos: pos + 1,
                    chosen: frame.chosen.clone(),
                });
            }
            if self.can_include(&frame.chosen, pos) {
                let mut chosen = frame.chosen;
                chosen.push(pos);
                self.stack.push(Frame { pos: pos + 1, chosen });
            }
        }
        None
    }
}

/// Clique trees of a chordal graph, at most `limit` of them.
pub fn clique_trees(g: &Graph, limit: usize) -> Result<impl Iterator<Item = CliqueTree>> {
    let it = CliqueTrees::new(g, Shape::Any, u64::MAX)?;
    Ok(it.take(limit).map(|t| t.expect("unbounded budget")).inspect(|t| {
        debug_assert_eq!(t.edges.len() + 1, t.cliques.len());
    }))
}

fn first_tree(g: &Graph, shape: Shape, budget: u64) -> Result<Option<CliqueTree>> {
    if g.order() == 0 {
        return Ok(None);
    }
    match CliqueTrees::new(g, shape, budget) {
        Err(Error::NotChordal) => Ok(None),
        Err(e) => Err(e),
        Ok(mut it) => it.next().transpose(),
    }
}

/// A clique tree in which every vertex's cliques form a path, or `None`
/// once all clique trees are exhausted (or the graph is not chordal).
pub fn is_vpt(g: &Graph, budget: u64) -> Result<Option<PathCliqueTree>> {
    if g.order() == 0 {
        return Ok(Some(PathCliqueTree(CliqueTree {
            cliques: Vec::new(),
            edges: Vec::new(),
        })));
    }
    let found = first_tree(g, Shape::VertexPaths, budget)?;
    debug_assert!(found.as_ref().is_none_or(|t| t.has_path_property(g)));
    Ok(found.map(PathCliqueTree))
}

/// Interval recognition: every component has a clique tree that is a path.
pub fn is_interval(g: &Graph, budget: u64) -> Result<bool> {
    for comp in g.components() {
        let (sub, _) = g.induced(comp);
        if first_tree(&sub, Shape::CliquePath, budget)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Host tree on the cliques, each vertex mapped to the cliques containing it.
pub fn canonical_representation(g: &Graph, budget: u64) -> Result<Representation> {
    let tree = is_vpt(g, budget)?.ok_or(Error::NotVpt)?;
    Ok(representation_from(g, &tree))
}

pub fn representation_from(g: &Graph, tree: &PathCliqueTree) -> Representation {
    let t = &tree.0;
    if t.cliques.is_empty() {
        return Representation::new(HostTree::single(), Vec::new());
    }
    let paths = g.vertices().map(|v| t.nodes_of(v)).collect();
    Representation::new(t.host_tree(), paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use crate::representation::verify_representation;

    fn weight_identity(g: &Graph, t: &CliqueTree) -> bool {
        let total: usize = g.vertices().map(|v| t.nodes_of(v).len()).sum();
        t.total_weight() == total - g.order()
    }

    #[test]
    fn chordality() {
        assert!(is_chordal(&named::path(6)).is_some());
        assert!(is_chordal(&named::star(4)).is_some());
        assert!(is_chordal(&named::cycle(4)).is_none());
        assert!(is_chordal(&named::cycle(5)).is_none());
        assert!(is_chordal(&named::complete(5)).is_some());
        let peo = is_chordal(&named::wheel(3)).unwrap();
        assert!(is_perfect_elimination_ordering(&named::wheel(3), &peo));
    }

    #[test]
    fn clique_tree_counts() {
        let k4: Vec<_> = clique_trees(&named::complete(4), 10).unwrap().collect();
        assert_eq!(k4.len(), 1);
        assert!(k4[0].edges.is_empty());

        let p4: Vec<_> = clique_trees(&named::path(4), 10).unwrap().collect();
        assert_eq!(p4.len(), 1);
        assert_eq!(p4[0].edges.len(), 2);

        // star K_{1,3}: three edge-cliques pairwise meeting in the centre
        let claw: Vec<_> = clique_trees(&named::star(3), 10).unwrap().collect();
        assert_eq!(claw.len(), 3);
        for t in &claw {
            assert!(t.has_subtree_property(&named::star(3)));
            assert!(weight_identity(&named::star(3), t));
        }
        assert!(clique_trees(&named::cycle(4), 1).is_err());
    }

    #[test]
    fn limit_is_respected() {
        assert_eq!(clique_trees(&named::star(5), 7).unwrap().count(), 7);
        // Cayley: 5^3 spanning trees of K_5
        assert_eq!(clique_trees(&named::star(5), 1000).unwrap().count(), 125);
    }

    #[test]
    fn disconnected_graphs_are_chained() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let trees: Vec<_> = clique_trees(&g, 10).unwrap().collect();
        assert_eq!(trees.len(), 1);
        assert!(trees[0].has_subtree_property(&g));
        assert!(weight_identity(&g, &trees[0]));
        assert!(is_vpt(&g, 1000).unwrap().is_some());
        assert!(is_interval(&g, 1000).unwrap());
    }

    #[test]
    fn vpt_recognition() {
        assert!(is_vpt(&named::path(5), 1000).unwrap().is_some());
        assert!(is_vpt(&named::cycle(4), 1000).unwrap().is_none());
        assert!(is_vpt(&named::complete(3), 1000).unwrap().is_some());
        assert!(is_vpt(&named::star(6), 10_000).unwrap().is_some());
    }

    #[test]
    fn interval_recognition() {
        assert!(is_interval(&named::path(5), 1000).unwrap());
        assert!(is_interval(&named::star(3), 1000).unwrap());
        // subdivided claw has an asteroidal triple
        let sub = Graph::from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        assert!(!is_interval(&sub, 1000).unwrap());
        assert!(is_vpt(&sub, 1000).unwrap().is_some());
    }

    #[test]
    fn budget_is_reported() {
        let r = is_vpt(&named::star(6), 3);
        assert_eq!(r, Err(Error::BudgetExceeded { budget: 3 }));
    }

    #[test]
    fn canonical_representations() {
        let k3 = canonical_representation(&named::complete(3), 100).unwrap();
        assert_eq!(k3.host.node_count(), 1);
        assert_eq!(k3.paths, vec![vec![0]; 3]);

        let p4 = named::path(4);
        let r = canonical_representation(&p4, 100).unwrap();
        assert_eq!(r.host.node_count(), 3);
        assert_eq!(r.paths.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 2, 2, 1]);
        assert!(verify_representation(&p4, &r, None).is_valid());
        assert_eq!(canonical_representation(&named::cycle(4), 100), Err(Error::NotVpt));
    }
}
