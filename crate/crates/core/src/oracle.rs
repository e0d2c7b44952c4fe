//! Brute-force search for `(h,2,1)`-representations of tiny graphs.
//!
//! Host trees are enumerated up to isomorphism and paths assigned vertex by
//! vertex. The search only looks for representations in a normal form that
//! every graph with a representation on a given tree also has on a tree no
//! larger: take one minimising (host size, total path length). Then each
//! host leaf `l` is the whole path of some vertex (otherwise `l` could be
//! dropped), those vertices are pairwise non-adjacent, and every endpoint of
//! a longer path is the only common node with some neighbour's path
//! (otherwise the endpoint could be trimmed). In particular the host has at
//! most `α(G)` leaves.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chordal::is_chordal;
use crate::error::{Error, Result};
use crate::graph::{bit, bits, Graph, Vertex};
use crate::representation::{HostTree, Representation};
use crate::trees::{free_trees, FreeTree};

/// Host trees searched in parallel per batch; results are merged in tree
/// order so witnesses and counters do not depend on the thread count.
const BATCH: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub h: usize,
    pub exists: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<Representation>,
    /// Largest host tree considered.
    pub bound_used: usize,
    pub trees_examined: u64,
    pub assignments_examined: u64,
    /// The graph has a chordless cycle, so no host tree of any size works.
    pub chordality_refuted: bool,
}

impl OracleVerdict {
    /// A negative answer that only holds for hosts within the bound.
    pub fn is_bounded_negative(&self) -> bool {
        !self.exists && !self.chordality_refuted
    }
}

pub fn default_bound(g: &Graph) -> usize {
    (2 * g.enumerate_cliques().len()).max(1)
}

/// Tree families keyed by (node bound, leaf bound).
type TreeCache = Mutex<HashMap<(usize, usize), Arc<Vec<FreeTree>>>>;

fn tree_family(max_nodes: usize, max_leaves: usize) -> Arc<Vec<FreeTree>> {
    static CACHE: OnceLock<TreeCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("tree cache").get(&(max_nodes, max_leaves)) {
        return Arc::clone(t);
    }
    let trees = Arc::new(free_trees(max_nodes, usize::MAX, max_leaves));
    cache
        .lock()
        .expect("tree cache")
        .entry((max_nodes, max_leaves))
        .or_insert(trees)
        .clone()
}

struct Search<'a> {
    g: &'a Graph,
    tree_adj: Vec<u64>,
    paths: Vec<u64>,
    assign: Vec<u64>,
    steps: u64,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, tree: &FreeTree) -> Self {
        let t = tree.node_count();
        let tree_adj: Vec<u64> = (0..t)
            .map(|x| tree.neighbors(x).iter().fold(0, |m, &y| m | bit(y)))
            .collect();
        let mut paths = Vec::new();
        for a in 0..t {
            // grow every path starting at a, keeping b >= a so each appears once
            let mut stack = vec![(a, bit(a))];
            while let Some((end, mask)) = stack.pop() {
                if end >= a {
                    paths.push(mask);
                }
                for y in bits(tree_adj[end] & !mask) {
                    stack.push((y, mask | bit(y)));
                }
            }
        }
        paths.sort_by_key(|p| (p.count_ones(), *p));
        Search {
            g,
            tree_adj,
            paths,
            assign: vec![0; g.order()],
            steps: 0,
        }
    }

    fn consistent(&self, v: Vertex, p: u64) -> bool {
        self.g.vertices().all(|w| {
            let q = self.assign[w];
            w == v || q == 0 || ((p & q != 0) == self.g.has_edge(v, w))
        })
    }

    /// Every endpoint of a path longer than one node is the sole common
    /// node with some neighbour's path.
    fn endpoints_needed(&self, v: Vertex) -> bool {
        let p = self.assign[v];
        if p.count_ones() < 2 {
            return true;
        }
        bits(p)
            .filter(|&x| (self.tree_adj[x] & p).count_ones() == 1)
            .all(|x| bits(self.g.nbrs(v)).any(|w| self.assign[w] & p == bit(x)))
    }

    fn settled(&self, v: Vertex) -> bool {
        self.assign[v] != 0 && bits(self.g.nbrs(v)).all(|w| self.assign[w] != 0)
    }

    fn locally_minimal(&self, v: Vertex) -> bool {
        std::iter::once(v)
            .chain(bits(self.g.nbrs(v)))
            .all(|x| !self.settled(x) || self.endpoints_needed(x))
    }

    fn place_leaves(&mut self, leaves: &[usize], used: u64) -> bool {
        let Some((&leaf, rest)) = leaves.split_first() else {
            return self.solve();
        };
        for v in bits(self.g.vertex_mask() & !used) {
            if self.g.nbrs(v) & used != 0 {
                continue;
            }
            self.assign[v] = bit(leaf);
            if self.place_leaves(rest, used | bit(v)) {
                return true;
            }
            self.assign[v] = 0;
        }
        false
    }

    fn solve(&mut self) -> bool {
        self.steps += 1;
        let mut best: Option<(Vertex, Vec<u64>)> = None;
        for v in self.g.vertices().filter(|&v| self.assign[v] == 0) {
            let cands: Vec<u64> = self
                .paths
                .iter()
                .copied()
                .filter(|&p| self.consistent(v, p))
                .collect();
            if cands.is_empty() {
                return false;
            }
            if best.as_ref().is_none_or(|(_, b)| cands.len() < b.len()) {
                best = Some((v, cands));
            }
        }
        let Some((v, cands)) = best else {
            return true;
        };
        for p in cands {
            self.assign[v] = p;
            if self.locally_minimal(v) && self.solve() {
                return true;
            }
        }
        self.assign[v] = 0;
        false
    }
}

fn search_tree(g: &Graph, tree: &FreeTree) -> (Option<Representation>, u64) {
    let mut s = Search::new(g, tree);
    let leaves = tree.leaves();
    if !s.place_leaves(&leaves, 0) {
        return (None, s.steps);
    }
    let host = HostTree::new(tree.node_count(), tree.edges()).expect("free tree is a tree");
    let paths = s.assign.iter().map(|&p| bits(p).collect()).collect();
    (Some(Representation::new(host, paths)), s.steps)
}

struct Outcome {
    representation: Option<(Representation, usize)>,
    trees: u64,
    steps: u64,
}

/// First tree (in enumeration order) carrying a representation.
fn search_trees(g: &Graph, trees: &[&FreeTree]) -> Outcome {
    let mut out = Outcome {
        representation: None,
        trees: 0,
        steps: 0,
    };
    for chunk in trees.chunks(BATCH) {
        let results: Vec<(Option<Representation>, u64)> =
            chunk.par_iter().map(|t| search_tree(g, t)).collect();
        for (i, (rep, steps)) in results.into_iter().enumerate() {
            out.trees += 1;
            out.steps += steps;
            if let Some(r) = rep {
                out.representation = Some((r, chunk[i].max_degree()));
                return out;
            }
        }
    }
    out
}

fn trivial(g: &Graph, h: usize, bound: usize) -> Option<OracleVerdict> {
    (g.order() == 0).then(|| OracleVerdict {
        h,
        exists: true,
        representation: Some(Representation::new(HostTree::single(), Vec::new())),
        bound_used: bound,
        trees_examined: 0,
        assignments_examined: 0,
        chordality_refuted: false,
    })
}

/// Exhaustive search over host trees with at most `bound` nodes and
/// maximum degree at most `h`.
pub fn exists_representation(g: &Graph, h: usize, bound: usize) -> Result<OracleVerdict> {
    if bound == 0 {
        return Err(Error::Precondition("host-tree bound must be at least 1".into()));
    }
    if let Some(v) = trivial(g, h, bound) {
        return Ok(v);
    }
    let family = tree_family(bound, g.independence_number());
    let trees: Vec<&FreeTree> = family.iter().filter(|t| t.max_degree() <= h).collect();
    let out = search_trees(g, &trees);
    Ok(OracleVerdict {
        h,
        exists: out.representation.is_some(),
        representation: out.representation.map(|(r, _)| r),
        bound_used: bound,
        trees_examined: out.trees,
        assignments_examined: out.steps,
        chordality_refuted: is_chordal(g).is_none(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinH {
    pub h: usize,
    /// Witness on a host of maximum degree at most `h`.
    pub verdict: OracleVerdict,
}

/// Smallest `h >= 2` with an `(h,2,1)`-representation on at most `bound`
/// host nodes.
pub fn min_h(g: &Graph, bound: usize) -> Result<MinH> {
    if bound == 0 {
        return Err(Error::Precondition("host-tree bound must be at least 1".into()));
    }
    if let Some(v) = trivial(g, 2, bound) {
        return Ok(MinH { h: 2, verdict: v });
    }
    if is_chordal(g).is_none() {
        return Err(Error::NotVpt);
    }
    let family = tree_family(bound, g.independence_number());
    let all: Vec<&FreeTree> = family.iter().collect();
    let any = search_trees(g, &all);
    let Some((rep, degree)) = any.representation else {
        return Err(Error::NotWithinBound { bound });
    };
    let mut trees = any.trees;
    let mut steps = any.steps;
    let top = degree.max(2);
    for h in 2..top {
        let class: Vec<&FreeTree> = family
            .iter()
            .filter(|t| if h == 2 { t.max_degree() <= 2 } else { t.max_degree() == h })
            .collect();
        let out = search_trees(g, &class);
        trees += out.trees;
        steps += out.steps;
        if let Some((r, _)) = out.representation {
            return Ok(MinH {
                h,
                verdict: verdict_for(h, r, bound, trees, steps),
            });
        }
    }
    Ok(MinH {
        h: top,
        verdict: verdict_for(top, rep, bound, trees, steps),
    })
}

fn verdict_for(h: usize, r: Representation, bound: usize, trees: u64, steps: u64) -> OracleVerdict {
    OracleVerdict {
        h,
        exists: true,
        representation: Some(r),
        bound_used: bound,
        trees_examined: trees,
        assignments_examined: steps,
        chordality_refuted: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use crate::representation::verify_representation;

    #[test]
    fn triangle_on_one_node() {
        let v = exists_representation(&named::complete(3), 2, 1).unwrap();
        assert!(v.exists);
        let r = v.representation.unwrap();
        assert_eq!(r.host.node_count(), 1);
        assert!(verify_representation(&named::complete(3), &r, Some(2)).is_valid());
    }

    #[test]
    fn four_cycle_has_none() {
        let c4 = named::cycle(4);
        let v = exists_representation(&c4, 64, 4 * 4).unwrap();
        assert!(!v.exists);
        assert!(v.chordality_refuted);
        assert_eq!(min_h(&c4, 8), Err(Error::NotVpt));
    }

    #[test]
    fn small_minimum_degrees() {
        let p4 = named::path(4);
        assert_eq!(min_h(&p4, default_bound(&p4)).unwrap().h, 2);
        let claw = named::star(3);
        assert_eq!(min_h(&claw, default_bound(&claw)).unwrap().h, 2);
        // subdivided claw is not interval but is VPT
        let sub = Graph::from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        let m = min_h(&sub, default_bound(&sub)).unwrap();
        assert_eq!(m.h, 3);
        let r = m.verdict.representation.unwrap();
        assert!(verify_representation(&sub, &r, Some(3)).is_valid());
    }

    #[test]
    fn verdicts_verify() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        for h in 2..=4 {
            let v = exists_representation(&g, h, default_bound(&g)).unwrap();
            assert!(v.exists);
            assert!(verify_representation(&g, v.representation.as_ref().unwrap(), Some(h)).is_valid());
        }
    }

    #[test]
    fn monotone_in_h() {
        let sub = Graph::from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        let b = default_bound(&sub);
        assert!(!exists_representation(&sub, 2, b).unwrap().exists);
        assert!(exists_representation(&sub, 3, b).unwrap().exists);
        assert!(exists_representation(&sub, 4, b).unwrap().exists);
    }
}
