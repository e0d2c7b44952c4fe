//! Isomorph-free enumeration of small free trees.
//!
//! Trees on `s + 1` nodes are produced by attaching a leaf to every node of
//! every tree on `s` nodes; duplicates are removed by a canonical code
//! (AHU encoding rooted at the centre, minimised over both centres of a
//! bicentral tree). Restricting to families closed under leaf deletion,
//! such as bounded degree or bounded leaf count, keeps the method complete.

use std::collections::BTreeMap;

/// A tree on nodes `0..n` as sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeTree {
    adj: Vec<Vec<usize>>,
}

impl FreeTree {
    pub fn single() -> Self {
        FreeTree { adj: vec![Vec::new()] }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adj[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adj[x].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Nodes of degree one.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.adj.len()).filter(|&x| self.adj[x].len() == 1).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, ns) in self.adj.iter().enumerate() {
            out.extend(ns.iter().filter(|&&b| a < b).map(|&b| (a, b)));
        }
        out
    }

    fn with_leaf(&self, at: usize) -> FreeTree {
        let mut adj = self.adj.clone();
        let new = adj.len();
        adj[at].push(new);
        adj.push(vec![at]);
        FreeTree { adj }
    }

    fn centers(&self) -> Vec<usize> {
        let n = self.adj.len();
        if n <= 2 {
            return (0..n).collect();
        }
        let mut deg: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut layer: Vec<usize> = (0..n).filter(|&x| deg[x] == 1).collect();
        let mut remaining = n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &x in &layer {
                for &y in &self.adj[x] {
                    deg[y] -= 1;
                    if deg[y] == 1 {
                        next.push(y);
                    }
                }
            }
            layer = next;
        }
        layer.sort_unstable();
        layer
    }

    fn rooted_code(&self, root: usize, parent: usize) -> String {
        let mut parts: Vec<String> = self.adj[root]
            .iter()
            .filter(|&&c| c != parent)
            .map(|&c| self.rooted_code(c, root))
            .collect();
        parts.sort_unstable();
        format!("({})", parts.concat())
    }

    /// Equal for isomorphic trees and only for them.
    pub fn canonical_code(&self) -> String {
        self.centers()
            .into_iter()
            .map(|c| self.rooted_code(c, usize::MAX))
            .min()
            .unwrap_or_default()
    }
}

/// All trees with `1..=max_nodes` nodes, one per isomorphism class, whose
/// maximum degree is at most `max_degree` and which have at most
/// `max_leaves` leaves. Ordered by size, then canonical code.
pub fn free_trees(max_nodes: usize, max_degree: usize, max_leaves: usize) -> Vec<FreeTree> {
    let mut out = Vec::new();
    if max_nodes == 0 {
        return out;
    }
    let mut layer = vec![FreeTree::single()];
    for size in 1..=max_nodes {
        out.extend(layer.iter().cloned());
        if size == max_nodes {
            break;
        }
        let mut next: BTreeMap<String, FreeTree> = BTreeMap::new();
        for t in &layer {
            for at in 0..t.node_count() {
                if t.degree(at) + 1 > max_degree {
                    continue;
                }
                let grown = t.with_leaf(at);
                if grown.leaves().len() > max_leaves {
                    continue;
                }
                next.entry(grown.canonical_code()).or_insert(grown);
            }
        }
        layer = next.into_values().collect();
    }
    out
}
