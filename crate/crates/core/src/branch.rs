//! Branch graphs of a clique.
//!
//! For a clique `C`, the branch graph has the vertices outside `C` with at
//! least one neighbour in `C`. Two of them are adjacent when they are not
//! adjacent in `G`, share a neighbour in `C`, and each has a neighbour in
//! `C` the other lacks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chordal::is_vpt;
use crate::coloring::chi;
use crate::error::{Error, Result};
use crate::graph::{bits, Graph, Vertex, VertexSet};
use crate::limits::Limits;
use crate::representation::{Node, Representation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchGraph {
    pub carrier: Graph,
    /// Vertex of `G` behind each carrier vertex, ascending.
    pub back_map: Vec<Vertex>,
    pub source_clique: VertexSet,
}

impl BranchGraph {
    /// Edges in terms of the vertices of `G`.
    pub fn original_edges(&self) -> Vec<(Vertex, Vertex)> {
        self.carrier
            .edges()
            .map(|(a, b)| (self.back_map[a], self.back_map[b]))
            .collect()
    }

    /// Same vertices of `G` and same edges between them.
    pub fn same_as(&self, other: &BranchGraph) -> bool {
        self.back_map == other.back_map && self.original_edges() == other.original_edges()
    }

    fn relabelled(&self, to_original: &[Vertex]) -> BranchGraph {
        BranchGraph {
            carrier: self.carrier.clone(),
            back_map: self.back_map.iter().map(|&v| to_original[v]).collect(),
            source_clique: self.source_clique.iter().map(|v| to_original[v]).collect(),
        }
    }
}

fn adjacent_in_branch(g: &Graph, c: u64, v: Vertex, w: Vertex) -> bool {
    let (tv, tw) = (g.nbrs(v) & c, g.nbrs(w) & c);
    !g.has_edge(v, w) && tv & tw != 0 && tv & !tw != 0 && tw & !tv != 0
}

pub(crate) fn branch_graph_mask(g: &Graph, c: u64) -> Result<BranchGraph> {
    if !g.is_clique(c) {
        return Err(Error::NotAClique(VertexSet::from_mask(c).into_vec()));
    }
    let back_map: Vec<Vertex> = bits(g.vertex_mask() & !c)
        .filter(|&v| g.nbrs(v) & c != 0)
        .collect();
    let k = back_map.len();
    let mut edges = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            if adjacent_in_branch(g, c, back_map[a], back_map[b]) {
                edges.push((a, b));
            }
        }
    }
    let carrier = Graph::from_edges(k, &edges)?;
    Ok(BranchGraph {
        carrier,
        back_map,
        source_clique: VertexSet::from_mask(c),
    })
}

pub fn branch_graph(g: &Graph, c: &VertexSet) -> Result<BranchGraph> {
    if let Some(&v) = c.as_slice().iter().find(|&&v| v >= g.order()) {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            order: g.order(),
        });
    }
    branch_graph_mask(g, c.mask())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum DeletionIdentity {
    /// `v` was not a branch vertex and the branch graph is unchanged.
    Unchanged,
    /// `v` was a branch vertex and exactly it disappeared.
    VertexRemoved,
    Fails {
        expected: Box<BranchGraph>,
        computed: Box<BranchGraph>,
    },
}

impl DeletionIdentity {
    pub fn holds(&self) -> bool {
        !matches!(self, DeletionIdentity::Fails { .. })
    }
}

/// Compares the branch graph of `g - v` at `c` with the branch graph of `g`
/// at `c`, with `v` removed when it was a branch vertex.
pub fn branch_deletion_identity(g: &Graph, c: &VertexSet, v: Vertex) -> Result<DeletionIdentity> {
    if c.contains(v) {
        return Err(Error::Precondition(format!("vertex {v} lies in the clique")));
    }
    let before = branch_graph(g, c)?;
    let (smaller, map) = g.delete_vertex(v)?;
    let after =
        branch_graph_mask(&smaller, map.forward_mask(c.mask()))?.relabelled(&map.new_to_old);
    let Some(pos) = before.back_map.iter().position(|&x| x == v) else {
        return Ok(if after.same_as(&before) {
            DeletionIdentity::Unchanged
        } else {
            DeletionIdentity::Fails {
                expected: Box::new(before),
                computed: Box::new(after),
            }
        });
    };
    let (carrier, _) = before.carrier.delete_vertex(pos)?;
    let mut back_map = before.back_map.clone();
    back_map.remove(pos);
    let expected = BranchGraph {
        carrier,
        back_map,
        source_clique: before.source_clique.clone(),
    };
    Ok(if after.same_as(&expected) {
        DeletionIdentity::VertexRemoved
    } else {
        DeletionIdentity::Fails {
            expected: Box::new(expected),
            computed: Box::new(after),
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchChi {
    pub chi: usize,
    /// First clique (in enumeration order) attaining `chi`.
    pub witness: VertexSet,
}

/// Chromatic number of the branch graph at every clique, in clique order.
pub fn branch_chi_profile(g: &Graph, coloring_cap: usize) -> Result<Vec<(VertexSet, usize)>> {
    g.enumerate_cliques()
        .into_par_iter()
        .map(|c| {
            let b = branch_graph_mask(g, c.mask())?;
            let x = chi(&b.carrier, coloring_cap)?;
            Ok((c, x))
        })
        .collect()
}

/// Maximum branch-graph chromatic number over the cliques of `g`, which
/// must be a VPT graph.
pub fn max_branch_chi(g: &Graph, limits: &Limits) -> Result<BranchChi> {
    if is_vpt(g, limits.clique_tree_budget)?.is_none() {
        return Err(Error::NotVpt);
    }
    max_branch_chi_unchecked(g, limits.coloring_cap)
}

pub(crate) fn max_branch_chi_unchecked(g: &Graph, coloring_cap: usize) -> Result<BranchChi> {
    let profile = branch_chi_profile(g, coloring_cap)?;
    let mut best: Option<BranchChi> = None;
    for (c, x) in profile {
        if best.as_ref().is_none_or(|b| x > b.chi) {
            best = Some(BranchChi { chi: x, witness: c });
        }
    }
    best.ok_or_else(|| Error::Precondition("graph has no vertices".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchIndexColoring {
    pub node: Node,
    pub degree: usize,
    pub branch: BranchGraph,
    /// Index (among the branches at the node) holding each branch vertex's
    /// path, or `None` when the path meets the node or spans branches.
    pub branch_of: Vec<Option<usize>>,
    /// Some branch vertex's path is not inside a single branch.
    pub uncontained: Vec<Vertex>,
    /// Branch edges whose endpoints' paths share a branch.
    pub same_branch_edges: Vec<(Vertex, Vertex)>,
}

impl BranchIndexColoring {
    /// Branch indices form a proper colouring with at most `degree` colours.
    pub fn is_proper(&self) -> bool {
        self.uncontained.is_empty() && self.same_branch_edges.is_empty()
    }
}

/// Colours each branch vertex at the clique covered by `node` with the index
/// of the branch of the host tree containing its path.
pub fn branch_index_coloring(
    g: &Graph,
    r: &Representation,
    node: Node,
) -> Result<BranchIndexColoring> {
    let c = r.complete_at(node)?;
    let branch = branch_graph_mask(g, c.mask())?;
    let branches = r.branches_at(node)?;
    let contained = |path: &[Node], idx: usize| path.iter().all(|x| branches[idx].binary_search(x).is_ok());
    let branch_of: Vec<Option<usize>> = branch
        .back_map
        .iter()
        .map(|&v| {
            let path = &r.paths[v];
            (0..branches.len()).find(|&i| !path.is_empty() && contained(path, i))
        })
        .collect();
    let uncontained = branch
        .back_map
        .iter()
        .zip(&branch_of)
        .filter(|(_, b)| b.is_none())
        .map(|(&v, _)| v)
        .collect();
    let same_branch_edges = branch
        .carrier
        .edges()
        .filter(|&(a, b)| branch_of[a].is_some() && branch_of[a] == branch_of[b])
        .map(|(a, b)| (branch.back_map[a], branch.back_map[b]))
        .collect();
    Ok(BranchIndexColoring {
        node,
        degree: branches.len(),
        branch,
        branch_of,
        uncontained,
        same_branch_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chordal::canonical_representation;
    use crate::graph::named;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn clique(vs: &[Vertex]) -> VertexSet {
        VertexSet::new(vs.to_vec())
    }

    #[test]
    fn complete_graph_has_empty_branch_graph() {
        let b = branch_graph(&named::complete(4), &clique(&[0, 1, 2, 3])).unwrap();
        assert_eq!(b.carrier.order(), 0);
    }

    #[test]
    fn path_middle_edge() {
        let b = branch_graph(&named::path(4), &clique(&[1, 2])).unwrap();
        assert_eq!(b.back_map, vec![0, 3]);
        assert_eq!(b.carrier.size(), 0);
    }

    #[test]
    fn claw_leaves_are_isolated() {
        // each clique of the claw is an edge; branch graph at {0,1} holds the other leaves,
        // which share the centre but have no private neighbour in the clique
        let b = branch_graph(&named::star(3), &clique(&[0, 1])).unwrap();
        assert_eq!(b.back_map, vec![2, 3]);
        assert_eq!(b.carrier.size(), 0);
    }

    #[test]
    fn non_cliques_are_rejected() {
        let p = named::path(4);
        assert!(matches!(branch_graph(&p, &clique(&[1])), Err(Error::NotAClique(_))));
        assert!(matches!(branch_graph(&p, &clique(&[0, 2])), Err(Error::NotAClique(_))));
        assert!(matches!(branch_graph(&p, &clique(&[0, 9])), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn four_clause_example() {
        // triangle 0,1,2 with private pendants: 3 sees {0,1}, 4 sees {1,2}
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (3, 0), (3, 1), (4, 1), (4, 2)]).unwrap();
        let b = branch_graph(&g, &clique(&[0, 1, 2])).unwrap();
        assert_eq!(b.original_edges(), vec![(3, 4)]);
        // making them adjacent kills the edge (and the triangle is still a clique)
        let g2 = g.with_edge(3, 4).unwrap();
        let b2 = branch_graph(&g2, &clique(&[0, 1, 2])).unwrap();
        assert!(b2.original_edges().is_empty());
    }

    #[test]
    fn deletion_identity_cases() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 0), (3, 1), (4, 1), (4, 2), (4, 5)]).unwrap();
        let c = clique(&[0, 1, 2]);
        assert_eq!(branch_deletion_identity(&g, &c, 5).unwrap(), DeletionIdentity::Unchanged);
        assert_eq!(branch_deletion_identity(&g, &c, 3).unwrap(), DeletionIdentity::VertexRemoved);
        assert!(branch_deletion_identity(&g, &c, 0).is_err());
    }

    #[test]
    fn deletion_identity_random_sweep() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let mut edges = Vec::new();
            for v in 0..n {
                for u in 0..v {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            for c in g.enumerate_cliques() {
                for v in bits(g.vertex_mask() & !c.mask()) {
                    assert!(branch_deletion_identity(&g, &c, v).unwrap().holds());
                }
            }
        }
    }

    #[test]
    fn interval_graphs_have_small_branch_chi() {
        let r = max_branch_chi(&named::path(5), &Limits::default()).unwrap();
        assert!(r.chi <= 2);
        assert!(matches!(max_branch_chi(&named::cycle(4), &Limits::default()), Err(Error::NotVpt)));
    }

    #[test]
    fn branch_index_coloring_on_canonical_representation() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        let r = canonical_representation(&g, 1000).unwrap();
        for q in 0..r.host.node_count() {
            let col = branch_index_coloring(&g, &r, q).unwrap();
            assert!(col.is_proper());
            assert!(col.branch_of.iter().flatten().all(|&b| b < col.degree));
        }
    }
}
