//! The split graph `G_H` built from a graph `H`, and its inverse.
//!
//! `G_H` has a stable vertex `v_i` per vertex of `H`, a clique vertex
//! `v_ij` per edge of `H`, and a clique vertex `ṽ_i` per degree-one vertex
//! of `H`. Its cliques are `K_H` (all clique vertices) and, for each `i`,
//! `C_i = {v_i} ∪ {v_ij : j ~ i} ∪ {ṽ_i if deg(i) = 1}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::branch::branch_graph_mask;
use crate::chordal::is_vpt;
use crate::error::{Error, Result};
use crate::graph::{bit, bits, Graph, Vertex, VertexSet};
use crate::iso::verify_isomorphism;
use crate::limits::Limits;
use crate::split::split_partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "role")]
pub enum GhRole {
    /// `v_i`.
    Stable { i: Vertex },
    /// `v_ij` with `i < j`.
    Edge { i: Vertex, j: Vertex },
    /// `ṽ_i`.
    Pendant { i: Vertex },
}

impl fmt::Display for GhRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GhRole::Stable { i } => write!(f, "v{i}"),
            GhRole::Edge { i, j } => write!(f, "v{i},{j}"),
            GhRole::Pendant { i } => write!(f, "~v{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhGraph {
    pub graph: Graph,
    pub source: Graph,
    /// Role of each vertex of `graph`.
    pub roles: Vec<GhRole>,
}

impl GhGraph {
    /// The clique `K_H`.
    pub fn central_clique(&self) -> VertexSet {
        (0..self.roles.len())
            .filter(|&v| !matches!(self.roles[v], GhRole::Stable { .. }))
            .collect()
    }

    /// The stable vertices `v_i`, which are vertices `0..n`.
    pub fn stable_set(&self) -> VertexSet {
        (0..self.source.order()).collect()
    }

    /// `K_H` followed by `C_0, C_1, ...`.
    pub fn cliques(&self) -> Vec<VertexSet> {
        let mut out = vec![self.central_clique()];
        for i in self.source.vertices() {
            out.push(
                (0..self.roles.len())
                    .filter(|&v| match self.roles[v] {
                        GhRole::Stable { i: a } | GhRole::Pendant { i: a } => a == i,
                        GhRole::Edge { i: a, j: b } => a == i || b == i,
                    })
                    .collect(),
            );
        }
        out
    }

    pub fn vertex_of(&self, role: GhRole) -> Option<Vertex> {
        self.roles.iter().position(|&r| r == role)
    }
}

pub fn build_gh(h: &Graph) -> Result<GhGraph> {
    if h.size() == 0 {
        return Err(Error::Precondition("H must have at least one edge".into()));
    }
    if !h.is_connected() {
        return Err(Error::Precondition("H must be connected".into()));
    }
    let mut roles: Vec<GhRole> = h.vertices().map(|i| GhRole::Stable { i }).collect();
    roles.extend(h.edges().map(|(i, j)| GhRole::Edge { i, j }));
    roles.extend(h.vertices().filter(|&i| h.degree(i) == 1).map(|i| GhRole::Pendant { i }));
    let mut gh = GhGraph {
        graph: Graph::empty(roles.len())?,
        source: h.clone(),
        roles,
    };
    let mut edges = Vec::new();
    for c in gh.cliques() {
        let members = c.as_slice();
        for (x, &a) in members.iter().enumerate() {
            for &b in &members[x + 1..] {
                edges.push((a, b));
            }
        }
    }
    gh.graph = Graph::from_edges(gh.roles.len(), &edges)?;
    Ok(gh)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhLemmaVerdict {
    pub clique_family: bool,
    pub vpt: bool,
    pub split: bool,
    pub no_dominated_stable: bool,
    /// The branch graph at `K_H` is `H` itself, vertex for vertex.
    pub branch_is_source: bool,
}

impl GhLemmaVerdict {
    pub fn passed(&self) -> bool {
        self.clique_family && self.vpt && self.split && self.no_dominated_stable && self.branch_is_source
    }
}

pub fn verify_gh_lemma(gh: &GhGraph, limits: &Limits) -> Result<GhLemmaVerdict> {
    let g = &gh.graph;
    let mut expected = gh.cliques();
    expected.sort();
    let clique_family = g.enumerate_cliques() == expected;
    let vpt = is_vpt(g, limits.clique_tree_budget)?.is_some();
    let partition = split_partition(g);
    let k = gh.central_clique();
    let split = partition.as_ref().is_some_and(|p| p.clique == k);
    let no_dominated_stable = partition.as_ref().is_some_and(|p| p.dominated.is_empty());
    let branch = branch_graph_mask(g, k.mask())?;
    let stable: Vec<Vertex> = gh.stable_set().into_vec();
    let branch_is_source = branch.back_map == stable
        && branch.carrier.order() == gh.source.order()
        && branch.carrier.same_structure(&gh.source);
    Ok(GhLemmaVerdict {
        clique_family,
        vpt,
        split,
        no_dominated_stable,
        branch_is_source,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    /// The branch graph at the central clique, on the stable vertices in
    /// ascending order.
    pub h: Graph,
    pub gh: GhGraph,
    /// Image in `gh.graph` of each vertex of the input.
    pub map: Vec<Vertex>,
}

/// Recovers `H` with `g ≅ G_H` from a split graph, or `None` when `g` is
/// not of that form.
pub fn extract_h(g: &Graph) -> Result<Option<Extraction>> {
    let p = split_partition(g).ok_or(Error::NotSplit)?;
    if !p.dominated.is_empty() {
        return Ok(None);
    }
    let (s, k) = (p.stable.mask(), p.clique.mask());
    let branch = branch_graph_mask(g, k)?;
    if branch.back_map != p.stable.as_slice() {
        return Ok(None);
    }
    let h = branch.carrier;
    let Ok(gh) = build_gh(&h) else {
        return Ok(None);
    };
    let index_in_s = |v: Vertex| (s & (bit(v) - 1)).count_ones() as usize;
    let mut map = vec![usize::MAX; g.order()];
    for v in bits(s) {
        map[v] = index_in_s(v);
    }
    for v in bits(k) {
        let trace: Vec<Vertex> = bits(g.nbrs(v) & s).map(index_in_s).collect();
        let role = match trace[..] {
            [i, j] if h.has_edge(i, j) => GhRole::Edge { i, j },
            [i] if h.degree(i) == 1 => GhRole::Pendant { i },
            _ => return Ok(None),
        };
        map[v] = gh.vertex_of(role).expect("role exists in G_H");
    }
    if !verify_isomorphism(g, &gh.graph, &map) {
        return Ok(None);
    }
    Ok(Some(Extraction { h, gh, map }))
}
