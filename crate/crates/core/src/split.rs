//! Split partitions and the structural conditions every VPT minimal
//! non-`[h,2,1]` graph satisfies.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::branch::{branch_graph_mask, max_branch_chi_unchecked, BranchGraph};
use crate::chordal::is_vpt;
use crate::coloring::{criticality, CriticalityReport};
use crate::error::{Error, Result};
use crate::graph::{bit, bits, Graph, Vertex, VertexSet};
use crate::limits::Limits;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPartition {
    pub stable: VertexSet,
    pub clique: VertexSet,
    /// Ordered pairs `(s, t)` of distinct stable vertices with `N(s) ⊆ N(t)`.
    pub dominated: Vec<(Vertex, Vertex)>,
}

impl SplitPartition {
    /// Checks the partition against `g` and annotates dominated pairs.
    pub fn new(g: &Graph, stable: VertexSet, clique: VertexSet) -> Result<Self> {
        let (s, k) = (stable.mask(), clique.mask());
        if s & k != 0 || s | k != g.vertex_mask() {
            return Err(Error::Precondition("stable and clique parts must partition the vertices".into()));
        }
        if !g.is_stable_set(s) || !g.is_complete_set(k) {
            return Err(Error::NotSplit);
        }
        let mut p = SplitPartition {
            stable,
            clique,
            dominated: Vec::new(),
        };
        p.dominated = dominated_stable_vertices(&p, g);
        Ok(p)
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        let (s, k) = (self.stable.mask(), self.clique.mask());
        s & k == 0 && s | k == g.vertex_mask() && g.is_stable_set(s) && g.is_complete_set(k)
    }
}

/// The split partition with the largest clique part, then the
/// lexicographically smallest stable part; `None` if `g` is not split.
pub fn split_partition(g: &Graph) -> Option<SplitPartition> {
    if g.order() == 0 {
        return Some(SplitPartition {
            stable: VertexSet::default(),
            clique: VertexSet::default(),
            dominated: Vec::new(),
        });
    }
    let all = g.vertex_mask();
    let best = g
        .clique_masks()
        .into_iter()
        .filter(|&k| g.is_stable_set(all & !k))
        .min_by(|&a, &b| {
            b.count_ones()
                .cmp(&a.count_ones())
                .then_with(|| VertexSet::from_mask(all & !a).cmp(&VertexSet::from_mask(all & !b)))
        })?;
    SplitPartition::new(g, VertexSet::from_mask(all & !best), VertexSet::from_mask(best)).ok()
}

pub fn dominated_stable_vertices(p: &SplitPartition, g: &Graph) -> Vec<(Vertex, Vertex)> {
    let s = p.stable.as_slice();
    let mut out = Vec::new();
    for &a in s {
        for &b in s {
            if a != b && g.nbrs(a) & !g.nbrs(b) == 0 {
                out.push((a, b));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Vertices(Vec<Vertex>),
    Pairs(Vec<(Vertex, Vertex)>),
    Count { expected: usize, found: usize },
    Note(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub id: String,
    pub statement: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub h: usize,
    /// Clique the branch-graph conditions are evaluated at: the central
    /// clique of the split partition, else the first principal clique.
    pub principal_clique: VertexSet,
    pub max_branch_chi: usize,
    pub conditions: Vec<ConditionResult>,
}

impl BatteryReport {
    pub fn all_passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &ConditionResult> {
        self.conditions.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, id: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.id == id)
    }
}

pub const CONDITIONS: [(&str, &str); 11] = [
    ("in_next_class", "G admits an (h+1,2,1)-representation"),
    ("branch_covers_outside", "every vertex outside K is a vertex of B(G/K)"),
    ("outside_sees_two", "every vertex outside K has at least two neighbours in K"),
    ("branch_vertex_critical", "B(G/K) is (h+1)-vertex-critical"),
    ("distinct_traces", "vertices outside K have pairwise distinct neighbourhoods in K"),
    ("clique_survives_deletion", "K - k is a clique of G - k for every k in K"),
    ("split", "G is split with central clique K"),
    ("no_dominated_stable", "no stable vertex is dominated"),
    ("clique_vertices_see_two", "every k in K has exactly two neighbours outside K"),
    ("edge_count", "B(G/K) has exactly |K| edges"),
    ("branch_critical", "B(G/K) is (h+1)-critical"),
];

struct Context<'a> {
    g: &'a Graph,
    h: usize,
    k: u64,
    outside: u64,
    split: Option<SplitPartition>,
    max_chi: usize,
    branch: BranchGraph,
    critical: CriticalityReport,
}

fn check(passed: bool, witness: impl FnOnce() -> Witness) -> (bool, Option<Witness>) {
    if passed {
        (true, None)
    } else {
        (false, Some(witness()))
    }
}

impl Context<'_> {
    fn evaluate(&self, index: usize) -> (bool, Option<Witness>) {
        let g = self.g;
        let h = self.h;
        match CONDITIONS[index].0 {
            "in_next_class" => check(self.max_chi <= h + 1, || Witness::Count {
                expected: h + 1,
                found: self.max_chi,
            }),
            "branch_covers_outside" => {
                let missing: Vec<Vertex> = bits(self.outside)
                    .filter(|v| !self.branch.back_map.contains(v))
                    .collect();
                check(missing.is_empty(), || Witness::Vertices(missing))
            }
            "outside_sees_two" => {
                let bad: Vec<Vertex> = bits(self.outside)
                    .filter(|&v| (g.nbrs(v) & self.k).count_ones() < 2)
                    .collect();
                check(bad.is_empty(), || Witness::Vertices(bad))
            }
            "branch_vertex_critical" => {
                let c = &self.critical;
                if c.chi != h + 1 {
                    return check(false, || Witness::Count {
                        expected: h + 1,
                        found: c.chi,
                    });
                }
                let bad = self.to_original(&c.failing_vertices);
                check(bad.is_empty(), || Witness::Vertices(bad))
            }
            "distinct_traces" => {
                let out: Vec<Vertex> = bits(self.outside).collect();
                let mut pairs = Vec::new();
                for (i, &a) in out.iter().enumerate() {
                    for &b in &out[i + 1..] {
                        if g.nbrs(a) & self.k == g.nbrs(b) & self.k {
                            pairs.push((a, b));
                        }
                    }
                }
                check(pairs.is_empty(), || Witness::Pairs(pairs))
            }
            "clique_survives_deletion" => {
                let bad: Vec<Vertex> = bits(self.k)
                    .filter(|&k| {
                        let (smaller, map) = g.delete_vertex(k).expect("vertex in range");
                        !smaller.is_clique(map.forward_mask(self.k & !bit(k)))
                    })
                    .collect();
                check(bad.is_empty(), || Witness::Vertices(bad))
            }
            "split" => check(self.split.is_some(), || {
                Witness::Note("no split partition exists".into())
            }),
            "no_dominated_stable" => {
                let pairs: Vec<(Vertex, Vertex)> = match &self.split {
                    Some(p) => p.dominated.clone(),
                    None => {
                        return check(false, || Witness::Note("graph is not split".into()));
                    }
                };
                check(pairs.is_empty(), || Witness::Pairs(pairs))
            }
            "clique_vertices_see_two" => {
                let bad: Vec<Vertex> = bits(self.k)
                    .filter(|&k| (g.nbrs(k) & self.outside).count_ones() != 2)
                    .collect();
                check(bad.is_empty(), || Witness::Vertices(bad))
            }
            "edge_count" => {
                let (expected, found) = (self.k.count_ones() as usize, self.branch.carrier.size());
                check(expected == found, || Witness::Count { expected, found })
            }
            "branch_critical" => {
                let c = &self.critical;
                if c.chi != h + 1 {
                    return check(false, || Witness::Count {
                        expected: h + 1,
                        found: c.chi,
                    });
                }
                let mut bad: Vec<(Vertex, Vertex)> = self
                    .to_original(&c.failing_vertices)
                    .into_iter()
                    .map(|v| (v, v))
                    .collect();
                bad.extend(
                    c.failing_edges
                        .iter()
                        .map(|&(a, b)| (self.branch.back_map[a], self.branch.back_map[b])),
                );
                check(bad.is_empty(), || Witness::Pairs(bad))
            }
            other => unreachable!("unknown condition {other}"),
        }
    }

    fn to_original(&self, vs: &[Vertex]) -> Vec<Vertex> {
        vs.iter().map(|&v| self.branch.back_map[v]).collect()
    }
}

/// Evaluates every necessary condition for `g` to be a VPT minimal
/// non-`[h,2,1]` graph. Conditions are independent; none short-circuits.
pub fn structural_battery(g: &Graph, h: usize, limits: &Limits) -> Result<BatteryReport> {
    if h < 3 {
        return Err(Error::Precondition(format!("h must be at least 3, got {h}")));
    }
    if g.order() == 0 {
        return Err(Error::Precondition("graph has no vertices".into()));
    }
    if is_vpt(g, limits.clique_tree_budget)?.is_none() {
        return Err(Error::NotVpt);
    }
    let split = split_partition(g);
    let best = max_branch_chi_unchecked(g, limits.coloring_cap)?;
    let k = match &split {
        Some(p) => p.clique.mask(),
        None => best.witness.mask(),
    };
    let branch = branch_graph_mask(g, k)?;
    let critical = criticality(&branch.carrier, limits.coloring_cap)?;
    let ctx = Context {
        g,
        h,
        k,
        outside: g.vertex_mask() & !k,
        split,
        max_chi: best.chi,
        branch,
        critical,
    };
    let conditions = (0..CONDITIONS.len())
        .into_par_iter()
        .map(|i| {
            let (passed, witness) = ctx.evaluate(i);
            ConditionResult {
                id: CONDITIONS[i].0.to_string(),
                statement: CONDITIONS[i].1.to_string(),
                passed,
                witness,
            }
        })
        .collect();
    Ok(BatteryReport {
        h,
        principal_clique: VertexSet::from_mask(k),
        max_branch_chi: best.chi,
        conditions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn non_split_graphs() {
        assert!(split_partition(&named::cycle(4)).is_none());
        assert!(split_partition(&named::cycle(5)).is_none());
    }

    #[test]
    fn path_partition() {
        let p = split_partition(&named::path(4)).unwrap();
        assert_eq!(p.stable.as_slice(), &[0, 3]);
        assert_eq!(p.clique.as_slice(), &[1, 2]);
        assert!(p.dominated.is_empty());
        assert!(p.is_valid(&named::path(4)));
    }

    #[test]
    fn claw_leaves_dominate_each_other() {
        let g = named::star(3);
        let p = SplitPartition::new(&g, VertexSet::new(vec![1, 2, 3]), VertexSet::new(vec![0])).unwrap();
        assert_eq!(p.dominated.len(), 6);
        assert!(p.dominated.contains(&(1, 2)) && p.dominated.contains(&(2, 1)));
        // canonical choice: largest clique part, then smallest stable part
        let c = split_partition(&g).unwrap();
        assert_eq!(c.clique.as_slice(), &[0, 3]);
        assert_eq!(c.stable.as_slice(), &[1, 2]);
    }

    #[test]
    fn invalid_partitions_are_rejected() {
        let g = named::path(4);
        assert!(SplitPartition::new(&g, VertexSet::new(vec![0, 1]), VertexSet::new(vec![2, 3])).is_err());
        assert!(SplitPartition::new(&g, VertexSet::new(vec![0]), VertexSet::new(vec![2, 3])).is_err());
    }

    #[test]
    fn battery_rejects_bad_input() {
        let l = Limits::default();
        assert_eq!(structural_battery(&named::cycle(4), 3, &l), Err(Error::NotVpt));
        assert!(structural_battery(&named::path(3), 2, &l).is_err());
    }

    #[test]
    fn battery_on_path_fails_most_conditions() {
        let r = structural_battery(&named::path(4), 3, &Limits::default()).unwrap();
        assert_eq!(r.conditions.len(), 11);
        assert!(r.get("in_next_class").unwrap().passed);
        assert!(r.get("split").unwrap().passed);
        assert!(!r.get("outside_sees_two").unwrap().passed);
        assert!(!r.get("branch_critical").unwrap().passed);
        let ids: Vec<_> = r.conditions.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, CONDITIONS.iter().map(|c| c.0).collect::<Vec<_>>());
    }
}
