//! Minimum host degree of a VPT graph and certification of minimal
//! non-`[h,2,1]` graphs.
//!
//! A VPT graph is in `[2,2,1]` exactly when it is an interval graph. For
//! `h >= 4` it lies in `[h,2,1] - [h-1,2,1]` exactly when the largest
//! chromatic number of a branch graph over its cliques is `h`. Every VPT
//! graph lies in some `[h,2,1]`, so a non-interval graph whose branch
//! graphs are all 3-colourable sits at `h = 3`.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::branch::max_branch_chi_unchecked;
use crate::chordal::{is_interval, is_vpt};
use crate::coloring::{criticality, CriticalityReport};
use crate::error::{Error, Result};
use crate::gh::extract_h;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::graph6::serialize_graph;
use crate::limits::Limits;
use crate::oracle::{default_bound, min_h};
use crate::split::{structural_battery, BatteryReport};

/// Graphs this small fall back to the brute-force oracle when the
/// clique-tree search runs out of budget.
pub const ORACLE_FALLBACK_MAX_ORDER: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    IntervalBaseCase,
    ChiCriterion,
    OracleFallback,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub order: usize,
    pub is_vpt: bool,
    pub is_interval: bool,
    pub h_star: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_branch_chi: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_clique: Option<VertexSet>,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn fallback(g: &Graph, budget: u64) -> Result<ClassificationReport> {
    if g.order() > ORACLE_FALLBACK_MAX_ORDER {
        return Err(Error::BudgetExceeded { budget });
    }
    let bound = default_bound(g);
    let m = match min_h(g, bound) {
        Ok(m) => m,
        Err(Error::NotWithinBound { .. }) => return Err(Error::BudgetExceeded { budget }),
        Err(e) => return Err(e),
    };
    Ok(ClassificationReport {
        order: g.order(),
        is_vpt: true,
        is_interval: m.h == 2,
        h_star: m.h,
        max_branch_chi: None,
        witness_clique: None,
        method: Method::OracleFallback,
        note: Some(format!("clique-tree budget exhausted; oracle on hosts of at most {bound} nodes")),
    })
}

/// Smallest `h` with `g` in `[h,2,1]`; non-VPT graphs are rejected.
pub fn classify(g: &Graph, limits: &Limits) -> Result<ClassificationReport> {
    let budget = limits.clique_tree_budget;
    let interval = match is_vpt(g, budget).and_then(|t| match t {
        None => Err(Error::NotVpt),
        Some(_) => is_interval(g, budget),
    }) {
        Ok(i) => i,
        Err(Error::BudgetExceeded { .. }) => return fallback(g, budget),
        Err(e) => return Err(e),
    };
    if interval {
        return Ok(ClassificationReport {
            order: g.order(),
            is_vpt: true,
            is_interval: true,
            h_star: 2,
            max_branch_chi: None,
            witness_clique: None,
            method: Method::IntervalBaseCase,
            note: None,
        });
    }
    let best = max_branch_chi_unchecked(g, limits.coloring_cap)?;
    let (h_star, note) = if best.chi >= 4 {
        (best.chi, None)
    } else {
        (3, Some("derived at h=3: not interval and every branch graph is 3-colourable".to_string()))
    };
    Ok(ClassificationReport {
        order: g.order(),
        is_vpt: true,
        is_interval: false,
        h_star,
        max_branch_chi: Some(best.chi),
        witness_clique: Some(best.witness),
        method: Method::ChiCriterion,
        note,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDeletion {
    pub vertex: Vertex,
    pub h_star: usize,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityCertificate {
    pub graph6: String,
    pub h: usize,
    pub h_star: usize,
    /// Clique whose branch graph needs `h + 1` colours.
    pub witness_clique: VertexSet,
    pub per_vertex: Vec<VertexDeletion>,
    pub battery: BatteryReport,
    /// The `(h+1)`-critical graph `H` with the input isomorphic to `G_H`.
    pub h_graph6: String,
    pub criticality: CriticalityReport,
    /// Image in `G_H` of each input vertex.
    pub isomorphism: Vec<Vertex>,
    /// Role in `G_H` of each input vertex, e.g. `v0`, `v0,2`, `~v1`.
    pub roles: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "reason")]
pub enum NotMinimal {
    /// The graph is not in `[h+1,2,1] - [h,2,1]`.
    WrongClass { h_star: usize },
    /// Deleting this vertex leaves a graph still outside `[h,2,1]`.
    DeletionStaysOutside { vertex: Vertex, h_star: usize },
    BatteryFailed { conditions: Vec<String> },
    /// No `H` with the graph isomorphic to `G_H`.
    NotAGhGraph,
    SourceNotCritical { chi: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum Certification {
    Certified(Box<MinimalityCertificate>),
    NotMinimal(NotMinimal),
}

impl Certification {
    pub fn certificate(&self) -> Option<&MinimalityCertificate> {
        match self {
            Certification::Certified(c) => Some(c),
            Certification::NotMinimal(_) => None,
        }
    }
}

/// Certifies that `g` is a minimal non-`[h,2,1]` graph: outside `[h,2,1]`,
/// every vertex deletion lands inside, all structural conditions hold, and
/// `g` is `G_H` for an `(h+1)`-critical `H`.
pub fn certify_minimal(g: &Graph, h: usize, limits: &Limits) -> Result<Certification> {
    if h < 3 {
        return Err(Error::Precondition(format!("h must be at least 3, got {h}")));
    }
    let report = classify(g, limits)?;
    if report.h_star != h + 1 {
        return Ok(Certification::NotMinimal(NotMinimal::WrongClass {
            h_star: report.h_star,
        }));
    }
    let per_vertex: Vec<VertexDeletion> = g
        .vertices()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|v| {
            let (smaller, _) = g.delete_vertex(v)?;
            let r = classify(&smaller, limits)?;
            Ok(VertexDeletion {
                vertex: v,
                h_star: r.h_star,
                method: r.method,
            })
        })
        .collect::<Result<_>>()?;
    if let Some(d) = per_vertex.iter().find(|d| d.h_star > h) {
        return Ok(Certification::NotMinimal(NotMinimal::DeletionStaysOutside {
            vertex: d.vertex,
            h_star: d.h_star,
        }));
    }
    let battery = structural_battery(g, h, limits)?;
    if !battery.all_passed() {
        return Ok(Certification::NotMinimal(NotMinimal::BatteryFailed {
            conditions: battery.failed().map(|c| c.id.clone()).collect(),
        }));
    }
    let Some(extraction) = extract_h(g)? else {
        return Ok(Certification::NotMinimal(NotMinimal::NotAGhGraph));
    };
    let crit = criticality(&extraction.h, limits.coloring_cap)?;
    if !crit.is_h_critical(h + 1) {
        return Ok(Certification::NotMinimal(NotMinimal::SourceNotCritical { chi: crit.chi }));
    }
    let roles = extraction
        .map
        .iter()
        .map(|&w| extraction.gh.roles[w].to_string())
        .collect();
    Ok(Certification::Certified(Box::new(MinimalityCertificate {
        graph6: serialize_graph(g),
        h,
        h_star: report.h_star,
        witness_clique: report.witness_clique.unwrap_or_default(),
        per_vertex,
        battery,
        h_graph6: serialize_graph(&extraction.h),
        criticality: crit,
        isomorphism: extraction.map,
        roles,
    })))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum SearchOutcome {
    Certified { certificate: Box<MinimalityCertificate> },
    NotMinimal { reason: NotMinimal },
    /// Not VPT; possibly a member of a non-VPT forbidden family.
    OutsideScope,
    Failed { error: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchItem {
    /// Input line (or record start line) of the graph.
    pub line: usize,
    pub outcome: SearchOutcome,
}

fn search_one(line: usize, g: &Graph, h: usize, limits: &Limits) -> SearchItem {
    let outcome = match certify_minimal(g, h, limits) {
        Ok(Certification::Certified(c)) => SearchOutcome::Certified { certificate: c },
        Ok(Certification::NotMinimal(reason)) => SearchOutcome::NotMinimal { reason },
        Err(Error::NotVpt) => {
            log::info!("line {line}: outside scope (possible non-VPT forbidden family member)");
            SearchOutcome::OutsideScope
        }
        Err(e) => {
            log::warn!("line {line}: {e}");
            SearchOutcome::Failed { error: e.to_string() }
        }
    };
    SearchItem { line, outcome }
}

/// Certifies a stream of graphs in parallel batches, yielding results in
/// input order. Errors on one item never stop the stream.
pub struct SearchMinimal<I> {
    input: I,
    h: usize,
    limits: Limits,
    batch: usize,
    ready: VecDeque<SearchItem>,
}

pub fn search_minimal<I>(input: I, h: usize, limits: Limits) -> SearchMinimal<I::IntoIter>
where
    I: IntoIterator<Item = Result<(usize, Graph)>>,
{
    SearchMinimal {
        input: input.into_iter(),
        h,
        limits,
        batch: 64,
        ready: VecDeque::new(),
    }
}

impl<I> SearchMinimal<I> {
    pub fn batch_size(mut self, batch: usize) -> Self {
        self.batch = batch.max(1);
        self
    }
}

impl<I: Iterator<Item = Result<(usize, Graph)>>> Iterator for SearchMinimal<I> {
    type Item = SearchItem;

    fn next(&mut self) -> Option<SearchItem> {
        if self.ready.is_empty() {
            let pending: Vec<_> = self.input.by_ref().take(self.batch).collect();
            let (h, limits) = (self.h, self.limits);
            let done: Vec<SearchItem> = pending
                .into_par_iter()
                .map(|item| match item {
                    Ok((line, g)) => search_one(line, &g, h, &limits),
                    Err(e) => SearchItem {
                        line: match e {
                            Error::Parse { line, .. } => line,
                            _ => 0,
                        },
                        outcome: SearchOutcome::Failed { error: e.to_string() },
                    },
                })
                .collect();
            self.ready.extend(done);
        }
        self.ready.pop_front()
    }
}
