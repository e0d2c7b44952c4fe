//! Exact vertex colouring and colour-criticality.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, bits, Graph, Vertex, VertexSet};

pub const DEFAULT_COLORING_CAP: usize = 24;

/// Why no colouring with `chi - 1` colours exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBound {
    /// The graph has no vertices.
    Empty,
    /// A clique on `chi` vertices.
    Clique(VertexSet),
    /// Exhaustive backtracking with `colors` colours found nothing.
    Exhaustive { colors: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringCertificate {
    pub chi: usize,
    /// Colour of each vertex, in `1..=chi`.
    pub assignment: Vec<usize>,
    pub lower_bound: LowerBound,
}

impl ColoringCertificate {
    pub fn is_proper(&self, g: &Graph) -> bool {
        self.assignment.len() == g.order()
            && self.assignment.iter().all(|&c| (1..=self.chi).contains(&c))
            && g.edges().all(|(u, v)| self.assignment[u] != self.assignment[v])
    }
}

/// Proper `k`-colouring by DSATUR-ordered backtracking, colours `1..=k`.
pub fn is_k_colorable(g: &Graph, k: usize) -> Option<Vec<usize>> {
    let n = g.order();
    if n == 0 {
        return Some(Vec::new());
    }
    if k == 0 {
        return None;
    }
    let k = k.min(n);
    let mut color = vec![usize::MAX; n];
    let mut sat = vec![0u64; n];
    if dsatur(g, k, &mut color, &mut sat, 0, 0) {
        Some(color.into_iter().map(|c| c + 1).collect())
    } else {
        None
    }
}

fn dsatur(
    g: &Graph,
    k: usize,
    color: &mut [usize],
    sat: &mut [u64],
    colored: usize,
    used: usize,
) -> bool {
    let n = g.order();
    if colored == n {
        return true;
    }
    let uncolored = (0..n).filter(|&v| color[v] == usize::MAX).fold(0u64, |m, v| m | bit(v));
    // most saturated, then most uncoloured neighbours, then lowest index
    let v = bits(uncolored)
        .max_by_key(|&v| {
            (
                sat[v].count_ones(),
                (g.nbrs(v) & uncolored).count_ones(),
                std::cmp::Reverse(v),
            )
        })
        .expect("some vertex is uncoloured");
    let limit = (used + 1).min(k);
    for c in 0..limit {
        if sat[v] & bit(c) != 0 {
            continue;
        }
        color[v] = c;
        let touched: Vec<Vertex> = bits(g.nbrs(v) & uncolored)
            .filter(|&w| sat[w] & bit(c) == 0)
            .collect();
        for &w in &touched {
            sat[w] |= bit(c);
        }
        if dsatur(g, k, color, sat, colored + 1, used.max(c + 1)) {
            return true;
        }
        for &w in &touched {
            sat[w] &= !bit(c);
        }
    }
    color[v] = usize::MAX;
    false
}

/// Greedy DSATUR without backtracking; an upper bound on chi.
fn greedy_dsatur(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let mut color = vec![usize::MAX; n];
    let mut sat = vec![0u64; n];
    let mut uncolored = g.vertex_mask();
    while uncolored != 0 {
        let v = bits(uncolored)
            .max_by_key(|&v| {
                (
                    sat[v].count_ones(),
                    (g.nbrs(v) & uncolored).count_ones(),
                    std::cmp::Reverse(v),
                )
            })
            .unwrap();
        let c = (!sat[v]).trailing_zeros() as usize;
        color[v] = c;
        uncolored &= !bit(v);
        for w in bits(g.nbrs(v)) {
            sat[w] |= bit(c);
        }
    }
    color
}

pub fn chromatic_number(g: &Graph, cap: usize) -> Result<ColoringCertificate> {
    if g.order() > cap {
        return Err(Error::TooLarge {
            what: "colouring input",
            size: g.order(),
            cap,
        });
    }
    if g.order() == 0 {
        return Ok(ColoringCertificate {
            chi: 0,
            assignment: Vec::new(),
            lower_bound: LowerBound::Empty,
        });
    }
    let clique = g.maximum_clique();
    let omega = clique.len();
    let greedy = greedy_dsatur(g);
    let upper = greedy.iter().max().unwrap() + 1;
    let bound_for = |chi: usize| {
        if chi == omega {
            LowerBound::Clique(clique.clone())
        } else {
            LowerBound::Exhaustive { colors: chi - 1 }
        }
    };
    for k in omega..upper {
        if let Some(assignment) = is_k_colorable(g, k) {
            return Ok(ColoringCertificate {
                chi: k,
                assignment,
                lower_bound: bound_for(k),
            });
        }
    }
    Ok(ColoringCertificate {
        chi: upper,
        assignment: greedy.into_iter().map(|c| c + 1).collect(),
        lower_bound: bound_for(upper),
    })
}

pub fn chi(g: &Graph, cap: usize) -> Result<usize> {
    chromatic_number(g, cap).map(|c| c.chi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalityReport {
    pub chi: usize,
    pub vertex_critical: bool,
    pub edge_critical: bool,
    /// Vertices whose deletion keeps chi.
    pub failing_vertices: Vec<Vertex>,
    /// Edges whose deletion keeps chi.
    pub failing_edges: Vec<(Vertex, Vertex)>,
}

impl CriticalityReport {
    pub fn is_critical(&self) -> bool {
        self.vertex_critical && self.edge_critical
    }

    /// `h`-critical: chromatic number `h` and every element critical.
    pub fn is_h_critical(&self, h: usize) -> bool {
        self.chi == h && self.is_critical()
    }
}

/// Evaluates every single-vertex and single-edge deletion; deletions are
/// checked in parallel and reported in vertex / edge order.
pub fn criticality(g: &Graph, cap: usize) -> Result<CriticalityReport> {
    let chi = chi(g, cap)?;
    let target = chi.saturating_sub(1);
    let failing_vertices: Vec<Vertex> = g
        .vertices()
        .collect::<Vec<_>>()
        .par_iter()
        .filter(|&&v| {
            let (h, _) = g.delete_vertex(v).expect("vertex in range");
            is_k_colorable(&h, target).is_none()
        })
        .copied()
        .collect();
    let failing_edges: Vec<(Vertex, Vertex)> = g
        .edges()
        .collect::<Vec<_>>()
        .par_iter()
        .filter(|&&(u, v)| {
            let h = g.delete_edge(u, v).expect("edge exists");
            is_k_colorable(&h, target).is_none()
        })
        .copied()
        .collect();
    Ok(CriticalityReport {
        chi,
        vertex_critical: failing_vertices.is_empty(),
        edge_critical: failing_edges.is_empty(),
        failing_vertices,
        failing_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    /// Tries every assignment of `k` colours.
    fn brute_colorable(g: &Graph, k: usize) -> bool {
        let n = g.order() as u32;
        (0..(k as u64).pow(n)).any(|mut code| {
            let mut col = vec![0; g.order()];
            for c in col.iter_mut() {
                *c = code % k as u64;
                code /= k as u64;
            }
            g.edges().all(|(u, v)| col[u] != col[v])
        })
    }

    #[test]
    fn small_chromatic_numbers() {
        assert_eq!(chi(&named::complete(4), 24).unwrap(), 4);
        assert_eq!(chi(&named::cycle(5), 24).unwrap(), 3);
        assert_eq!(chi(&named::cycle(6), 24).unwrap(), 2);
        assert_eq!(chi(&Graph::empty(3).unwrap(), 24).unwrap(), 1);
        assert_eq!(chi(&Graph::empty(0).unwrap(), 24).unwrap(), 0);
    }

    #[test]
    fn petersen_needs_three() {
        let p = named::petersen();
        assert!(!brute_colorable(&p, 2));
        let cert = chromatic_number(&p, 24).unwrap();
        assert_eq!(cert.chi, 3);
        assert!(cert.is_proper(&p));
        assert_eq!(cert.lower_bound, LowerBound::Exhaustive { colors: 2 });
    }

    #[test]
    fn k_colorability() {
        let c5 = named::cycle(5);
        assert!(is_k_colorable(&c5, 2).is_none());
        assert!(is_k_colorable(&c5, 3).is_some());
        let w5 = named::wheel(5);
        assert!(!brute_colorable(&w5, 3));
        assert!(is_k_colorable(&w5, 3).is_none());
        assert!(is_k_colorable(&w5, 4).is_some());
    }

    #[test]
    fn cap_exceeded() {
        assert!(matches!(
            chromatic_number(&named::path(25), 24),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn criticality_of_classics() {
        let k4 = criticality(&named::complete(4), 24).unwrap();
        assert!(k4.is_h_critical(4));
        assert!(criticality(&named::cycle(5), 24).unwrap().is_h_critical(3));
        let w5 = criticality(&named::wheel(5), 24).unwrap();
        assert!(w5.is_h_critical(4));
        let p4 = criticality(&named::path(4), 24).unwrap();
        assert_eq!(p4.chi, 2);
        assert!(!p4.vertex_critical);
        assert_eq!(p4.failing_vertices, vec![0, 1, 2, 3]);
        assert_eq!(p4.failing_edges, vec![(0, 1), (1, 2), (2, 3)]);
        // even rim: deleting a rim vertex keeps chi = 3
        let w6 = criticality(&named::wheel(6), 24).unwrap();
        assert_eq!(w6.chi, 3);
        assert!(!w6.is_critical());
    }

    #[test]
    fn exhaustive_agreement_on_small_graphs() {
        // all graphs on 5 labelled vertices
        for code in 0u32..(1 << 10) {
            let mut edges = Vec::new();
            let mut k = 0;
            for v in 1..5 {
                for u in 0..v {
                    if code & (1 << k) != 0 {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            let g = Graph::from_edges(5, &edges).unwrap();
            let cert = chromatic_number(&g, 24).unwrap();
            assert!(cert.is_proper(&g));
            assert!(brute_colorable(&g, cert.chi));
            assert!(cert.chi == 1 || !brute_colorable(&g, cert.chi - 1));
        }
    }
}
