//! Isomorphism testing for small graphs: colour refinement to split the
//! vertices into classes, then backtracking inside the classes.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{bit, bits, Graph, Vertex};

pub const DEFAULT_ISO_CAP: usize = 40;

/// Refines the degree partition of both graphs simultaneously, so equal
/// colours mean the same thing on both sides.
fn refine(g1: &Graph, g2: &Graph) -> (Vec<usize>, Vec<usize>) {
    let mut c1: Vec<usize> = g1.vertices().map(|v| g1.degree(v)).collect();
    let mut c2: Vec<usize> = g2.vertices().map(|v| g2.degree(v)).collect();
    loop {
        let sig = |g: &Graph, c: &[usize], v: Vertex| {
            let mut ns: Vec<usize> = bits(g.nbrs(v)).map(|w| c[w]).collect();
            ns.sort_unstable();
            (c[v], ns)
        };
        let s1: Vec<_> = g1.vertices().map(|v| sig(g1, &c1, v)).collect();
        let s2: Vec<_> = g2.vertices().map(|v| sig(g2, &c2, v)).collect();
        let mut ids = BTreeMap::new();
        for s in s1.iter().chain(s2.iter()) {
            let next = ids.len();
            ids.entry(s.clone()).or_insert(next);
        }
        let n1: Vec<usize> = s1.iter().map(|s| ids[s]).collect();
        let n2: Vec<usize> = s2.iter().map(|s| ids[s]).collect();
        let before = c1.iter().chain(c2.iter()).collect::<std::collections::BTreeSet<_>>().len();
        c1 = n1;
        c2 = n2;
        if ids.len() == before {
            return (c1, c2);
        }
    }
}

/// Returns `map` with `map[v]` the image in `g2` of vertex `v` of `g1`.
pub fn is_isomorphic(g1: &Graph, g2: &Graph, cap: usize) -> Result<Option<Vec<Vertex>>> {
    for g in [g1, g2] {
        if g.order() > cap {
            return Err(Error::TooLarge {
                what: "isomorphism input",
                size: g.order(),
                cap,
            });
        }
    }
    if g1.order() != g2.order() || g1.size() != g2.size() {
        return Ok(None);
    }
    let n = g1.order();
    let (c1, c2) = refine(g1, g2);
    let mut h1 = c1.clone();
    let mut h2 = c2.clone();
    h1.sort_unstable();
    h2.sort_unstable();
    if h1 != h2 {
        return Ok(None);
    }

    // Order g1's vertices: smallest colour class first, then grow along edges
    // so each new vertex is constrained by already-placed neighbours.
    let mut class_size = BTreeMap::new();
    for &c in &c1 {
        *class_size.entry(c).or_insert(0usize) += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u64;
    while order.len() < n {
        let next = g1
            .vertices()
            .filter(|&v| placed & bit(v) == 0)
            .max_by_key(|&v| {
                (
                    (g1.nbrs(v) & placed).count_ones(),
                    std::cmp::Reverse(class_size[&c1[v]]),
                    std::cmp::Reverse(v),
                )
            })
            .expect("unplaced vertex");
        order.push(next);
        placed |= bit(next);
    }

    let mut map = vec![usize::MAX; n];
    let mut used = 0u64;
    if extend(g1, g2, &c1, &c2, &order, 0, &mut map, &mut used) {
        debug_assert!(verify_isomorphism(g1, g2, &map));
        Ok(Some(map))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g1: &Graph,
    g2: &Graph,
    c1: &[usize],
    c2: &[usize],
    order: &[Vertex],
    depth: usize,
    map: &mut [Vertex],
    used: &mut u64,
) -> bool {
    let Some(&u) = order.get(depth) else {
        return true;
    };
    for w in g2.vertices() {
        if *used & bit(w) != 0 || c2[w] != c1[u] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&p| g1.has_edge(u, p) == g2.has_edge(w, map[p]));
        if !consistent {
            continue;
        }
        map[u] = w;
        *used |= bit(w);
        if extend(g1, g2, c1, c2, order, depth + 1, map, used) {
            return true;
        }
        *used &= !bit(w);
    }
    map[u] = usize::MAX;
    false
}

/// Exhaustive check that `map` is a bijection preserving adjacency and
/// non-adjacency.
pub fn verify_isomorphism(g1: &Graph, g2: &Graph, map: &[Vertex]) -> bool {
    let n = g1.order();
    if g2.order() != n || map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &w in map {
        if w >= n || std::mem::replace(&mut seen[w], true) {
            return false;
        }
    }
    (0..n).all(|u| (0..n).all(|v| u == v || g1.has_edge(u, v) == g2.has_edge(map[u], map[v])))
}
