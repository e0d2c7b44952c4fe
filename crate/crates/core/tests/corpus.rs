//! Sweeps over every connected graph on at most seven vertices.

mod common;

use std::collections::HashMap;

use rayon::prelude::*;

use vptree::branch::branch_deletion_identity;
use vptree::chordal::{is_chordal, is_vpt};
use vptree::classify::classify;
use vptree::coloring::chi;
use vptree::gh::{build_gh, extract_h};
use vptree::graph::{bits, full_mask};
use vptree::graph6::{parse_graph, serialize_graph};
use vptree::iso::is_isomorphic;
use vptree::oracle::{default_bound, exists_representation, min_h};
use vptree::{Graph, Limits};

const ATLAS_COUNTS: [usize; 7] = [1, 1, 2, 6, 21, 112, 853];

fn iso(a: &Graph, b: &Graph) -> bool {
    is_isomorphic(a, b, 64).unwrap().is_some()
}

/// Cheap isomorphism invariant used to bucket candidates.
fn invariant(g: &Graph) -> (usize, Vec<(usize, usize)>) {
    let mut v: Vec<(usize, usize)> = g
        .vertices()
        .map(|x| {
            let nb = g.nbrs(x);
            let tri = bits(nb).map(|y| (g.nbrs(y) & nb).count_ones() as usize).sum::<usize>();
            (g.degree(x), tri)
        })
        .collect();
    v.sort_unstable();
    (g.size(), v)
}

/// Connected graphs on `n + 1` vertices from those on `n` by adding a
/// vertex with every nonempty neighbourhood, keeping one per class.
fn grow(prev: &[Graph]) -> Vec<Graph> {
    let mut buckets: HashMap<_, Vec<Graph>> = HashMap::new();
    let mut out = Vec::new();
    for g in prev {
        for nbrs in 1..=full_mask(g.order()) {
            let (h, _) = g.with_vertex(nbrs).unwrap();
            let bucket = buckets.entry(invariant(&h)).or_default();
            if !bucket.iter().any(|o| iso(o, &h)) {
                bucket.push(h.clone());
                out.push(h);
            }
        }
    }
    out
}

#[test]
fn corpus_matches_independent_generation() {
    let mut level = vec![Graph::empty(1).unwrap()];
    for n in 1..=7 {
        let stored = common::connected(n);
        assert_eq!(stored.len(), ATLAS_COUNTS[n - 1], "order {n}");
        assert_eq!(level.len(), stored.len(), "order {n}");
        let mut buckets: HashMap<_, Vec<&Graph>> = HashMap::new();
        for g in &level {
            buckets.entry(invariant(g)).or_default().push(g);
        }
        for g in &stored {
            assert!(g.is_connected());
            let hit = buckets.get(&invariant(g)).is_some_and(|b| b.iter().any(|o| iso(o, g)));
            assert!(hit, "{} not generated", serialize_graph(g));
        }
        if n < 7 {
            level = grow(&level);
        }
    }
}

#[test]
fn graph6_round_trip() {
    for g in common::corpus() {
        let text = serialize_graph(&g);
        assert!(parse_graph(&text).unwrap().same_structure(&g));
        assert_eq!(serialize_graph(&parse_graph(&text).unwrap()), text);
    }
}

#[test]
fn vpt_census() {
    let corpus = common::corpus();
    let chordal = corpus.iter().filter(|g| is_chordal(g).is_some()).count();
    let vpt = corpus
        .iter()
        .filter(|g| is_vpt(g, 1_000_000).unwrap().is_some())
        .count();
    assert_eq!((chordal, vpt), (354, 352));
}

#[test]
fn vertex_deletion_lowers_chi_by_at_most_one() {
    common::corpus().par_iter().for_each(|g| {
        let c = chi(g, 24).unwrap();
        for v in g.vertices() {
            let (h, _) = g.delete_vertex(v).unwrap();
            let d = if h.order() == 0 { 0 } else { chi(&h, 24).unwrap() };
            assert!(d == c || d + 1 == c, "{}", serialize_graph(g));
        }
    });
}

#[test]
fn branch_deletion_identity_everywhere() {
    common::corpus().par_iter().for_each(|g| {
        for c in g.enumerate_cliques() {
            for v in g.vertices().filter(|&v| !c.contains(v)) {
                let outcome = branch_deletion_identity(g, &c, v).unwrap();
                assert!(outcome.holds(), "{} {c} {v}: {outcome:?}", serialize_graph(g));
            }
        }
    });
}

/// Every labelled tree on `n` nodes, as edge lists, from Prufer sequences.
fn labelled_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 1 {
        return vec![vec![]];
    }
    if n == 2 {
        return vec![vec![(0, 1)]];
    }
    let mut out = Vec::new();
    let total = n.pow((n - 2) as u32);
    for code in 0..total {
        let mut seq = Vec::with_capacity(n - 2);
        let mut c = code;
        for _ in 0..n - 2 {
            seq.push(c % n);
            c /= n;
        }
        let mut degree = vec![1; n];
        for &x in &seq {
            degree[x] += 1;
        }
        let mut edges = Vec::new();
        for &x in &seq {
            let leaf = (0..n).find(|&y| degree[y] == 1).unwrap();
            edges.push((leaf, x));
            degree[leaf] -= 1;
            degree[x] -= 1;
        }
        let ends: Vec<usize> = (0..n).filter(|&y| degree[y] == 1).collect();
        edges.push((ends[0], ends[1]));
        out.push(edges);
    }
    out
}

/// Node sets of every path in the tree, as bit masks.
fn tree_paths(n: usize, edges: &[(usize, usize)]) -> Vec<u32> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut out = Vec::new();
    for a in 0..n {
        // depth-first from a, recording the path mask to every b >= a
        let mut stack = vec![(a, usize::MAX, 1u32 << a)];
        while let Some((x, parent, mask)) = stack.pop() {
            if x >= a {
                out.push(mask);
            }
            for &y in &adj[x] {
                if y != parent {
                    stack.push((y, x, mask | 1 << y));
                }
            }
        }
    }
    out
}

fn assign(g: &Graph, paths: &[u32], chosen: &mut Vec<u32>) -> bool {
    let v = chosen.len();
    if v == g.order() {
        return true;
    }
    for &p in paths {
        if (0..v).all(|u| (chosen[u] & p != 0) == g.has_edge(u, v)) {
            chosen.push(p);
            if assign(g, paths, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Plain search: every labelled tree, every path per vertex.
fn brute_force(g: &Graph, h: usize, bound: usize) -> bool {
    (1..=bound).any(|n| {
        labelled_trees(n).iter().any(|edges| {
            let mut degree = vec![0; n];
            for &(a, b) in edges {
                degree[a] += 1;
                degree[b] += 1;
            }
            degree.iter().all(|&d| d <= h) && assign(g, &tree_paths(n, edges), &mut Vec::new())
        })
    })
}

#[test]
fn oracle_agrees_with_plain_search() {
    let graphs: Vec<Graph> = (1..=5).flat_map(common::connected).collect();
    graphs.par_iter().for_each(|g| {
        for h in 2..=3 {
            let fast = exists_representation(g, h, 6).unwrap();
            assert_eq!(fast.exists, brute_force(g, h, 6), "{} h={h}", serialize_graph(g));
        }
    });
}

#[test]
fn oracle_is_monotone() {
    let graphs: Vec<Graph> = (1..=6).flat_map(common::connected).collect();
    graphs.par_iter().for_each(|g| {
        let found: Vec<bool> = (2..=4)
            .map(|h| exists_representation(g, h, 8).unwrap().exists)
            .collect();
        assert!(found.windows(2).all(|w| !w[0] || w[1]), "{}", serialize_graph(g));
        let small = exists_representation(g, 3, 5).unwrap().exists;
        assert!(!small || found[1], "{}", serialize_graph(g));
    });
}

#[test]
fn gh_round_trips_over_sources() {
    let sources: Vec<Graph> = (2..=6)
        .flat_map(common::connected)
        .filter(|h| h.order() + h.size() <= 20)
        .collect();
    let limits = Limits::default();
    sources.par_iter().for_each(|h| {
        let gh = build_gh(h).unwrap();
        let e = extract_h(&gh.graph).unwrap().expect("G_H is recognised");
        assert!(iso(&e.h, h), "{}", serialize_graph(h));
        if h.order() > 5 {
            return;
        }
        let r = classify(&gh.graph, &limits).unwrap();
        let c = chi(h, 24).unwrap();
        if c >= 4 {
            assert_eq!(r.h_star, c, "{}", serialize_graph(h));
        } else if gh.graph.order() <= 9 {
            let m = min_h(&gh.graph, default_bound(&gh.graph)).unwrap();
            assert_eq!(r.h_star, m.h, "{}", serialize_graph(h));
        } else {
            assert!(r.h_star <= 3, "{}", serialize_graph(h));
        }
    });
}
