#![allow(dead_code)]

use vptree::graph6::parse_graphs;
use vptree::Graph;

const CONNECTED: [&str; 7] = [
    include_str!("../data/connected1.g6"),
    include_str!("../data/connected2.g6"),
    include_str!("../data/connected3.g6"),
    include_str!("../data/connected4.g6"),
    include_str!("../data/connected5.g6"),
    include_str!("../data/connected6.g6"),
    include_str!("../data/connected7.g6"),
];

/// Connected graphs on `n` vertices, one per isomorphism class.
pub fn connected(n: usize) -> Vec<Graph> {
    parse_graphs(CONNECTED[n - 1])
        .map(|r| r.expect("corpus parses").1)
        .collect()
}

/// Every connected graph on at most seven vertices.
pub fn corpus() -> Vec<Graph> {
    (1..=7).flat_map(connected).collect()
}
