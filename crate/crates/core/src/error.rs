use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, offset {offset}: {message}")]
    Parse {
        line: usize,
        offset: usize,
        message: String,
    },

    #[error("vertex {vertex} out of range for graph of order {order}")]
    VertexOutOfRange { vertex: Vertex, order: usize },

    #[error("{u}{v} is not an edge")]
    MissingEdge { u: Vertex, v: Vertex },

    #[error("{what} has size {size}, above the configured cap of {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("graph is not chordal")]
    NotChordal,

    #[error("graph is not a VPT graph")]
    NotVpt,

    #[error("no representation found on host trees of at most {bound} nodes")]
    NotWithinBound { bound: usize },

    #[error("graph is not split")]
    NotSplit,

    #[error("clique-tree search budget of {budget} steps exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("vertex set {0:?} is not a clique (maximal complete set)")]
    NotAClique(Vec<Vertex>),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
