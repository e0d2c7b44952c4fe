pub mod branch;
pub mod chordal;
pub mod classify;
pub mod coloring;
pub mod error;
pub mod graph;
pub mod gh;
pub mod graph6;
pub mod iso;
pub mod limits;
pub mod oracle;
pub mod representation;
pub mod split;
pub mod trees;

pub use error::{Error, Result};
pub use graph::{Graph, Vertex, VertexSet};
pub use limits::Limits;
