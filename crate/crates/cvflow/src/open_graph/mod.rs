//! Open graphs: weighted adjacency with input and output sets, the JSON
//! document format, and correction-matrix slicing.

mod graph;
mod io;
mod order;

pub use graph::OpenGraph;
pub use io::{
    load_graph, serialize_graph, AnyGraph, EdgeDocument, FieldSpec, GraphDocument, WeightCodec,
    DEFAULT_EPS,
};
pub use order::{correction_matrix, CorrectionMatrix, VertexOrder};

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum GraphError {
    #[error("invalid graph document: {0}")]
    Parse(String),
    #[error("adjacency is not symmetric between {0} and {1}")]
    Asymmetric(String, String),
    #[error("vertex {0} has a self-loop (nonzero diagonal)")]
    NonzeroDiagonal(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("modulus {0} is not a supported prime")]
    NotPrime(u64),
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("edge {0}-{1} has weight zero")]
    ZeroWeightEdge(String, String),
    #[error("edge {0}-{1} listed more than once")]
    DuplicateEdge(String, String),
    #[error("vertex {0} listed more than once")]
    DuplicateVertex(String),
    #[error("edge {0}-{1} has an invalid weight: {2}")]
    InvalidWeight(String, String, String),
    #[error("adjacency is {rows}x{cols} but there are {vertices} vertices")]
    ShapeMismatch {
        vertices: usize,
        rows: usize,
        cols: usize,
    },
    #[error("vertex {0} appears twice in an order")]
    DuplicateInOrder(usize),
    #[error("vertex {0} is not in the order")]
    NotInOrder(usize),
    #[error("field declaration does not match the requested field")]
    FieldMismatch,
}
