use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("vertex label {vertex} out of range 1..={vertex_count}")]
    VertexOutOfRange { vertex: Vertex, vertex_count: u32 },
    #[error("vertex {vertex} has valency {valency}, at least 3 required")]
    LowValency { vertex: Vertex, valency: usize },
    #[error("edge {edge} out of range 1..={edge_count}")]
    EdgeOutOfRange { edge: usize, edge_count: usize },
    #[error("half-edges belong to the same edge")]
    SameEdge,
    #[error("edge {edge} is a loop")]
    LoopEdge { edge: usize },
    #[error("not a permutation of the vertex labels")]
    NotAPermutation,
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("differential of {source_key} has a term {key} missing from the target basis")]
    MissingBasisElement { source_key: String, key: String },
}
