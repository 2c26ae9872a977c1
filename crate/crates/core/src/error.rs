use thiserror::Error;

use crate::vertex_set::VertexSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("uniformity must be at least 2 (got {0})")]
    BadUniformity(usize),
    #[error("edge {edge:?} has {len} vertices but the hypergraph is {k}-uniform")]
    EdgeArity { edge: Vec<usize>, len: usize, k: usize },
    #[error("vertex {vertex} is out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {0:?} repeats a vertex")]
    RepeatedVertex(Vec<usize>),
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<usize>),
    #[error("set of size {size} is outside the admissible range {min}..={max}")]
    InvalidArity { size: usize, min: usize, max: usize },
    #[error("{what} = {value} exceeds the configured cap {cap}")]
    CapExceeded { what: &'static str, value: usize, cap: usize },
    #[error("pattern order {order} does not divide {n}")]
    Divisibility { order: usize, n: usize },
    #[error("pattern is {pattern_k}-uniform but the host is {host_k}-uniform")]
    UniformityMismatch { pattern_k: usize, host_k: usize },
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("witnesses overlap: {0}")]
    WitnessOverlap(String),
    #[error("witness failed verification: {0}")]
    InvalidWitness(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("absorbing family infeasible: {0}")]
    Infeasible(String),
    #[error("no absorber available for t-set {0:?}")]
    AbsorptionStuck(VertexSet),
}
