use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({u}, {v}) references a vertex >= vertex_count {vertex_count}")]
    EndpointOutOfRange { u: usize, v: usize, vertex_count: usize },

    #[error("vertex index {index} out of range (vertex_count {vertex_count})")]
    VertexOutOfRange { index: usize, vertex_count: usize },

    #[error("scale {scale} exceeds the supported index width")]
    ScaleTooLarge { scale: u32 },

    #[error("invalid generator spec: {0}")]
    InvalidGeneratorSpec(String),

    #[error("invalid partition spec: {0}")]
    InvalidPartitionSpec(String),

    #[error("{path}:{line}: unparseable edge list line: {detail}")]
    ParseError { path: String, line: usize, detail: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("elapsed time must be positive, got {0}")]
    NonPositiveElapsed(f64),

    #[error("harmonic mean requires a non-empty sequence of positive rates")]
    InvalidRates,

    #[error("invalid run config: {0}")]
    InvalidConfig(String),

    #[error("BFS validation failed for source {source_vertex}:\n{report}")]
    ValidationFailed { source_vertex: usize, report: String },

    #[error("internal consistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
