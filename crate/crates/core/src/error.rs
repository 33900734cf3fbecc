use std::io;

use thiserror::Error;

/// Errors produced by graph loading, the detection pipeline, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("vertex index {index} out of range for graph with {vertex_count} vertices")]
    VertexOutOfRange { index: usize, vertex_count: usize },

    #[error("unknown vertex token `{0}`")]
    UnknownVertex(String),

    #[error("vertex set is empty")]
    EmptySet,

    #[error("vertex set covers the whole graph")]
    FullSet,

    #[error("one side of the cut has zero volume")]
    ZeroVolume,

    #[error("seed has zero volume")]
    DegenerateSeed,

    #[error("seed vertex {vertex} fell below the sampling threshold")]
    SeedExcluded { vertex: usize },

    #[error("solver did not converge after {iterations} iterations (projected gradient norm {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
