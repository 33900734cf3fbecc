//! Overlapping community detection by clique seeding and quadratic expansion.
//!
//! The pipeline has four stages, each in its own module:
//!
//! 1. [`seeding`]: maximal cliques of the 3-core, filtered for overlap.
//! 2. [`sampler`]: a short lazy random walk from each seed picks a local subgraph.
//! 3. [`extractor`]: a box-constrained quadratic program scores every sampled vertex.
//! 4. [`sweeper`]: a windowed conductance sweep turns the scores into a community.
//!
//! [`pipeline`] runs them for every seed, optionally across worker threads, and
//! [`eval`] scores the result against ground truth.

pub mod error;
pub mod eval;
pub mod extractor;
pub mod graph;
mod par;
pub mod pipeline;
pub mod sampler;
pub mod seeding;
pub mod sweeper;

pub use error::{Error, Result};
pub use graph::{load_edge_list, read_edge_list, Graph, Subgraph, VertexSet};
pub use pipeline::{detect, detect_parallel, CommunitySet, Detection, DetectionConfig};
