//! Local sampling around a seed by a truncated lazy random walk.
//!
//! The walk is evaluated by pushing mass along edges from every vertex that
//! currently holds mass, which is exactly one sparse product with the
//! transposed lazy transition matrix `(D + I)^-1 (A + I)`. Nothing here
//! allocates per-vertex storage for the whole graph.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, Subgraph, VertexSet};
use crate::seeding::SeedSet;

pub const DEFAULT_STEPS: usize = 3;
pub const DEFAULT_THRESHOLD: f64 = 0.0;

/// Sparse probability distribution; only strictly positive entries are stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProbabilityVector {
    mass: BTreeMap<usize, f64>,
}

impl ProbabilityVector {
    pub fn get(&self, v: usize) -> f64 {
        self.mass.get(&v).copied().unwrap_or(0.0)
    }

    /// Number of vertices with positive mass.
    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.mass.values().sum()
    }

    /// `(vertex, mass)` pairs in ascending vertex order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.mass.iter().map(|(&v, &p)| (v, p))
    }

    pub fn support(&self) -> VertexSet {
        VertexSet::from_sorted(self.mass.keys().copied().collect())
    }

    /// Vertices whose mass is strictly above `threshold`.
    pub fn above(&self, threshold: f64) -> VertexSet {
        VertexSet::from_sorted(
            self.iter()
                .filter(|&(_, p)| p > threshold)
                .map(|(v, _)| v)
                .collect(),
        )
    }
}

/// Work done by the push, for checking that sampling stays local.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PushStats {
    pub steps: usize,
    /// Adjacency entries read across all steps.
    pub edges_scanned: usize,
    /// Largest support seen, which bounds every map the walk allocated.
    pub max_support: usize,
}

/// Mass `deg(v) / Vol(S)` on each seed vertex.
pub fn initial_distribution(g: &Graph, seed: &SeedSet) -> Result<ProbabilityVector> {
    if seed.vertices.is_empty() {
        return Err(Error::EmptySet);
    }
    let volume = g.volume(&seed.vertices);
    if volume == 0 {
        return Err(Error::DegenerateSeed);
    }
    let mass = seed
        .vertices
        .iter()
        .filter(|&v| g.degree(v) > 0)
        .map(|v| (v, g.degree(v) as f64 / volume as f64))
        .collect();
    Ok(ProbabilityVector { mass })
}

/// One lazy step: each vertex splits its mass evenly over itself and its
/// neighbours.
pub fn lazy_step(g: &Graph, p: &ProbabilityVector) -> ProbabilityVector {
    lazy_step_counted(g, p, &mut PushStats::default())
}

fn lazy_step_counted(g: &Graph, p: &ProbabilityVector, stats: &mut PushStats) -> ProbabilityVector {
    let mut next = BTreeMap::new();
    for (u, mass) in p.iter() {
        let neighbors = g.neighbors(u);
        let share = mass / (neighbors.len() + 1) as f64;
        *next.entry(u).or_insert(0.0) += share;
        for &v in neighbors {
            *next.entry(v).or_insert(0.0) += share;
        }
        stats.edges_scanned += neighbors.len();
    }
    stats.steps += 1;
    stats.max_support = stats.max_support.max(next.len());
    ProbabilityVector { mass: next }
}

/// Distribution after `steps` lazy steps from the seed, with push statistics.
pub fn walk(g: &Graph, seed: &SeedSet, steps: usize) -> Result<(ProbabilityVector, PushStats)> {
    let mut p = initial_distribution(g, seed)?;
    let mut stats = PushStats {
        max_support: p.len(),
        ..PushStats::default()
    };
    for _ in 0..steps {
        p = lazy_step_counted(g, &p, &mut stats);
    }
    Ok((p, stats))
}

/// Induced subgraph around a seed, with the seed's positions in local indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledSubgraph {
    pub subgraph: Subgraph,
    pub seed_local: VertexSet,
}

impl SampledSubgraph {
    pub fn graph(&self) -> &Graph {
        &self.subgraph.graph
    }

    pub fn to_parent(&self) -> &[usize] {
        &self.subgraph.to_parent
    }

    pub fn vertex_count(&self) -> usize {
        self.subgraph.graph.vertex_count()
    }

    /// Wraps an existing subgraph; `seed_parent` must lie inside it.
    pub fn from_subgraph(subgraph: Subgraph, seed_parent: &VertexSet) -> Result<Self> {
        let seed_local = seed_parent
            .iter()
            .map(|v| {
                subgraph
                    .to_local(v)
                    .ok_or(Error::SeedExcluded { vertex: v })
            })
            .collect::<Result<VertexSet>>()?;
        Ok(Self {
            subgraph,
            seed_local,
        })
    }
}

/// Runs `steps` lazy steps from the seed and keeps the vertices whose mass is
/// strictly above `threshold`.
pub fn sample(g: &Graph, seed: &SeedSet, steps: usize, threshold: f64) -> Result<SampledSubgraph> {
    sample_with_stats(g, seed, steps, threshold).map(|(s, _)| s)
}

pub fn sample_with_stats(
    g: &Graph,
    seed: &SeedSet,
    steps: usize,
    threshold: f64,
) -> Result<(SampledSubgraph, PushStats)> {
    if steps == 0 {
        return Err(Error::InvalidParameter(
            "walk steps must be at least 1".into(),
        ));
    }
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "sampling threshold must be non-negative, got {threshold}"
        )));
    }
    let (p, stats) = walk(g, seed, steps)?;
    let kept = p.above(threshold);
    let sampled = SampledSubgraph::from_subgraph(g.induced_subgraph(&kept), &seed.vertices)?;
    Ok((sampled, stats))
}
