//! Rounding an affiliation vector to a community with a conductance sweep.
//!
//! Vertices are ranked by score and prefixes are grown one vertex at a time.
//! The community is the first prefix whose conductance is strictly lower than
//! each of the next `w` prefixes.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::sampler::SampledSubgraph;

pub const DEFAULT_WINDOW: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// The first `k_star` vertices of the sweep order, in local indices.
    pub community_local: VertexSet,
    pub k_star: usize,
    pub conductance_at_k: f64,
    /// `(k, Φ(C_k))` for every prefix that was evaluated, `k` ascending from 1.
    pub profile: Vec<(usize, f64)>,
    /// Set when some seed vertex ended up outside the community.
    pub seed_truncated: bool,
}

/// Local vertices by score, highest first. Ties put seed vertices first and
/// then fall back to ascending local index.
pub fn sweep_order(gs: &SampledSubgraph, scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .total_cmp(&scores[a])
            .then_with(|| gs.seed_local.contains(b).cmp(&gs.seed_local.contains(a)))
            .then(a.cmp(&b))
    });
    order
}

pub fn sweep(gs: &SampledSubgraph, scores: &[f64], window: usize) -> Result<SweepResult> {
    let g = gs.graph();
    let n = g.vertex_count();
    if window == 0 {
        return Err(Error::InvalidParameter(
            "sweep window must be at least 1".into(),
        ));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "sweep needs at least two sampled vertices, got {n}"
        )));
    }
    if scores.len() != n {
        return Err(Error::InvalidParameter(format!(
            "{} scores for {n} sampled vertices",
            scores.len()
        )));
    }

    let order = sweep_order(gs, scores);
    let total_volume = 2 * g.edge_count();
    let mut in_prefix = vec![false; n];
    let (mut cut, mut volume) = (0usize, 0usize);
    let phi_at = |k: usize| {
        let v = order[k - 1];
        let inside = g.neighbors(v).iter().filter(|&&u| in_prefix[u]).count();
        // Every edge from v either leaves the prefix or was previously cut.
        cut = cut + g.degree(v) - 2 * inside;
        volume += g.degree(v);
        in_prefix[v] = true;
        prefix_conductance(cut, volume, total_volume)
    };
    let (k_star, values) = scan(n - 1, window, phi_at);

    let community_local = VertexSet::from_unsorted(order[..k_star].to_vec());
    let seed_truncated = gs.seed_local.iter().any(|s| !community_local.contains(s));
    Ok(SweepResult {
        community_local,
        k_star,
        conductance_at_k: values[k_star - 1],
        profile: values
            .into_iter()
            .enumerate()
            .map(|(i, phi)| (i + 1, phi))
            .collect(),
        seed_truncated,
    })
}

/// Conductance from cut and volume counters. A prefix with an empty side
/// (possible only when the sample has isolated vertices) scores 1, the
/// largest value conductance can take.
fn prefix_conductance(cut: usize, volume: usize, total_volume: usize) -> f64 {
    let denom = volume.min(total_volume - volume);
    if denom == 0 {
        1.0
    } else {
        cut as f64 / denom as f64
    }
}

/// Applies the windowed first-local-minimum rule to a complete profile,
/// where `profile[k - 1]` is `Φ(C_k)`. Returns `k*` (1-based).
pub fn first_windowed_minimum(profile: &[f64], window: usize) -> usize {
    assert!(!profile.is_empty() && window >= 1);
    scan(profile.len(), window, |k| profile[k - 1]).0
}

/// Evaluates `phi(1), phi(2), ...` in order, only as far as needed, and
/// returns `k*` with the evaluated values.
///
/// `k*` is the smallest `k` with `Φ(C_i) > Φ(C_k)` for every `i` in
/// `(k, k + w]`, considering only windows that end at or before `max_k`.
/// Without such a `k`, the smallest argmin over all evaluated prefixes.
fn scan(max_k: usize, window: usize, mut phi: impl FnMut(usize) -> f64) -> (usize, Vec<f64>) {
    let mut values: Vec<f64> = Vec::new();
    let mut k = 1;
    while k + window <= max_k {
        while values.len() < k + window {
            values.push(phi(values.len() + 1));
        }
        let here = values[k - 1];
        if values[k..k + window].iter().all(|&later| later > here) {
            return (k, values);
        }
        k += 1;
    }
    while values.len() < max_k {
        values.push(phi(values.len() + 1));
    }
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| {
            a.1.partial_cmp(b.1)
                .unwrap_or(Ordering::Equal)
                .then(a.0.cmp(&b.0))
        })
        .map(|(i, _)| i + 1)
        .expect("at least one prefix");
    (best, values)
}
