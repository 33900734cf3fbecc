//! Scoring against ground truth, ground-truth cleaning, and a planted
//! clique generator for small reproducible fixtures.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par;

pub type TokenSet = BTreeSet<String>;

/// Cleaned ground-truth communities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundTruth {
    pub communities: Vec<TokenSet>,
}

pub fn token_sets<S: AsRef<str>>(communities: &[Vec<S>]) -> Vec<TokenSet> {
    communities
        .iter()
        .map(|c| c.iter().map(|t| t.as_ref().to_owned()).collect())
        .collect()
}

/// `2|A ∩ B| / (|A| + |B|)`.
pub fn f1(a: &TokenSet, b: &TokenSet) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let common = a.intersection(b).count();
    Ok(2.0 * common as f64 / (a.len() + b.len()) as f64)
}

/// Mean best-match F1 from each side, averaged over the two directions.
///
/// Returns 0 (and logs a warning) when either collection is empty. Empty
/// communities inside a collection score 0 against everything.
pub fn avg_f1(detected: &[TokenSet], truth: &[TokenSet]) -> f64 {
    if detected.is_empty() || truth.is_empty() {
        log::warn!(
            "average F1 over an empty collection ({} detected, {} truth); scoring 0",
            detected.len(),
            truth.len()
        );
        return 0.0;
    }
    0.5 * mean_best_match(truth, detected) + 0.5 * mean_best_match(detected, truth)
}

fn mean_best_match(from: &[TokenSet], against: &[TokenSet]) -> f64 {
    let best = par::map(from.iter().collect(), |a: &TokenSet| {
        against
            .iter()
            .map(|b| f1(a, b).unwrap_or(0.0))
            .fold(0.0, f64::max)
    });
    best.iter().sum::<f64>() / from.len() as f64
}

/// Restricts the graph to its largest connected component and splits every
/// raw community into its connected pieces inside it, keeping pieces of at
/// least three vertices. Unknown tokens are ignored.
pub fn clean_ground_truth(g_raw: &Graph, raw: &[TokenSet]) -> (Graph, GroundTruth) {
    let lcc = g_raw
        .connected_components()
        .into_iter()
        .fold(None, |best: Option<crate::VertexSet>, c| match best {
            Some(b) if b.len() >= c.len() => Some(b),
            _ => Some(c),
        })
        .unwrap_or_default();
    let graph = g_raw.induced_subgraph(&lcc).graph;

    let mut communities = Vec::new();
    for community in raw {
        let members = graph.vertex_set_from_tokens(
            community
                .iter()
                .map(String::as_str)
                .filter(|t| graph.index_of(t).is_some()),
        );
        let members = members.expect("tokens were filtered to known vertices");
        let induced = graph.induced_subgraph(&members);
        for piece in induced.graph.connected_components() {
            if piece.len() >= 3 {
                let parent = induced.map_to_parent(&piece);
                communities.push(parent.iter().map(|v| graph.label(v).to_owned()).collect());
            }
        }
    }
    (graph, GroundTruth { communities })
}

/// `num_cliques` disjoint cliques of `clique_size` vertices joined into one
/// component by `bridges` distinct random inter-clique edges. Clique `i`
/// holds vertices `i * clique_size ..`; the first `num_cliques - 1` bridges
/// form a random spanning tree over the cliques.
pub fn gen_planted(
    num_cliques: usize,
    clique_size: usize,
    bridges: usize,
    seed: u64,
) -> Result<(Graph, GroundTruth)> {
    if num_cliques == 0 {
        return Err(Error::InvalidParameter("need at least one clique".into()));
    }
    if clique_size < 4 {
        return Err(Error::InvalidParameter(format!(
            "clique size must be at least 4, got {clique_size}"
        )));
    }
    if bridges + 1 < num_cliques {
        return Err(Error::InvalidParameter(format!(
            "{bridges} bridges cannot connect {num_cliques} cliques"
        )));
    }
    let available = num_cliques * (num_cliques - 1) / 2 * clique_size * clique_size;
    if bridges > available {
        return Err(Error::InvalidParameter(format!(
            "{bridges} bridges requested but only {available} distinct inter-clique pairs exist"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = num_cliques * clique_size;
    let mut edges = Vec::new();
    for c in 0..num_cliques {
        let base = c * clique_size;
        for a in 0..clique_size {
            for b in a + 1..clique_size {
                edges.push((base + a, base + b));
            }
        }
    }
    let endpoint =
        |rng: &mut ChaCha8Rng, clique: usize| clique * clique_size + rng.gen_range(0..clique_size);
    let mut used = HashSet::new();
    for c in 1..num_cliques {
        let other = rng.gen_range(0..c);
        let (a, b) = (endpoint(&mut rng, other), endpoint(&mut rng, c));
        used.insert((a, b));
    }
    while used.len() < bridges {
        let x = rng.gen_range(0..num_cliques);
        let y = rng.gen_range(0..num_cliques - 1);
        let y = if y >= x { y + 1 } else { y };
        let (a, b) = (endpoint(&mut rng, x.min(y)), endpoint(&mut rng, x.max(y)));
        used.insert((a, b));
    }
    let mut bridge_edges: Vec<(usize, usize)> = used.into_iter().collect();
    bridge_edges.sort_unstable();
    edges.extend(bridge_edges);

    let graph = Graph::from_edges(n, edges);
    let communities = (0..num_cliques)
        .map(|c| {
            (c * clique_size..(c + 1) * clique_size)
                .map(|v| v.to_string())
                .collect()
        })
        .collect();
    Ok((graph, GroundTruth { communities }))
}
