//! End-to-end detection: seeds, then sample, solve and sweep for each seed.

use std::collections::HashSet;
use std::io::{BufRead, Write};
use std::panic::{self, AssertUnwindSafe};

use crate::error::{Error, Result};
use crate::extractor::{self, SolverOptions};
use crate::graph::{Graph, VertexSet};
use crate::par;
use crate::sampler;
use crate::seeding::{self, SeedSet};
use crate::sweeper;

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionConfig {
    pub t0: usize,
    pub mu: f64,
    pub alpha: f64,
    pub window: usize,
    pub min_clique: usize,
    pub overlap_threshold: f64,
    pub workers: usize,
    pub solver: SolverOptions,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        Self {
            t0: sampler::DEFAULT_STEPS,
            mu: sampler::DEFAULT_THRESHOLD,
            alpha: extractor::DEFAULT_ALPHA,
            window: sweeper::DEFAULT_WINDOW,
            min_clique: seeding::DEFAULT_MIN_CLIQUE,
            overlap_threshold: seeding::DEFAULT_OVERLAP_THRESHOLD,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            solver: SolverOptions::default(),
        }
    }
}

impl DetectionConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.t0 < 1 {
            return fail(format!("t0 must be at least 1, got {}", self.t0));
        }
        if self.mu.is_nan() || self.mu < 0.0 {
            return fail(format!("mu must be non-negative, got {}", self.mu));
        }
        if self.alpha.is_nan() || self.alpha < 0.0 || self.alpha.is_infinite() {
            return fail(format!("alpha must be non-negative, got {}", self.alpha));
        }
        if self.window < 1 {
            return fail(format!("window must be at least 1, got {}", self.window));
        }
        if self.min_clique < 2 {
            return fail(format!(
                "min clique size must be at least 2, got {}",
                self.min_clique
            ));
        }
        if !(self.overlap_threshold > 0.0 && self.overlap_threshold <= 1.0) {
            return fail(format!(
                "overlap threshold must be in (0, 1], got {}",
                self.overlap_threshold
            ));
        }
        if self.workers < 1 {
            return fail("workers must be at least 1".into());
        }
        Ok(())
    }
}

/// One detected community, as sorted external tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Community {
    pub members: Vec<String>,
    /// Tokens of the seed clique the community grew from.
    pub seed: Vec<String>,
}

/// Detected communities in canonical order: size non-ascending, then
/// lexicographic on the sorted member tokens. No two are identical.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CommunitySet {
    pub communities: Vec<Community>,
}

impl CommunitySet {
    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    pub fn member_sets(&self) -> Vec<Vec<String>> {
        self.communities.iter().map(|c| c.members.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// Sampling, solving or sweeping failed; the seed was skipped.
    SeedFailed { seed: Vec<String>, reason: String },
    /// The sweep stopped before covering every seed vertex.
    SeedTruncated { seed: Vec<String> },
    /// The community is not connected in the input graph.
    Disconnected { seed: Vec<String> },
}

/// Per-seed diagnostics kept alongside the result.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedTrace {
    pub seed: Vec<String>,
    pub sample_size: usize,
    pub k_star: usize,
    pub profile: Vec<(usize, f64)>,
    pub solver_iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub communities: CommunitySet,
    pub seed_count: usize,
    pub warnings: Vec<Warning>,
    /// One entry per seed that produced a community, in seed order.
    pub traces: Vec<SeedTrace>,
}

struct SeedOutcome {
    community: VertexSet,
    trace: SeedTrace,
    truncated: bool,
}

/// Runs the pipeline one seed after another.
pub fn detect(g: &Graph, cfg: &DetectionConfig) -> Result<Detection> {
    run(g, cfg, 1)
}

/// Runs the per-seed stages on `cfg.workers` threads. Output is identical to
/// [`detect`] for any worker count.
pub fn detect_parallel(g: &Graph, cfg: &DetectionConfig) -> Result<Detection> {
    run(g, cfg, cfg.workers)
}

fn run(g: &Graph, cfg: &DetectionConfig, workers: usize) -> Result<Detection> {
    run_with(g, cfg, workers, expand_seed)
}

fn run_with<F>(g: &Graph, cfg: &DetectionConfig, workers: usize, expand: F) -> Result<Detection>
where
    F: Fn(&Graph, &SeedSet, &DetectionConfig) -> Result<SeedOutcome> + Sync + Send,
{
    cfg.validate()?;
    let seeds = seeding::build_seeds_with(g, cfg.min_clique, cfg.overlap_threshold);
    let seed_count = seeds.len();
    let outcomes = par::map_with_workers(workers, seeds, |seed| {
        let result = panic::catch_unwind(AssertUnwindSafe(|| expand(g, &seed, cfg)));
        let result = match result {
            Ok(r) => r.map_err(|e| e.to_string()),
            Err(payload) => Err(panic_message(payload.as_ref())),
        };
        (seed, result)
    });

    let mut warnings = Vec::new();
    let mut traces = Vec::new();
    let mut seen = HashSet::new();
    let mut communities = Vec::new();
    for (seed, result) in outcomes {
        let seed_tokens = tokens(g, &seed.vertices);
        let outcome = match result {
            Ok(o) => o,
            Err(reason) => {
                log::warn!("skipping seed {seed_tokens:?}: {reason}");
                warnings.push(Warning::SeedFailed {
                    seed: seed_tokens,
                    reason,
                });
                continue;
            }
        };
        if outcome.truncated {
            warnings.push(Warning::SeedTruncated {
                seed: seed_tokens.clone(),
            });
        }
        if !g.is_connected_subset(&outcome.community) {
            log::warn!("community from seed {seed_tokens:?} is disconnected");
            warnings.push(Warning::Disconnected {
                seed: seed_tokens.clone(),
            });
        }
        traces.push(outcome.trace);
        let members = tokens(g, &outcome.community);
        if seen.insert(members.clone()) {
            communities.push(Community {
                members,
                seed: seed_tokens,
            });
        }
    }
    communities.sort_by(|a, b| {
        b.members
            .len()
            .cmp(&a.members.len())
            .then_with(|| a.members.cmp(&b.members))
    });
    Ok(Detection {
        communities: CommunitySet { communities },
        seed_count,
        warnings,
        traces,
    })
}

fn expand_seed(g: &Graph, seed: &SeedSet, cfg: &DetectionConfig) -> Result<SeedOutcome> {
    let sample = sampler::sample(g, seed, cfg.t0, cfg.mu)?;
    let problem = extractor::build_laplacian(&sample, cfg.alpha)?;
    let affiliation = extractor::solve_affiliation_with(&problem, cfg.solver)?;
    let swept = sweeper::sweep(&sample, &affiliation.values, cfg.window)?;
    let community = sample.subgraph.map_to_parent(&swept.community_local);
    log::debug!(
        "seed {:?}: sample {} vertices, {} solver iterations, k* = {} (conductance {:.4})",
        seed.vertices.as_slice(),
        sample.vertex_count(),
        affiliation.iterations,
        swept.k_star,
        swept.conductance_at_k
    );
    Ok(SeedOutcome {
        community,
        truncated: swept.seed_truncated,
        trace: SeedTrace {
            seed: tokens(g, &seed.vertices),
            sample_size: sample.vertex_count(),
            k_star: swept.k_star,
            profile: swept.profile,
            solver_iterations: affiliation.iterations,
        },
    })
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        format!("panicked: {s}")
    } else if let Some(s) = payload.downcast_ref::<String>() {
        format!("panicked: {s}")
    } else {
        "panicked".to_owned()
    }
}

/// Sorted tokens of a vertex set.
pub fn tokens(g: &Graph, set: &VertexSet) -> Vec<String> {
    let mut out: Vec<String> = set.iter().map(|v| g.label(v).to_owned()).collect();
    out.sort();
    out
}

/// One community per line, tokens separated by single spaces.
pub fn write_communities<W: Write>(communities: &CommunitySet, mut out: W) -> Result<()> {
    for c in &communities.communities {
        writeln!(out, "{}", c.members.join(" "))?;
    }
    Ok(())
}

/// Reads one community per line (whitespace-separated tokens). Blank lines
/// and `#` comments are skipped.
pub fn read_communities<R: BufRead>(reader: R) -> Result<Vec<Vec<String>>> {
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        out.push(trimmed.split_whitespace().map(str::to_owned).collect());
    }
    Ok(out)
}

/// Writes the seed cliques, one per line as tokens.
pub fn write_seeds<W: Write>(g: &Graph, seeds: &[SeedSet], mut out: W) -> Result<()> {
    for s in seeds {
        writeln!(out, "{}", tokens(g, &s.vertices).join(" "))?;
    }
    Ok(())
}

/// `seed,k,conductance` rows for every sweep that was run.
pub fn write_profiles<W: Write>(traces: &[SeedTrace], mut out: W) -> Result<()> {
    writeln!(out, "seed,k,conductance")?;
    for t in traces {
        let seed = t.seed.join(" ");
        for &(k, phi) in &t.profile {
            writeln!(out, "{seed},{k},{phi}")?;
        }
    }
    Ok(())
}
