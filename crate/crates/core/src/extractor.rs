//! Community extraction on a sampled subgraph.
//!
//! Solves the box-constrained quadratic program
//!
//! ```text
//! minimise   yᵀ L y + α eᵀ y
//! subject to 0 ≤ y ≤ 1,  y_i ≥ 1/|S| for every seed vertex i
//! ```
//!
//! where `L = D - A` is the Laplacian of the sample. The solver alternates
//! projected gradient steps (which pick the active face) with conjugate
//! gradient on the free variables of that face, followed by a projected
//! backtracking search. Only Laplacian-vector products are needed.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::sampler::SampledSubgraph;

pub const DEFAULT_ALPHA: f64 = 0.2;
pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Sparse graph Laplacian `D - A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian {
    adjacency: Vec<Vec<usize>>,
}

impl Laplacian {
    pub fn new(g: &Graph) -> Self {
        Self {
            adjacency: (0..g.vertex_count())
                .map(|v| g.neighbors(v).to_vec())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.adjacency.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `out = L y`.
    pub fn apply(&self, y: &[f64], out: &mut [f64]) {
        for (v, neighbors) in self.adjacency.iter().enumerate() {
            let mut acc = neighbors.len() as f64 * y[v];
            for &u in neighbors {
                acc -= y[u];
            }
            out[v] = acc;
        }
    }

    /// `yᵀ L y`, summed edge by edge so it is never negative.
    pub fn quadratic_form(&self, y: &[f64]) -> f64 {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .map(|(a, b)| (y[a] - y[b]).powi(2))
            .sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for (v, neighbors) in self.adjacency.iter().enumerate() {
            m[v][v] = neighbors.len() as f64;
            for &u in neighbors {
                m[v][u] = -1.0;
            }
        }
        m
    }
}

/// The quadratic program for one sampled subgraph.
#[derive(Debug, Clone, PartialEq)]
pub struct QpProblem {
    pub laplacian: Laplacian,
    pub alpha: f64,
    /// Per-variable lower bound: `1/|S|` on seeds, `0` elsewhere. Upper bound is 1.
    pub lower: Vec<f64>,
    pub seed_local: VertexSet,
}

impl QpProblem {
    pub fn new(g: &Graph, seed_local: &VertexSet, alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha < 0.0 || alpha.is_infinite() {
            return Err(Error::InvalidParameter(format!(
                "alpha must be non-negative, got {alpha}"
            )));
        }
        let n = g.vertex_count();
        if n == 0 {
            return Err(Error::EmptySet);
        }
        let mut lower = vec![0.0; n];
        if !seed_local.is_empty() {
            let bound = 1.0 / seed_local.len() as f64;
            for v in seed_local.iter() {
                if v >= n {
                    return Err(Error::VertexOutOfRange {
                        index: v,
                        vertex_count: n,
                    });
                }
                lower[v] = bound;
            }
        }
        Ok(Self {
            laplacian: Laplacian::new(g),
            alpha,
            lower,
            seed_local: seed_local.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn seed_lower_bound(&self) -> f64 {
        if self.seed_local.is_empty() {
            0.0
        } else {
            1.0 / self.seed_local.len() as f64
        }
    }

    pub fn objective(&self, y: &[f64]) -> f64 {
        self.laplacian.quadratic_form(y) + self.alpha * y.iter().sum::<f64>()
    }

    /// `2 L y + α e`.
    pub fn gradient(&self, y: &[f64], out: &mut [f64]) {
        self.laplacian.apply(y, out);
        for g in out.iter_mut() {
            *g = 2.0 * *g + self.alpha;
        }
    }

    /// Seeds at their lower bound, everything else at zero.
    pub fn start_point(&self) -> Vec<f64> {
        self.lower.clone()
    }

    pub fn project(&self, y: &mut [f64]) {
        for (v, lo) in y.iter_mut().zip(&self.lower) {
            *v = v.clamp(*lo, 1.0);
        }
    }

    /// Gradient with the components blocked by an active bound zeroed.
    pub fn projected_gradient(&self, y: &[f64], gradient: &[f64]) -> Vec<f64> {
        y.iter()
            .zip(gradient)
            .zip(&self.lower)
            .map(|((&v, &g), &lo)| {
                if (v <= lo && g > 0.0) || (v >= 1.0 && g < 0.0) {
                    0.0
                } else {
                    g
                }
            })
            .collect()
    }

    pub fn projected_gradient_norm(&self, y: &[f64]) -> f64 {
        let mut g = vec![0.0; self.dim()];
        self.gradient(y, &mut g);
        norm(&self.projected_gradient(y, &g))
    }
}

/// Builds the program for a sample with trade-off weight `alpha`.
pub fn build_laplacian(gs: &SampledSubgraph, alpha: f64) -> Result<QpProblem> {
    QpProblem::new(gs.graph(), &gs.seed_local, alpha)
}

/// `cut(C, C̄) / min(|C|, |C̄|)` inside the sample.
pub fn cheeger_cut_value(gs: &SampledSubgraph, c: &VertexSet) -> Result<f64> {
    let g = gs.graph();
    if c.is_empty() {
        return Err(Error::EmptySet);
    }
    if c.len() >= g.vertex_count() {
        return Err(Error::FullSet);
    }
    let smaller = c.len().min(g.vertex_count() - c.len());
    Ok(g.cut_size(c) as f64 / smaller as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Budget in Laplacian-vector products.
    pub max_iterations: usize,
    /// Target Euclidean norm of the projected gradient.
    pub tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: DEFAULT_MAX_ITERATIONS,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// Optimal membership scores over the local vertices of one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct AffiliationVector {
    pub values: Vec<f64>,
    pub objective: f64,
    /// Projected gradient norm at `values`.
    pub residual: f64,
    pub iterations: usize,
}

pub fn solve_affiliation(problem: &QpProblem) -> Result<AffiliationVector> {
    solve_affiliation_with(problem, SolverOptions::default())
}

pub fn solve_affiliation_with(
    problem: &QpProblem,
    options: SolverOptions,
) -> Result<AffiliationVector> {
    let n = problem.dim();
    // λ_max(2L) ≤ 4·max_degree (Gershgorin).
    let lipschitz = (4 * problem.laplacian.max_degree()).max(1) as f64;
    let mut y = problem.start_point();
    let mut grad = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut iterations = 0;

    loop {
        problem.gradient(&y, &mut grad);
        let residual = norm(&problem.projected_gradient(&y, &grad));
        if residual <= options.tolerance {
            return Ok(finish(problem, y, residual, iterations));
        }
        if iterations >= options.max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                residual,
            });
        }

        // Projected gradient step; with step 1/Lipschitz it never increases f.
        for i in 0..n {
            y[i] -= grad[i] / lipschitz;
        }
        problem.project(&mut y);
        iterations += 1;

        problem.gradient(&y, &mut grad);
        let free: Vec<bool> = (0..n)
            .map(|i| y[i] > problem.lower[i] && y[i] < 1.0)
            .collect();
        if !free.iter().any(|&f| f) {
            continue;
        }
        let budget = options.max_iterations.saturating_sub(iterations);
        let (direction, used) = conjugate_gradient(problem, &grad, &free, &mut scratch, budget);
        iterations += used;
        if let Some(direction) = direction {
            projected_search(problem, &mut y, &grad, &direction);
        }
    }
}

fn finish(
    problem: &QpProblem,
    mut y: Vec<f64>,
    residual: f64,
    iterations: usize,
) -> AffiliationVector {
    problem.project(&mut y);
    AffiliationVector {
        objective: problem.objective(&y),
        values: y,
        residual,
        iterations,
    }
}

/// Approximately solves `2 L_FF d = -g_F` on the free variables. Returns the
/// direction (zero outside the free set) and the number of products used.
/// On a direction of zero curvature the objective is linear along it, so that
/// direction is returned unscaled and the line search walks to a bound.
fn conjugate_gradient(
    problem: &QpProblem,
    grad: &[f64],
    free: &[bool],
    hp: &mut [f64],
    budget: usize,
) -> (Option<Vec<f64>>, usize) {
    let n = problem.dim();
    let mut d = vec![0.0; n];
    let mut r: Vec<f64> = (0..n)
        .map(|i| if free[i] { -grad[i] } else { 0.0 })
        .collect();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let target = (1e-12 * rr.sqrt()).max(1e-14);
    let free_count = free.iter().filter(|&&f| f).count();
    let max_steps = (2 * free_count + 10).min(budget);
    let mut used = 0;
    while used < max_steps {
        problem.laplacian.apply(&p, hp);
        used += 1;
        for i in 0..n {
            hp[i] = if free[i] { 2.0 * hp[i] } else { 0.0 };
        }
        let curvature = dot(&p, hp);
        if curvature <= 1e-14 * dot(&p, &p) {
            if used == 1 {
                return (Some(p), used);
            }
            break;
        }
        let step = rr / curvature;
        for i in 0..n {
            d[i] += step * p[i];
            r[i] -= step * hp[i];
        }
        let rr_next = dot(&r, &r);
        if rr_next.sqrt() <= target {
            break;
        }
        let beta = rr_next / rr;
        rr = rr_next;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    if d.iter().all(|&v| v == 0.0) {
        (None, used)
    } else {
        (Some(d), used)
    }
}

/// Backtracking along the projected path `P(y + t d)`, starting from the
/// full step or, when that overshoots a long way, from the step that reaches
/// the farthest breakpoint.
fn projected_search(problem: &QpProblem, y: &mut Vec<f64>, grad: &[f64], direction: &[f64]) {
    let f0 = problem.objective(y);
    let mut t = 1.0_f64;
    // A zero-curvature direction may need t > 1 to reach a bound.
    let reach = direction
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != 0.0)
        .map(|(i, &d)| {
            if d > 0.0 {
                (1.0 - y[i]) / d
            } else {
                (problem.lower[i] - y[i]) / d
            }
        })
        .fold(0.0_f64, f64::max);
    if reach > 1.0 && reach.is_finite() {
        t = reach;
    }
    let mut trial = vec![0.0; y.len()];
    for _ in 0..60 {
        for i in 0..y.len() {
            trial[i] = y[i] + t * direction[i];
        }
        problem.project(&mut trial);
        let decrease: f64 = trial
            .iter()
            .zip(y.iter())
            .zip(grad)
            .map(|((a, b), g)| g * (a - b))
            .sum();
        if problem.objective(&trial) <= f0 + 1e-4 * decrease {
            std::mem::swap(y, &mut trial);
            return;
        }
        t *= 0.5;
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
