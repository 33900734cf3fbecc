#![allow(dead_code, clippy::needless_range_loop)]

use std::path::PathBuf;

use qoce::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// G(n, p) with a fixed seed.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Two `k`-cliques on `0..k` and `k..2k` joined by the edge `(k-1, k)`.
pub fn bridged_cliques(k: usize) -> Graph {
    let mut edges = Vec::new();
    for base in [0, k] {
        for a in 0..k {
            for b in a + 1..k {
                edges.push((base + a, base + b));
            }
        }
    }
    edges.push((k - 1, k));
    Graph::from_edges(2 * k, edges)
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
}

/// Dense `p_{t+1} = N_rwᵀ p_t` with `N_rw = (D + I)^-1 (A + I)`, built as an
/// explicit matrix.
pub fn dense_lazy_walk(g: &Graph, p0: &[f64], steps: usize) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    let mut transition = vec![vec![0.0; n]; n];
    for u in 0..n {
        let w = 1.0 / (g.degree(u) + 1) as f64;
        transition[u][u] = w;
        for &v in g.neighbors(u) {
            transition[u][v] = w;
        }
    }
    let mut out = vec![p0.to_vec()];
    for _ in 0..steps {
        let p = out.last().unwrap();
        let next: Vec<f64> = (0..n)
            .map(|v| (0..n).map(|u| transition[u][v] * p[u]).sum())
            .collect();
        out.push(next);
    }
    out
}

/// All maximal cliques of size >= `min_size` by checking every vertex subset.
pub fn brute_force_maximal_cliques(g: &Graph, min_size: usize) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    assert!(n <= 20);
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let is_clique =
        |mask: u32| (0..n).all(|v| mask & (1 << v) == 0 || (mask & !(1 << v)) & !adj[v] == 0);
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if (mask.count_ones() as usize) < min_size || !is_clique(mask) {
            continue;
        }
        if (0..n).all(|v| mask & (1 << v) != 0 || !is_clique(mask | (1 << v))) {
            out.push((0..n).filter(|&v| mask & (1 << v) != 0).collect());
        }
    }
    out.sort();
    out
}

/// Finds `<stem>.edges` and `<stem>.communities` in `QOCE_DATA_DIR` or the
/// repository `data/` directory.
pub fn dataset_files(stem: &str) -> Option<(PathBuf, PathBuf)> {
    let mut dirs = Vec::new();
    if let Ok(dir) = std::env::var("QOCE_DATA_DIR") {
        dirs.push(PathBuf::from(dir));
    }
    dirs.push(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"));
    dirs.into_iter().find_map(|d| {
        let graph = d.join(format!("{stem}.edges"));
        let truth = d.join(format!("{stem}.communities"));
        (graph.exists() && truth.exists()).then_some((graph, truth))
    })
}
