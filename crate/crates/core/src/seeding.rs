//! Seed selection: k-core pruning, maximal clique enumeration and greedy
//! overlap filtering.

use std::cmp::{Ordering, Reverse};

use crate::graph::{sorted_intersection_len, Graph, VertexSet};
use crate::par;

pub const DEFAULT_MIN_CLIQUE: usize = 4;
pub const DEFAULT_OVERLAP_THRESHOLD: f64 = 0.75;

/// A maximal clique used as the starting point of one expansion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeedSet {
    pub vertices: VertexSet,
}

impl SeedSet {
    pub fn new(vertices: VertexSet) -> Self {
        Self { vertices }
    }

    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

/// Maximal cliques with at least `min_size` vertices, in canonical order.
///
/// Bron-Kerbosch with Tomita pivoting inside a degeneracy-ordered outer loop.
pub fn enumerate_maximal_cliques(g: &Graph, min_size: usize) -> Vec<SeedSet> {
    let mut cliques = Vec::new();
    let order = degeneracy_order(g);
    let mut position = vec![0; g.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut clique = Vec::new();
    for &v in &order {
        let (mut later, mut earlier) = (Vec::new(), Vec::new());
        for &u in g.neighbors(v) {
            if position[u] > position[v] {
                later.push(u);
            } else {
                earlier.push(u);
            }
        }
        clique.push(v);
        expand(g, min_size, &mut clique, later, earlier, &mut cliques);
        clique.pop();
    }
    let mut seeds: Vec<SeedSet> = cliques
        .into_iter()
        .map(|c| SeedSet::new(VertexSet::from_unsorted(c)))
        .collect();
    canonical_sort(g, &mut seeds);
    seeds
}

fn expand(
    g: &Graph,
    min_size: usize,
    clique: &mut Vec<usize>,
    mut candidates: Vec<usize>,
    mut excluded: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if candidates.is_empty() {
        if excluded.is_empty() && clique.len() >= min_size {
            out.push(clique.clone());
        }
        return;
    }
    if clique.len() + candidates.len() < min_size {
        return;
    }
    let pivot = candidates
        .iter()
        .chain(excluded.iter())
        .copied()
        .max_by_key(|&u| sorted_intersection_len(&candidates, g.neighbors(u)))
        .expect("candidates is non-empty");
    let branch: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|v| g.neighbors(pivot).binary_search(v).is_err())
        .collect();
    for v in branch {
        let nv = g.neighbors(v);
        clique.push(v);
        expand(
            g,
            min_size,
            clique,
            sorted_intersection(&candidates, nv),
            sorted_intersection(&excluded, nv),
            out,
        );
        clique.pop();
        if let Ok(i) = candidates.binary_search(&v) {
            candidates.remove(i);
        }
        if let Err(i) = excluded.binary_search(&v) {
            excluded.insert(i, v);
        }
    }
}

fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Vertices in smallest-last (degeneracy) order, via bucket peeling.
pub fn degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_degree + 1];
    for v in 0..n {
        buckets[degree[v]].push(v);
    }
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut low = 0;
    while order.len() < n {
        while buckets[low].is_empty() {
            low += 1;
        }
        let v = buckets[low].pop().expect("bucket is non-empty");
        // Stale entries: v was moved to a lower bucket already, or emitted.
        if done[v] || degree[v] != low {
            continue;
        }
        done[v] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            if !done[u] {
                degree[u] -= 1;
                buckets[degree[u]].push(u);
                low = low.min(degree[u]);
            }
        }
    }
    order
}

/// Rank of each vertex when tokens are sorted; used to order equal-size
/// cliques independently of how indices were assigned.
fn label_ranks(g: &Graph) -> Vec<usize> {
    let mut by_label: Vec<usize> = (0..g.vertex_count()).collect();
    by_label.sort_by(|&a, &b| g.label(a).cmp(g.label(b)));
    let mut rank = vec![0; g.vertex_count()];
    for (r, v) in by_label.into_iter().enumerate() {
        rank[v] = r;
    }
    rank
}

/// Size non-ascending, then lexicographic on the members' sorted tokens.
pub fn canonical_sort(g: &Graph, seeds: &mut [SeedSet]) {
    let rank = label_ranks(g);
    seeds.sort_by_cached_key(|s| {
        let mut key: Vec<usize> = s.vertices.iter().map(|v| rank[v]).collect();
        key.sort_unstable();
        (Reverse(s.size()), key)
    });
}

/// Greedy scan: a clique is dropped when at least `overlap_threshold` of its
/// own vertices lie in some clique kept before it.
pub fn filter_cliques(
    g: &Graph,
    mut cliques: Vec<SeedSet>,
    overlap_threshold: f64,
) -> Vec<SeedSet> {
    canonical_sort(g, &mut cliques);
    let mut kept: Vec<SeedSet> = Vec::new();
    for candidate in cliques {
        let size = candidate.size() as f64;
        let dominated = kept.iter().any(|p| {
            candidate.vertices.intersection_len(&p.vertices) as f64 / size >= overlap_threshold
        });
        if !dominated {
            kept.push(candidate);
        }
    }
    kept
}

/// Seeds with the default clique size and overlap threshold.
pub fn build_seeds(g: &Graph) -> Vec<SeedSet> {
    build_seeds_with(g, DEFAULT_MIN_CLIQUE, DEFAULT_OVERLAP_THRESHOLD)
}

/// Prunes to the `(min_clique - 1)`-core, enumerates cliques per connected
/// component of the core, then filters. Indices refer to `g`.
pub fn build_seeds_with(g: &Graph, min_clique: usize, overlap_threshold: f64) -> Vec<SeedSet> {
    let core = g.k_core(min_clique.saturating_sub(1));
    let core_graph = g.induced_subgraph(&core);
    let components = core_graph.graph.connected_components();
    let per_component = par::map(components, |component| {
        let sub = core_graph.graph.induced_subgraph(&component);
        enumerate_maximal_cliques(&sub.graph, min_clique)
            .into_iter()
            .map(|s| {
                let in_core = sub.map_to_parent(&s.vertices);
                SeedSet::new(core_graph.map_to_parent(&in_core))
            })
            .collect::<Vec<_>>()
    });
    let cliques = per_component.into_iter().flatten().collect();
    filter_cliques(g, cliques, overlap_threshold)
}
