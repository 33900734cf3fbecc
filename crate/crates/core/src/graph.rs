//! Immutable undirected simple graph and the structural primitives used by
//! every stage of the pipeline.
//!
//! Vertices are dense `0..n` indices. Each vertex also carries an opaque
//! external token (the name it had in the input file); everything written back
//! out uses the tokens.

use std::collections::{HashMap, VecDeque};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

/// Sorted, deduplicated set of vertex indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    /// Builds a set from indices in any order; duplicates are dropped.
    pub fn from_unsorted(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Self(vertices)
    }

    /// Wraps an already strictly ascending sequence.
    pub(crate) fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Self(vertices)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// Size of the intersection, by merging the two sorted sequences.
    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        sorted_intersection_len(&self.0, &other.0)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_unsorted(iter.into_iter().collect())
    }
}

pub(crate) fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Undirected simple graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph over `n` vertices labelled `"0".."n-1"`.
    ///
    /// Self-loops and repeated edges are dropped. Panics if an endpoint is `>= n`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::from_parts(labels, edges)
    }

    /// Builds a graph from token pairs, assigning indices in first-appearance order.
    pub fn from_labeled_edges<'a, I>(edges: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut labels = Vec::new();
        let mut index = HashMap::new();
        let mut pairs = Vec::new();
        for (a, b) in edges {
            let ia = intern(&mut labels, &mut index, a);
            let ib = intern(&mut labels, &mut index, b);
            pairs.push((ia, ib));
        }
        Self::from_parts(labels, pairs)
    }

    /// Builds a graph from explicit labels; edges reference label positions.
    pub(crate) fn from_parts(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        for (a, b) in edges {
            assert!(
                a < n && b < n,
                "edge ({a}, {b}) out of range for {n} vertices"
            );
            if a == b {
                continue;
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let mut degree_sum = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            degree_sum += list.len();
        }
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Self {
            adjacency,
            labels,
            index,
            edge_count: degree_sum / 2,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    /// Every edge once, as `(a, b)` with `a < b`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(a, list)| {
            list.iter()
                .copied()
                .filter(move |&b| a < b)
                .map(move |b| (a, b))
        })
    }

    /// Checks that every index is in range and builds the set.
    pub fn vertex_set(&self, vertices: impl IntoIterator<Item = usize>) -> Result<VertexSet> {
        let set: VertexSet = vertices.into_iter().collect();
        if let Some(&bad) = set.as_slice().last().filter(|&&v| v >= self.vertex_count()) {
            return Err(Error::VertexOutOfRange {
                index: bad,
                vertex_count: self.vertex_count(),
            });
        }
        Ok(set)
    }

    /// Looks up every token and builds the set.
    pub fn vertex_set_from_tokens<'a>(
        &self,
        tokens: impl IntoIterator<Item = &'a str>,
    ) -> Result<VertexSet> {
        tokens
            .into_iter()
            .map(|t| {
                self.index_of(t)
                    .ok_or_else(|| Error::UnknownVertex(t.to_owned()))
            })
            .collect::<Result<Vec<_>>>()
            .map(VertexSet::from_unsorted)
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::from_sorted((0..self.vertex_count()).collect())
    }

    /// Total degree of the vertices in `set`.
    pub fn volume(&self, set: &VertexSet) -> usize {
        set.iter().map(|v| self.degree(v)).sum()
    }

    /// Number of edges with exactly one endpoint in `set`.
    pub fn cut_size(&self, set: &VertexSet) -> usize {
        set.iter()
            .map(|v| {
                self.neighbors(v)
                    .iter()
                    .filter(|&&u| !set.contains(u))
                    .count()
            })
            .sum()
    }

    /// `cut(C, C̄) / min(Vol(C), Vol(C̄))`.
    pub fn conductance(&self, set: &VertexSet) -> Result<f64> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        if set.len() >= self.vertex_count() {
            return Err(Error::FullSet);
        }
        let inside = self.volume(set);
        let outside = 2 * self.edge_count - inside;
        let denom = inside.min(outside);
        if denom == 0 {
            return Err(Error::ZeroVolume);
        }
        Ok(self.cut_size(set) as f64 / denom as f64)
    }

    /// Subgraph induced by `set`. Local vertex `i` is `set[i]` in this graph and
    /// keeps its token.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Subgraph {
        let members = set.as_slice();
        let labels = members.iter().map(|&v| self.labels[v].clone()).collect();
        let mut adjacency = Vec::with_capacity(members.len());
        let mut degree_sum = 0;
        for &v in members {
            // Both lists are ascending, so local indices come out ascending too.
            let local: Vec<usize> = self.adjacency[v]
                .iter()
                .filter_map(|u| members.binary_search(u).ok())
                .collect();
            degree_sum += local.len();
            adjacency.push(local);
        }
        let index = members
            .iter()
            .enumerate()
            .map(|(i, &v)| (self.labels[v].clone(), i))
            .collect();
        Subgraph {
            graph: Graph {
                adjacency,
                labels,
                index,
                edge_count: degree_sum / 2,
            },
            to_parent: members.to_vec(),
        }
    }

    /// Largest vertex set in which every vertex keeps at least `k` neighbours.
    pub fn k_core(&self, k: usize) -> VertexSet {
        let n = self.vertex_count();
        let mut degree: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut removed = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| degree[v] < k).collect();
        for &v in &queue {
            removed[v] = true;
        }
        while let Some(v) = queue.pop_front() {
            for &u in self.neighbors(v) {
                if removed[u] {
                    continue;
                }
                degree[u] -= 1;
                if degree[u] < k {
                    removed[u] = true;
                    queue.push_back(u);
                }
            }
        }
        VertexSet::from_sorted((0..n).filter(|&v| !removed[v]).collect())
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            stack.push(start);
            let mut members = Vec::new();
            while let Some(v) = stack.pop() {
                members.push(v);
                for &u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            components.push(VertexSet::from_unsorted(members));
        }
        components
    }

    /// Whether the subgraph induced by `set` is connected. The empty set is not.
    pub fn is_connected_subset(&self, set: &VertexSet) -> bool {
        let Some(first) = set.iter().next() else {
            return false;
        };
        let mut seen = vec![false; set.len()];
        seen[0] = true;
        let mut stack = vec![first];
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &u in self.neighbors(v) {
                if let Ok(pos) = set.as_slice().binary_search(&u) {
                    if !seen[pos] {
                        seen[pos] = true;
                        reached += 1;
                        stack.push(u);
                    }
                }
            }
        }
        reached == set.len()
    }
}

fn intern(labels: &mut Vec<String>, index: &mut HashMap<String, usize>, token: &str) -> usize {
    if let Some(&i) = index.get(token) {
        return i;
    }
    let i = labels.len();
    labels.push(token.to_owned());
    index.insert(token.to_owned(), i);
    i
}

/// Induced subgraph plus the map from its local indices back to the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Graph,
    /// `to_parent[local]` is the parent index; ascending.
    pub to_parent: Vec<usize>,
}

impl Subgraph {
    pub fn to_local(&self, parent: usize) -> Option<usize> {
        self.to_parent.binary_search(&parent).ok()
    }

    pub fn map_to_parent(&self, local: &VertexSet) -> VertexSet {
        // to_parent is ascending, so the image stays sorted.
        VertexSet::from_sorted(local.iter().map(|v| self.to_parent[v]).collect())
    }
}

/// Reads an edge list: two whitespace-separated tokens per line, `#` comments
/// and blank lines ignored.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut labels = Vec::new();
    let mut index = HashMap::new();
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => {
                let ia = intern(&mut labels, &mut index, a);
                let ib = intern(&mut labels, &mut index, b);
                pairs.push((ia, ib));
            }
            _ => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected two tokens, found `{trimmed}`"),
                })
            }
        }
    }
    Ok(Graph::from_parts(labels, pairs))
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    load_edge_list(BufReader::new(File::open(path)?))
}

/// Writes the graph as an edge list of tokens, one edge per line.
pub fn write_edge_list<W: std::io::Write>(graph: &Graph, mut out: W) -> Result<()> {
    for (a, b) in graph.edges() {
        writeln!(out, "{} {}", graph.label(a), graph.label(b))?;
    }
    Ok(())
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::from_unsorted(v.to_vec())
    }

    #[test]
    fn parses_simple_edge_list() {
        let g = load_edge_list("a b\nb c".as_bytes()).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.labels(), ["a", "b", "c"]);
    }

    #[test]
    fn collapses_duplicates_and_self_loops() {
        let g = load_edge_list("a b\nb a\na a".as_bytes()).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn comments_blank_lines_and_empty_input() {
        let g = load_edge_list("# header\n\n  \n1 2\n# 3 4\n".as_bytes()).unwrap();
        assert_eq!(g.vertex_count(), 2);
        let empty = load_edge_list("".as_bytes()).unwrap();
        assert_eq!(empty.vertex_count(), 0);
        assert_eq!(empty.edge_count(), 0);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = load_edge_list("a b\nc\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = load_edge_list("a b c\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn numeric_tokens_stay_opaque() {
        let g = load_edge_list("10 3\n3 7".as_bytes()).unwrap();
        assert_eq!(g.index_of("10"), Some(0));
        assert_eq!(g.index_of("3"), Some(1));
        assert_eq!(g.index_of("7"), Some(2));
    }

    #[test]
    fn cut_sizes() {
        assert_eq!(cycle(4).cut_size(&set(&[0])), 2);
        assert_eq!(complete(4).cut_size(&set(&[1, 3])), 4);
        let g = bridged_cliques(4);
        assert_eq!(g.cut_size(&g.all_vertices()), 0);
        assert_eq!(g.cut_size(&VertexSet::new()), 0);
    }

    #[test]
    fn conductance_values() {
        assert_eq!(complete(2).conductance(&set(&[0])).unwrap(), 1.0);
        assert_eq!(cycle(4).conductance(&set(&[0, 1])).unwrap(), 0.5);
        let g = bridged_cliques(4);
        assert_eq!(g.conductance(&set(&[0, 1, 2, 3])).unwrap(), 1.0 / 13.0);
    }

    #[test]
    fn conductance_domain_errors() {
        let g = cycle(4);
        assert!(matches!(
            g.conductance(&VertexSet::new()),
            Err(Error::EmptySet)
        ));
        assert!(matches!(
            g.conductance(&g.all_vertices()),
            Err(Error::FullSet)
        ));
        // Isolated vertex 2 has zero volume.
        let h = Graph::from_edges(3, [(0, 1)]);
        assert!(matches!(h.conductance(&set(&[2])), Err(Error::ZeroVolume)));
    }

    #[test]
    fn induced_subgraphs() {
        let tri = complete(4).induced_subgraph(&set(&[0, 2, 3]));
        assert_eq!(tri.graph.vertex_count(), 3);
        assert_eq!(tri.graph.edge_count(), 3);
        assert_eq!(tri.to_parent, vec![0, 2, 3]);
        assert_eq!(tri.graph.label(1), "2");

        let g = bridged_cliques(4);
        let whole = g.induced_subgraph(&g.all_vertices());
        assert_eq!(whole.graph, g);

        let pendant = g.induced_subgraph(&set(&[0, 1, 2, 3, 4]));
        assert_eq!(pendant.graph.edge_count(), 7);
        assert_eq!(pendant.graph.degree(4), 1);
        assert_eq!(pendant.to_local(4), Some(4));
        assert_eq!(pendant.to_local(5), None);
    }

    #[test]
    fn k_cores() {
        assert_eq!(complete(4).k_core(3), set(&[0, 1, 2, 3]));
        assert!(path(10).k_core(3).is_empty());
        let mut edges: Vec<_> = complete(4).edges().collect();
        edges.push((3, 4));
        let g = Graph::from_edges(5, edges);
        assert_eq!(g.k_core(3), set(&[0, 1, 2, 3]));
        assert_eq!(g.k_core(0), g.all_vertices());
    }

    #[test]
    fn components() {
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_eq!(
            two.connected_components(),
            vec![set(&[0, 1, 2]), set(&[3, 4, 5])]
        );
        let g = bridged_cliques(3);
        assert_eq!(g.connected_components(), vec![g.all_vertices()]);
        let iso = Graph::from_edges(5, []);
        assert_eq!(iso.connected_components().len(), 5);
    }

    #[test]
    fn vertex_set_bounds_checked() {
        let g = cycle(4);
        assert!(g.vertex_set([0, 3]).is_ok());
        assert!(matches!(
            g.vertex_set([1, 4]),
            Err(Error::VertexOutOfRange { index: 4, .. })
        ));
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..n * 3)
                .prop_map(move |edges| Graph::from_edges(n, edges))
        })
    }

    fn arb_graph_and_set(max_n: usize) -> impl Strategy<Value = (Graph, VertexSet)> {
        arb_graph(max_n).prop_flat_map(|g| {
            let n = g.vertex_count();
            proptest::collection::vec(any::<bool>(), n).prop_map(move |mask| {
                let s = VertexSet::from_unsorted((0..n).filter(|&i| mask[i]).collect());
                (g.clone(), s)
            })
        })
    }

    fn complement(g: &Graph, s: &VertexSet) -> VertexSet {
        (0..g.vertex_count()).filter(|&v| !s.contains(v)).collect()
    }

    proptest! {
        #[test]
        fn adjacency_invariants(g in arb_graph(30)) {
            let mut degree_sum = 0;
            for v in 0..g.vertex_count() {
                let nb = g.neighbors(v);
                prop_assert!(nb.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(!nb.contains(&v));
                for &u in nb {
                    prop_assert!(g.has_edge(u, v));
                }
                degree_sum += nb.len();
            }
            prop_assert_eq!(degree_sum, 2 * g.edge_count());
        }

        #[test]
        fn cut_and_volume_symmetry((g, s) in arb_graph_and_set(30)) {
            let c = complement(&g, &s);
            prop_assert_eq!(g.cut_size(&s), g.cut_size(&c));
            prop_assert_eq!(g.volume(&s) + g.volume(&c), 2 * g.edge_count());
            if let Ok(phi) = g.conductance(&s) {
                prop_assert!((0.0..=1.0).contains(&phi));
            }
        }

        #[test]
        fn k_core_is_maximal((g, k) in (arb_graph(30), 0usize..5)) {
            let core = g.k_core(k);
            let sub = g.induced_subgraph(&core);
            for v in 0..sub.graph.vertex_count() {
                prop_assert!(sub.graph.degree(v) >= k);
            }
            // Re-adding any single peeled vertex leaves it short of k neighbours in the core.
            for v in 0..g.vertex_count() {
                if !core.contains(v) {
                    let inside = g.neighbors(v).iter().filter(|&&u| core.contains(u)).count();
                    prop_assert!(inside < k);
                }
            }
        }

        #[test]
        fn induced_subgraph_matches_brute_force((g, s) in arb_graph_and_set(50)) {
            let sub = g.induced_subgraph(&s);
            let mapped: Vec<(usize, usize)> = sub
                .graph
                .edges()
                .map(|(a, b)| (sub.to_parent[a], sub.to_parent[b]))
                .collect();
            let expected: Vec<(usize, usize)> = g
                .edges()
                .filter(|&(a, b)| s.contains(a) && s.contains(b))
                .collect();
            prop_assert_eq!(mapped, expected);
        }
    }
}
