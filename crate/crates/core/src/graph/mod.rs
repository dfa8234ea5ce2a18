//! Undirected simple graphs, exact BFS metrics and degeneracy orderings.
//!
//! A [`Graph`] is immutable after construction. Vertex ids are `0..n`,
//! every adjacency list is sorted, and edges are stored once as `(u, v)`
//! with `u < v` in lexicographic order.

mod construct;
mod generate;
mod io;

use std::collections::{BTreeMap, VecDeque};

pub use construct::{gadget_bintree, gadget_min_length, k_subdivide, Gadget, BRANCH_ROLE};
pub use generate::{generate, induced_subhypercube, GeneratorSpec};
pub use io::{read_edge_list, read_roles_json, roles_to_json, write_edge_list};

use crate::{Error, Result};

pub type Vertex = usize;

/// Distance value used for unreachable vertices.
pub const INF: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
    roles: BTreeMap<Vertex, String>,
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicates and out-of-range ids.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::InvalidVertex { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted_unique(n, list))
    }

    /// Like [`Graph::from_edges`] but silently drops loops and repeated edges.
    pub fn from_edges_dedup<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::InvalidVertex { vertex: w, n });
                }
            }
            if u != v {
                list.push((u.min(v), u.max(v)));
            }
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_sorted_unique(n, list))
    }

    fn from_sorted_unique(n: usize, edges: Vec<(Vertex, Vertex)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self {
            n,
            edges,
            adj,
            roles: BTreeMap::new(),
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_unique(n, Vec::new())
    }

    pub fn with_roles(mut self, roles: BTreeMap<Vertex, String>) -> Result<Self> {
        if let Some(&v) = roles.keys().find(|&&v| v >= self.n) {
            return Err(Error::InvalidVertex {
                vertex: v,
                n: self.n,
            });
        }
        self.roles = roles;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn roles(&self) -> &BTreeMap<Vertex, String> {
        &self.roles
    }

    pub fn role(&self, v: Vertex) -> Option<&str> {
        self.roles.get(&v).map(String::as_str)
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                n: self.n,
            })
        }
    }

    /// Spanning subgraph keeping exactly the edges selected by `keep`.
    pub fn spanning_subgraph<F: FnMut(usize, Vertex, Vertex) -> bool>(&self, mut keep: F) -> Graph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, &(u, v))| keep(i, u, v))
            .map(|(_, &e)| e)
            .collect();
        Self::from_sorted_unique(self.n, edges)
    }

    /// Subgraph induced by `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[Vertex]) -> Result<Graph> {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            if index[v] != usize::MAX {
                return Err(Error::InvalidParameter(format!("vertex {v} listed twice")));
            }
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        edges.sort_unstable();
        Ok(Self::from_sorted_unique(vertices.len(), edges))
    }

    /// Connected components as a vertex -> component id map, ids in order of
    /// their smallest vertex.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    pub fn is_forest(&self) -> bool {
        let (c, _) = self.components();
        self.m() + c == self.n
    }

    /// Exact BFS distances from `src`.
    pub fn bfs_distances(&self, src: Vertex) -> Result<DistRow> {
        self.check_vertex(src)?;
        Ok(DistRow {
            source: src,
            dist: self.bfs_bounded(src, INF),
        })
    }

    /// BFS distances from `src`, leaving vertices beyond `limit` at [`INF`].
    pub fn bfs_bounded(&self, src: Vertex, limit: u32) -> Vec<u32> {
        let mut dist = vec![INF; self.n];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            if du >= limit {
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w] == INF {
                    dist[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// All-pairs distances by repeated BFS.
    pub fn all_pairs(&self) -> DistanceMatrix {
        use rayon::prelude::*;
        let rows: Vec<Vec<u32>> = (0..self.n)
            .into_par_iter()
            .map(|s| self.bfs_bounded(s, INF))
            .collect();
        let mut data = Vec::with_capacity(self.n * self.n);
        for row in rows {
            data.extend(row);
        }
        DistanceMatrix { n: self.n, data }
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<u32> {
        let mut best = INF;
        let mut dist = vec![INF; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            dist.iter_mut().for_each(|d| *d = INF);
            dist[s] = 0;
            parent[s] = usize::MAX;
            queue.clear();
            queue.push_back(s);
            'bfs: while let Some(u) = queue.pop_front() {
                // Cycles closed from here have length at least 2 * dist[u].
                if 2 * dist[u] >= best {
                    break;
                }
                for &w in &self.adj[u] {
                    if dist[w] == INF {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        best = best.min(dist[u] + dist[w] + 1);
                        if best == 3 {
                            break 'bfs;
                        }
                    }
                }
            }
        }
        (best != INF).then_some(best)
    }

    /// Smallest-last ordering: repeatedly removes a minimum-degree vertex
    /// (smallest id among ties).
    pub fn degeneracy_order(&self) -> Degeneracy {
        let n = self.n;
        let mut degree: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let max_deg = degree.iter().copied().max().unwrap_or(0);
        let mut buckets: Vec<std::collections::BTreeSet<Vertex>> =
            vec![Default::default(); max_deg + 1];
        for v in 0..n {
            buckets[degree[v]].insert(v);
        }
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut d = 0;
        let mut low = 0;
        for _ in 0..n {
            while buckets[low].is_empty() {
                low += 1;
            }
            let v = buckets[low].pop_first().expect("nonempty bucket");
            d = d.max(low);
            removed[v] = true;
            order.push(v);
            for &w in &self.adj[v] {
                if !removed[w] {
                    let dw = degree[w];
                    buckets[dw].remove(&w);
                    buckets[dw - 1].insert(w);
                    degree[w] = dw - 1;
                }
            }
            low = low.saturating_sub(1);
        }
        let mut position = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let out = (0..n)
            .map(|v| {
                self.adj[v]
                    .iter()
                    .copied()
                    .filter(|&w| position[w] > position[v])
                    .collect()
            })
            .collect();
        Degeneracy {
            order,
            degeneracy: d,
            out_neighbors: out,
        }
    }
}

/// Result of [`Graph::degeneracy_order`].
#[derive(Clone, Debug)]
pub struct Degeneracy {
    /// Vertices in removal order.
    pub order: Vec<Vertex>,
    /// Maximum degree at removal time.
    pub degeneracy: usize,
    /// Each edge directed from its earlier-removed endpoint.
    pub out_neighbors: Vec<Vec<Vertex>>,
}

/// Shortest-path distances from one source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistRow {
    pub source: Vertex,
    /// [`INF`] marks unreachable vertices.
    pub dist: Vec<u32>,
}

impl DistRow {
    pub fn get(&self, v: Vertex) -> Option<u32> {
        let d = self.dist[v];
        (d != INF).then_some(d)
    }
}

/// Dense all-pairs distance table.
#[derive(Clone, Debug)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: Vertex, v: Vertex) -> u32 {
        self.data[u * self.n + v]
    }

    pub fn row(&self, u: Vertex) -> &[u32] {
        &self.data[u * self.n..(u + 1) * self.n]
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            Graph::from_edges(3, [(0, 0)]),
            Err(Error::SelfLoop(0))
        ));
        assert!(matches!(
            Graph::from_edges(3, [(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)]),
            Err(Error::InvalidVertex { vertex: 3, n: 3 })
        ));
        let g = Graph::from_edges_dedup(3, [(0, 1), (1, 0), (2, 2)]).unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn bfs_examples() {
        let row = path(3).bfs_distances(0).unwrap();
        assert_eq!(row.dist, vec![0, 1, 2]);
        let row = Graph::empty(2).bfs_distances(0).unwrap();
        assert_eq!(row.get(0), Some(0));
        assert_eq!(row.get(1), None);
        assert!(path(3).bfs_distances(3).is_err());
    }

    #[test]
    fn bfs_on_cube_is_hamming_weight() {
        let q3 = generate(&GeneratorSpec::Hypercube { d: 3 }).unwrap();
        let row = q3.bfs_distances(0).unwrap();
        for v in 0..8usize {
            assert_eq!(row.dist[v], v.count_ones());
        }
        assert_eq!(row.dist[0b111], 3);
    }

    #[test]
    fn girth_examples() {
        assert_eq!(cycle(6).girth(), Some(6));
        assert_eq!(path(10).girth(), None);
        assert_eq!(complete(4).girth(), Some(3));
        let petersen = generate(&GeneratorSpec::Petersen).unwrap();
        assert_eq!(petersen.girth(), Some(5));
        assert_eq!(
            generate(&GeneratorSpec::Hypercube { d: 4 })
                .unwrap()
                .girth(),
            Some(4)
        );
    }

    /// Shortest cycle by brute force: for each edge, distance between its
    /// endpoints once the edge is removed.
    fn girth_by_edge_removal(g: &Graph) -> Option<u32> {
        let mut best = None;
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            let h = g.spanning_subgraph(|j, _, _| j != i);
            if let Some(d) = h.bfs_distances(u).unwrap().get(v) {
                best = Some(best.map_or(d + 1, |b: u32| b.min(d + 1)));
            }
        }
        best
    }

    #[test]
    fn girth_matches_brute_force() {
        for seed in 0..20 {
            let g = generate(&GeneratorSpec::Gnp {
                n: 14,
                p: 0.2,
                seed,
            })
            .unwrap();
            assert_eq!(g.girth(), girth_by_edge_removal(&g), "seed {seed}");
        }
    }

    #[test]
    fn degeneracy_examples() {
        let tree = generate(&GeneratorSpec::RandomTree { n: 50, seed: 3 }).unwrap();
        let d = tree.degeneracy_order();
        assert_eq!(d.degeneracy, 1);
        assert!(d.out_neighbors.iter().all(|o| o.len() <= 1));

        assert_eq!(complete(4).degeneracy_order().degeneracy, 3);
        let q4 = generate(&GeneratorSpec::Hypercube { d: 4 }).unwrap();
        assert_eq!(q4.degeneracy_order().degeneracy, 4);
    }

    #[test]
    fn orientation_covers_every_edge_once() {
        let g = generate(&GeneratorSpec::Gnp {
            n: 60,
            p: 0.1,
            seed: 11,
        })
        .unwrap();
        let d = g.degeneracy_order();
        let mut count = 0;
        for (v, out) in d.out_neighbors.iter().enumerate() {
            assert!(out.len() <= d.degeneracy);
            for &w in out {
                assert!(g.has_edge(v, w));
                assert!(!d.out_neighbors[w].contains(&v));
                count += 1;
            }
        }
        assert_eq!(count, g.m());
    }

    #[test]
    fn induced_and_components() {
        let g = cycle(6);
        let h = g.induced(&[0, 1, 2, 4]).unwrap();
        assert_eq!(h.m(), 2);
        let (c, comp) = h.components();
        assert_eq!(c, 2);
        assert_eq!(comp, vec![0, 0, 0, 1]);
        assert!(h.is_forest());
        assert!(!g.is_forest());
    }
}
