//! Weak coloring numbers and exact distance-`(r, r)` labels.
//!
//! For a total order on `V`, `v` is weakly `k`-reachable from `x` if some
//! path of length at most `k` from `x` to `v` has `v` as its smallest
//! vertex. `S_k(x)` holds the vertices whose least such `k` (the `x`-rank)
//! is exactly `k`; `S_0(x) = {x}`. Two vertices are within distance `r` iff
//! `S_i(x) ∩ S_j(y) ≠ ∅` for some `i + j <= r`: the smallest vertex on a
//! shortest path witnesses it.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eqlabel::{Code, Decoder, EqLabel, LabelScheme, Part};
use crate::graph::INF;
use crate::stats::binomial;
use crate::{Error, Graph, Result, Vertex};

/// Largest graph accepted by [`OrderStrategy::ExactTiny`].
pub const EXACT_TINY_MAX_N: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderStrategy {
    /// Reverse smallest-last removal order.
    Degeneracy,
    /// Nondecreasing BFS distance from `root`, ties by id; further
    /// components follow, each from its smallest vertex.
    Bfs { root: Vertex },
    /// Brute force over all orders, minimizing `wcol_r`.
    ExactTiny { r: u32 },
}

/// Returns the vertices from smallest to largest in the chosen order.
pub fn choose_order(g: &Graph, strategy: &OrderStrategy) -> Result<Vec<Vertex>> {
    match *strategy {
        OrderStrategy::Degeneracy => {
            let mut order = g.degeneracy_order().order;
            order.reverse();
            Ok(order)
        }
        OrderStrategy::Bfs { root } => {
            g.check_vertex(root)?;
            Ok(bfs_order(g, root))
        }
        OrderStrategy::ExactTiny { r } => exact_order(g, r),
    }
}

fn bfs_order(g: &Graph, root: Vertex) -> Vec<Vertex> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let starts = std::iter::once(root).chain(0..n);
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let first = order.len();
        order.push(s);
        let mut head = first;
        // Level by level so ties inside a layer go by id.
        while head < order.len() {
            let end = order.len();
            let mut next = Vec::new();
            for &u in &order[head..end] {
                for &w in g.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        next.push(w);
                    }
                }
            }
            next.sort_unstable();
            order.extend(next);
            head = end;
        }
    }
    order
}

fn exact_order(g: &Graph, r: u32) -> Result<Vec<Vertex>> {
    let n = g.n();
    if n > EXACT_TINY_MAX_N {
        return Err(Error::SizeGuard(format!(
            "exact order search needs n <= {EXACT_TINY_MAX_N}, got {n}"
        )));
    }
    let mut perm: Vec<Vertex> = (0..n).collect();
    let mut best = (usize::MAX, perm.clone());
    loop {
        let w = wcol_value(g, &perm, r);
        if w < best.0 {
            best = (w, perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(best.1)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len())
        .rev()
        .find(|&j| p[j] > p[i - 1])
        .expect("pivot has a successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn positions(n: usize, order: &[Vertex]) -> Result<Vec<usize>> {
    let mut pos = vec![usize::MAX; n];
    if order.len() != n {
        return Err(Error::InvalidParameter(format!(
            "order has {} vertices, graph has {n}",
            order.len()
        )));
    }
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::InvalidParameter("order is not a permutation".into()));
        }
        pos[v] = i;
    }
    Ok(pos)
}

struct Scratch {
    dist: Vec<u32>,
    touched: Vec<Vertex>,
    queue: VecDeque<Vertex>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self {
            dist: vec![INF; n],
            touched: Vec::new(),
            queue: VecDeque::new(),
        }
    }
}

/// Vertices reaching `v` weakly within `r`, with their `x`-rank of `v`.
fn reached_from(
    g: &Graph,
    pos: &[usize],
    v: Vertex,
    r: u32,
    s: &mut Scratch,
) -> Vec<(Vertex, u32)> {
    s.dist[v] = 0;
    s.touched.push(v);
    s.queue.push_back(v);
    while let Some(u) = s.queue.pop_front() {
        let du = s.dist[u];
        if du == r {
            continue;
        }
        for &w in g.neighbors(u) {
            if s.dist[w] == INF && pos[w] > pos[v] {
                s.dist[w] = du + 1;
                s.touched.push(w);
                s.queue.push_back(w);
            }
        }
    }
    let out = s.touched.iter().map(|&u| (u, s.dist[u])).collect();
    for &u in &s.touched {
        s.dist[u] = INF;
    }
    s.touched.clear();
    out
}

fn wcol_value(g: &Graph, order: &[Vertex], r: u32) -> usize {
    let pos = positions(g.n(), order).expect("internal orders are permutations");
    let mut count = vec![0usize; g.n()];
    let mut scratch = Scratch::new(g.n());
    for v in 0..g.n() {
        for (u, _) in reached_from(g, &pos, v, r, &mut scratch) {
            count[u] += 1;
        }
    }
    count.into_iter().max().unwrap_or(0)
}

/// Weak reachability sets for one order and radius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WcolResult {
    pub r: u32,
    /// Smallest vertex first.
    pub order: Vec<Vertex>,
    /// `reach[x][k]` is `S_k(x)`, sorted by vertex id; `reach[x][0] = [x]`.
    pub reach: Vec<Vec<Vec<Vertex>>>,
    /// `max_x Σ_k |S_k(x)|`, counting `x` itself.
    pub wcol: usize,
}

impl WcolResult {
    pub fn reach_size(&self, x: Vertex) -> usize {
        self.reach[x].iter().map(Vec::len).sum()
    }

    /// `x`-rank of `v`, if `v` is weakly `r`-reachable from `x`.
    pub fn rank(&self, x: Vertex, v: Vertex) -> Option<u32> {
        self.reach[x]
            .iter()
            .position(|s| s.binary_search(&v).is_ok())
            .map(|k| k as u32)
    }
}

pub fn compute_wcol(g: &Graph, order: &[Vertex], r: u32) -> Result<WcolResult> {
    let n = g.n();
    let pos = positions(n, order)?;
    let found: Vec<Vec<(Vertex, u32)>> = (0..n)
        .into_par_iter()
        .map_init(|| Scratch::new(n), |s, v| reached_from(g, &pos, v, r, s))
        .collect();
    let mut reach = vec![vec![Vec::new(); r as usize + 1]; n];
    for (v, hits) in found.into_iter().enumerate() {
        for (u, k) in hits {
            reach[u][k as usize].push(v);
        }
    }
    for sets in &mut reach {
        for s in sets.iter_mut() {
            s.sort_unstable();
        }
    }
    let wcol = reach
        .iter()
        .map(|sets| sets.iter().map(Vec::len).sum())
        .max()
        .unwrap_or(0);
    Ok(WcolResult {
        r,
        order: order.to_vec(),
        reach,
        wcol,
    })
}

/// Label of `x` is `(- | S_0(x)), ..., (- | S_r(x))` with the distance
/// decoder; exact for `dist <= r`.
pub fn build_distance_labels(g: &Graph, r: u32, order: &[Vertex]) -> Result<LabelScheme> {
    let w = compute_wcol(g, order, r)?;
    Ok(labels_from_wcol(&w))
}

pub fn labels_from_wcol(w: &WcolResult) -> LabelScheme {
    let labels = w
        .reach
        .iter()
        .map(|sets| {
            EqLabel::new(
                sets.iter()
                    .map(|s| Part::codes(s.iter().map(|&v| v as Code).collect()))
                    .collect(),
            )
        })
        .collect();
    LabelScheme::new(labels, Decoder::Distance { r: w.r })
}

/// One window of consecutive BFS layers inside one component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    /// Global window id, used to namespace codes.
    pub id: u64,
    pub component: usize,
    /// Index `i` of the window inside its component; covers layers
    /// `i*r + 1 ..= (i + 2)*r`.
    pub index: u32,
    /// Member vertices in increasing id; local vertex `j` is `vertices[j]`.
    pub vertices: Vec<Vertex>,
    /// Reach sets over local ids.
    pub wcol: WcolResult,
}

/// BFS-layered distance labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredScheme {
    pub r: u32,
    pub n: usize,
    /// BFS layer from the component's root, starting at 1.
    pub layer_of: Vec<u32>,
    pub root_of: Vec<Vertex>,
    /// Indices into `windows`, at most two per vertex.
    pub window_ids: Vec<Vec<usize>>,
    pub windows: Vec<Window>,
}

impl LayeredScheme {
    /// Layers from `root` in its component and from the smallest vertex in
    /// every other component.
    pub fn build(g: &Graph, r: u32, root: Vertex) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidParameter("layered labels need r >= 1".into()));
        }
        g.check_vertex(root)?;
        let n = g.n();
        let (_, comp) = g.components();
        let mut layer_of = vec![0u32; n];
        let mut root_of = vec![usize::MAX; n];
        let mut roots = Vec::new();
        for s in std::iter::once(root).chain(0..n) {
            if root_of[s] != usize::MAX {
                continue;
            }
            roots.push(s);
            let dist = g.bfs_bounded(s, INF);
            for v in 0..n {
                if dist[v] != INF {
                    layer_of[v] = dist[v] + 1;
                    root_of[v] = s;
                }
            }
        }
        let mut windows = Vec::new();
        let mut window_ids = vec![Vec::new(); n];
        for &s in &roots {
            let members: Vec<Vertex> = (0..n).filter(|&v| root_of[v] == s).collect();
            let top = members.iter().map(|&v| layer_of[v]).max().unwrap_or(1);
            let count = top.div_ceil(r).saturating_sub(1).max(1);
            for i in 0..count {
                let (lo, hi) = (i * r + 1, (i + 2) * r);
                let vertices: Vec<Vertex> = members
                    .iter()
                    .copied()
                    .filter(|&v| (lo..=hi).contains(&layer_of[v]))
                    .collect();
                let sub = g.induced(&vertices)?;
                let order = choose_order(&sub, &OrderStrategy::Degeneracy)?;
                let wcol = compute_wcol(&sub, &order, r)?;
                let idx = windows.len();
                for &v in &vertices {
                    window_ids[v].push(idx);
                }
                windows.push(Window {
                    id: idx as u64,
                    component: comp[s],
                    index: i,
                    vertices,
                    wcol,
                });
            }
        }
        Ok(Self {
            r,
            n,
            layer_of,
            root_of,
            window_ids,
            windows,
        })
    }

    pub fn max_windows_per_vertex(&self) -> usize {
        self.window_ids.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_window_wcol(&self) -> usize {
        self.windows.iter().map(|w| w.wcol.wcol).max().unwrap_or(0)
    }

    /// One block of `r + 1` rank parts per window; the code of a vertex in
    /// window `w` is `w * n + vertex`.
    pub fn labels(&self) -> LabelScheme {
        let n = self.n as Code;
        let mut labels = vec![EqLabel::default(); self.n];
        for w in &self.windows {
            for (local, &v) in w.vertices.iter().enumerate() {
                for set in &w.wcol.reach[local] {
                    let codes = set
                        .iter()
                        .map(|&j| w.id * n + w.vertices[j] as Code)
                        .collect();
                    labels[v].parts.push(Part::codes(codes));
                }
            }
        }
        LabelScheme::new(labels, Decoder::Layered { r: self.r })
    }
}

pub fn build_layered_labels(g: &Graph, r: u32, root: Vertex) -> Result<LabelScheme> {
    Ok(LayeredScheme::build(g, r, root)?.labels())
}

/// Graph classes with closed-form `wcol_r` bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SparseClass {
    Planar,
    KtMinorFree { t: u32 },
}

/// `(2r+1)·C(r+2, 2)` for planar graphs and `C(r+t-2, t-2)·(t-3)·(2r+2)`
/// for `K_t`-minor-free graphs.
pub fn wcol_upper_bound(class: SparseClass, r: u32) -> Result<u128> {
    let r = r as u64;
    match class {
        SparseClass::Planar => Ok((2 * r as u128 + 1) * binomial(r + 2, 2)),
        SparseClass::KtMinorFree { t } => {
            if t < 3 {
                return Err(Error::InvalidParameter(format!(
                    "K_t bound needs t >= 3, got {t}"
                )));
            }
            let t = t as u64;
            Ok(binomial(r + t - 2, t - 2) * (t as u128 - 3) * (2 * r as u128 + 2))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{cycle, path};
    use crate::graph::{generate, GeneratorSpec};

    fn assert_exact(scheme: &LabelScheme, g: &Graph, r: u32) {
        let d = g.all_pairs();
        for x in 0..g.n() {
            for y in 0..g.n() {
                if x != y {
                    assert_eq!(
                        scheme.decode(x, y).unwrap(),
                        d.get(x, y) <= r,
                        "pair {x},{y} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn bfs_order_of_path_is_path_order() {
        assert_eq!(
            choose_order(&path(5), &OrderStrategy::Bfs { root: 0 }).unwrap(),
            vec![0, 1, 2, 3, 4]
        );
        let g = Graph::from_edges(5, [(0, 3), (0, 1), (2, 4)]).unwrap();
        assert_eq!(
            choose_order(&g, &OrderStrategy::Bfs { root: 0 }).unwrap(),
            vec![0, 1, 3, 2, 4]
        );
    }

    #[test]
    fn p3_reach_sets() {
        let w = compute_wcol(&path(3), &[0, 1, 2], 2).unwrap();
        assert_eq!(w.reach[2], vec![vec![2], vec![1], vec![0]]);
        assert_eq!(w.wcol, 3);
        assert_eq!(w.rank(2, 0), Some(2));
        assert_eq!(w.rank(0, 2), None);
    }

    #[test]
    fn edgeless_and_star() {
        let w = compute_wcol(&Graph::empty(4), &[3, 1, 0, 2], 5).unwrap();
        assert_eq!(w.wcol, 1);
        let star = generate(&GeneratorSpec::Star { n: 6 }).unwrap();
        let w = compute_wcol(&star, &[0, 1, 2, 3, 4, 5], 1).unwrap();
        assert_eq!(w.wcol, 2);
    }

    #[test]
    fn c5_exact_order() {
        let c5 = cycle(5);
        let order = choose_order(&c5, &OrderStrategy::ExactTiny { r: 2 }).unwrap();
        // x counts itself; without it every order still leaves someone 3.
        assert_eq!(compute_wcol(&c5, &order, 2).unwrap().wcol, 4);
        assert!(choose_order(&cycle(10), &OrderStrategy::ExactTiny { r: 1 }).is_err());
    }

    #[test]
    fn exact_order_matches_brute_force_minimum() {
        let g = generate(&GeneratorSpec::Petersen)
            .unwrap()
            .induced(&[0, 1, 2, 3, 4, 5, 6])
            .unwrap();
        let best = choose_order(&g, &OrderStrategy::ExactTiny { r: 2 }).unwrap();
        let w = compute_wcol(&g, &best, 2).unwrap().wcol;
        let mut perm: Vec<usize> = (0..7).collect();
        loop {
            assert!(compute_wcol(&g, &perm, 2).unwrap().wcol >= w);
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }

    #[test]
    fn reach_sets_are_disjoint_and_monotone() {
        let g = generate(&GeneratorSpec::Gnp {
            n: 60,
            p: 0.06,
            seed: 4,
        })
        .unwrap();
        let order = choose_order(&g, &OrderStrategy::Degeneracy).unwrap();
        let mut last = 0;
        for r in 0..5 {
            let w = compute_wcol(&g, &order, r).unwrap();
            assert!(w.wcol >= last);
            last = w.wcol;
            for sets in &w.reach {
                let mut all: Vec<_> = sets.iter().flatten().copied().collect();
                let len = all.len();
                all.sort_unstable();
                all.dedup();
                assert_eq!(all.len(), len);
            }
        }
    }

    #[test]
    fn tree_bfs_order_bound() {
        for seed in 0..20 {
            let t = generate(&GeneratorSpec::RandomTree { n: 80, seed }).unwrap();
            let order = choose_order(&t, &OrderStrategy::Bfs { root: 0 }).unwrap();
            for r in 1..5 {
                assert!(compute_wcol(&t, &order, r).unwrap().wcol <= r as usize + 1);
            }
        }
    }

    #[test]
    fn distance_labels_are_exact() {
        let g = generate(&GeneratorSpec::Gnp {
            n: 50,
            p: 0.05,
            seed: 9,
        })
        .unwrap();
        let order = choose_order(&g, &OrderStrategy::Degeneracy).unwrap();
        for r in 0..5 {
            assert_exact(&build_distance_labels(&g, r, &order).unwrap(), &g, r);
        }
        let p10 = path(10);
        let s = build_distance_labels(&p10, 5, &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9]).unwrap();
        assert!(!s.decode(0, 9).unwrap());
        assert!(s.decode(0, 1).unwrap());
    }

    #[test]
    fn layered_labels_are_exact() {
        let grid = generate(&GeneratorSpec::Grid { w: 9, h: 7 }).unwrap();
        for r in [1, 2, 3] {
            let l = LayeredScheme::build(&grid, r, 0).unwrap();
            assert!(l.max_windows_per_vertex() <= 2);
            assert_exact(&l.labels(), &grid, r);
        }
        let p = path(12);
        let l = LayeredScheme::build(&p, 2, 0).unwrap();
        assert!(l.window_ids.iter().all(|w| (1..=2).contains(&w.len())));
        assert!(LayeredScheme::build(&p, 0, 0).is_err());
    }

    #[test]
    fn layered_labels_on_disconnected_graph() {
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (3, 4), (4, 5), (5, 6)]).unwrap();
        let s = build_layered_labels(&g, 2, 4).unwrap();
        assert_exact(&s, &g, 2);
        assert!(!s.decode(2, 3).unwrap());
    }

    #[test]
    fn closed_form_bounds() {
        assert_eq!(wcol_upper_bound(SparseClass::Planar, 1).unwrap(), 9);
        assert_eq!(wcol_upper_bound(SparseClass::Planar, 2).unwrap(), 30);
        assert_eq!(
            wcol_upper_bound(SparseClass::KtMinorFree { t: 5 }, 1).unwrap(),
            32
        );
        assert!(wcol_upper_bound(SparseClass::KtMinorFree { t: 2 }, 1).is_err());
    }
}
