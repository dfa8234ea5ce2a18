//! Approximate distance thresholds: sparse covers with the cluster
//! intersection labels, and padded partitions with the 2-bit id sketch.
//!
//! Logarithms are base 2 throughout, so `γ = min(δ, log₂(3/2)/β)` gives
//! `2^{-βγ} >= 2/3`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::eqlabel::{
    Decoder, EqLabel, LabelScheme, PairDecoder, Part, SketchDecoder, SketchFamily, Sketcher,
};
use crate::graph::INF;
use crate::rng::{derive_seed, rng_from_seed, Rng};
use crate::stats::Proportion;
use crate::{Error, Graph, Result, Vertex};

/// `log₂(3/2)`.
pub const LOG2_3_2: f64 = 0.584_962_500_721_156_2;

/// A family of clusters meant to satisfy the `(σ, τ, Δ)` cover conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    pub delta: u32,
    pub sigma: u32,
    /// Sorted vertex lists.
    pub clusters: Vec<Vec<Vertex>>,
    /// `membership[v]` lists the clusters containing `v`, ascending.
    pub membership: Vec<Vec<usize>>,
}

impl Cover {
    pub fn new(n: usize, delta: u32, sigma: u32, mut clusters: Vec<Vec<Vertex>>) -> Result<Self> {
        let mut membership = vec![Vec::new(); n];
        for (i, c) in clusters.iter_mut().enumerate() {
            c.sort_unstable();
            c.dedup();
            for &v in c.iter() {
                if v >= n {
                    return Err(Error::InvalidVertex { vertex: v, n });
                }
                membership[v].push(i);
            }
        }
        Ok(Self {
            delta,
            sigma,
            clusters,
            membership,
        })
    }

    pub fn n(&self) -> usize {
        self.membership.len()
    }

    /// Largest number of clusters sharing a vertex.
    pub fn tau(&self) -> usize {
        self.membership.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Radius `⌊Δ/σ⌋` of the balls that must fit in one cluster.
    pub fn ball_radius(&self) -> u32 {
        if self.sigma == 0 {
            0
        } else {
            self.delta / self.sigma
        }
    }
}

/// Depth per vertex from `root` in its tree and from the smallest vertex in
/// every other tree.
fn forest_depths(g: &Graph, root: Vertex) -> Vec<u32> {
    let mut depth = vec![INF; g.n()];
    for s in std::iter::once(root).chain(0..g.n()) {
        if depth[s] != INF {
            continue;
        }
        let d = g.bfs_bounded(s, INF);
        for v in 0..g.n() {
            if d[v] != INF {
                depth[v] = d[v];
            }
        }
    }
    depth
}

/// Two families of depth bands of height `Δ/2`, the second shifted by
/// `Δ/4`; each connected piece of a band is a cluster. Gives `σ = 8`,
/// `τ = 2` and strong diameter below `Δ`.
pub fn tree_sparse_cover(tree: &Graph, root: Vertex, delta: u32) -> Result<Cover> {
    if delta < 8 {
        return Err(Error::InvalidParameter(format!(
            "tree cover needs delta >= 8, got {delta}"
        )));
    }
    if !tree.is_forest() {
        return Err(Error::NotAcyclic);
    }
    tree.check_vertex(root)?;
    let depth = forest_depths(tree, root);
    let band = |j: u64, d: u32| (4 * d as u64 + j * delta as u64) / (2 * delta as u64);
    let mut clusters = Vec::new();
    for j in 0..2u64 {
        let mut seen = vec![false; tree.n()];
        for s in 0..tree.n() {
            if seen[s] {
                continue;
            }
            let b = band(j, depth[s]);
            let mut cluster = vec![s];
            seen[s] = true;
            let mut head = 0;
            while head < cluster.len() {
                let u = cluster[head];
                head += 1;
                for &w in tree.neighbors(u) {
                    if !seen[w] && band(j, depth[w]) == b {
                        seen[w] = true;
                        cluster.push(w);
                    }
                }
            }
            clusters.push(cluster);
        }
    }
    Cover::new(tree.n(), delta, 8, clusters)
}

/// Scans vertices by id and adds `B(u, ⌊Δ/2⌋)` whenever `B(u, ⌊Δ/4⌋)` is
/// not yet inside a cluster. `σ = 4`; multiplicity is only measured.
pub fn greedy_ball_cover(g: &Graph, delta: u32) -> Result<Cover> {
    if delta < 4 {
        return Err(Error::InvalidParameter(format!(
            "ball cover needs delta >= 4, got {delta}"
        )));
    }
    let n = g.n();
    let (small, big) = (delta / 4, delta / 2);
    let mut clusters: Vec<Vec<Vertex>> = Vec::new();
    let mut inside: Vec<Vec<usize>> = vec![Vec::new(); n];
    for u in 0..n {
        let ball = ball(g, u, small);
        let covered = inside[u]
            .iter()
            .any(|&c| ball.iter().all(|v| inside[*v].binary_search(&c).is_ok()));
        if covered {
            continue;
        }
        let c = clusters.len();
        let members = self::ball(g, u, big);
        for &v in &members {
            inside[v].push(c);
        }
        clusters.push(members);
    }
    Cover::new(n, delta, 4, clusters)
}

fn ball(g: &Graph, u: Vertex, radius: u32) -> Vec<Vertex> {
    let d = g.bfs_bounded(u, radius);
    (0..g.n()).filter(|&v| d[v] <= radius).collect()
}

/// One failed cover condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverViolation {
    /// Two members of a cluster farther apart than `Δ`.
    Diameter {
        cluster: usize,
        x: Vertex,
        y: Vertex,
        dist: Option<u32>,
    },
    /// No cluster holds `B(u, ⌊Δ/σ⌋)`.
    Ball { vertex: Vertex },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverAudit {
    pub passed: bool,
    pub violations: Vec<CoverViolation>,
    /// Largest weak diameter; `None` when some cluster spans components.
    pub max_weak_diameter: Option<u32>,
    pub tau: usize,
    /// Largest radius `ρ` with every `B(u, ρ)` inside one cluster; `None`
    /// when some vertex lies in no cluster or every ball of any radius fits.
    pub min_padding_radius: Option<u32>,
    /// `Δ / (ρ + 1)`: every ball of radius below `Δ/σ_eff` fits.
    pub effective_sigma: Option<f64>,
}

/// Exhaustive check of the weak-diameter and ball-containment conditions.
pub fn verify_cover(g: &Graph, cover: &Cover) -> Result<CoverAudit> {
    if cover.n() != g.n() {
        return Err(Error::GraphMismatch {
            predicate: g.n(),
            labels: cover.n(),
        });
    }
    let delta = cover.delta;
    let mut violations = Vec::new();
    let mut max_diam = Some(0u32);
    for (ci, c) in cover.clusters.iter().enumerate() {
        let mut bad: Option<CoverViolation> = None;
        for &x in c {
            let d = g.bfs_bounded(x, INF);
            for &y in c {
                let dist = d[y];
                max_diam = match (max_diam, dist) {
                    (Some(m), d) if d != INF => Some(m.max(d)),
                    _ => None,
                };
                if (dist == INF || dist > delta) && bad.is_none() {
                    bad = Some(CoverViolation::Diameter {
                        cluster: ci,
                        x,
                        y,
                        dist: (dist != INF).then_some(dist),
                    });
                }
            }
        }
        violations.extend(bad);
    }
    let need = cover.ball_radius();
    let mut min_pad: Option<u32> = None;
    let mut all_fit = true;
    for u in 0..g.n() {
        let d = g.bfs_bounded(u, INF);
        // Largest radius whose ball around u fits in one of u's clusters.
        let pad = cover.membership[u]
            .iter()
            .map(|&c| {
                let members = &cover.clusters[c];
                (0..g.n())
                    .filter(|v| d[*v] != INF && members.binary_search(v).is_err())
                    .map(|v| d[v] - 1)
                    .min()
                    .unwrap_or(INF)
            })
            .max();
        match pad {
            Some(p) if p >= need => {}
            _ => violations.push(CoverViolation::Ball { vertex: u }),
        }
        match pad {
            None => all_fit = false,
            Some(INF) => {}
            Some(p) => min_pad = Some(min_pad.map_or(p, |m| m.min(p))),
        }
    }
    if !all_fit {
        min_pad = None;
    }
    let effective_sigma = min_pad.map(|p| delta as f64 / (p as f64 + 1.0));
    Ok(CoverAudit {
        passed: violations.is_empty(),
        max_weak_diameter: max_diam,
        tau: cover.tau(),
        violations,
        min_padding_radius: min_pad,
        effective_sigma,
    })
}

/// Label of `x` is `(- | ids of the clusters containing x)`; the decoder
/// tests for a shared id.
pub fn sc_adt_labels(cover: &Cover) -> LabelScheme {
    let labels = cover
        .membership
        .iter()
        .map(|m| EqLabel::new(vec![Part::codes(m.iter().map(|&c| c as u64).collect())]))
        .collect();
    LabelScheme::new(labels, Decoder::AnyCommon)
}

/// Padding quality `(β, δ)` plus the exponential rate the partition
/// sampler uses. The rate is a sampler knob; `(β, δ)` is what the
/// resulting distribution satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaddedParams {
    pub beta: f64,
    pub delta: f64,
    pub shift_rate: f64,
}

impl PaddedParams {
    /// Uses `beta` as the shift rate too.
    pub fn new(beta: f64, delta: f64) -> Result<Self> {
        Self::with_rate(beta, delta, beta)
    }

    pub fn with_rate(beta: f64, delta: f64, shift_rate: f64) -> Result<Self> {
        if !(beta > 0.0 && delta > 0.0 && shift_rate > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "padded parameters must be positive: beta={beta}, delta={delta}, rate={shift_rate}"
            )));
        }
        Ok(Self {
            beta,
            delta,
            shift_rate,
        })
    }

    /// `min(δ, log₂(3/2)/β)`.
    pub fn gamma(&self) -> f64 {
        self.delta.min(LOG2_3_2 / self.beta)
    }

    /// `max(1/δ, β/log₂(3/2))`, which equals `1/γ`.
    pub fn alpha(&self) -> f64 {
        (1.0 / self.delta).max(self.beta / LOG2_3_2)
    }

    /// Partition diameter `r/γ` for threshold `r`.
    pub fn diameter_for(&self, r: u32) -> f64 {
        r as f64 / self.gamma()
    }
}

/// A random partition with per-cluster radius certificates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub delta: f64,
    pub cluster_of: Vec<usize>,
    /// Cluster ids are numbered by increasing center.
    pub centers: Vec<Vertex>,
    /// Hop distance from each vertex to its center.
    pub center_dist: Vec<u32>,
    /// Largest member distance per cluster.
    pub radii: Vec<u32>,
}

impl Partition {
    pub fn n(&self) -> usize {
        self.cluster_of.len()
    }

    pub fn clusters(&self) -> usize {
        self.centers.len()
    }

    pub fn max_radius(&self) -> u32 {
        self.radii.iter().copied().max().unwrap_or(0)
    }

    /// Every vertex is closer than `Δ/2` to its center.
    pub fn certified(&self) -> bool {
        (self.max_radius() as f64) < self.delta / 2.0
    }

    /// Members of each cluster, ascending.
    pub fn members(&self) -> Vec<Vec<Vertex>> {
        let mut out = vec![Vec::new(); self.clusters()];
        for (v, &c) in self.cluster_of.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// For each vertex, the largest `ρ` with `B(u, ρ)` inside its cluster
    /// ([`INF`] when the cluster is the whole component).
    pub fn padding_radii(&self, g: &Graph) -> Vec<u32> {
        let n = g.n();
        let mut dist = vec![INF; n];
        let mut queue = VecDeque::new();
        for u in 0..n {
            if g.neighbors(u)
                .iter()
                .any(|&w| self.cluster_of[w] != self.cluster_of[u])
            {
                dist[u] = 0;
                queue.push_back(u);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if dist[w] == INF {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// Shift from `Exp(rate)` conditioned on `[0, cap)`, by inverse CDF.
fn truncated_exponential(rng: &mut Rng, rate: f64, cap: f64) -> f64 {
    let mass = -(-rate * cap).exp_m1();
    loop {
        let u: f64 = rng.gen();
        let s = -(-u * mass).ln_1p() / rate;
        if s < cap {
            return s;
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapEntry {
    key: f64,
    center: Vertex,
    hops: u32,
    vertex: Vertex,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed for a min-heap on (key, center).
        other
            .key
            .total_cmp(&self.key)
            .then(other.center.cmp(&self.center))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn partition_from_shifts(g: &Graph, delta: f64, shifts: &[f64]) -> Partition {
    let n = g.n();
    let key = |hops: u32, c: Vertex| hops as f64 - shifts[c];
    let mut best: Vec<(f64, Vertex)> = (0..n).map(|u| (key(0, u), u)).collect();
    let mut done = vec![false; n];
    let mut hops = vec![0u32; n];
    let mut heap: BinaryHeap<HeapEntry> = (0..n)
        .map(|u| HeapEntry {
            key: best[u].0,
            center: u,
            hops: 0,
            vertex: u,
        })
        .collect();
    while let Some(e) = heap.pop() {
        if done[e.vertex] || (e.key, e.center) != best[e.vertex] {
            continue;
        }
        done[e.vertex] = true;
        hops[e.vertex] = e.hops;
        for &w in g.neighbors(e.vertex) {
            if done[w] {
                continue;
            }
            let cand = (key(e.hops + 1, e.center), e.center);
            if cand.0.total_cmp(&best[w].0).then(cand.1.cmp(&best[w].1)) == Ordering::Less {
                best[w] = cand;
                heap.push(HeapEntry {
                    key: cand.0,
                    center: cand.1,
                    hops: e.hops + 1,
                    vertex: w,
                });
            }
        }
    }
    let mut centers: Vec<Vertex> = best.iter().map(|&(_, c)| c).collect();
    centers.sort_unstable();
    centers.dedup();
    let mut index = vec![usize::MAX; n];
    for (i, &c) in centers.iter().enumerate() {
        index[c] = i;
    }
    let cluster_of: Vec<usize> = best.iter().map(|&(_, c)| index[c]).collect();
    let mut radii = vec![0u32; centers.len()];
    for v in 0..n {
        radii[cluster_of[v]] = radii[cluster_of[v]].max(hops[v]);
    }
    Partition {
        delta,
        cluster_of,
        centers,
        center_dist: hops,
        radii,
    }
}

fn sample_partition(g: &Graph, delta: f64, rate: f64, rng: &mut Rng) -> Partition {
    let shifts: Vec<f64> = (0..g.n())
        .map(|_| truncated_exponential(rng, rate / delta, delta / 2.0))
        .collect();
    partition_from_shifts(g, delta, &shifts)
}

/// Each vertex `u` draws `s_u ~ Exp(β/Δ)` truncated to `[0, Δ/2)`; `v` joins
/// the `u` minimizing `dist(u, v) - s_u`, ties to the smaller id.
pub fn padded_partition(g: &Graph, delta: f64, beta: f64, seed: u64) -> Result<Partition> {
    check_partition_args(delta, beta)?;
    Ok(sample_partition(g, delta, beta, &mut rng_from_seed(seed)))
}

fn check_partition_args(delta: f64, beta: f64) -> Result<()> {
    if !(delta >= 2.0) || !(beta > 0.0) || !delta.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "partition needs delta >= 2 and beta > 0, got delta={delta}, beta={beta}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaddingRow {
    pub gamma: f64,
    /// `⌊γΔ⌋`.
    pub radius: u32,
    pub worst_vertex: Vertex,
    /// Padding frequency of the worst vertex, with its Wilson interval.
    pub worst: Proportion,
    pub mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaddingTable {
    pub delta: f64,
    pub shift_rate: f64,
    pub trials: u64,
    pub seed: u64,
    pub rows: Vec<PaddingRow>,
}

impl PaddingTable {
    /// Whether worst-vertex probabilities never increase with `γ`.
    pub fn is_monotone(&self) -> bool {
        let mut rows: Vec<&PaddingRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
        rows.windows(2)
            .all(|w| w[1].worst.estimate <= w[0].worst.estimate)
    }
}

/// Empirical `Pr[B(u, γΔ) inside one cluster]`, worst vertex per `γ`.
pub fn measure_padding(
    g: &Graph,
    delta: f64,
    shift_rate: f64,
    gammas: &[f64],
    trials: u64,
    seed: u64,
) -> Result<PaddingTable> {
    check_partition_args(delta, shift_rate)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    if gammas.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::InvalidParameter("gamma values must be >= 0".into()));
    }
    let n = g.n();
    let radii: Vec<u32> = gammas.iter().map(|&x| (x * delta).floor() as u32).collect();
    let counts = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; n * radii.len()],
            |mut acc, t| {
                let mut rng = rng_from_seed(derive_seed(seed, t));
                let p = sample_partition(g, delta, shift_rate, &mut rng);
                let pad = p.padding_radii(g);
                for (u, &pu) in pad.iter().enumerate() {
                    for (i, &rad) in radii.iter().enumerate() {
                        acc[i * n + u] += (pu >= rad) as u64;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; n * radii.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let rows = gammas
        .iter()
        .zip(&radii)
        .enumerate()
        .map(|(i, (&gamma, &radius))| {
            let row = &counts[i * n..(i + 1) * n];
            let (worst_vertex, &low) = row
                .iter()
                .enumerate()
                .min_by_key(|&(_, c)| *c)
                .unwrap_or((0, &trials));
            let total: u64 = row.iter().sum();
            PaddingRow {
                gamma,
                radius,
                worst_vertex,
                worst: Proportion::new(low, trials),
                mean: total as f64 / (trials as f64 * n.max(1) as f64),
            }
        })
        .collect();
    Ok(PaddingTable {
        delta,
        shift_rate,
        trials,
        seed,
        rows,
    })
}

/// `(β, δ)` read off a padding table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaddingFit {
    pub params: PaddedParams,
    pub alpha: f64,
    pub gamma: f64,
}

/// For each candidate `δ` in the table, `β(δ)` is the smallest rate with
/// `lower(γ) >= 2^{-βγ}` for every tabulated `0 < γ <= δ`, using Wilson
/// lower bounds. Returns the candidate with the smallest `α`.
pub fn fit_padding(table: &PaddingTable) -> Result<PaddingFit> {
    let mut rows: Vec<&PaddingRow> = table.rows.iter().filter(|r| r.gamma > 0.0).collect();
    rows.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
    let mut best: Option<PaddingFit> = None;
    let mut beta = 0.0f64;
    for row in rows {
        if row.worst.lower <= 0.0 {
            break;
        }
        beta = beta.max(-row.worst.lower.log2() / row.gamma);
        // A fully padded table still needs a positive rate.
        let b = beta.max(f64::MIN_POSITIVE);
        let params = PaddedParams::with_rate(b, row.gamma, table.shift_rate)?;
        let alpha = params.alpha();
        if best.as_ref().map_or(true, |f| alpha < f.alpha) {
            best = Some(PaddingFit {
                params,
                alpha,
                gamma: params.gamma(),
            });
        }
    }
    best.ok_or_else(|| Error::Precondition("no tabulated gamma has positive padding".into()))
}

/// One measurement round of [`calibrate_padding`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRound {
    pub delta: f64,
    pub table: PaddingTable,
    pub fit: PaddingFit,
}

/// Measures padding at `Δ`, fits `(β, δ)`, moves to the sketch diameter
/// `r/γ` and repeats, so the last fit was measured at the scale the
/// sketch will use.
pub fn calibrate_padding(
    g: &Graph,
    r: u32,
    shift_rate: f64,
    start_delta: f64,
    rounds: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<CalibrationRound>> {
    if r == 0 || rounds == 0 {
        return Err(Error::InvalidParameter(
            "calibration needs r >= 1 and rounds >= 1".into(),
        ));
    }
    let mut delta = start_delta;
    let mut out: Vec<CalibrationRound> = Vec::with_capacity(rounds);
    for i in 0..rounds {
        let gammas: Vec<f64> = (1..=2 * r).map(|k| k as f64 / delta).collect();
        let table = measure_padding(
            g,
            delta,
            shift_rate,
            &gammas,
            trials,
            derive_seed(seed, i as u64),
        )?;
        let fit = fit_padding(&table)?;
        let next = fit.params.diameter_for(r);
        out.push(CalibrationRound { delta, table, fit });
        if (next - delta).abs() < 1e-9 * delta {
            break;
        }
        delta = next.max(2.0);
    }
    Ok(out)
}

/// The 2-bit padded-partition sketch family at partition diameter `Δ`.
pub struct PdsFamily<'a> {
    pub graph: &'a Graph,
    pub delta: f64,
    pub shift_rate: f64,
}

struct IdDecoder {
    ids: Vec<u8>,
}

impl PairDecoder for IdDecoder {
    fn n(&self) -> usize {
        self.ids.len()
    }

    fn decode_pair(&self, x: Vertex, y: Vertex) -> bool {
        self.ids[x] == self.ids[y]
    }
}

impl<'a> PdsFamily<'a> {
    /// `Δ = r/γ` for the given parameters.
    pub fn new(graph: &'a Graph, r: u32, params: &PaddedParams) -> Result<Self> {
        if !(params.beta > 0.0) || !(params.delta > 0.0) {
            return Err(Error::InvalidParameter(
                "beta and delta must be positive".into(),
            ));
        }
        if r == 0 {
            return Err(Error::InvalidParameter("threshold r must be >= 1".into()));
        }
        Self::with_diameter(graph, params.diameter_for(r), params.shift_rate)
    }

    pub fn with_diameter(graph: &'a Graph, delta: f64, shift_rate: f64) -> Result<Self> {
        check_partition_args(delta, shift_rate)?;
        Ok(Self {
            graph,
            delta,
            shift_rate,
        })
    }

    /// The partition and per-vertex ids in `{1, 2, 3}` drawn with `seed`.
    pub fn draw(&self, seed: u64) -> (Partition, Vec<u8>) {
        let mut rng = rng_from_seed(seed);
        let p = sample_partition(self.graph, self.delta, self.shift_rate, &mut rng);
        let cluster_ids: Vec<u8> = (0..p.clusters()).map(|_| rng.gen_range(1..=3)).collect();
        let ids = p.cluster_of.iter().map(|&c| cluster_ids[c]).collect();
        (p, ids)
    }
}

impl SketchFamily for PdsFamily<'_> {
    fn n(&self) -> usize {
        self.graph.n()
    }

    fn sample(&self, seed: u64) -> Box<dyn PairDecoder + '_> {
        Box::new(IdDecoder {
            ids: self.draw(seed).1,
        })
    }

    fn sketcher(&self, seed: u64) -> Sketcher {
        let sketches = self
            .draw(seed)
            .1
            .into_iter()
            .map(|id| {
                let mut b = BitString::new();
                b.push_uint(id as u64, 2);
                b
            })
            .collect();
        Sketcher::new(sketches, SketchDecoder::Equality { bits: 2 }, false)
    }

    fn one_sided(&self) -> bool {
        false
    }
}

/// Samples the 2-bit sketch for threshold `r`.
pub fn pds_adt_sketch(g: &Graph, r: u32, params: &PaddedParams, seed: u64) -> Result<Sketcher> {
    Ok(PdsFamily::new(g, r, params)?.sketcher(seed))
}

/// Classes with cited padded-decomposition parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinorClass {
    KtMinorFree {
        t: u32,
    },
    /// Euler genus.
    Genus {
        g: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassPreset {
    pub class: MinorClass,
    /// `t` of the `K_t`-minor-free preset actually used.
    pub t: u32,
    pub params: PaddedParams,
    pub alpha: f64,
}

/// Smallest `t` whose `K_t` has Euler genus `⌈(t-3)(t-4)/6⌉ > g`.
pub fn excluded_clique_for_genus(g: u32) -> u32 {
    (5..)
        .find(|&t: &u32| ((t - 3) * (t - 4)).div_ceil(6) > g)
        .expect("the clique genus grows without bound")
}

/// `β = 320t, δ = 1/160` for `K_t`-minor-free graphs (`t >= 4`); a surface
/// of Euler genus `g` uses the preset of a clique it cannot hold.
pub fn preset_params(class: MinorClass) -> Result<ClassPreset> {
    let t = match class {
        MinorClass::KtMinorFree { t } if t >= 4 => t,
        MinorClass::KtMinorFree { t } => {
            return Err(Error::InvalidParameter(format!(
                "minor preset needs t >= 4, got {t}"
            )))
        }
        MinorClass::Genus { g } => excluded_clique_for_genus(g),
    };
    let params = PaddedParams::new(320.0 * t as f64, 1.0 / 160.0)?;
    Ok(ClassPreset {
        class,
        t,
        params,
        alpha: params.alpha(),
    })
}
