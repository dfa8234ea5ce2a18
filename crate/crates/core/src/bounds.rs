//! Exhaustive verifiers and calculators for the lower-bound arguments.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{gadget_bintree, INF};
use crate::rng::{derive_seed, rng_from_seed};
use crate::stats::{binomial, ceil_log2};
use crate::{Error, Graph, Result, Vertex};

/// Largest `s·n` accepted by [`counting_verifier`].
pub const MAX_LABEL_BITS: usize = 20;
/// Largest edge count accepted by [`counting_verifier`].
pub const MAX_EDGES: usize = 10;

/// A deterministic decoder on pairs of `s`-bit strings, as a truth table
/// indexed by `(a << s) | b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoderTable {
    pub s: u32,
    pub table: Vec<bool>,
}

impl DecoderTable {
    pub fn new(s: u32, table: Vec<bool>) -> Result<Self> {
        if s > 10 || table.len() != 1usize << (2 * s) {
            return Err(Error::InvalidParameter(format!(
                "decoder table for s = {s} needs {} entries",
                1u64 << (2 * s.min(31))
            )));
        }
        Ok(Self { s, table })
    }

    /// Uniformly random table.
    pub fn random(s: u32, seed: u64) -> Result<Self> {
        let mut rng = rng_from_seed(seed);
        let len = 1usize << (2 * s.min(10));
        Self::new(s, (0..len).map(|_| rng.gen()).collect())
    }

    pub fn from_fn<F: Fn(u32, u32) -> bool>(s: u32, f: F) -> Result<Self> {
        let len = 1u32 << (2 * s.min(10));
        Self::new(s, (0..len).map(|i| f(i >> s, i & ((1 << s) - 1))).collect())
    }

    pub fn eval(&self, a: u32, b: u32) -> bool {
        self.table[((a << self.s) | b) as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingReport {
    pub n: usize,
    pub m: usize,
    pub s: u32,
    pub delta: f64,
    /// `⌊δm⌋`: the most disagreements a good `ρ` may have.
    pub max_errors: usize,
    /// Number of spanning subgraphs each `ρ` is good for.
    pub good_counts: Vec<u64>,
    pub max_good: u64,
    /// `Σ_{i <= ⌊δm⌋} C(m, i)`.
    pub hamming_bound: u64,
    /// `2^{m/2}`.
    pub half_bound: f64,
    pub within_hamming_bound: bool,
    pub within_half_bound: bool,
    /// Spanning subgraphs with at least one good `ρ`.
    pub covered_subgraphs: u64,
    /// `2^{sn} · max_good < 2^m`: this decoder cannot serve every subgraph.
    pub conclusion: bool,
}

/// Enumerates every labelling `ρ ∈ {0,1}^{sn}` and every spanning subgraph
/// `H ⊆ g`, counting the `H` for which `ρ` is good: the decoder agrees with
/// adjacency in `H` on at least `(1-δ)m` edges of `g`.
///
/// This covers one fixed deterministic decoder, not every randomized
/// scheme.
pub fn counting_verifier(g: &Graph, delta: f64, decoder: &DecoderTable) -> Result<CountingReport> {
    let (n, m, s) = (g.n(), g.m(), decoder.s);
    let bits = s as usize * n;
    if bits > MAX_LABEL_BITS || m > MAX_EDGES {
        return Err(Error::SizeGuard(format!(
            "exhaustive count needs s*n <= {MAX_LABEL_BITS} and m <= {MAX_EDGES}, got s*n = {bits}, m = {m}"
        )));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in [0, 1], got {delta}"
        )));
    }
    let max_errors = (delta * m as f64 + 1e-9).floor() as usize;
    let mask = (1u32 << s) - 1;
    let edges = g.edges();
    // Decoder output on the edges of g, one bit per edge, for each labelling.
    let outputs: Vec<u32> = (0..1u64 << bits)
        .into_par_iter()
        .map(|rho| {
            let label = |v: Vertex| ((rho >> (v * s as usize)) as u32) & mask;
            edges
                .iter()
                .enumerate()
                .map(|(i, &(u, v))| (decoder.eval(label(u), label(v)) as u32) << i)
                .sum()
        })
        .collect();
    let good = |f: u32, h: u32| (f ^ h).count_ones() as usize <= max_errors;
    let good_counts: Vec<u64> = outputs
        .par_iter()
        .map(|&f| (0..1u32 << m).filter(|&h| good(f, h)).count() as u64)
        .collect();
    let mut covered = vec![false; 1 << m];
    for &f in &outputs {
        for h in 0..1u32 << m {
            covered[h as usize] |= good(f, h);
        }
    }
    let max_good = good_counts.iter().copied().max().unwrap_or(0);
    let hamming_bound: u64 = (0..=max_errors as u64)
        .map(|i| binomial(m as u64, i) as u64)
        .sum();
    let half_bound = 2f64.powf(m as f64 / 2.0);
    let labellings = 1u128 << bits;
    Ok(CountingReport {
        n,
        m,
        s,
        delta,
        max_errors,
        max_good,
        hamming_bound,
        half_bound,
        within_hamming_bound: max_good <= hamming_bound,
        within_half_bound: max_good as f64 <= half_bound,
        covered_subgraphs: covered.iter().filter(|&&c| c).count() as u64,
        conclusion: labellings * (max_good as u128) < 1u128 << m,
        good_counts,
    })
}

/// `n^{1/α} / 9`.
pub fn adt_size_lower_bound(n: f64, alpha: f64) -> Result<f64> {
    if !(alpha >= 2.0) || !(n >= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "size bound needs alpha >= 2 and n >= 2, got alpha = {alpha}, n = {n}"
        )));
    }
    Ok(n.powf(1.0 / alpha) / 9.0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthViolation {
    pub trial: u64,
    pub u: Vertex,
    pub v: Vertex,
    pub dist: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthAudit {
    pub alpha: u32,
    pub girth: Option<u32>,
    pub trials: u64,
    pub seed: u64,
    /// Removed edges checked over all trials.
    pub removed_checked: u64,
    /// Smallest distance seen between the ends of a removed edge.
    pub min_removed_dist: Option<u32>,
    pub violations: Vec<GirthViolation>,
}

/// Keeps each edge with probability 1/2 and checks that the ends of every
/// dropped edge end up farther than `α` apart.
pub fn girth_gap_audit(g: &Graph, alpha: u32, trials: u64, seed: u64) -> Result<GirthAudit> {
    let girth = g.girth();
    if let Some(girth) = girth {
        if girth <= alpha + 1 {
            return Err(Error::Precondition(format!(
                "girth {girth} must exceed alpha + 1 = {}",
                alpha + 1
            )));
        }
    }
    let per_trial: Vec<(u64, Option<u32>, Vec<GirthViolation>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_from_seed(derive_seed(seed, t));
            let keep: Vec<bool> = (0..g.m()).map(|_| rng.gen_bool(0.5)).collect();
            let h = g.spanning_subgraph(|i, _, _| keep[i]);
            let mut checked = 0;
            let mut min_dist: Option<u32> = None;
            let mut bad = Vec::new();
            for (i, &(u, v)) in g.edges().iter().enumerate() {
                if keep[i] {
                    continue;
                }
                checked += 1;
                let d = h.bfs_bounded(u, alpha)[v];
                if d != INF {
                    bad.push(GirthViolation {
                        trial: t,
                        u,
                        v,
                        dist: d,
                    });
                    min_dist = Some(min_dist.map_or(d, |m| m.min(d)));
                } else {
                    let full = h.bfs_bounded(u, INF)[v];
                    if full != INF {
                        min_dist = Some(min_dist.map_or(full, |m| m.min(full)));
                    }
                }
            }
            (checked, min_dist, bad)
        })
        .collect();
    let mut audit = GirthAudit {
        alpha,
        girth,
        trials,
        seed,
        removed_checked: 0,
        min_removed_dist: None,
        violations: Vec::new(),
    };
    for (checked, min_dist, bad) in per_trial {
        audit.removed_checked += checked;
        if let Some(d) = min_dist {
            audit.min_removed_dist = Some(audit.min_removed_dist.map_or(d, |m| m.min(d)));
        }
        audit.violations.extend(bad);
    }
    Ok(audit)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GadgetAudit {
    pub n_input: usize,
    pub n_output: usize,
    pub ell: usize,
    /// `ℓ - 2⌈log₂ N⌉`.
    pub lower_factor: usize,
    pub max_degree: usize,
    pub pairs_checked: usize,
    pub sandwich_violations: Vec<(Vertex, Vertex)>,
    pub edge_violations: Vec<(Vertex, Vertex)>,
    /// `8 N² log₂ N`.
    pub size_bound: f64,
    pub within_size_bound: bool,
    pub passed: bool,
}

/// Builds `G[ℓ]` and checks the distance sandwich on every pair, exact root
/// distance `ℓ` on edges, degree at most 3 and the size bound.
pub fn gadget_audit(g: &Graph, ell: usize) -> Result<GadgetAudit> {
    let gadget = gadget_bintree(g, ell)?;
    let h = &gadget.graph;
    let big_n = g.n();
    let lower = ell.saturating_sub(2 * ceil_log2(big_n.max(1)));
    let dg = g.all_pairs();
    let rows: Vec<Vec<u32>> = (0..big_n)
        .into_par_iter()
        .map(|u| {
            let d = h.bfs_bounded(gadget.roots[u], INF);
            gadget.roots.iter().map(|&r| d[r]).collect()
        })
        .collect();
    let mut sandwich = Vec::new();
    let mut edge_bad = Vec::new();
    let mut pairs = 0;
    for u in 0..big_n {
        for v in u + 1..big_n {
            pairs += 1;
            let (d, dh) = (dg.get(u, v), rows[u][v]);
            let ok = if d == INF {
                dh == INF
            } else {
                dh != INF
                    && (lower as u64) * (d as u64) <= dh as u64
                    && dh as u64 <= (ell as u64) * (d as u64)
            };
            if !ok {
                sandwich.push((u, v));
            }
            if d == 1 && dh as usize != ell {
                edge_bad.push((u, v));
            }
        }
    }
    let size_bound = 8.0 * (big_n as f64).powi(2) * (big_n as f64).log2();
    let within_size_bound = big_n < 2 || h.n() as f64 <= size_bound;
    let max_degree = h.max_degree();
    Ok(GadgetAudit {
        n_input: big_n,
        n_output: h.n(),
        ell,
        lower_factor: lower,
        max_degree,
        pairs_checked: pairs,
        passed: sandwich.is_empty() && edge_bad.is_empty() && max_degree <= 3 && within_size_bound,
        sandwich_violations: sandwich,
        edge_violations: edge_bad,
        size_bound,
        within_size_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{complete, cycle};
    use crate::graph::{generate, GeneratorSpec};

    #[test]
    fn k4_counting_core() {
        let k4 = complete(4);
        for seed in 0..20 {
            let d = DecoderTable::random(1, seed).unwrap();
            let r = counting_verifier(&k4, 1.0 / 6.0, &d).unwrap();
            assert_eq!(r.max_errors, 1);
            assert_eq!(r.hamming_bound, 7);
            assert_eq!(r.max_good, 7);
            assert!(r.within_half_bound && r.half_bound == 8.0);
            assert!(!r.conclusion);
            assert_eq!(r.good_counts.len(), 16);
        }
    }

    #[test]
    fn exact_agreement_and_empty_graph() {
        let d = DecoderTable::from_fn(1, |a, b| a == b).unwrap();
        let r = counting_verifier(&cycle(5), 0.0, &d).unwrap();
        assert_eq!(r.max_good, 1);
        assert!(r.covered_subgraphs <= 32);
        let r = counting_verifier(&Graph::empty(3), 0.5, &d).unwrap();
        assert_eq!((r.m, r.max_good), (0, 1));
        assert!(r.good_counts.iter().all(|&c| c == 1));
    }

    #[test]
    fn counting_guard() {
        let d = DecoderTable::random(2, 0).unwrap();
        assert!(matches!(
            counting_verifier(&complete(11), 0.1, &d),
            Err(Error::SizeGuard(_))
        ));
        assert!(matches!(
            counting_verifier(&complete(6), 0.1, &DecoderTable::random(1, 0).unwrap()),
            Err(Error::SizeGuard(_))
        ));
        assert!(DecoderTable::new(1, vec![true; 3]).is_err());
    }

    #[test]
    fn size_lower_bound_values() {
        assert!((adt_size_lower_bound(512.0, 2.0).unwrap() - 512f64.sqrt() / 9.0).abs() < 1e-12);
        assert!((adt_size_lower_bound(2.0, 2.0).unwrap() - 0.157).abs() < 1e-3);
        assert!((adt_size_lower_bound(1e6, 3.0).unwrap() - 100.0 / 9.0).abs() < 1e-9);
        assert!(adt_size_lower_bound(10.0, 1.5).is_err());
        assert!(adt_size_lower_bound(1.0, 2.0).is_err());
    }

    #[test]
    fn girth_audit_cases() {
        let petersen = generate(&GeneratorSpec::Petersen).unwrap();
        let a = girth_gap_audit(&petersen, 3, 200, 1).unwrap();
        assert!(a.violations.is_empty());
        assert!(a.removed_checked > 0);
        let c6 = cycle(6);
        let a = girth_gap_audit(&c6, 4, 50, 2).unwrap();
        assert!(a.violations.is_empty());
        assert!(a.min_removed_dist.map_or(true, |d| d == 5));
        let tree = generate(&GeneratorSpec::RandomTree { n: 30, seed: 4 }).unwrap();
        let a = girth_gap_audit(&tree, 1000, 20, 3).unwrap();
        assert!(a.violations.is_empty() && a.min_removed_dist.is_none());
        assert!(girth_gap_audit(&petersen, 4, 1, 0).is_err());
    }

    #[test]
    fn gadget_audits() {
        let a = gadget_audit(&cycle(4), 9).unwrap();
        assert!(a.passed, "{a:?}");
        let k2 = complete(2);
        let a = gadget_audit(&k2, 3).unwrap();
        assert!(a.passed);
        let g = generate(&GeneratorSpec::Gnp {
            n: 12,
            p: 0.4,
            seed: 5,
        })
        .unwrap();
        if (0..12).all(|v| g.degree(v) > 0) {
            let a = gadget_audit(&g, 2 * 4 + 3).unwrap();
            assert!(a.sandwich_violations.is_empty() && a.edge_violations.is_empty());
            assert!(a.max_degree <= 3);
        }
        assert!(matches!(
            gadget_audit(&cycle(4), 4),
            Err(Error::GadgetTooShort { .. })
        ));
    }
}
