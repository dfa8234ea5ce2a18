//! Exhaustive and Monte Carlo agreement checks against exact predicates.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{LabelScheme, PairDecoder, SizeStats, SketchFamily};
use crate::graph::{DistanceMatrix, Graph, INF};
use crate::rng::derive_seed;
use crate::stats::Proportion;
use crate::{Error, Result, Vertex};

/// Index of the unordered pair `x < y` among all pairs of `0..n`.
pub fn pair_index(n: usize, x: Vertex, y: Vertex) -> usize {
    debug_assert!(x < y && y < n);
    x * (2 * n - x - 1) / 2 + (y - x - 1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredicateKind {
    Adjacency,
    DistLeq(u32),
    /// 1 at distance `<= low`, 0 beyond `high`, undefined in between.
    DistBand(u32, u32),
    /// Adjacency on the listed pairs, undefined elsewhere.
    AdjacencyRestricted(Vec<(Vertex, Vertex)>),
}

/// A partial pair function `V × V → {0, 1, *}` over a reference graph.
pub struct PairPredicate {
    kind: PredicateKind,
    graph: Graph,
    dist: Option<DistanceMatrix>,
    restricted: HashSet<(Vertex, Vertex)>,
}

impl PairPredicate {
    pub fn new(graph: Graph, kind: PredicateKind) -> Self {
        let dist = match kind {
            PredicateKind::DistLeq(_) | PredicateKind::DistBand(..) => Some(graph.all_pairs()),
            _ => None,
        };
        let restricted = match &kind {
            PredicateKind::AdjacencyRestricted(pairs) => {
                pairs.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect()
            }
            _ => HashSet::new(),
        };
        Self {
            kind,
            graph,
            dist,
            restricted,
        }
    }

    pub fn kind(&self) -> &PredicateKind {
        &self.kind
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn distances(&self) -> Option<&DistanceMatrix> {
        self.dist.as_ref()
    }

    /// `None` stands for `*`.
    pub fn eval(&self, x: Vertex, y: Vertex) -> Option<bool> {
        let d = || self.dist.as_ref().map(|m| m.get(x, y)).unwrap_or(INF);
        match self.kind {
            PredicateKind::Adjacency => Some(self.graph.has_edge(x, y)),
            PredicateKind::DistLeq(r) => Some(d() <= r),
            PredicateKind::DistBand(low, high) => {
                let d = d();
                if d <= low {
                    Some(true)
                } else if d > high {
                    Some(false)
                } else {
                    None
                }
            }
            PredicateKind::AdjacencyRestricted(_) => self
                .restricted
                .contains(&(x.min(y), x.max(y)))
                .then(|| self.graph.has_edge(x, y)),
        }
    }

    /// Unordered pairs `x < y` where the predicate is defined.
    pub fn defined_pairs(&self) -> Vec<(Vertex, Vertex, bool)> {
        let n = self.graph.n();
        let mut out = Vec::new();
        for x in 0..n {
            for y in x + 1..n {
                if let Some(b) = self.eval(x, y) {
                    out.push((x, y, b));
                }
            }
        }
        out
    }
}

/// Per-pair counts of decoder outputs equal to 1.
#[derive(Clone, Debug)]
pub struct PairCounts {
    pub pairs: Vec<(Vertex, Vertex, bool)>,
    pub ones: Vec<u32>,
    pub trials: u64,
}

impl PairCounts {
    pub fn errors(&self, i: usize) -> u64 {
        let ones = self.ones[i] as u64;
        if self.pairs[i].2 {
            self.trials - ones
        } else {
            ones
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRate {
    pub x: Vertex,
    pub y: Vertex,
    pub error: Proportion,
}

/// Error statistics over the pairs with one predicate value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRates {
    pub pairs: u64,
    pub decodes: u64,
    pub errors: u64,
    pub rate: f64,
    /// Pair with the highest empirical error.
    pub worst: Option<PairRate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub mode: String,
    pub n: usize,
    pub trials: u64,
    pub seed: Option<u64>,
    pub pairs: u64,
    pub errors: u64,
    pub max_error: f64,
    /// Errors on pairs where the predicate is 1.
    pub false_negative_rate: f64,
    /// Errors on pairs where the predicate is 0.
    pub false_positive_rate: f64,
    pub positives: ClassRates,
    pub negatives: ClassRates,
    pub one_sided: bool,
    pub size: Option<SizeStats>,
    pub size_bits: Option<usize>,
}

impl EvalReport {
    pub fn from_counts(mode: &str, n: usize, counts: &PairCounts, seed: Option<u64>) -> Self {
        let class = |truth: bool| {
            let mut pairs = 0u64;
            let mut errors = 0u64;
            let mut worst: Option<(usize, u64)> = None;
            for (i, p) in counts.pairs.iter().enumerate() {
                if p.2 != truth {
                    continue;
                }
                pairs += 1;
                let e = counts.errors(i);
                errors += e;
                if worst.map_or(true, |(_, w)| e > w) {
                    worst = Some((i, e));
                }
            }
            let decodes = pairs * counts.trials;
            ClassRates {
                pairs,
                decodes,
                errors,
                rate: if decodes == 0 {
                    0.0
                } else {
                    errors as f64 / decodes as f64
                },
                worst: worst.map(|(i, e)| PairRate {
                    x: counts.pairs[i].0,
                    y: counts.pairs[i].1,
                    error: Proportion::new(e, counts.trials),
                }),
            }
        };
        let positives = class(true);
        let negatives = class(false);
        let max_error = [&positives, &negatives]
            .iter()
            .filter_map(|c| c.worst.as_ref().map(|w| w.error.estimate))
            .fold(0.0, f64::max);
        Self {
            mode: mode.to_string(),
            n,
            trials: counts.trials,
            seed,
            pairs: positives.pairs + negatives.pairs,
            errors: positives.errors + negatives.errors,
            max_error,
            false_negative_rate: positives.rate,
            false_positive_rate: negatives.rate,
            positives,
            negatives,
            one_sided: false,
            size: None,
            size_bits: None,
        }
    }
}

fn check_n(decoder_n: usize, predicate: &PairPredicate) -> Result<()> {
    if decoder_n != predicate.graph().n() {
        return Err(Error::GraphMismatch {
            predicate: predicate.graph().n(),
            labels: decoder_n,
        });
    }
    Ok(())
}

/// Deterministic scheme: one exhaustive pass over all defined pairs.
pub fn evaluate_scheme(scheme: &LabelScheme, predicate: &PairPredicate) -> Result<EvalReport> {
    check_n(scheme.n(), predicate)?;
    let pairs = predicate.defined_pairs();
    let ones = pairs
        .par_iter()
        .map(|&(x, y, _)| scheme.decode_pair(x, y) as u32)
        .collect();
    let counts = PairCounts {
        pairs,
        ones,
        trials: 1,
    };
    let mut report = EvalReport::from_counts("exhaustive", scheme.n(), &counts, None);
    report.one_sided = scheme.disjunctive();
    report.size = Some(scheme.size());
    report.size_bits = Some(report.size.unwrap().bits_max);
    Ok(report)
}

/// Runs `trials` independent draws of a sketch family and counts, per pair,
/// how often the decoder outputs 1.
pub fn count_pairs<F: SketchFamily + ?Sized>(
    family: &F,
    predicate: &PairPredicate,
    trials: u64,
    seed: u64,
) -> Result<PairCounts> {
    check_n(family.n(), predicate)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let pairs = predicate.defined_pairs();
    let chunk = 64u64;
    let chunks: Vec<u64> = (0..trials.div_ceil(chunk)).collect();
    let ones = chunks
        .par_iter()
        .map(|&c| {
            let mut local = vec![0u32; pairs.len()];
            for t in c * chunk..((c + 1) * chunk).min(trials) {
                let dec = family.sample(derive_seed(seed, t));
                for (slot, &(x, y, _)) in local.iter_mut().zip(&pairs) {
                    *slot += dec.decode_pair(x, y) as u32;
                }
            }
            local
        })
        .reduce(
            || vec![0u32; pairs.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(PairCounts {
        pairs,
        ones,
        trials,
    })
}

/// Monte Carlo evaluation of a sketch family.
pub fn evaluate_family<F: SketchFamily + ?Sized>(
    family: &F,
    predicate: &PairPredicate,
    trials: u64,
    seed: u64,
) -> Result<EvalReport> {
    let counts = count_pairs(family, predicate, trials, seed)?;
    let mut report = EvalReport::from_counts("monte_carlo", family.n(), &counts, Some(seed));
    report.one_sided = family.one_sided();
    report.size_bits = Some(family.sketcher(seed).size_bits());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GeneratorSpec};

    #[test]
    fn pair_index_is_dense() {
        let n = 7;
        let mut seen = vec![false; n * (n - 1) / 2];
        for x in 0..n {
            for y in x + 1..n {
                let i = pair_index(n, x, y);
                assert!(!seen[i]);
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn predicate_values() {
        let p5 = generate(&GeneratorSpec::Path { n: 5 }).unwrap();
        let adj = PairPredicate::new(p5.clone(), PredicateKind::Adjacency);
        assert_eq!(adj.eval(0, 1), Some(true));
        assert_eq!(adj.eval(0, 2), Some(false));
        let band = PairPredicate::new(p5.clone(), PredicateKind::DistBand(1, 3));
        assert_eq!(band.eval(0, 1), Some(true));
        assert_eq!(band.eval(0, 2), None);
        assert_eq!(band.eval(0, 3), None);
        assert_eq!(band.eval(0, 4), Some(false));
        let leq = PairPredicate::new(p5.clone(), PredicateKind::DistLeq(2));
        assert_eq!(leq.eval(4, 2), Some(true));
        let restricted =
            PairPredicate::new(p5, PredicateKind::AdjacencyRestricted(vec![(1, 0), (0, 4)]));
        assert_eq!(restricted.eval(0, 1), Some(true));
        assert_eq!(restricted.eval(4, 0), Some(false));
        assert_eq!(restricted.eval(1, 2), None);
        assert_eq!(restricted.defined_pairs().len(), 2);
    }

    #[test]
    fn disconnected_pairs_are_far() {
        let g = Graph::empty(3);
        let leq = PairPredicate::new(g, PredicateKind::DistLeq(100));
        assert_eq!(leq.eval(0, 2), Some(false));
    }

    #[test]
    fn mismatched_graph_is_rejected() {
        let g = generate(&GeneratorSpec::Path { n: 5 }).unwrap();
        let scheme = crate::adjacency::build_adjacency_labels(&g);
        let other = PairPredicate::new(Graph::empty(4), PredicateKind::Adjacency);
        assert!(matches!(
            evaluate_scheme(&scheme, &other),
            Err(Error::GraphMismatch {
                predicate: 4,
                labels: 5
            })
        ));
    }
}
