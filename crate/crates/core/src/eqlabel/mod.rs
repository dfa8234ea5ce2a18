//! Equality-based labels.
//!
//! A label is an ordered list of parts `(prefix | codes)`. Prefixes are bit
//! strings read by the decoder directly; codes are opaque tokens the decoder
//! may only compare for equality. For a vertex pair the decoder is handed the
//! two prefix lists and the equality matrix `Q[i][j] = [q(x)_i == q(y)_j]`,
//! nothing else. A scheme is *disjunctive* when its decoder is an OR over a
//! fixed set of positions of `Q`; the hash compiler in [`sketch`] turns such
//! schemes into sketches whose only errors are false positives.
//!
//! For `s = Σ|prefix|`, `t = #parts` and `k = Σ|codes|`, hashing every code
//! into `[w]` with `w = 3k²` keeps every decoder comparison correct with
//! probability at least `1 - k²/w = 2/3`.

mod decoder;
mod dump;
mod evaluate;
mod sketch;

use std::cmp::Ordering;

use serde::Serialize;

pub use decoder::Decoder;
pub use dump::{
    deserialize_labels, deserialize_sketch, read_dump, serialize_labels, serialize_sketch,
    write_dump, Dump, DUMP_VERSION,
};
pub use evaluate::{
    count_pairs, evaluate_family, evaluate_scheme, pair_index, ClassRates, EvalReport, PairCounts,
    PairPredicate, PredicateKind,
};
pub use sketch::{
    compile_sketch, decode_sketch_label, default_width, encode_label, Boosted, CompiledFamily,
    PairDecoder, SketchDecoder, SketchFamily, Sketcher,
};

use crate::bits::{width_for, BitString};
use crate::{Error, Result, Vertex};

/// An equality code. Only equality between codes is meaningful.
pub type Code = u64;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Part {
    pub prefix: BitString,
    pub codes: Vec<Code>,
}

impl Part {
    pub fn codes(codes: Vec<Code>) -> Self {
        Self {
            prefix: BitString::new(),
            codes,
        }
    }

    pub fn prefix(prefix: BitString) -> Self {
        Self {
            prefix,
            codes: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EqLabel {
    pub parts: Vec<Part>,
}

impl EqLabel {
    pub fn new(parts: Vec<Part>) -> Self {
        Self { parts }
    }

    /// Total prefix bits.
    pub fn s(&self) -> usize {
        self.parts.iter().map(|p| p.prefix.len()).sum()
    }

    /// Number of parts.
    pub fn t(&self) -> usize {
        self.parts.len()
    }

    /// Number of equality codes.
    pub fn k(&self) -> usize {
        self.parts.iter().map(|p| p.codes.len()).sum()
    }

    pub fn max_code(&self) -> Option<Code> {
        self.parts
            .iter()
            .flat_map(|p| p.codes.iter().copied())
            .max()
    }

    pub fn positions(&self) -> impl Iterator<Item = (CodePos, Code)> + '_ {
        self.parts.iter().enumerate().flat_map(|(pi, p)| {
            p.codes
                .iter()
                .enumerate()
                .map(move |(ci, &c)| (CodePos::new(pi, ci), c))
        })
    }

    pub fn prefixes(&self) -> Vec<&BitString> {
        self.parts.iter().map(|p| &p.prefix).collect()
    }

    /// Codes paired with positions, sorted by code.
    fn sorted_codes(&self) -> Vec<(Code, CodePos)> {
        let mut v: Vec<(Code, CodePos)> = self.positions().map(|(p, c)| (c, p)).collect();
        v.sort_unstable();
        v
    }

    /// Same label with every code passed through `f`.
    pub fn map_codes<F: FnMut(Code) -> Code>(&self, mut f: F) -> EqLabel {
        EqLabel {
            parts: self
                .parts
                .iter()
                .map(|p| Part {
                    prefix: p.prefix.clone(),
                    codes: p.codes.iter().map(|&c| f(c)).collect(),
                })
                .collect(),
        }
    }
}

/// Position of a code: part index and index within the part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CodePos {
    pub part: u32,
    pub index: u32,
}

impl CodePos {
    pub fn new(part: usize, index: usize) -> Self {
        Self {
            part: part as u32,
            index: index as u32,
        }
    }
}

/// The equality matrix between two labels, stored as its nonzero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EqualityMatrix {
    ones: Vec<(CodePos, CodePos)>,
}

impl EqualityMatrix {
    pub fn between(x: &EqLabel, y: &EqLabel) -> Self {
        let mut out = Self::default();
        merge_equal(&x.sorted_codes(), &y.sorted_codes(), &mut out.ones);
        out
    }

    pub fn ones(&self) -> &[(CodePos, CodePos)] {
        &self.ones
    }

    pub fn get(&self, a: CodePos, b: CodePos) -> bool {
        self.ones.contains(&(a, b))
    }
}

fn merge_equal(a: &[(Code, CodePos)], b: &[(Code, CodePos)], out: &mut Vec<(CodePos, CodePos)>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                let code = a[i].0;
                let i_end = i + a[i..].iter().take_while(|e| e.0 == code).count();
                let j_end = j + b[j..].iter().take_while(|e| e.0 == code).count();
                for ea in &a[i..i_end] {
                    for eb in &b[j..j_end] {
                        out.push((ea.1, eb.1));
                    }
                }
                i = i_end;
                j = j_end;
            }
        }
    }
    out.sort_unstable();
}

/// What a decoder is allowed to see for one vertex pair.
pub struct DecoderInput<'a> {
    pub prefixes_x: Vec<&'a BitString>,
    pub prefixes_y: Vec<&'a BitString>,
    pub q: &'a EqualityMatrix,
}

/// Per-vertex labels plus the decoder that reads them.
#[derive(Clone, Debug)]
pub struct LabelScheme {
    labels: Vec<EqLabel>,
    decoder: Decoder,
    sorted: Vec<Vec<(Code, CodePos)>>,
}

impl PartialEq for LabelScheme {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.decoder == other.decoder
    }
}

impl LabelScheme {
    pub fn new(labels: Vec<EqLabel>, decoder: Decoder) -> Self {
        let sorted = labels.iter().map(EqLabel::sorted_codes).collect();
        Self {
            labels,
            decoder,
            sorted,
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[EqLabel] {
        &self.labels
    }

    pub fn label(&self, v: Vertex) -> &EqLabel {
        &self.labels[v]
    }

    pub fn decoder(&self) -> &Decoder {
        &self.decoder
    }

    pub fn disjunctive(&self) -> bool {
        self.decoder.is_disjunctive()
    }

    pub fn equality_matrix(&self, x: Vertex, y: Vertex) -> EqualityMatrix {
        let mut q = EqualityMatrix::default();
        merge_equal(&self.sorted[x], &self.sorted[y], &mut q.ones);
        q
    }

    /// Decodes the pair `(x, y)`; callers exclude `x == y`.
    pub fn decode(&self, x: Vertex, y: Vertex) -> Result<bool> {
        for v in [x, y] {
            if v >= self.n() {
                return Err(Error::InvalidVertex {
                    vertex: v,
                    n: self.n(),
                });
            }
        }
        Ok(self.decode_unchecked(x, y))
    }

    pub(crate) fn decode_unchecked(&self, x: Vertex, y: Vertex) -> bool {
        let q = self.equality_matrix(x, y);
        self.decoder.decode(&DecoderInput {
            prefixes_x: self.labels[x].prefixes(),
            prefixes_y: self.labels[y].prefixes(),
            q: &q,
        })
    }

    /// Same decoder, every code passed through `f`.
    pub fn map_codes<F: FnMut(Code) -> Code>(&self, mut f: F) -> LabelScheme {
        LabelScheme::new(
            self.labels.iter().map(|l| l.map_codes(&mut f)).collect(),
            self.decoder.clone(),
        )
    }

    /// Fixed code width for the deterministic bit encoding of this scheme.
    pub fn code_width(&self) -> u32 {
        let max = self
            .labels
            .iter()
            .filter_map(EqLabel::max_code)
            .max()
            .unwrap_or(0);
        width_for(max.saturating_add(1))
    }

    pub fn size(&self) -> SizeStats {
        let cw = self.code_width();
        let bits: Vec<usize> = self
            .labels
            .iter()
            .map(|l| encode_label(l, cw).len())
            .collect();
        SizeStats {
            s: self.labels.iter().map(EqLabel::s).max().unwrap_or(0),
            t: self.labels.iter().map(EqLabel::t).max().unwrap_or(0),
            k: self.labels.iter().map(EqLabel::k).max().unwrap_or(0),
            bits_max: bits.iter().copied().max().unwrap_or(0),
            bits_mean: mean(&bits),
        }
    }
}

/// Model quantities `(s, t, k)` (worst case over vertices) and the
/// serialized label length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct SizeStats {
    pub s: usize,
    pub t: usize,
    pub k: usize,
    pub bits_max: usize,
    pub bits_mean: f64,
}

pub(crate) fn mean(v: &[usize]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<usize>() as f64 / v.len() as f64
    }
}
