//! Randomized sketches: the hash compiler, majority boosting and the
//! bit-level codec shared by every sketch kind.

use super::{Code, Decoder, EqLabel, LabelScheme, Part, SizeStats};
use crate::bits::{width_for, BitString};
use crate::rng::{derive_seed, keyed_hash};
use crate::{Error, Result, Vertex};

/// Hash range used when none is given: `3k²`, at least 2.
pub fn default_width(k: usize) -> u64 {
    (3 * (k as u64) * (k as u64)).max(2)
}

/// Self-delimiting encoding: `gamma(t)`, then per part `gamma(|prefix|)`,
/// the prefix, `gamma(#codes)` and each code in `code_width` bits.
pub fn encode_label(label: &EqLabel, code_width: u32) -> BitString {
    let mut out = BitString::new();
    out.push_gamma(label.parts.len() as u64);
    for part in &label.parts {
        out.push_gamma(part.prefix.len() as u64);
        out.extend(&part.prefix);
        out.push_gamma(part.codes.len() as u64);
        for &c in &part.codes {
            out.push_uint(c, code_width);
        }
    }
    out
}

/// Inverse of [`encode_label`]; returns the label and the bits consumed.
pub fn decode_sketch_label(bits: &BitString, code_width: u32) -> Result<(EqLabel, usize)> {
    let mut r = bits.reader();
    let t = r.read_gamma()? as usize;
    if t > bits.len() {
        return Err(Error::Malformed("part count exceeds sketch length".into()));
    }
    let mut parts = Vec::with_capacity(t);
    for _ in 0..t {
        let plen = r.read_gamma()? as usize;
        let prefix = r.read_bits(plen)?;
        let k = r.read_gamma()? as usize;
        if k.saturating_mul(code_width as usize) > r.remaining() {
            return Err(Error::Malformed("code list exceeds sketch length".into()));
        }
        let codes = (0..k)
            .map(|_| r.read_uint(code_width))
            .collect::<Result<_>>()?;
        parts.push(Part { prefix, codes });
    }
    Ok((EqLabel::new(parts), r.position()))
}

/// Anything that answers pair queries from per-vertex data.
pub trait PairDecoder: Send + Sync {
    fn n(&self) -> usize;
    fn decode_pair(&self, x: Vertex, y: Vertex) -> bool;
}

impl PairDecoder for LabelScheme {
    fn n(&self) -> usize {
        LabelScheme::n(self)
    }

    fn decode_pair(&self, x: Vertex, y: Vertex) -> bool {
        self.decode_unchecked(x, y)
    }
}

/// How a [`Sketcher`] turns two bit strings into an answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SketchDecoder {
    /// Hash-compiled equality label; codes take `code_bits` bits each.
    Compiled {
        decoder: Decoder,
        code_bits: u32,
        w: u64,
    },
    /// Output 1 iff the fixed-width strings are equal.
    Equality { bits: u32 },
    /// Majority vote over `copies` concatenated, length-prefixed sketches.
    Majority {
        inner: Box<SketchDecoder>,
        copies: u32,
    },
}

impl SketchDecoder {
    pub fn id(&self) -> String {
        match self {
            SketchDecoder::Compiled { decoder, .. } => format!("hashed/{}", decoder.id()),
            SketchDecoder::Equality { .. } => "equality".into(),
            SketchDecoder::Majority { inner, .. } => format!("majority/{}", inner.id()),
        }
    }

    pub fn params(&self) -> std::collections::BTreeMap<String, u64> {
        match self {
            SketchDecoder::Compiled {
                decoder,
                code_bits,
                w,
            } => {
                let mut p = decoder.params();
                p.insert("code_bits".into(), *code_bits as u64);
                p.insert("w".into(), *w);
                p
            }
            SketchDecoder::Equality { bits } => [("bits".to_string(), *bits as u64)].into(),
            SketchDecoder::Majority { inner, copies } => {
                let mut p = inner.params();
                p.insert("copies".into(), *copies as u64);
                p
            }
        }
    }

    pub fn from_id(id: &str, params: &std::collections::BTreeMap<String, u64>) -> Result<Self> {
        let need = |k: &str| {
            params
                .get(k)
                .copied()
                .ok_or_else(|| Error::Malformed(format!("sketch decoder {id} needs parameter {k}")))
        };
        if let Some(rest) = id.strip_prefix("hashed/") {
            return Ok(SketchDecoder::Compiled {
                decoder: Decoder::from_id(rest, params)?,
                code_bits: need("code_bits")? as u32,
                w: need("w")?,
            });
        }
        if let Some(rest) = id.strip_prefix("majority/") {
            return Ok(SketchDecoder::Majority {
                inner: Box::new(SketchDecoder::from_id(rest, params)?),
                copies: need("copies")? as u32,
            });
        }
        if id == "equality" {
            return Ok(SketchDecoder::Equality {
                bits: need("bits")? as u32,
            });
        }
        Err(Error::UnknownDecoder(id.to_string()))
    }

    /// Length of the sketch occupying the front of `bits`.
    pub fn measure(&self, bits: &BitString) -> Result<usize> {
        match self {
            SketchDecoder::Compiled { code_bits, .. } => {
                decode_sketch_label(bits, *code_bits).map(|(_, used)| used)
            }
            SketchDecoder::Equality { bits: b } => {
                if bits.len() < *b as usize {
                    Err(Error::Malformed(
                        "sketch shorter than its fixed width".into(),
                    ))
                } else {
                    Ok(*b as usize)
                }
            }
            SketchDecoder::Majority { copies, .. } => {
                let mut r = bits.reader();
                for _ in 0..*copies {
                    let len = r.read_gamma()? as usize;
                    r.read_bits(len)?;
                }
                Ok(r.position())
            }
        }
    }

    pub fn decode(&self, a: &BitString, b: &BitString) -> Result<bool> {
        match self {
            SketchDecoder::Compiled {
                decoder, code_bits, ..
            } => {
                let (lx, _) = decode_sketch_label(a, *code_bits)?;
                let (ly, _) = decode_sketch_label(b, *code_bits)?;
                let q = super::EqualityMatrix::between(&lx, &ly);
                Ok(decoder.decode(&super::DecoderInput {
                    prefixes_x: lx.prefixes(),
                    prefixes_y: ly.prefixes(),
                    q: &q,
                }))
            }
            SketchDecoder::Equality { .. } => Ok(a == b),
            SketchDecoder::Majority { inner, copies } => {
                let (xs, ys) = (split_copies(a, *copies)?, split_copies(b, *copies)?);
                let mut ones = 0;
                for (x, y) in xs.iter().zip(&ys) {
                    ones += inner.decode(x, y)? as u32;
                }
                Ok(2 * ones > *copies)
            }
        }
    }
}

fn split_copies(bits: &BitString, copies: u32) -> Result<Vec<BitString>> {
    let mut r = bits.reader();
    (0..copies)
        .map(|_| {
            let len = r.read_gamma()? as usize;
            r.read_bits(len)
        })
        .collect()
}

/// One sampled sketch: a bit string per vertex and the decoder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sketcher {
    sketches: Vec<BitString>,
    decoder: SketchDecoder,
    one_sided: bool,
}

impl Sketcher {
    pub fn new(sketches: Vec<BitString>, decoder: SketchDecoder, one_sided: bool) -> Self {
        Self {
            sketches,
            decoder,
            one_sided,
        }
    }

    pub fn n(&self) -> usize {
        self.sketches.len()
    }

    pub fn sketch(&self, v: Vertex) -> &BitString {
        &self.sketches[v]
    }

    pub fn sketches(&self) -> &[BitString] {
        &self.sketches
    }

    pub fn decoder(&self) -> &SketchDecoder {
        &self.decoder
    }

    pub fn one_sided(&self) -> bool {
        self.one_sided
    }

    /// Longest sketch, in bits.
    pub fn size_bits(&self) -> usize {
        self.sketches.iter().map(BitString::len).max().unwrap_or(0)
    }

    pub fn decode(&self, x: Vertex, y: Vertex) -> Result<bool> {
        for v in [x, y] {
            if v >= self.n() {
                return Err(Error::InvalidVertex {
                    vertex: v,
                    n: self.n(),
                });
            }
        }
        self.decoder.decode(&self.sketches[x], &self.sketches[y])
    }

    /// Majority vote of independent copies over the same vertex set.
    pub fn majority(copies: &[Sketcher]) -> Result<Sketcher> {
        let first = copies
            .first()
            .ok_or_else(|| Error::InvalidParameter("majority of zero sketches".into()))?;
        if copies
            .iter()
            .any(|c| c.decoder != first.decoder || c.n() != first.n())
        {
            return Err(Error::InvalidParameter(
                "majority copies must share a decoder".into(),
            ));
        }
        let sketches = (0..first.n())
            .map(|v| {
                let mut out = BitString::new();
                for c in copies {
                    out.push_gamma(c.sketches[v].len() as u64);
                    out.extend(&c.sketches[v]);
                }
                out
            })
            .collect();
        Ok(Sketcher {
            sketches,
            decoder: SketchDecoder::Majority {
                inner: Box::new(first.decoder.clone()),
                copies: copies.len() as u32,
            },
            one_sided: false,
        })
    }
}

impl PairDecoder for Sketcher {
    fn n(&self) -> usize {
        Sketcher::n(self)
    }

    fn decode_pair(&self, x: Vertex, y: Vertex) -> bool {
        self.decoder
            .decode(&self.sketches[x], &self.sketches[y])
            .expect("sketches produced by this crate parse")
    }
}

/// A distribution over sketches, sampled by seed.
pub trait SketchFamily: Sync {
    fn n(&self) -> usize;

    /// Decoder-equivalent fast form of the sketch drawn with `seed`.
    fn sample(&self, seed: u64) -> Box<dyn PairDecoder + '_>;

    /// The serialized sketch drawn with `seed`.
    fn sketcher(&self, seed: u64) -> Sketcher;

    fn one_sided(&self) -> bool;
}

/// The hash compiler applied to a fixed scheme.
#[derive(Clone, Debug)]
pub struct CompiledFamily {
    scheme: LabelScheme,
    w: u64,
}

impl CompiledFamily {
    /// `w = None` picks `3k²` for the scheme's largest code count `k`.
    pub fn new(scheme: LabelScheme, w: Option<u64>) -> Result<Self> {
        let k = scheme.size().k;
        let w = w.unwrap_or_else(|| default_width(k));
        if w < 2 {
            return Err(Error::InvalidParameter(format!("hash range w = {w} < 2")));
        }
        Ok(Self { scheme, w })
    }

    pub fn w(&self) -> u64 {
        self.w
    }

    pub fn code_bits(&self) -> u32 {
        width_for(self.w)
    }

    pub fn scheme(&self) -> &LabelScheme {
        &self.scheme
    }

    fn hashed(&self, seed: u64) -> LabelScheme {
        let w = self.w;
        self.scheme.map_codes(|c: Code| keyed_hash(seed, c) % w)
    }

    /// Size bound `s + k⌈log₂ w⌉` plus the gamma-coded length fields.
    pub fn size(&self) -> SizeStats {
        let cw = self.code_bits();
        let bits: Vec<usize> = self
            .scheme
            .labels()
            .iter()
            .map(|l| encode_label(l, cw).len())
            .collect();
        SizeStats {
            bits_max: bits.iter().copied().max().unwrap_or(0),
            bits_mean: super::mean(&bits),
            ..self.scheme.size()
        }
    }
}

impl SketchFamily for CompiledFamily {
    fn n(&self) -> usize {
        self.scheme.n()
    }

    fn sample(&self, seed: u64) -> Box<dyn PairDecoder + '_> {
        Box::new(self.hashed(seed))
    }

    fn sketcher(&self, seed: u64) -> Sketcher {
        let hashed = self.hashed(seed);
        let cw = self.code_bits();
        Sketcher {
            sketches: hashed
                .labels()
                .iter()
                .map(|l| encode_label(l, cw))
                .collect(),
            decoder: SketchDecoder::Compiled {
                decoder: self.scheme.decoder().clone(),
                code_bits: cw,
                w: self.w,
            },
            one_sided: self.scheme.disjunctive(),
        }
    }

    fn one_sided(&self) -> bool {
        self.scheme.disjunctive()
    }
}

/// Replaces each code by `ξ(code) ∈ [w]`; `w = None` means `3k²`.
pub fn compile_sketch(scheme: &LabelScheme, seed: u64, w: Option<u64>) -> Result<Sketcher> {
    Ok(CompiledFamily::new(scheme.clone(), w)?.sketcher(seed))
}

/// Majority of `copies` independent draws of an inner family.
pub struct Boosted<F> {
    pub inner: F,
    pub copies: u32,
}

struct MajorityDecoder<'a> {
    parts: Vec<Box<dyn PairDecoder + 'a>>,
}

impl PairDecoder for MajorityDecoder<'_> {
    fn n(&self) -> usize {
        self.parts[0].n()
    }

    fn decode_pair(&self, x: Vertex, y: Vertex) -> bool {
        let ones = self.parts.iter().filter(|p| p.decode_pair(x, y)).count();
        2 * ones > self.parts.len()
    }
}

impl<F: SketchFamily> SketchFamily for Boosted<F> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn sample(&self, seed: u64) -> Box<dyn PairDecoder + '_> {
        Box::new(MajorityDecoder {
            parts: (0..self.copies)
                .map(|i| self.inner.sample(derive_seed(seed, i as u64)))
                .collect(),
        })
    }

    fn sketcher(&self, seed: u64) -> Sketcher {
        let copies: Vec<Sketcher> = (0..self.copies)
            .map(|i| self.inner.sketcher(derive_seed(seed, i as u64)))
            .collect();
        Sketcher::majority(&copies).expect("copies share a decoder")
    }

    fn one_sided(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqlabel::Part;
    use proptest::prelude::*;

    fn toy_scheme() -> LabelScheme {
        // Path 0-1-2-3 oriented left to right.
        let labels = (0..4u64)
            .map(|x| {
                let mut codes = vec![x];
                if x < 3 {
                    codes.push(x + 1);
                }
                EqLabel::new(vec![Part::codes(codes)])
            })
            .collect();
        LabelScheme::new(labels, Decoder::Orientation)
    }

    #[test]
    fn default_width_is_three_k_squared() {
        assert_eq!(default_width(2), 12);
        assert_eq!(width_for(default_width(2)), 4);
        assert_eq!(default_width(3), 27);
        assert_eq!(default_width(0), 2);
    }

    #[test]
    fn compiled_sketch_shape() {
        let s = compile_sketch(&toy_scheme(), 9, None).unwrap();
        assert!(s.one_sided());
        match s.decoder() {
            SketchDecoder::Compiled { code_bits, w, .. } => {
                assert_eq!((*code_bits, *w), (4, 12));
            }
            other => panic!("unexpected decoder {other:?}"),
        }
        // gamma(1) + gamma(0) + gamma(2) + 2 codes of 4 bits.
        assert_eq!(s.size_bits(), 3 + 1 + 3 + 8);
    }

    #[test]
    fn equal_codes_stay_equal() {
        let scheme = toy_scheme();
        for seed in 0..200 {
            let s = compile_sketch(&scheme, seed, None).unwrap();
            assert!(s.decode(0, 1).unwrap());
            assert!(s.decode(2, 3).unwrap());
        }
    }

    #[test]
    fn fast_and_serialized_forms_agree() {
        let fam = CompiledFamily::new(toy_scheme(), Some(3)).unwrap();
        for seed in 0..50 {
            let fast = fam.sample(seed);
            let slow = fam.sketcher(seed);
            for x in 0..4 {
                for y in 0..4 {
                    if x != y {
                        assert_eq!(fast.decode_pair(x, y), slow.decode(x, y).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn majority_sketch_roundtrip() {
        let fam = Boosted {
            inner: CompiledFamily::new(toy_scheme(), Some(2)).unwrap(),
            copies: 5,
        };
        let seed = 17;
        let fast = fam.sample(seed);
        let slow = fam.sketcher(seed);
        for x in 0..4 {
            assert_eq!(
                slow.decoder().measure(slow.sketch(x)).unwrap(),
                slow.sketch(x).len()
            );
            for y in 0..4 {
                if x != y {
                    assert_eq!(fast.decode_pair(x, y), slow.decode(x, y).unwrap());
                }
            }
        }
        let d = SketchDecoder::from_id(&slow.decoder().id(), &slow.decoder().params()).unwrap();
        assert_eq!(&d, slow.decoder());
    }

    #[test]
    fn rejects_tiny_width() {
        assert!(CompiledFamily::new(toy_scheme(), Some(1)).is_err());
    }

    proptest! {
        #[test]
        fn label_codec_roundtrip(
            parts in prop::collection::vec(
                (prop::collection::vec(any::<bool>(), 0..6), prop::collection::vec(0u64..32, 0..5)),
                0..6,
            )
        ) {
            let label = EqLabel::new(
                parts
                    .into_iter()
                    .map(|(p, c)| Part { prefix: BitString::from_bools(p), codes: c })
                    .collect(),
            );
            let bits = encode_label(&label, 5);
            let (back, used) = decode_sketch_label(&bits, 5).unwrap();
            prop_assert_eq!(used, bits.len());
            prop_assert_eq!(back, label);
        }
    }
}
