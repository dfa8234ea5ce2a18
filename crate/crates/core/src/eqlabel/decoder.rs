use std::collections::BTreeMap;

use super::{CodePos, DecoderInput};
use crate::bits::width_for;
use crate::{Error, Result};

/// The decoders known to this crate.
///
/// Every variant reads only prefixes and the equality matrix. Disjunctive
/// variants are defined by [`Decoder::term`]: the output is the OR of
/// `Q[a][b]` over the positions `(a, b)` it accepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decoder {
    /// Label `(- | x, out(x)...)`: adjacent iff `x ∈ out(y)` or `y ∈ out(x)`.
    Orientation,
    /// Part `i` holds the vertices of rank `i`; 1 iff some rank-`i` code of
    /// `x` equals a rank-`j` code of `y` with `i + j <= r`.
    Distance { r: u32 },
    /// Blocks of `r + 1` rank parts, one block per window; rank is the part
    /// index modulo `r + 1`.
    Layered { r: u32 },
    /// 1 iff the two code sets intersect.
    AnyCommon,
    /// Connection-model labels: part 0 prefix is the `colors³` truth table,
    /// parts `1..=depth+1` are `(color | node)` along the leaf-to-root path.
    Shrubdepth { colors: u32, depth: u32 },
}

impl Decoder {
    pub fn id(&self) -> &'static str {
        match self {
            Decoder::Orientation => "orientation",
            Decoder::Distance { .. } => "distance",
            Decoder::Layered { .. } => "layered_distance",
            Decoder::AnyCommon => "any_common",
            Decoder::Shrubdepth { .. } => "shrubdepth",
        }
    }

    pub fn params(&self) -> BTreeMap<String, u64> {
        let mut p = BTreeMap::new();
        match *self {
            Decoder::Distance { r } | Decoder::Layered { r } => {
                p.insert("r".into(), r as u64);
            }
            Decoder::Shrubdepth { colors, depth } => {
                p.insert("colors".into(), colors as u64);
                p.insert("depth".into(), depth as u64);
            }
            Decoder::Orientation | Decoder::AnyCommon => {}
        }
        p
    }

    pub fn from_id(id: &str, params: &BTreeMap<String, u64>) -> Result<Self> {
        let get = |k: &str| -> Result<u32> {
            params
                .get(k)
                .copied()
                .and_then(|v| u32::try_from(v).ok())
                .ok_or_else(|| Error::Malformed(format!("decoder {id} needs parameter {k}")))
        };
        Ok(match id {
            "orientation" => Decoder::Orientation,
            "distance" => Decoder::Distance { r: get("r")? },
            "layered_distance" => Decoder::Layered { r: get("r")? },
            "any_common" => Decoder::AnyCommon,
            "shrubdepth" => Decoder::Shrubdepth {
                colors: get("colors")?,
                depth: get("depth")?,
            },
            _ => return Err(Error::UnknownDecoder(id.to_string())),
        })
    }

    pub fn is_disjunctive(&self) -> bool {
        !matches!(self, Decoder::Shrubdepth { .. })
    }

    /// Whether `Q[a][b]` is one of the OR-ed entries. Only meaningful for
    /// disjunctive decoders.
    pub fn term(&self, a: CodePos, b: CodePos) -> bool {
        match *self {
            Decoder::Orientation => (a.index == 0) != (b.index == 0),
            Decoder::Distance { r } => a.part + b.part <= r,
            Decoder::Layered { r } => a.part % (r + 1) + b.part % (r + 1) <= r,
            Decoder::AnyCommon => true,
            Decoder::Shrubdepth { .. } => false,
        }
    }

    /// The OR-ed positions for two labels with the given part shapes
    /// (codes per part).
    pub fn terms(&self, shape_x: &[usize], shape_y: &[usize]) -> Option<Vec<(CodePos, CodePos)>> {
        if !self.is_disjunctive() {
            return None;
        }
        let positions = |shape: &[usize]| -> Vec<CodePos> {
            shape
                .iter()
                .enumerate()
                .flat_map(|(p, &len)| (0..len).map(move |i| CodePos::new(p, i)))
                .collect()
        };
        let (px, py) = (positions(shape_x), positions(shape_y));
        let mut out = Vec::new();
        for &a in &px {
            for &b in &py {
                if self.term(a, b) {
                    out.push((a, b));
                }
            }
        }
        Some(out)
    }

    pub fn decode(&self, input: &DecoderInput<'_>) -> bool {
        if self.is_disjunctive() {
            return input.q.ones().iter().any(|&(a, b)| self.term(a, b));
        }
        match *self {
            Decoder::Shrubdepth { colors, depth } => shrubdepth_decode(colors, depth, input),
            _ => unreachable!("disjunctive decoders handled above"),
        }
    }
}

/// Finds the first ancestor level `i >= 1` whose node codes agree and
/// evaluates the truth table at (leaf color x, leaf color y, color of that
/// ancestor).
fn shrubdepth_decode(colors: u32, depth: u32, input: &DecoderInput<'_>) -> bool {
    let table = input.prefixes_x[0];
    let cw = width_for(colors as u64);
    let color = |prefixes: &[&crate::bits::BitString], part: usize| -> usize {
        prefixes
            .get(part)
            .map(|p| p.reader().read_uint(cw).unwrap_or(0) as usize)
            .unwrap_or(0)
    };
    let k = colors as usize;
    let lca_level = (1..=depth as usize).find(|&i| {
        let part = (i + 1) as u32;
        input
            .q
            .ones()
            .iter()
            .any(|&(a, b)| a.part == part && b.part == part)
    });
    let Some(i) = lca_level else {
        return false;
    };
    let a = color(&input.prefixes_x, 1);
    let b = color(&input.prefixes_y, 1);
    let c = color(&input.prefixes_x, i + 1);
    let idx = (a * k + b) * k + c;
    idx < table.len() && table.get(idx)
}
