//! JSON dumps of label schemes and sketches.
//!
//! ```text
//! {"version":1,"decoder":"distance","params":{"r":2},"disjunctive":true,
//!  "labels":[[["", 4], ["", 1, 3]], ...]}
//! {"version":1,"decoder":"equality","params":{"bits":2},"one_sided":false,
//!  "n":400,"bits_per_vertex":2,"data":"<base64>"}
//! ```
//!
//! A label part is a JSON array whose first element is the prefix as a
//! `0`/`1` string and whose remaining elements are the codes. Sketches are
//! packed MSB-first, each vertex padded to `bits_per_vertex` bits.

use std::collections::BTreeMap;
use std::path::Path;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Decoder, EqLabel, LabelScheme, Part, SketchDecoder, Sketcher};
use crate::bits::BitString;
use crate::{Error, Result};

pub const DUMP_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
struct LabelFile {
    version: u64,
    decoder: String,
    params: BTreeMap<String, u64>,
    disjunctive: bool,
    labels: Vec<Vec<Vec<Value>>>,
}

#[derive(Serialize, Deserialize)]
struct SketchFile {
    version: u64,
    decoder: String,
    params: BTreeMap<String, u64>,
    one_sided: bool,
    n: usize,
    bits_per_vertex: usize,
    data: String,
}

/// Either kind of dump.
#[derive(Clone, Debug, PartialEq)]
pub enum Dump {
    Labels(LabelScheme),
    Sketch(Sketcher),
}

pub fn serialize_labels(scheme: &LabelScheme) -> Result<String> {
    let labels = scheme
        .labels()
        .iter()
        .map(|l| {
            l.parts
                .iter()
                .map(|p| {
                    let mut part = vec![Value::String(p.prefix.to_binary_string())];
                    part.extend(p.codes.iter().map(|&c| Value::from(c)));
                    part
                })
                .collect()
        })
        .collect();
    let file = LabelFile {
        version: DUMP_VERSION,
        decoder: scheme.decoder().id().to_string(),
        params: scheme.decoder().params(),
        disjunctive: scheme.disjunctive(),
        labels,
    };
    Ok(serde_json::to_string(&file)?)
}

pub fn serialize_sketch(sketch: &Sketcher) -> Result<String> {
    let width = sketch.size_bits();
    let mut packed = BitString::new();
    for s in sketch.sketches() {
        packed.extend(s);
        for _ in s.len()..width {
            packed.push(false);
        }
    }
    let file = SketchFile {
        version: DUMP_VERSION,
        decoder: sketch.decoder().id(),
        params: sketch.decoder().params(),
        one_sided: sketch.one_sided(),
        n: sketch.n(),
        bits_per_vertex: width,
        data: STANDARD.encode(packed.as_bytes()),
    };
    Ok(serde_json::to_string(&file)?)
}

fn check_version(value: &Value) -> Result<()> {
    let found = value
        .get("version")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Malformed("missing version field".into()))?;
    if found != DUMP_VERSION {
        return Err(Error::VersionMismatch {
            found,
            expected: DUMP_VERSION,
        });
    }
    Ok(())
}

pub fn deserialize_labels(text: &str) -> Result<LabelScheme> {
    let value: Value = serde_json::from_str(text)?;
    check_version(&value)?;
    let file: LabelFile = serde_json::from_value(value)?;
    let decoder = Decoder::from_id(&file.decoder, &file.params)?;
    if decoder.is_disjunctive() != file.disjunctive {
        return Err(Error::Malformed(format!(
            "decoder {} has disjunctive = {}, file says {}",
            file.decoder,
            decoder.is_disjunctive(),
            file.disjunctive
        )));
    }
    let labels = file
        .labels
        .into_iter()
        .map(|parts| {
            parts
                .into_iter()
                .map(|part| {
                    let mut it = part.into_iter();
                    let prefix = match it.next() {
                        Some(Value::String(s)) => BitString::from_binary_str(&s)?,
                        _ => {
                            return Err(Error::Malformed(
                                "part must start with a bit string".into(),
                            ))
                        }
                    };
                    let codes = it
                        .map(|v| {
                            v.as_u64()
                                .ok_or_else(|| Error::Malformed(format!("bad code {v}")))
                        })
                        .collect::<Result<_>>()?;
                    Ok(Part { prefix, codes })
                })
                .collect::<Result<Vec<_>>>()
                .map(EqLabel::new)
        })
        .collect::<Result<_>>()?;
    Ok(LabelScheme::new(labels, decoder))
}

pub fn deserialize_sketch(text: &str) -> Result<Sketcher> {
    let value: Value = serde_json::from_str(text)?;
    check_version(&value)?;
    let file: SketchFile = serde_json::from_value(value)?;
    let decoder = SketchDecoder::from_id(&file.decoder, &file.params)?;
    let bytes = STANDARD
        .decode(file.data.as_bytes())
        .map_err(|e| Error::Malformed(format!("bad base64 payload: {e}")))?;
    let total = file.n * file.bits_per_vertex;
    if bytes.len() != total.div_ceil(8) {
        return Err(Error::Malformed(format!(
            "payload has {} bytes, expected {}",
            bytes.len(),
            total.div_ceil(8)
        )));
    }
    let packed = BitString::from_bytes(bytes, total)?;
    let sketches = (0..file.n)
        .map(|v| {
            let padded = packed.slice(v * file.bits_per_vertex, file.bits_per_vertex);
            let used = decoder.measure(&padded)?;
            Ok(padded.slice(0, used))
        })
        .collect::<Result<_>>()?;
    Ok(Sketcher::new(sketches, decoder, file.one_sided))
}

/// Reads either dump kind, telling them apart by their fields.
pub fn read_dump(path: &Path) -> Result<Dump> {
    let text = std::fs::read_to_string(path)?;
    let value: Value = serde_json::from_str(&text)?;
    check_version(&value)?;
    if value.get("labels").is_some() {
        deserialize_labels(&text).map(Dump::Labels)
    } else if value.get("data").is_some() {
        deserialize_sketch(&text).map(Dump::Sketch)
    } else {
        Err(Error::Malformed("neither a label nor a sketch dump".into()))
    }
}

pub fn write_dump(dump: &Dump, path: &Path) -> Result<()> {
    let text = match dump {
        Dump::Labels(s) => serialize_labels(s)?,
        Dump::Sketch(s) => serialize_sketch(s)?,
    };
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqlabel::{compile_sketch, SketchFamily};

    fn scheme() -> LabelScheme {
        let mut p = BitString::new();
        p.push_uint(2, 2);
        let labels = vec![
            EqLabel::new(vec![Part {
                prefix: p,
                codes: vec![7, 1],
            }]),
            EqLabel::new(vec![Part::codes(vec![1]), Part::codes(vec![])]),
        ];
        LabelScheme::new(labels, Decoder::Distance { r: 1 })
    }

    #[test]
    fn label_roundtrip() {
        let s = scheme();
        let text = serialize_labels(&s).unwrap();
        assert!(text.contains(r#"["10",7,1]"#), "{text}");
        assert_eq!(deserialize_labels(&text).unwrap(), s);
    }

    #[test]
    fn unknown_decoder_is_rejected() {
        let text = serialize_labels(&scheme())
            .unwrap()
            .replace("\"distance\"", "\"nope\"");
        let err = deserialize_labels(&text).unwrap_err();
        assert!(err.to_string().contains("unknown decoder"), "{err}");
    }

    #[test]
    fn version_mismatch_is_rejected() {
        let text = serialize_labels(&scheme())
            .unwrap()
            .replace("\"version\":1", "\"version\":2");
        assert!(matches!(
            deserialize_labels(&text),
            Err(Error::VersionMismatch {
                found: 2,
                expected: 1
            })
        ));
        assert!(deserialize_labels("{\"labels\": []}").is_err());
        assert!(deserialize_labels("not json").is_err());
    }

    #[test]
    fn sketch_roundtrip() {
        let sk = compile_sketch(&scheme(), 3, None).unwrap();
        let text = serialize_sketch(&sk).unwrap();
        assert_eq!(deserialize_sketch(&text).unwrap(), sk);
    }

    #[test]
    fn boosted_sketch_roundtrip() {
        let fam = crate::eqlabel::Boosted {
            inner: crate::eqlabel::CompiledFamily::new(scheme(), Some(4)).unwrap(),
            copies: 3,
        };
        let sk = fam.sketcher(5);
        let text = serialize_sketch(&sk).unwrap();
        assert_eq!(deserialize_sketch(&text).unwrap(), sk);
    }

    #[test]
    fn dump_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("labels.json");
        let d = Dump::Labels(scheme());
        write_dump(&d, &path).unwrap();
        assert_eq!(read_dump(&path).unwrap(), d);
        let path = dir.path().join("sketch.json");
        let d = Dump::Sketch(compile_sketch(&scheme(), 1, None).unwrap());
        write_dump(&d, &path).unwrap();
        assert_eq!(read_dump(&path).unwrap(), d);
    }
}
