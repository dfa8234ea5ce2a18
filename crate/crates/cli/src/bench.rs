//! `bench`: build time and per-pair decode time over a suite file.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::Context;
use graphlabel::eqlabel::{compile_sketch, LabelScheme};
use graphlabel::graph::{generate, GeneratorSpec};
use graphlabel::rng::rng_from_seed;
use rand::Rng;
use serde::Deserialize;
use serde_json::json;

use crate::commands::build_scheme;
use crate::config::{BenchArgs, LabelKind, OrderKind};
use crate::report::Outcome;

#[derive(Debug, Deserialize)]
struct Suite {
    instance: Vec<Instance>,
}

#[derive(Debug, Deserialize)]
struct Instance {
    name: String,
    spec: String,
    kind: LabelKind,
    #[serde(default = "one")]
    r: u32,
    #[serde(default = "degeneracy")]
    order: OrderKind,
    #[serde(default)]
    root: usize,
    delta: Option<u32>,
}

fn one() -> u32 {
    1
}

fn degeneracy() -> OrderKind {
    OrderKind::Degeneracy
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn time_decodes<F: Fn(usize, usize) -> bool>(pairs: &[(usize, usize)], decode: F) -> (f64, usize) {
    let start = Instant::now();
    let ones = pairs.iter().filter(|&&(x, y)| decode(x, y)).count();
    (
        start.elapsed().as_nanos() as f64 / pairs.len().max(1) as f64,
        ones,
    )
}

pub fn run(a: &BenchArgs) -> anyhow::Result<Outcome> {
    let path: &PathBuf = &a.suite;
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let suite: Suite =
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let reps = a.reps.max(1);
    let mut rows = Vec::new();
    for inst in &suite.instance {
        let g = generate(&inst.spec.parse::<GeneratorSpec>()?)?;
        let mut build = Vec::new();
        let mut scheme: Option<LabelScheme> = None;
        for _ in 0..reps {
            let start = Instant::now();
            let s = build_scheme(
                &g,
                inst.kind,
                inst.r,
                inst.order,
                inst.root,
                inst.delta,
                &mut Default::default(),
            )
            .with_context(|| format!("instance {}", inst.name))?;
            build.push(start.elapsed().as_secs_f64() * 1e3);
            scheme = Some(s);
        }
        let scheme = scheme.expect("reps >= 1");
        let mut rng = rng_from_seed(0);
        let n = g.n();
        let pairs: Vec<(usize, usize)> = (0..a.pairs)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect();
        let (label_ns, _) = time_decodes(&pairs, |x, y| scheme.decode(x, y).unwrap_or(false));
        let sketch = compile_sketch(&scheme, 0, None)?;
        let (sketch_ns, _) = time_decodes(&pairs, |x, y| sketch.decode(x, y).unwrap_or(false));
        let size = scheme.size();
        rows.push(json!({
            "name": inst.name,
            "n": n,
            "m": g.m(),
            "build_ms": median(build),
            "label_decode_ns": label_ns,
            "sketch_decode_ns": sketch_ns,
            "k": size.k,
            "label_bits": size.bits_max,
            "sketch_bits": sketch.size_bits(),
        }));
    }
    Ok(Outcome::new(
        "bench",
        true,
        json!({"suite": path.display().to_string(), "reps": reps, "instances": rows}),
    ))
}
