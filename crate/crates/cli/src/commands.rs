//! One function per subcommand; each returns a JSON report.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use graphlabel::adjacency::{
    arboricity_bounds, build_adjacency_labels, build_forest_labels, build_shrubdepth_labels,
    ConnectionModel,
};
use graphlabel::adt::{
    calibrate_padding, fit_padding, greedy_ball_cover, measure_padding, padded_partition,
    preset_params, sc_adt_labels, tree_sparse_cover, verify_cover, Cover, MinorClass, PaddedParams,
    PdsFamily,
};
use graphlabel::bounds::{
    adt_size_lower_bound, counting_verifier, gadget_audit, girth_gap_audit, DecoderTable,
};
use graphlabel::eqlabel::{
    count_pairs, evaluate_family, evaluate_scheme, read_dump, write_dump, Boosted, CompiledFamily,
    Decoder, Dump, EvalReport, LabelScheme, PairCounts, PairPredicate, PredicateKind, SketchFamily,
};
use graphlabel::graph::{
    gadget_min_length, generate, k_subdivide, read_edge_list, roles_to_json, write_edge_list,
    GeneratorSpec, INF,
};
use graphlabel::rng::derive_seed;
use graphlabel::smalldist::{
    choose_order, compute_wcol, labels_from_wcol, wcol_upper_bound, LayeredScheme, OrderStrategy,
    SparseClass,
};
use graphlabel::Graph;
use serde_json::{json, Value};

use crate::config::*;
use crate::report::Outcome;

/// Success rate an ADT report must reach on every pair: the 2/3 target less
/// Monte Carlo slack.
const MIN_SUCCESS_RATE: f64 = 0.63;

pub fn dispatch(config: &RunConfig) -> anyhow::Result<Outcome> {
    let seed = config.seed;
    match &config.command {
        Command::Gen(a) => gen(a),
        Command::Label(a) => label(a),
        Command::Sketch(a) => sketch(a, seed),
        Command::Eval(a) => eval(a, seed),
        Command::Cover(a) => cover(a),
        Command::Partition(a) => partition(a, seed),
        Command::Adt(a) => adt(a, seed),
        Command::Audit(a) => audit(a, seed),
        Command::Bounds(a) => bounds(a, seed),
        Command::Bench(a) => crate::bench::run(a),
    }
}

pub fn load_graph(src: &GraphSource) -> anyhow::Result<Graph> {
    match (&src.input, &src.spec) {
        (Some(path), _) => {
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            Ok(read_edge_list(BufReader::new(file))
                .with_context(|| format!("reading {}", path.display()))?)
        }
        (None, Some(spec)) => Ok(generate(&spec.parse::<GeneratorSpec>()?)?),
        (None, None) => bail!("a graph is required: pass --in FILE or --spec SPEC"),
    }
}

fn path_value(p: &Option<std::path::PathBuf>) -> Value {
    p.as_ref()
        .map_or(Value::Null, |p| json!(p.display().to_string()))
}

fn gen(a: &GenArgs) -> anyhow::Result<Outcome> {
    let mut g = generate(&a.spec.parse::<GeneratorSpec>()?)?;
    if let Some(k) = a.subdivide {
        g = k_subdivide(&g, k);
    }
    if let Some(path) = &a.out {
        write_edge_list(
            &g,
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )?;
    }
    if let Some(path) = &a.roles {
        std::fs::write(path, roles_to_json(&g)?)?;
    }
    Ok(Outcome::new(
        "gen",
        true,
        json!({"spec": a.spec, "n": g.n(), "m": g.m(), "max_degree": g.max_degree(), "out": path_value(&a.out)}),
    ))
}

fn order_strategy(kind: OrderKind, root: usize, r: u32) -> OrderStrategy {
    match kind {
        OrderKind::Degeneracy => OrderStrategy::Degeneracy,
        OrderKind::Bfs => OrderStrategy::Bfs { root },
        OrderKind::Exact => OrderStrategy::ExactTiny { r },
    }
}

fn need_delta(delta: Option<u32>) -> anyhow::Result<u32> {
    delta.ok_or_else(|| anyhow!("--delta is required for cover-based labels"))
}

fn label(a: &LabelArgs) -> anyhow::Result<Outcome> {
    let mut extra = serde_json::Map::new();
    let (scheme, n) = match a.kind {
        LabelKind::Shrubdepth => {
            let path = a
                .model
                .as_ref()
                .ok_or_else(|| anyhow!("--model is required for shrubdepth labels"))?;
            let model = ConnectionModel::from_json(&std::fs::read_to_string(path)?)?;
            if a.graph.input.is_some() || a.graph.spec.is_some() {
                model.check_against(&load_graph(&a.graph)?)?;
            }
            extra.insert("depth".into(), json!(model.depth()));
            extra.insert("colors".into(), json!(model.colors()));
            (build_shrubdepth_labels(&model), model.n())
        }
        kind => {
            let g = load_graph(&a.graph)?;
            let scheme = build_scheme(&g, kind, a.r, a.order, a.root, a.delta, &mut extra)?;
            (scheme, g.n())
        }
    };
    if let Some(path) = &a.out {
        write_dump(&Dump::Labels(scheme.clone()), path)?;
    }
    let mut report = json!({
        "kind": a.kind,
        "n": n,
        "decoder": scheme.decoder().id(),
        "disjunctive": scheme.disjunctive(),
        "size": scheme.size(),
    });
    report.as_object_mut().expect("object").extend(extra);
    report["out"] = path_value(&a.out);
    Ok(Outcome::new("label", true, report))
}

/// Builds every label kind that is computed from a graph.
pub fn build_scheme(
    g: &Graph,
    kind: LabelKind,
    r: u32,
    order: OrderKind,
    root: usize,
    delta: Option<u32>,
    extra: &mut serde_json::Map<String, Value>,
) -> anyhow::Result<LabelScheme> {
    Ok(match kind {
        LabelKind::Adjacency => {
            extra.insert("degeneracy".into(), json!(g.degeneracy_order().degeneracy));
            build_adjacency_labels(g)
        }
        LabelKind::Forest => build_forest_labels(g)?,
        LabelKind::Distance => {
            let order = choose_order(g, &order_strategy(order, root, r))?;
            let w = compute_wcol(g, &order, r)?;
            extra.insert("wcol".into(), json!(w.wcol));
            labels_from_wcol(&w)
        }
        LabelKind::Layered => {
            let layered = LayeredScheme::build(g, r, root)?;
            extra.insert("windows".into(), json!(layered.windows.len()));
            extra.insert(
                "max_windows_per_vertex".into(),
                json!(layered.max_windows_per_vertex()),
            );
            extra.insert("max_window_wcol".into(), json!(layered.max_window_wcol()));
            layered.labels()
        }
        LabelKind::TreeCover | LabelKind::BallCover => {
            let delta = need_delta(delta)?;
            let cover = if kind == LabelKind::TreeCover {
                tree_sparse_cover(g, root, delta)?
            } else {
                greedy_ball_cover(g, delta)?
            };
            extra.insert("tau".into(), json!(cover.tau()));
            extra.insert("sigma".into(), json!(cover.sigma));
            sc_adt_labels(&cover)
        }
        LabelKind::Shrubdepth => bail!("shrubdepth labels are built from a connection model"),
    })
}

fn read_labels(path: &Path) -> anyhow::Result<LabelScheme> {
    match read_dump(path).with_context(|| format!("reading {}", path.display()))? {
        Dump::Labels(s) => Ok(s),
        Dump::Sketch(_) => bail!(
            "{} is a sketch dump; a label dump is required",
            path.display()
        ),
    }
}

fn sketch(a: &SketchArgs, seed: u64) -> anyhow::Result<Outcome> {
    if a.copies == 0 {
        bail!("--copies must be at least 1");
    }
    let family = CompiledFamily::new(read_labels(&a.labels)?, a.w)?;
    let w = family.w();
    let sketcher = if a.copies == 1 {
        family.sketcher(seed)
    } else {
        Boosted {
            inner: family,
            copies: a.copies,
        }
        .sketcher(seed)
    };
    if let Some(path) = &a.out {
        write_dump(&Dump::Sketch(sketcher.clone()), path)?;
    }
    Ok(Outcome::new(
        "sketch",
        true,
        json!({
            "seed": seed,
            "decoder": sketcher.decoder().id(),
            "n": sketcher.n(),
            "w": w,
            "copies": a.copies,
            "bits_per_vertex": sketcher.size_bits(),
            "one_sided": sketcher.one_sided(),
            "out": path_value(&a.out),
        }),
    ))
}

pub fn parse_predicate(text: &str) -> anyhow::Result<PredicateKind> {
    let bad = || anyhow!("cannot parse predicate {text:?}; use adjacency, dist:R or band:LOW,HIGH");
    let (name, rest) = text.split_once(':').unwrap_or((text, ""));
    Ok(match name {
        "adjacency" if rest.is_empty() => PredicateKind::Adjacency,
        "dist" => PredicateKind::DistLeq(rest.trim().parse().map_err(|_| bad())?),
        "band" => {
            let (lo, hi) = rest.split_once(',').ok_or_else(bad)?;
            let (lo, hi): (u32, u32) = (
                lo.trim().parse().map_err(|_| bad())?,
                hi.trim().parse().map_err(|_| bad())?,
            );
            if lo > hi {
                return Err(bad());
            }
            PredicateKind::DistBand(lo, hi)
        }
        _ => return Err(bad()),
    })
}

fn default_predicate(decoder: &Decoder) -> anyhow::Result<PredicateKind> {
    Ok(match *decoder {
        Decoder::Orientation | Decoder::Shrubdepth { .. } => PredicateKind::Adjacency,
        Decoder::Distance { r } | Decoder::Layered { r } => PredicateKind::DistLeq(r),
        Decoder::AnyCommon => bail!("cover labels need an explicit --predicate band:LOW,HIGH"),
    })
}

fn eval(a: &EvalArgs, seed: u64) -> anyhow::Result<Outcome> {
    let g = load_graph(&a.graph)?;
    let dump = read_dump(&a.dump).with_context(|| format!("reading {}", a.dump.display()))?;
    let kind = match (&a.predicate, &dump) {
        (Some(p), _) => parse_predicate(p)?,
        (None, Dump::Labels(s)) => default_predicate(s.decoder())?,
        (None, Dump::Sketch(_)) => bail!("sketch dumps need an explicit --predicate"),
    };
    let predicate = PairPredicate::new(g, kind);
    let report: EvalReport = match dump {
        Dump::Labels(scheme) if a.trials == 0 => evaluate_scheme(&scheme, &predicate)?,
        Dump::Labels(scheme) => {
            let family = CompiledFamily::new(scheme, a.w)?;
            if a.copies > 1 {
                evaluate_family(
                    &Boosted {
                        inner: family,
                        copies: a.copies,
                    },
                    &predicate,
                    a.trials,
                    seed,
                )?
            } else {
                evaluate_family(&family, &predicate, a.trials, seed)?
            }
        }
        Dump::Sketch(sketcher) => {
            if sketcher.n() != predicate.graph().n() {
                bail!(
                    "sketch covers {} vertices but the graph has {}",
                    sketcher.n(),
                    predicate.graph().n()
                );
            }
            let pairs = predicate.defined_pairs();
            let ones = pairs
                .iter()
                .map(|&(x, y, _)| sketcher.decode(x, y).map(u32::from))
                .collect::<graphlabel::Result<_>>()?;
            let counts = PairCounts {
                pairs,
                ones,
                trials: 1,
            };
            let mut r = EvalReport::from_counts("fixed_sketch", sketcher.n(), &counts, None);
            r.one_sided = sketcher.one_sided();
            r.size_bits = Some(sketcher.size_bits());
            r
        }
    };
    let exact = report.trials == 1 && report.mode == "exhaustive";
    // Exact schemes must have zero errors; randomized runs only report.
    let passed = !exact || report.errors == 0;
    let mut value = serde_json::to_value(&report)?;
    value["predicate"] = serde_json::to_value(predicate.kind())?;
    Ok(Outcome::new("eval", passed, value))
}

fn build_cover(g: &Graph, kind: CoverKind, delta: u32, root: usize) -> anyhow::Result<Cover> {
    Ok(match kind {
        CoverKind::Tree => tree_sparse_cover(g, root, delta)?,
        CoverKind::Greedy => greedy_ball_cover(g, delta)?,
    })
}

fn cover(a: &CoverArgs) -> anyhow::Result<Outcome> {
    let g = load_graph(&a.graph)?;
    let cover = build_cover(&g, a.kind, a.delta, a.root)?;
    let audit = verify_cover(&g, &cover)?;
    if let Some(path) = &a.out {
        std::fs::write(path, serde_json::to_string(&cover)?)?;
    }
    Ok(Outcome::new(
        "cover",
        audit.passed,
        json!({
            "kind": a.kind,
            "n": g.n(),
            "delta": cover.delta,
            "sigma": cover.sigma,
            "ball_radius": cover.ball_radius(),
            "clusters": cover.clusters.len(),
            "audit": audit,
            "out": path_value(&a.out),
        }),
    ))
}

fn partition(a: &PartitionArgs, seed: u64) -> anyhow::Result<Outcome> {
    let g = load_graph(&a.graph)?;
    if let Some(trials) = a.measure {
        let gammas = if a.gammas.is_empty() {
            (1..=4).map(|k| k as f64 / a.delta).collect()
        } else {
            a.gammas.clone()
        };
        let table = measure_padding(&g, a.delta, a.rate, &gammas, trials, seed)?;
        let fit = fit_padding(&table).ok();
        return Ok(Outcome::new(
            "partition",
            true,
            json!({"seed": seed, "monotone": table.is_monotone(), "table": table, "fit": fit}),
        ));
    }
    let p = padded_partition(&g, a.delta, a.rate, seed)?;
    let radii = p.padding_radii(&g);
    let min_padding = radii.iter().min().copied();
    if let Some(path) = &a.out {
        std::fs::write(path, serde_json::to_string(&p)?)?;
    }
    Ok(Outcome::new(
        "partition",
        p.certified(),
        json!({
            "seed": seed,
            "n": g.n(),
            "delta": a.delta,
            "rate": a.rate,
            "clusters": p.clusters(),
            "max_radius": p.max_radius(),
            "certified": p.certified(),
            "min_padding_radius": min_padding,
            "out": path_value(&a.out),
        }),
    ))
}

fn parse_minor_class(text: &str) -> anyhow::Result<MinorClass> {
    let bad = || anyhow!("cannot parse class {text:?}; use kt:T or genus:G");
    let (name, v) = text.split_once(':').ok_or_else(bad)?;
    let v: u32 = v.trim().parse().map_err(|_| bad())?;
    match name {
        "kt" => Ok(MinorClass::KtMinorFree { t: v }),
        "genus" => Ok(MinorClass::Genus { g: v }),
        _ => Err(bad()),
    }
}

fn parse_sparse_class(text: &str) -> anyhow::Result<SparseClass> {
    if text == "planar" {
        return Ok(SparseClass::Planar);
    }
    match parse_minor_class(text)? {
        MinorClass::KtMinorFree { t } => Ok(SparseClass::KtMinorFree { t }),
        MinorClass::Genus { .. } => bail!("wcol bounds take planar or kt:T"),
    }
}

/// Minimum and pooled rate of the correct answer per predicate class.
fn class_rates(counts: &PairCounts) -> (Value, Value) {
    let mut stats = [(0u64, u64::MAX, 0u64), (0u64, u64::MAX, 0u64)];
    for (i, &(_, _, truth)) in counts.pairs.iter().enumerate() {
        let right = if truth {
            counts.ones[i] as u64
        } else {
            counts.trials - counts.ones[i] as u64
        };
        let s = &mut stats[truth as usize];
        s.0 += 1;
        s.1 = s.1.min(right);
        s.2 += right;
    }
    let t = counts.trials as f64;
    let view = |(pairs, min, sum): (u64, u64, u64)| {
        if pairs == 0 {
            json!({"pairs": 0, "min_rate": null, "pooled_rate": null})
        } else {
            json!({"pairs": pairs, "min_rate": min as f64 / t, "pooled_rate": sum as f64 / (t * pairs as f64)})
        }
    };
    (view(stats[1]), view(stats[0]))
}

fn adt(a: &AdtArgs, seed: u64) -> anyhow::Result<Outcome> {
    let g = load_graph(&a.graph)?;
    if a.r == 0 {
        bail!("--r must be at least 1");
    }
    match a.kind {
        AdtKind::TreeCover | AdtKind::BallCover => {
            let (kind, sigma) = if a.kind == AdtKind::TreeCover {
                (CoverKind::Tree, 8)
            } else {
                (CoverKind::Greedy, 4)
            };
            let cover = build_cover(&g, kind, sigma * a.r, 0)?;
            let scheme = sc_adt_labels(&cover);
            let band = PredicateKind::DistBand(a.r, cover.delta);
            let report = evaluate_scheme(&scheme, &PairPredicate::new(g, band))?;
            Ok(Outcome::new(
                "adt",
                report.errors == 0,
                json!({
                    "kind": a.kind,
                    "r": a.r,
                    "alpha": cover.delta as f64 / a.r as f64,
                    "cover_delta": cover.delta,
                    "tau": cover.tau(),
                    "size": scheme.size(),
                    "errors": report.errors,
                    "positives": report.positives,
                    "negatives": report.negatives,
                }),
            ))
        }
        AdtKind::Pds => {
            let mut calibration = Value::Null;
            let params = if let Some(rate) = a.calibrate {
                let start = (8 * a.r) as f64;
                let rounds =
                    calibrate_padding(&g, a.r, rate, start, 4, 2000, derive_seed(seed, 1))?;
                let last = rounds.last().expect("at least one round");
                calibration = json!(rounds
                    .iter()
                    .map(|r| json!({"delta": r.delta, "beta": r.fit.params.beta, "gamma": r.fit.gamma, "alpha": r.fit.alpha}))
                    .collect::<Vec<_>>());
                last.fit.params
            } else if let Some(preset) = &a.preset {
                preset_params(parse_minor_class(preset)?)?.params
            } else {
                let (beta, delta) = match (a.beta, a.delta) {
                    (Some(b), Some(d)) => (b, d),
                    _ => bail!("pds needs --beta and --delta, --preset or --calibrate"),
                };
                PaddedParams::with_rate(beta, delta, a.shift_rate.unwrap_or(beta))?
            };
            let alpha = params.alpha();
            let family = PdsFamily::new(&g, a.r, &params)?;
            let high = (alpha * a.r as f64).floor().min(INF as f64 - 1.0) as u32;
            let predicate = PairPredicate::new(g.clone(), PredicateKind::DistBand(a.r, high));
            let counts = count_pairs(&family, &predicate, a.trials, derive_seed(seed, 2))?;
            let (near, far) = class_rates(&counts);
            if far["pairs"] == 0 {
                eprintln!("warning: no pair is farther than alpha*r = {high}; the far-pair rate is untested");
            }
            let ok = |v: &Value| v["min_rate"].as_f64().is_none_or(|x| x >= MIN_SUCCESS_RATE);
            Ok(Outcome::new(
                "adt",
                ok(&near) && ok(&far),
                json!({
                    "seed": seed,
                    "kind": a.kind,
                    "r": a.r,
                    "params": params,
                    "alpha": alpha,
                    "partition_delta": family.delta,
                    "bits": family.sketcher(seed).size_bits(),
                    "trials": a.trials,
                    "near": near,
                    "far": far,
                    "calibration": calibration,
                }),
            ))
        }
    }
}

fn audit(a: &AuditArgs, seed: u64) -> anyhow::Result<Outcome> {
    let g = load_graph(&a.graph)?;
    match a.kind {
        AuditKind::Girth => {
            let audit = girth_gap_audit(&g, a.alpha, a.trials, seed)?;
            Ok(Outcome::new(
                "audit",
                audit.violations.is_empty(),
                json!({"kind": a.kind, "seed": seed, "audit": audit}),
            ))
        }
        AuditKind::Gadget => {
            let ell = a.ell.unwrap_or_else(|| gadget_min_length(g.n()));
            let audit = gadget_audit(&g, ell)?;
            Ok(Outcome::new(
                "audit",
                audit.passed,
                json!({"kind": a.kind, "audit": audit}),
            ))
        }
        AuditKind::Subdivision => {
            let sub = k_subdivide(&g, a.k);
            let (dg, ds) = (g.all_pairs(), sub.all_pairs());
            let mut mismatches = 0u64;
            for u in 0..g.n() {
                for v in u + 1..g.n() {
                    let want = dg.get(u, v);
                    let want = if want == INF {
                        INF
                    } else {
                        want * (a.k as u32 + 1)
                    };
                    mismatches += (ds.get(u, v) != want) as u64;
                }
            }
            Ok(Outcome::new(
                "audit",
                mismatches == 0,
                json!({"kind": a.kind, "k": a.k, "n": g.n(), "n_subdivided": sub.n(), "mismatches": mismatches}),
            ))
        }
    }
}

fn bounds(a: &BoundsArgs, seed: u64) -> anyhow::Result<Outcome> {
    match a.kind {
        BoundsKind::Counting => {
            let g = load_graph(&a.graph)?;
            let mut reports = Vec::new();
            for i in 0..a.tables {
                let table = DecoderTable::random(a.s, derive_seed(seed, i))?;
                reports.push(counting_verifier(&g, a.error, &table)?);
            }
            let first = reports
                .first()
                .ok_or_else(|| anyhow!("--tables must be at least 1"))?;
            let max_good = reports.iter().map(|r| r.max_good).max().unwrap_or(0);
            let passed = reports
                .iter()
                .all(|r| r.within_hamming_bound && r.within_half_bound);
            Ok(Outcome::new(
                "bounds",
                passed,
                json!({
                    "kind": a.kind,
                    "seed": seed,
                    "n": first.n,
                    "m": first.m,
                    "s": a.s,
                    "error": a.error,
                    "tables": a.tables,
                    "max_errors": first.max_errors,
                    "max_good": max_good,
                    "hamming_bound": first.hamming_bound,
                    "half_bound": first.half_bound,
                    "tables_concluding": reports.iter().filter(|r| r.conclusion).count(),
                }),
            ))
        }
        BoundsKind::Wcol => {
            let class = parse_sparse_class(a.class.as_deref().unwrap_or("planar"))?;
            let bound = wcol_upper_bound(class, a.r)?;
            Ok(Outcome::new(
                "bounds",
                true,
                json!({"kind": a.kind, "class": class, "r": a.r, "wcol_upper_bound": bound.to_string()}),
            ))
        }
        BoundsKind::AdtSize => {
            let (n, alpha) = match (a.n, a.alpha) {
                (Some(n), Some(alpha)) => (n, alpha),
                _ => bail!("adt-size needs --n and --alpha"),
            };
            Ok(Outcome::new(
                "bounds",
                true,
                json!({"kind": a.kind, "n": n, "alpha": alpha, "bits_lower_bound": adt_size_lower_bound(n, alpha)?}),
            ))
        }
        BoundsKind::Arboricity => {
            let g = load_graph(&a.graph)?;
            Ok(Outcome::new(
                "bounds",
                true,
                json!({"kind": a.kind, "n": g.n(), "m": g.m(), "arboricity": arboricity_bounds(&g)?}),
            ))
        }
        BoundsKind::Preset => {
            let class = parse_minor_class(
                a.class
                    .as_deref()
                    .ok_or_else(|| anyhow!("preset needs --class"))?,
            )?;
            let preset = preset_params(class)?;
            Ok(Outcome::new(
                "bounds",
                true,
                json!({"kind": a.kind, "preset": preset, "diameter_for_r": preset.params.diameter_for(a.r)}),
            ))
        }
    }
}
