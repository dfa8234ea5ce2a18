//! End-to-end acceptance checks. Prints one `[PASS]`/`[FAIL]` line per
//! criterion. Failures are reported but only fail the process when
//! `GRAPHLABEL_ACCEPTANCE_STRICT=1`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use graphlabel::adjacency::build_adjacency_labels;
use graphlabel::adt::{
    calibrate_padding, sc_adt_labels, tree_sparse_cover, verify_cover, PdsFamily,
};
use graphlabel::bounds::{
    adt_size_lower_bound, counting_verifier, gadget_audit, girth_gap_audit, DecoderTable,
};
use graphlabel::eqlabel::{
    count_pairs, evaluate_family, evaluate_scheme, CompiledFamily, LabelScheme, PairPredicate,
    PredicateKind, SketchFamily,
};
use graphlabel::graph::{
    gadget_bintree, gadget_min_length, generate, induced_subhypercube, k_subdivide, GeneratorSpec,
    INF,
};
use graphlabel::rng::{derive_seed, rng_from_seed};
use graphlabel::smalldist::{
    build_distance_labels, choose_order, compute_wcol, wcol_upper_bound, LayeredScheme,
    OrderStrategy, SparseClass,
};
use graphlabel::{Graph, Result};
use rand::seq::SliceRandom;
use rand::Rng;

const SEED: u64 = 0x5eed_2026;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn gen(spec: GeneratorSpec) -> Graph {
    generate(&spec).expect("generator arguments are valid")
}

fn exact(scheme: &LabelScheme, g: &Graph, kind: PredicateKind) -> Result<u64> {
    Ok(evaluate_scheme(scheme, &PairPredicate::new(g.clone(), kind))?.errors)
}

fn adjacency_exactness() -> Result<Outcome> {
    let mut rng = rng_from_seed(derive_seed(SEED, 1));
    let mut graphs = Vec::new();
    for i in 0..100 {
        let n = rng.gen_range(20..=500);
        let avg = rng.gen_range(1.0..12.0);
        let p = (avg / n as f64).min(1.0);
        graphs.push(gen(GeneratorSpec::Gnp {
            n,
            p,
            seed: derive_seed(SEED, 1000 + i),
        }));
    }
    for d in 1..=8 {
        graphs.push(gen(GeneratorSpec::Hypercube { d }));
    }
    let mut errors = 0;
    let mut over = 0;
    let mut pairs = 0u64;
    for g in &graphs {
        let scheme = build_adjacency_labels(g);
        errors += exact(&scheme, g, PredicateKind::Adjacency)?;
        pairs += (g.n() * (g.n() - 1) / 2) as u64;
        if scheme.size().k > g.degeneracy_order().degeneracy + 1 {
            over += 1;
        }
    }
    Ok(outcome(
        errors == 0 && over == 0,
        format!(
            "{} graphs, {pairs} pairs, {errors} decode errors, {over} graphs over d+1 codes",
            graphs.len()
        ),
    ))
}

fn hash_compiler() -> Result<Outcome> {
    let grid = gen(GeneratorSpec::Grid { w: 5, h: 5 });
    let tree = gen(GeneratorSpec::RandomTree {
        n: 24,
        seed: derive_seed(SEED, 2),
    });
    let tree_order = choose_order(&tree, &OrderStrategy::Bfs { root: 0 })?;
    let cases = [
        (
            "grid(5,5) adjacency",
            build_adjacency_labels(&grid),
            grid.clone(),
            PredicateKind::Adjacency,
        ),
        (
            "tree(24) distance r=2",
            build_distance_labels(&tree, 2, &tree_order)?,
            tree.clone(),
            PredicateKind::DistLeq(2),
        ),
    ];
    let w = 27u64;
    let mut pass = true;
    let mut detail = Vec::new();
    for (i, (name, scheme, g, kind)) in cases.into_iter().enumerate() {
        let k = scheme.size().k;
        let bound = (k * k) as f64 / w as f64 + 0.02;
        let family = CompiledFamily::new(scheme, Some(w))?;
        let report = evaluate_family(
            &family,
            &PairPredicate::new(g, kind),
            100_000,
            derive_seed(SEED, 20 + i as u64),
        )?;
        let worst_fp = report
            .negatives
            .worst
            .as_ref()
            .map_or(0.0, |p| p.error.estimate);
        let ok = k == 3 && report.positives.errors == 0 && worst_fp <= bound;
        pass &= ok;
        detail.push(format!(
            "{name}: k={k}, fn={}, worst fp={worst_fp:.4} <= {bound:.4}",
            report.positives.errors
        ));
    }
    Ok(outcome(pass, detail.join("; ")))
}

fn distance_exactness() -> Result<Outcome> {
    let mut rng = rng_from_seed(derive_seed(SEED, 3));
    let mut errors = 0u64;
    let mut wcol_over = 0;
    let mut runs = 0;
    for i in 0..70u64 {
        let tree = i < 50;
        let g = if tree {
            let n = rng.gen_range(50..=1000);
            gen(GeneratorSpec::RandomTree {
                n,
                seed: derive_seed(SEED, 3000 + i),
            })
        } else {
            let n = rng.gen_range(100..=600);
            gen(GeneratorSpec::Gnp {
                n,
                p: 2.5 / n as f64,
                seed: derive_seed(SEED, 3000 + i),
            })
        };
        let order = if tree {
            choose_order(&g, &OrderStrategy::Bfs { root: 0 })?
        } else {
            choose_order(&g, &OrderStrategy::Degeneracy)?
        };
        for r in 1..=6 {
            let w = compute_wcol(&g, &order, r)?;
            if tree && w.wcol > r as usize + 1 {
                wcol_over += 1;
            }
            let scheme = graphlabel::smalldist::labels_from_wcol(&w);
            errors += exact(&scheme, &g, PredicateKind::DistLeq(r))?;
            runs += 1;
        }
    }
    Ok(outcome(
        errors == 0 && wcol_over == 0,
        format!("{runs} (graph, r) runs, {errors} decode errors, {wcol_over} tree runs with wcol_r > r+1"),
    ))
}

fn layered_exactness() -> Result<Outcome> {
    let mut errors = 0u64;
    let mut max_windows = 0;
    for (w, h) in [(30, 30), (50, 20)] {
        let g = gen(GeneratorSpec::Grid { w, h });
        for r in [2, 4, 6] {
            let layered = LayeredScheme::build(&g, r, 0)?;
            max_windows = max_windows.max(layered.max_windows_per_vertex());
            errors += exact(&layered.labels(), &g, PredicateKind::DistLeq(r))?;
        }
    }
    Ok(outcome(
        errors == 0 && max_windows <= 2,
        format!("6 runs, {errors} decode errors, max windows per vertex {max_windows}"),
    ))
}

fn calculator_values() -> Result<Outcome> {
    let p1 = wcol_upper_bound(SparseClass::Planar, 1)?;
    let p2 = wcol_upper_bound(SparseClass::Planar, 2)?;
    let lb = adt_size_lower_bound(512.0, 2.0)?;
    let want = 512f64.sqrt() / 9.0;
    Ok(outcome(
        p1 == 9 && p2 == 30 && (lb - want).abs() <= 1e-9,
        format!("planar r=1: {p1}, r=2: {p2}, size bound(512, 2) = {lb:.12} (want {want:.12})"),
    ))
}

fn subdivision_and_gadgets() -> Result<Outcome> {
    let mut bases = vec![("petersen".to_string(), gen(GeneratorSpec::Petersen))];
    for n in [3, 5, 8, 13] {
        bases.push((format!("C{n}"), gen(GeneratorSpec::Cycle { n })));
    }
    let mut identity_errors = 0u64;
    for (_, g) in &bases {
        let dg = g.all_pairs();
        for k in 1..=3 {
            let sub = k_subdivide(g, k);
            let ds = sub.all_pairs();
            for u in 0..g.n() {
                for v in 0..g.n() {
                    if ds.get(u, v) as u64 != (k as u64 + 1) * dg.get(u, v) as u64 {
                        identity_errors += 1;
                    }
                }
            }
        }
    }
    let mut gadget_inputs: Vec<Graph> = vec![gen(GeneratorSpec::Petersen)];
    for n in [3, 7, 12, 20] {
        gadget_inputs.push(gen(GeneratorSpec::Cycle { n }));
        gadget_inputs.push(gen(GeneratorSpec::Path { n }));
    }
    gadget_inputs.push(gen(GeneratorSpec::Grid { w: 2, h: 10 }));
    gadget_inputs.push(gen(GeneratorSpec::Complete { n: 4 }));
    let mut audits = 0;
    let mut failures = 0;
    for g in &gadget_inputs {
        if g.max_degree() > 3 || g.n() > 20 {
            continue;
        }
        let min = gadget_min_length(g.n());
        for ell in [min, min + 1, min + 4] {
            let gadget = gadget_bintree(g, ell)?;
            let audit = gadget_audit(g, ell)?;
            audits += 1;
            if !audit.passed || gadget.graph.max_degree() > 3 {
                failures += 1;
            }
        }
    }
    Ok(outcome(
        identity_errors == 0 && failures == 0,
        format!("{identity_errors} subdivision distance mismatches; {failures}/{audits} gadget audits failed"),
    ))
}

fn tree_cover_scheme() -> Result<Outcome> {
    let mut rng = rng_from_seed(derive_seed(SEED, 7));
    let mut cover_failures = 0;
    let mut decode_errors = 0u64;
    let mut max_tau = 0;
    for i in 0..100u64 {
        let n = rng.gen_range(10..=500);
        let g = gen(GeneratorSpec::RandomTree {
            n,
            seed: derive_seed(SEED, 7000 + i),
        });
        let delta = [8, 16, 24, 40][i as usize % 4];
        let cover = tree_sparse_cover(&g, 0, delta)?;
        let audit = verify_cover(&g, &cover)?;
        max_tau = max_tau.max(audit.tau);
        if !audit.passed || cover.sigma != 8 || audit.tau > 2 {
            cover_failures += 1;
        }
        let scheme = sc_adt_labels(&cover);
        decode_errors += exact(&scheme, &g, PredicateKind::DistBand(delta / 8, delta))?;
    }
    Ok(outcome(
        cover_failures == 0 && decode_errors == 0,
        format!("100 trees, {cover_failures} cover failures, max tau {max_tau}, {decode_errors} decode errors"),
    ))
}

fn pds_sketch() -> Result<Outcome> {
    let mut pass = true;
    let mut detail = Vec::new();
    let grid = gen(GeneratorSpec::Grid { w: 20, h: 20 });

    let far = PdsFamily::with_diameter(&grid, 12.0, 4.0)?;
    let bits = far.sketcher(SEED).size_bits();
    pass &= bits == 2;
    detail.push(format!("label bits {bits}"));

    let counts = count_pairs(
        &far,
        &PairPredicate::new(grid.clone(), PredicateKind::DistLeq(12)),
        10_000,
        derive_seed(SEED, 80),
    )?;
    let (mut ones, mut total, mut within) = (0u64, 0u64, 0u64);
    let mut far_pairs = 0u64;
    for (i, &(_, _, truth)) in counts.pairs.iter().enumerate() {
        if !truth {
            far_pairs += 1;
            ones += counts.ones[i] as u64;
            total += counts.trials;
            let rate = counts.ones[i] as f64 / counts.trials as f64;
            within += ((rate - 1.0 / 3.0).abs() <= 0.02) as u64;
        }
    }
    let pooled = ones as f64 / total as f64;
    pass &= far_pairs > 0 && (pooled - 1.0 / 3.0).abs() <= 0.02;
    detail.push(format!(
        "d > 12 on grid(20,20): Pr[1] = {pooled:.4} over {far_pairs} pairs ({within} pairs individually within 0.02)"
    ));

    let rounds = calibrate_padding(&grid, 3, 16.0, 40.0, 4, 2000, derive_seed(SEED, 81))?;
    let fit = &rounds.last().expect("at least one round").fit;
    let alpha = fit.alpha;
    let family = PdsFamily::new(&grid, 3, &fit.params)?;
    let high = (alpha * 3.0).floor() as u32;
    let counts = count_pairs(
        &family,
        &PairPredicate::new(grid.clone(), PredicateKind::DistBand(3, high)),
        10_000,
        derive_seed(SEED, 82),
    )?;
    let mut near_min = f64::INFINITY;
    let mut far_min = f64::INFINITY;
    let mut far = 0u64;
    for (i, &(_, _, truth)) in counts.pairs.iter().enumerate() {
        let one = counts.ones[i] as f64 / counts.trials as f64;
        if truth {
            near_min = near_min.min(one);
        } else {
            far += 1;
            far_min = far_min.min(1.0 - one);
        }
    }
    let diameter = grid
        .all_pairs()
        .row(0)
        .iter()
        .copied()
        .filter(|&d| d != INF)
        .max()
        .unwrap_or(0);
    pass &= near_min >= 0.63;
    detail.push(format!(
        "measured beta={:.2} delta={:.5} alpha={alpha:.2}, Delta={:.1}: min Pr[1 | d <= 3] = {near_min:.4}",
        fit.params.beta,
        fit.params.delta,
        fit.params.diameter_for(3),
    ));
    if far == 0 {
        pass = false;
        detail.push(format!(
            "no pairs with d > alpha*r = {high} (grid diameter {diameter}), Pr[0 | d > alpha*r] untestable"
        ));
    } else {
        pass &= far_min >= 0.63;
        detail.push(format!(
            "min Pr[0 | d > {high}] = {far_min:.4} over {far} pairs"
        ));
    }
    Ok(outcome(pass, detail.join("; ")))
}

fn counting_core() -> Result<Outcome> {
    let k4 = gen(GeneratorSpec::Complete { n: 4 });
    let mut worst = 0;
    let mut bad = 0;
    for i in 0..100 {
        let table = DecoderTable::random(1, derive_seed(SEED, 9000 + i))?;
        let report = counting_verifier(&k4, 1.0 / 6.0, &table)?;
        worst = worst.max(report.max_good);
        if report.max_good > 7 || report.max_good as f64 > report.half_bound {
            bad += 1;
        }
    }
    Ok(outcome(
        bad == 0,
        format!("100 tables, max_good {worst} (<= 7 <= 8), {bad} over"),
    ))
}

fn girth_dichotomy() -> Result<Outcome> {
    let audit = girth_gap_audit(&gen(GeneratorSpec::Petersen), 3, 200, derive_seed(SEED, 10))?;
    Ok(outcome(
        audit.violations.is_empty(),
        format!(
            "200 subgraphs, {} removed edges checked, min distance {:?}, {} violations",
            audit.removed_checked,
            audit.min_removed_dist,
            audit.violations.len()
        ),
    ))
}

fn hypercube_edges() -> Result<Outcome> {
    let mut rng = rng_from_seed(derive_seed(SEED, 11));
    let mut cube_errors = 0;
    let mut over = 0;
    let mut cubes = 0;
    let mut subsets = 0;
    for d in 1..=10u32 {
        for _ in 0..20 {
            let mut coords: Vec<u32> = (0..d).collect();
            coords.shuffle(&mut rng);
            let k = rng.gen_range(0..=d) as usize;
            let free = &coords[..k];
            let base: u64 = rng.gen_range(0..1u64 << d) & !free.iter().fold(0, |m, &c| m | 1 << c);
            let vertices: Vec<u64> = (0..1u64 << k)
                .map(|mask| {
                    free.iter()
                        .enumerate()
                        .fold(base, |v, (j, &c)| v | ((mask >> j) & 1) << c)
                })
                .collect();
            let g = induced_subhypercube(d, &vertices)?;
            cubes += 1;
            if g.m() != (1usize << k) * k / 2 {
                cube_errors += 1;
            }

            let mut all: Vec<u64> = (0..1u64 << d).collect();
            all.shuffle(&mut rng);
            let size = rng.gen_range(1..=all.len());
            let g = induced_subhypercube(d, &all[..size])?;
            subsets += 1;
            let n = size as f64;
            if g.m() as f64 > n * n.log2() / 2.0 + 1e-9 {
                over += 1;
            }
        }
    }
    Ok(outcome(
        cube_errors == 0 && over == 0,
        format!("{cubes} subcubes ({cube_errors} mismatches), {subsets} random subsets ({over} over n log2 n / 2)"),
    ))
}

type Check = fn() -> Result<Outcome>;

fn main() -> ExitCode {
    let criteria: [(&str, Check, u64); 11] = [
        (
            "adjacency labels exact, at most d+1 codes",
            adjacency_exactness,
            30,
        ),
        (
            "hash compiler: no false negatives, fp <= k^2/w + 0.02",
            hash_compiler,
            60,
        ),
        (
            "distance-r labels exact, tree wcol_r <= r+1",
            distance_exactness,
            300,
        ),
        (
            "layered distance labels exact, <= 2 windows",
            layered_exactness,
            120,
        ),
        ("calculator values", calculator_values, 1),
        (
            "subdivision and gadget identities",
            subdivision_and_gadgets,
            60,
        ),
        ("tree sparse cover and cover labels", tree_cover_scheme, 60),
        ("padded-partition 2-bit sketch", pds_sketch, 300),
        ("counting core on K4", counting_core, 60),
        ("girth dichotomy on Petersen", girth_dichotomy, 10),
        ("hypercube edge bound", hypercube_edges, 10),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(*limit);
        let (pass, detail) = match result {
            Ok(o) => (o.pass && in_time, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "[{}] {:>2} {name} ({:.2}s, limit {limit}s): {detail}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    let strict = std::env::var("GRAPHLABEL_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if failed == 0 || !strict {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
