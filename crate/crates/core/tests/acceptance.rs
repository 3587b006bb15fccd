//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any fails.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use geofig::catalog::{Catalog, Difficulty, Primitive};
use geofig::dataset::{
    build_dataset, compute_stats, verify_dataset, Counts, GenConfig, Generator, ManifestRecord,
    RunReport, MANIFEST_FILE,
};
use geofig::geometry::{
    apply_similarity, bind_constraints, construct_scene, evaluate_constraint, midpoint,
    perpendicular_foot, reflect_across_line, rotate_about, BoundConstraint, DegeneracyThresholds,
    Scene, SimilarityTransform, StrokeKind, Vec2,
};
use geofig::render::{masked_length, MaskParams, Rect};
use geofig::rng::SampleSeed;
use geofig::selector::{select_group, Complexity, SelectionRules};
use geofig::{parse_instance, reference_catalog, ClauseInstance};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn build(dir: &Path, counts: Counts, workers: usize, seed: u64) -> RunReport {
    let cfg = GenConfig {
        master_seed: seed,
        output_dir: dir.to_path_buf(),
        counts,
        workers,
        ..GenConfig::default()
    };
    build_dataset(&cfg).expect("build succeeds")
}

fn records(dir: &Path) -> Vec<ManifestRecord> {
    fs::read_to_string(dir.join(MANIFEST_FILE))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn tier(cat: &Catalog, inst: &ClauseInstance) -> Difficulty {
    cat.get(&inst.clause_id).unwrap().difficulty
}

fn selection_conformance() -> Outcome {
    let cat = reference_catalog();
    let rules = SelectionRules::default();
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for c in Complexity::ALL {
        for i in 0..10_000 {
            let g = select_group(c, &cat, &rules, &mut rng).map_err(|e| e.to_string())?;
            let tiers: Vec<Difficulty> = g.instances.iter().map(|x| tier(&cat, x)).collect();
            let hard = tiers.iter().filter(|&&t| t == Difficulty::Hard).count();
            let ok = match c {
                Complexity::Easy => tiers == [Difficulty::Easy],
                Complexity::Medium => tiers.len() == 2 && hard <= 1,
                Complexity::Hard => (3..=5).contains(&tiers.len()),
            };
            ensure(ok, || format!("{c} draw {i}: {tiers:?}"))?;
        }
    }
    let t = started.elapsed();
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!("30000 draws, 0 violations, {:.2}s", t.as_secs_f64()))
}

fn hard_rate_in_medium() -> Outcome {
    let cat = reference_catalog();
    let rules = SelectionRules::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 100_000;
    let mut with_hard = 0;
    for _ in 0..n {
        let g = select_group(Complexity::Medium, &cat, &rules, &mut rng).map_err(|e| e.to_string())?;
        if g.instances.iter().any(|x| tier(&cat, x) == Difficulty::Hard) {
            with_hard += 1;
        }
    }
    let rate = with_hard as f64 / n as f64;
    let p = rules.hard_in_medium_prob;
    ensure((rate - p).abs() <= 0.01, || format!("rate {rate:.4} vs {p}"))?;
    Ok(format!("rate {rate:.4} (target {p} +/- 0.01)"))
}

/// Builds the 200/400/400 single-thread dataset shared by several criteria.
fn validity_and_throughput(dir: &Path) -> (Outcome, Outcome) {
    let started = Instant::now();
    let report = build(dir, Counts::new(200, 400, 400), 1, 2024);
    let wall = started.elapsed().as_secs_f64();
    let validity = (|| {
        let recs = records(dir);
        ensure(recs.len() == 1000, || format!("{} records", recs.len()))?;
        let split = Complexity::ALL.map(|c| recs.iter().filter(|r| r.complexity == c).count());
        ensure(split == [200, 400, 400], || format!("split {split:?}"))?;
        let worst = recs.iter().map(|r| r.max_residual).fold(0.0, f64::max);
        ensure(worst <= 1e-9, || format!("max residual {worst:e}"))?;
        let v = verify_dataset(&dir.join(MANIFEST_FILE), &reference_catalog()).map_err(|e| e.to_string())?;
        ensure(v.is_clean(), || format!("{} violations, first {:?}", v.violations.len(), v.violations.first()))?;
        Ok(format!("1000 samples, 0 violations, max residual {worst:.1e}"))
    })();
    let throughput = (|| {
        let rate = 1000.0 / wall;
        ensure(rate >= 1.0, || format!("{rate:.2} samples/s"))?;
        ensure(wall < 1200.0, || format!("{wall:.1}s"))?;
        Ok(format!(
            "1000 samples single-thread in {wall:.2}s ({rate:.0} samples/s; report {:.0}/s)",
            report.throughput
        ))
    })();
    (validity, throughput)
}

fn transformed_constraint(c: &BoundConstraint, s: f64) -> BoundConstraint {
    let mut out = c.clone();
    if c.primitive == Primitive::DistConst {
        out.scalar = c.scalar.map(|v| v * s);
    }
    out
}

fn similarity_invariance() -> Outcome {
    let cat = reference_catalog();
    let rules = SelectionRules::default();
    let th = DegeneracyThresholds::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut pairs, mut checked) = (0, 0);
    let (mut worst_inv, mut worst_len) = (0.0f64, 0.0f64);
    while pairs < 1000 {
        let c = Complexity::ALL[pairs % 3];
        let Ok(g) = select_group(c, &cat, &rules, &mut rng) else { continue };
        let Ok(mut scene) = construct_scene(&g.instances, &cat, &th, &mut rng) else { continue };
        // Half the scenes are perturbed so residuals are far from zero.
        if pairs % 2 == 1 {
            for p in scene.points.values_mut() {
                *p = *p + Vec2::new(rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05));
            }
        }
        let t = SimilarityTransform {
            rotation: rng.gen_range(0.0..TAU),
            scale: rng.gen_range(0.2f64.ln()..5.0f64.ln()).exp(),
            translation: Vec2::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)),
        };
        let moved: Scene = apply_similarity(&scene, &t);
        for inst in &g.instances {
            let def = cat.get(&inst.clause_id).unwrap();
            for bc in bind_constraints(def, inst) {
                let (Ok(r), Ok(r2)) = (
                    evaluate_constraint(&bc, &scene.points),
                    evaluate_constraint(&transformed_constraint(&bc, t.scale), &moved.points),
                ) else {
                    continue;
                };
                checked += 1;
                if bc.primitive.is_scale_invariant() {
                    let rel = (r2 - r).abs() / r.abs().max(1.0);
                    worst_inv = worst_inv.max(rel);
                    ensure(rel <= 1e-12, || format!("{:?}: {r} -> {r2}", bc.primitive))?;
                } else {
                    let rel = (r2 - t.scale * r).abs() / (t.scale * r.abs().max(1.0));
                    worst_len = worst_len.max(rel);
                    ensure(rel <= 1e-9, || format!("{:?}: {r} * {} vs {r2}", bc.primitive, t.scale))?;
                }
            }
        }
        pairs += 1;
    }
    Ok(format!(
        "{pairs} pairs, {checked} constraints; worst relative error {worst_inv:.1e} (invariant), {worst_len:.1e} (length)"
    ))
}

fn digest_dir(dir: &Path) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    let mut files = vec![dir.join(MANIFEST_FILE)];
    files.extend(fs::read_dir(dir.join("images")).unwrap().map(|e| e.unwrap().path()));
    for f in files {
        let hash = Sha256::digest(fs::read(&f).unwrap());
        let name = f.strip_prefix(dir).unwrap().display().to_string();
        out.insert(name, format!("{hash:x}"));
    }
    out
}

fn determinism(tmp: &Path) -> Outcome {
    let (a, b) = (tmp.join("w1"), tmp.join("w8"));
    let counts = Counts::new(100, 200, 200);
    build(&a, counts, 1, 77);
    build(&b, counts, 8, 77);
    let (ha, hb) = (digest_dir(&a), digest_dir(&b));
    ensure(ha.len() == 501, || format!("{} files", ha.len()))?;
    ensure(ha == hb, || {
        let diff: Vec<_> = ha.iter().filter(|(k, v)| hb.get(*k) != Some(v)).map(|(k, _)| k).collect();
        format!("differing files: {diff:?}")
    })?;
    Ok("500 samples, manifest + 500 images identical (SHA-256) for 1 and 8 workers".into())
}

fn statistics(tmp: &Path) -> Outcome {
    let dir = tmp.join("stats");
    build(&dir, Counts::new(2000, 4000, 4000), 0, 5);
    let cat = reference_catalog();
    let stats = compute_stats(&dir.join(MANIFEST_FILE), Some(&cat)).map_err(|e| e.to_string())?;
    let recs = records(&dir);
    let instances: usize = recs.iter().map(|r| r.clauses.len()).sum();
    ensure(stats.samples == 10_000, || format!("{} samples", stats.samples))?;
    ensure(stats.unused.is_empty(), || format!("unused clauses {:?}", stats.unused))?;
    ensure(stats.clauses.len() == cat.len(), || "missing rows".into())?;
    for row in &stats.clauses {
        ensure(row.total >= 1, || format!("{} never used", row.clause))?;
        ensure(row.easy + row.medium + row.hard == row.total, || format!("{} split", row.clause))?;
        ensure(row.mean_caption_chars > 0.0 && row.mean_caption_words > 0.0, || {
            format!("{} caption means", row.clause)
        })?;
    }
    let sum: usize = stats.clauses.iter().map(|r| r.total).sum();
    ensure(sum == instances && stats.total_instances == instances, || {
        format!("sum {sum} vs {instances}")
    })?;
    // Spot-check one mean against a direct computation.
    let row = &stats.clauses[0];
    let containing: Vec<&ManifestRecord> = recs
        .iter()
        .filter(|r| r.clauses.iter().any(|c| c.split(' ').next() == Some(row.clause.as_str())))
        .collect();
    let mean = containing.iter().map(|r| r.caption.chars().count()).sum::<usize>() as f64
        / containing.len() as f64;
    ensure((mean - row.mean_caption_chars).abs() < 1e-9, || format!("{mean} vs {}", row.mean_caption_chars))?;
    let csv = stats.to_csv();
    ensure(csv.lines().count() == cat.len() + 1, || "csv rows".into())?;
    Ok(format!(
        "10000 samples, {} clauses all used, {instances} instances summed exactly",
        cat.len()
    ))
}

/// Point names as maximal capital-letter(+digits) units inside runs of
/// capitals and digits delimited by anything else.
fn caption_names(caption: &str) -> Vec<String> {
    let mut names = Vec::new();
    let chars: Vec<char> = caption.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_ascii_uppercase() && (i == 0 || !chars[i - 1].is_alphanumeric()) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_uppercase() || chars[i].is_ascii_digit()) {
                i += 1;
            }
            if i < chars.len() && chars[i].is_ascii_lowercase() {
                continue;
            }
            let run = &chars[start..i];
            let mut j = 0;
            while j < run.len() {
                let mut k = j + 1;
                while k < run.len() && run[k].is_ascii_digit() {
                    k += 1;
                }
                names.push(run[j..k].iter().collect());
                j = k;
            }
        } else {
            i += 1;
        }
    }
    names
}

/// True when `text` occurs as a whole number, not inside a longer one.
fn has_number(caption: &str, text: &str) -> bool {
    caption.match_indices(text).any(|(at, _)| {
        let before = caption[..at].chars().next_back();
        let rest = &caption[at + text.len()..];
        let mut after = rest.chars();
        let (a1, a2) = (after.next(), after.next());
        let digit = |c: Option<char>| matches!(c, Some(c) if c.is_ascii_digit());
        !digit(before) && before != Some('.') && !digit(a1) && !(a1 == Some('.') && digit(a2))
    })
}

fn caption_fidelity(dir: &Path) -> Outcome {
    let cat = reference_catalog();
    let recs = records(dir);
    ensure(recs.len() >= 1000, || "need 1000 samples".into())?;
    let mut checked = 0;
    for r in recs.iter().take(1000) {
        ensure(r.caption_mode == "offline", || format!("{} mode {}", r.id, r.caption_mode))?;
        let names = caption_names(&r.caption);
        for text in &r.clauses {
            let inst = parse_instance(text, &cat).map_err(|e| e.to_string())?;
            for p in inst.point_names() {
                checked += 1;
                ensure(names.iter().any(|n| n == p), || format!("{}: {p} missing in {:?}", r.id, r.caption))?;
            }
            let def = cat.get(&inst.clause_id).unwrap();
            for d in &def.sketch {
                use geofig::catalog::SketchDirective::*;
                let shown = match d {
                    AngleMark { value, .. } => inst.number(value).map(|v| format!("{v}°")),
                    LengthLabel { value, .. } => inst.number(value).map(|v| format!("{v}")),
                    _ => None,
                };
                if let Some(t) = shown {
                    checked += 1;
                    ensure(has_number(&r.caption, &t), || format!("{}: {t} missing in {:?}", r.id, r.caption))?;
                }
            }
        }
    }
    Ok(format!("1000 captions, {checked} tokens, 0 missing"))
}

/// Dense-sampling estimate of masked stroke length. Returns the estimate,
/// its error bound, the total stroke length, and per-patch hit flags.
fn sample_mask(scene: &Scene, patches: &[Rect], step: f64) -> (f64, f64, f64, Vec<bool>) {
    let inside = |p: Vec2, r: &Rect| p.x >= r.x && p.x <= r.x + r.w && p.y >= r.y && p.y <= r.y + r.h;
    let (mut masked, mut total, mut bound) = (0.0, 0.0, 0.0);
    let mut hit = vec![false; patches.len()];
    for s in &scene.strokes {
        let (len, at): (f64, Box<dyn Fn(f64) -> Vec2>) = match &s.kind {
            StrokeKind::Segment { a, b } => {
                let (a, b) = (scene.points[a], scene.points[b]);
                (a.dist(b), Box::new(move |u| Vec2::new(a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u)))
            }
            StrokeKind::Circle { center, radius } => {
                let (c, r) = (scene.points[center], *radius);
                (TAU * r, Box::new(move |u: f64| Vec2::new(c.x + r * (TAU * u).cos(), c.y + r * (TAU * u).sin())))
            }
            StrokeKind::Arc { center, from, to } => {
                let (c, f, t) = (scene.points[center], scene.points[from], scene.points[to]);
                let r = ((f.x - c.x).powi(2) + (f.y - c.y).powi(2)).sqrt();
                let a0 = (f.y - c.y).atan2(f.x - c.x);
                let mut d = (t.y - c.y).atan2(t.x - c.x) - a0;
                while d > std::f64::consts::PI {
                    d -= TAU;
                }
                while d <= -std::f64::consts::PI {
                    d += TAU;
                }
                (r * d.abs(), Box::new(move |u: f64| Vec2::new(c.x + r * (a0 + d * u).cos(), c.y + r * (a0 + d * u).sin())))
            }
        };
        total += len;
        let n = (len / step).ceil().max(1.0) as usize;
        let h = len / n as f64;
        for k in 0..n {
            let p = at((k as f64 + 0.5) / n as f64);
            let mut any = false;
            for (i, r) in patches.iter().enumerate() {
                if inside(p, r) {
                    hit[i] = true;
                    any = true;
                }
            }
            if any {
                masked += h;
            }
        }
        // A convex patch boundary crosses a segment at most twice and a
        // circle at most eight times; each crossing costs at most one step.
        bound += 8.0 * patches.len() as f64 * h;
    }
    (masked, bound, total, hit)
}

fn masking_bound() -> Outcome {
    let cfg = GenConfig {
        master_seed: 9,
        mask: MaskParams {
            probability: 1.0,
            ..MaskParams::default()
        },
        ..GenConfig::default()
    };
    let limit = cfg.mask.max_fraction;
    let g = Generator::new(cfg, reference_catalog());
    let (mut images, mut index, mut patches, mut worst) = (0, 0u64, 0, 0.0f64);
    while images < 1000 {
        let c = Complexity::ALL[(index % 3) as usize];
        index += 1;
        let Ok(s) = g.attempt(index, c, 0) else { continue };
        let group: Vec<ClauseInstance> = s
            .record
            .clauses
            .iter()
            .map(|t| parse_instance(t, g.catalog()).unwrap())
            .collect();
        let out = g
            .render_group(&group, SampleSeed::new(9, index))
            .map_err(|e| e.to_string())?;
        if out.mask.patches.is_empty() {
            continue;
        }
        images += 1;
        patches += out.mask.patches.len();
        let scene = &out.laid.scene;
        let (est, bound, total, hit) = sample_mask(scene, &out.mask.patches, 0.02);
        let exact = masked_length(scene, &out.mask.patches);
        ensure(est <= limit * total + bound, || format!("sample {index}: {est} of {total}"))?;
        ensure(exact <= limit * total * (1.0 + 1e-12), || format!("sample {index}: exact {exact} of {total}"))?;
        ensure((exact - est).abs() <= bound, || format!("sample {index}: exact {exact} vs sampled {est} +/- {bound}"))?;
        ensure(hit.iter().all(|&h| h), || format!("sample {index}: patch misses every stroke"))?;
        ensure(
            out.svg.matches("class=\"mask\"").count() == out.mask.patches.len(),
            || format!("sample {index}: mask rects in SVG"),
        )?;
        worst = worst.max(exact / total);
    }
    Ok(format!("{images} masked images, {patches} patches, worst fraction {:.4}", worst))
}

fn close(a: Vec2, b: Vec2, scale: f64) -> bool {
    (a.x - b.x).abs() <= 1e-12 * scale && (a.y - b.y).abs() <= 1e-12 * scale
}

fn oracle_mid(a: Vec2, b: Vec2) -> Vec2 {
    Vec2::new(a.x + (b.x - a.x) / 2.0, a.y + (b.y - a.y) / 2.0)
}

/// Reflection across the line through `a` at angle phi:
/// [[cos 2phi, sin 2phi], [sin 2phi, -cos 2phi]].
fn oracle_reflect(p: Vec2, a: Vec2, b: Vec2) -> Vec2 {
    let phi = (b.y - a.y).atan2(b.x - a.x);
    let (c2, s2) = ((2.0 * phi).cos(), (2.0 * phi).sin());
    let (x, y) = (p.x - a.x, p.y - a.y);
    Vec2::new(a.x + c2 * x + s2 * y, a.y + s2 * x - c2 * y)
}

/// Complex multiplication `(p - o) * e^{i theta} + o`.
fn oracle_rotate(p: Vec2, o: Vec2, theta: f64) -> Vec2 {
    let (re, im) = (p.x - o.x, p.y - o.y);
    let (c, s) = (theta.cos(), theta.sin());
    Vec2::new(o.x + re * c - im * s, o.y + re * s + im * c)
}

/// Foot on the line `A x + B y + C = 0` through `a` and `b`.
fn oracle_foot(p: Vec2, a: Vec2, b: Vec2) -> Vec2 {
    let (la, lb) = (b.y - a.y, a.x - b.x);
    let lc = b.x * a.y - a.x * b.y;
    let k = (la * p.x + lb * p.y + lc) / (la * la + lb * lb);
    Vec2::new(p.x - la * k, p.y - lb * k)
}

fn oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let pt = |rng: &mut ChaCha8Rng| Vec2::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
    for i in 0..10_000 {
        let (p, a) = (pt(&mut rng), pt(&mut rng));
        let mut b = pt(&mut rng);
        while a.dist(b) < 0.1 {
            b = pt(&mut rng);
        }
        let theta = rng.gen_range(-TAU..TAU);
        ensure(close(midpoint(a, b), oracle_mid(a, b), 10.0), || format!("midpoint #{i}"))?;
        ensure(close(reflect_across_line(p, a, b), oracle_reflect(p, a, b), 10.0), || format!("reflection #{i}"))?;
        ensure(close(rotate_about(p, a, theta), oracle_rotate(p, a, theta), 10.0), || format!("rotation #{i}"))?;
        ensure(close(perpendicular_foot(p, a, b), oracle_foot(p, a, b), 10.0), || format!("foot #{i}"))?;
    }

    // The same closed forms as used inside constructed scenes.
    let cat = reference_catalog();
    let th = DegeneracyThresholds::default();
    let groups = [
        "triangle A B C; midpoint M A B",
        "triangle A B C; reflect_point Q C A B",
        "triangle A B C; perpendicular_foot H C A B",
        "segment P O; rotate_point Q P O 75",
    ];
    let mut scenes = 0;
    for text in groups {
        let group: Vec<_> = text.split(';').map(|t| parse_instance(t.trim(), &cat).unwrap()).collect();
        for _ in 0..250 {
            let Ok(s) = construct_scene(&group, &cat, &th, &mut rng) else { continue };
            scenes += 1;
            let q: IndexMap<String, Vec2> = s.points;
            let (got, want) = match group[1].clause_id.as_str() {
                "midpoint" => (q["M"], oracle_mid(q["A"], q["B"])),
                "reflect_point" => (q["Q"], oracle_reflect(q["C"], q["A"], q["B"])),
                "perpendicular_foot" => (q["H"], oracle_foot(q["C"], q["A"], q["B"])),
                _ => (q["Q"], oracle_rotate(q["P"], q["O"], 75f64.to_radians())),
            };
            ensure(close(got, want, 10.0), || format!("{text}: {got:?} vs {want:?}"))?;
        }
    }
    Ok(format!("40000 closed-form checks + {scenes} constructed scenes within 1e-12"))
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    })
}

struct Board {
    passed: Vec<bool>,
}

impl Board {
    fn record(&mut self, n: usize, name: &str, outcome: Outcome, t: Duration) {
        match &outcome {
            Ok(detail) => println!("AC{n:<2} PASS  {name}: {detail} [{:.1}s]", t.as_secs_f64()),
            Err(detail) => println!("AC{n:<2} FAIL  {name}: {detail}"),
        }
        self.passed.push(outcome.is_ok());
    }

    fn run(&mut self, n: usize, name: &str, f: impl FnOnce() -> Outcome) {
        let started = Instant::now();
        let outcome = guarded(f);
        self.record(n, name, outcome, started.elapsed());
    }
}

fn main() {
    let tmp = tempfile::tempdir().expect("temp dir");
    let shared = tmp.path().join("validity");
    let mut board = Board { passed: Vec::new() };

    board.run(1, "selection conformance", selection_conformance);
    board.run(2, "hard clauses in medium groups", hard_rate_in_medium);

    let started = Instant::now();
    let (validity, throughput) = catch_unwind(AssertUnwindSafe(|| validity_and_throughput(&shared)))
        .unwrap_or_else(|_| (Err("build panicked".into()), Err("build panicked".into())));
    let t = started.elapsed();
    board.record(3, "validity", validity, t);
    board.run(4, "similarity invariance", similarity_invariance);
    board.run(5, "determinism", || determinism(tmp.path()));
    board.record(6, "throughput", throughput, t);
    board.run(7, "statistics", || statistics(tmp.path()));
    board.run(8, "caption fidelity", || caption_fidelity(&shared));
    board.run(9, "masking bound", masking_bound);
    board.run(10, "oracle equivalence", oracles);

    let failed = board.passed.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", board.passed.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
