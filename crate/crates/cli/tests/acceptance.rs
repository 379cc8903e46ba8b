//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use specflow_core::families::{
    dirac_interval_family, flow_loop, fuglede_family, fuglede_midpoint, fuglede_operator, random_bridge,
    random_diagonal_with_tail, random_hermitian, random_hermitian_path,
};
use specflow_core::flow::{RadiusStrategy, SfMethod};
use specflow_core::linalg::{self, I};
use specflow_core::{
    bounded_truncation, cayley, choose_partition, connect_to_ii, delta_one, delta_tilde, eigenphases, gamma,
    gap_delta, homotopy_check, inverse_cayley, path_concat, path_reverse, riesz_distance, riesz_inverse, riesz_map,
    sf_phillips, spectral_flow, spectral_projection_contour, spectral_projection_interval, HermitianOperator,
    Operator, OperatorPath, PartitionOptions,
};

const HORIZON: usize = 64;
const FUGLEDE_N: [usize; 5] = [1, 2, 5, 10, 50];
const DIRAC_M: [i64; 5] = [-2, -1, 0, 1, 3];

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

fn all_methods(path: &OperatorPath) -> Result<[i64; 3], String> {
    let opts = PartitionOptions::default();
    let mut out = [0; 3];
    for (slot, m) in out.iter_mut().zip(SfMethod::ALL) {
        *slot = spectral_flow(path, m, &opts, 20).map_err(|e| format!("{}: {e}", m.name()))?.0;
    }
    Ok(out)
}

fn sf(path: &OperatorPath) -> Result<i64, String> {
    all_methods(path).map(|v| v[0])
}

fn fuglede(n: usize) -> Operator {
    fuglede_operator(n, HORIZON).unwrap().into()
}

fn c1_gamma_convergence() -> Outcome {
    let t0 = fuglede(0);
    let mut worst = 0.0f64;
    for n in FUGLEDE_N {
        let g = gamma(&fuglede(n), &t0).map_err(|e| e.to_string())?;
        let nf = n as f64;
        worst = worst.max(rel_err(g, 2.0 * nf / (1.0 + nf * nf)));
    }
    let g1 = gamma(&fuglede(1), &t0).unwrap();
    if worst <= 1e-12 && rel_err(g1, 1.0) <= 1e-12 {
        Ok(format!("max relative error {worst:.1e}, gamma(T1, T0) = {g1}"))
    } else {
        Err(format!("max relative error {worst:.3e}, gamma(T1, T0) = {g1}"))
    }
}

fn c2_riesz_divergence() -> Outcome {
    let t0 = fuglede(0);
    let mut last = 0.0;
    for n in FUGLEDE_N {
        let r = riesz_distance(&fuglede(n), &t0).map_err(|e| e.to_string())?;
        let nf = n as f64;
        let bound = 2.0 * nf / (1.0 + nf * nf).sqrt();
        if r < bound * (1.0 - 1e-12) {
            return Err(format!("n = {n}: riesz {r} below {bound}"));
        }
        last = r;
    }
    if (last - 2.0).abs() <= 1e-3 {
        Ok(format!("riesz(T50, T0) = {last:.6}"))
    } else {
        Err(format!("riesz(T50, T0) = {last}, not within 1e-3 of 2"))
    }
}

fn c3_midpoint_bound() -> Outcome {
    let t0 = fuglede(0);
    let mut last = 0.0;
    for n in FUGLEDE_N {
        let mid: Operator = fuglede_midpoint(n, HORIZON).map_err(|e| e.to_string())?.into();
        let g = gamma(&mid, &t0).map_err(|e| e.to_string())?;
        // |1/i − 1/(i + n)| in closed form
        let nf = n as f64;
        let bound = nf / (1.0 + nf * nf).sqrt();
        if g < bound * (1.0 - 1e-12) {
            return Err(format!("n = {n}: gamma {g} below {bound}"));
        }
        last = g;
    }
    if (last - 1.0).abs() <= 1e-2 {
        Ok(format!("gamma(mid50, T0) = {last:.6}"))
    } else {
        Err(format!("gamma(mid50, T0) = {last}, not within 1e-2 of 1"))
    }
}

fn c4_fuglede_flow() -> Outcome {
    let fam = fuglede_family(HORIZON, 1, 201).map_err(|e| e.to_string())?;
    let v = all_methods(&fam.path)?;
    if v == [-1; 3] {
        Ok(format!("phillips, cayley, oracle = {v:?}"))
    } else {
        Err(format!("phillips, cayley, oracle = {v:?}"))
    }
}

fn c5_truncation() -> Outcome {
    let mut ops: Vec<Operator> = vec![fuglede(0)];
    let mut r = rng(5);
    ops.extend((0..20).map(|_| random_diagonal_with_tail(&mut r).into()));
    let mut worst = 0.0f64;
    for op in &ops {
        let d = op.as_diagonal().unwrap();
        for n in 1..=100 {
            let tr = bounded_truncation(d, n as f64).map_err(|e| e.to_string())?;
            let g = gamma(op, &tr.into()).map_err(|e| e.to_string())?;
            let ratio = g * n as f64 / 2.0;
            if ratio > 1.0 + 1e-12 {
                return Err(format!("gamma {g} exceeds 2/{n}"));
            }
            worst = worst.max(ratio);
        }
    }
    Ok(format!("{} operators x 100 levels, max gamma*n/2 = {worst:.4}", ops.len()))
}

fn c6_metric_equivalences() -> Outcome {
    let mut r = rng(6);
    let mut violations = Vec::new();
    for case in 0..100 {
        let dim = r.random_range(1..=16);
        let a: Operator = random_hermitian(dim, &mut r).into();
        let b: Operator = random_hermitian(dim, &mut r).into();
        let g = gamma(&a, &b).unwrap();
        let dt = delta_tilde(&a, &b).unwrap();
        let d = gap_delta(&a, &b).unwrap();
        let d1 = delta_one(&a, &b).unwrap();
        let slack = 1e-12 * d1;
        if rel_err(dt, 2.0 * g) > 1e-12 {
            violations.push(format!("case {case}: delta_tilde {dt} vs 2 gamma {}", 2.0 * g));
        }
        if !(g <= d1 + slack && d1 <= 2.0 * g + slack) {
            violations.push(format!("case {case}: gamma {g}, delta1 {d1}"));
        }
        if !(d <= d1 + slack && d1 <= 2.0 * d + slack) {
            violations.push(format!("case {case}: delta {d}, delta1 {d1}"));
        }
    }
    if violations.is_empty() {
        Ok("100 pairs, 0 violations".into())
    } else {
        Err(format!("{} violations; first: {}", violations.len(), violations[0]))
    }
}

fn cyclic_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn c7_transforms() -> Outcome {
    let mut r = rng(7);
    let (mut worst_trip, mut worst_phase) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let dim = r.random_range(1..=16);
        let t = random_hermitian(dim, &mut r);
        let tol = 1e-9 * t.scale().max(1.0);
        let u = cayley(&t);
        let back = inverse_cayley(&u).map_err(|e| e.to_string())?;
        let e1 = linalg::norm(&(back.entries() - t.entries()));
        let back = riesz_inverse(&riesz_map(&t)).map_err(|e| e.to_string())?;
        let e2 = linalg::norm(&(back.entries() - t.entries()));
        worst_trip = worst_trip.max(e1.max(e2) / tol * 1e-9);
        if e1 > tol || e2 > tol {
            return Err(format!("round trip errors {e1:.2e}, {e2:.2e}"));
        }
        let mut got = eigenphases(&u, false).map_err(|e| e.to_string())?.phases;
        let mut want: Vec<f64> = t.eigenvalues().iter().map(|l| PI + 2.0 * l.atan()).collect();
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        let err = got.iter().zip(&want).map(|(a, b)| cyclic_gap(*a, *b)).fold(0.0, f64::max);
        worst_phase = worst_phase.max(err);
        if err > 1e-10 {
            return Err(format!("eigenphase mismatch {err:.2e}"));
        }
    }
    Ok(format!("worst round trip {worst_trip:.1e} (relative), worst phase {worst_phase:.1e}"))
}

fn c8_method_agreement() -> Outcome {
    let mut paths = Vec::new();
    for i in 0..100u64 {
        paths.push(random_hermitian_path(1 + (i % 8) as usize, 60, 8000 + i, false).unwrap());
    }
    for n in [1, 2, 3] {
        paths.push(fuglede_family(HORIZON, n, 201).unwrap().path);
    }
    for m in DIRAC_M {
        paths.push(dirac_interval_family(6, m, 121, 0).unwrap());
        paths.push(flow_loop(6, m, 121).unwrap());
    }
    let mut disagree = Vec::new();
    for p in &paths {
        let v = all_methods(p)?;
        if !(v[0] == v[1] && v[1] == v[2]) {
            disagree.push(format!("{}: {v:?}", p.family_tag()));
        }
    }
    if disagree.is_empty() {
        Ok(format!("{} paths, 100% agreement", paths.len()))
    } else {
        Err(format!("{} disagreements; first: {}", disagree.len(), disagree[0]))
    }
}

fn c9_partition_independence() -> Outcome {
    for i in 0..20u64 {
        let path = random_hermitian_path(1 + (i % 6) as usize, 80, 9000 + i, false).unwrap();
        let wide = choose_partition(&path, &PartitionOptions::default()).map_err(|e| e.to_string())?;
        let narrow = PartitionOptions {
            strategy: RadiusStrategy::SmallestRadius,
            max_segment_steps: Some(3 + (i % 7) as usize),
            ..Default::default()
        };
        let narrow = choose_partition(&path, &narrow).map_err(|e| e.to_string())?;
        let (a, b) = (sf_phillips(&path, &wide).unwrap(), sf_phillips(&path, &narrow).unwrap());
        if a != b {
            return Err(format!("path {i}: {a} with {} segments, {b} with {}", wide.segments.len(), narrow.segments.len()));
        }
    }
    Ok("20 paths, both partitions agree".into())
}

fn invertible(op: &Operator) -> bool {
    op.as_hermitian().unwrap().eigenvalues().iter().all(|l| l.abs() > 1e-6)
}

fn c10_path_algebra() -> Outcome {
    let mut r = rng(10);
    for i in 0..20u64 {
        let dim = r.random_range(1..=6);
        let (a, b, c) = (random_hermitian(dim, &mut r), random_hermitian(dim, &mut r), random_hermitian(dim, &mut r));
        let f1 = random_bridge(&a, &b, 50, 100 + i).unwrap();
        let f2 = random_bridge(&b, &c, 50, 200 + i).unwrap();
        let joined = path_concat(&f1, &f2).map_err(|e| e.to_string())?;
        let (s1, s2, s) = (sf(&f1)?, sf(&f2)?, sf(&joined)?);
        if s != s1 + s2 {
            return Err(format!("concat pair {i}: {s} != {s1} + {s2}"));
        }
    }
    let mut reversed = 0;
    let mut seed = 10_000u64;
    while reversed < 20 {
        let path = random_hermitian_path(1 + (seed % 6) as usize, 50, seed, false).unwrap();
        seed += 1;
        if !(invertible(path.start()) && invertible(path.end())) {
            continue;
        }
        let (s, back) = (sf(&path)?, sf(&path_reverse(&path))?);
        if back != -s {
            return Err(format!("reverse of seed {}: {back} vs {s}", seed - 1));
        }
        reversed += 1;
    }
    for i in 0..20u64 {
        let path = random_hermitian_path(1 + (i % 8) as usize, 60, 11_000 + i, true).unwrap();
        let v = all_methods(&path)?;
        if v != [0; 3] {
            return Err(format!("loop {i}: {v:?}"));
        }
    }
    Ok("20 concatenations, 20 reversals, 20 loops".into())
}

fn c11_homotopy() -> Outcome {
    let mut r = rng(11);
    for i in 0..10u64 {
        let dim = r.random_range(1..=6);
        let (a, b) = (random_hermitian(dim, &mut r), random_hermitian(dim, &mut r));
        let f0 = random_bridge(&a, &b, 50, 300 + i).unwrap();
        let f1 = random_bridge(&a, &b, 50, 400 + i).unwrap();
        let report = homotopy_check(&f0, &f1, 11, &PartitionOptions::default()).map_err(|e| e.to_string())?;
        if !report.constant {
            return Err(format!("pair {i}: {:?}", report.sf));
        }
    }
    Ok("10 homotopies x 11 paths, constant".into())
}

fn c12_dirac() -> Outcome {
    for m in DIRAC_M {
        let v = all_methods(&dirac_interval_family(6, m, 121, 0).unwrap())?;
        if v != [m; 3] {
            return Err(format!("m = {m}: {v:?}"));
        }
    }
    for m1 in DIRAC_M {
        for m2 in DIRAC_M {
            let a = dirac_interval_family(6, m1, 61, 0).unwrap();
            let b = dirac_interval_family(6, m2, 61, m1).unwrap();
            let joined = path_concat(&a, &b).map_err(|e| e.to_string())?;
            let v = all_methods(&joined)?;
            if v != [m1 + m2; 3] {
                return Err(format!("{m1} * {m2}: {v:?}"));
            }
        }
    }
    Ok(format!("sf = m for m in {DIRAC_M:?}; 25 loop products additive"))
}

fn c13_connect() -> Outcome {
    let mut r = rng(13);
    let (mut defect, mut dist, mut end_err) = (0.0f64, f64::INFINITY, 0.0f64);
    for _ in 0..20 {
        let dim = r.random_range(1..=8);
        let u = cayley(&random_hermitian(dim, &mut r));
        let path = connect_to_ii(&u, 64).map_err(|e| e.to_string())?;
        for v in &path {
            defect = defect.max(v.unitarity_defect());
            dist = dist.min(eigenphases(v, false).unwrap().min_distance_from_one());
        }
        let ii = linalg::identity(dim).map(|z| z * I);
        end_err = end_err.max(linalg::norm(&(path.last().unwrap().entries() - ii)));
    }
    let summary = format!("max defect {defect:.1e}, min phase distance {dist:.3}, endpoint error {end_err:.1e}");
    if defect <= 1e-10 && dist >= 1e-8 && end_err <= 1e-10 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

/// Random window whose boundary keeps every eigenvalue at least a fifth of
/// the radius away from the quadrature circle, with one eigenvalue inside.
fn certified_instance(r: &mut ChaCha8Rng) -> (HermitianOperator, f64, f64) {
    loop {
        let dim = r.random_range(2..=16);
        let t = random_hermitian(dim, r);
        let centre = r.random_range(-3.0..3.0);
        let radius = r.random_range(0.3..3.0);
        let offsets: Vec<f64> = t.eigenvalues().iter().map(|l| (l - centre).abs() / radius).collect();
        let clear = offsets.iter().all(|o| !(0.8..=1.2).contains(o));
        if clear && offsets.iter().any(|&o| o < 0.8) {
            return (t, centre - radius, centre + radius);
        }
    }
}

fn c14_contour() -> Outcome {
    let mut r = rng(14);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (t, a, b) = certified_instance(&mut r);
        let quad = spectral_projection_contour(&t, a, b, 128).map_err(|e| e.to_string())?;
        let exact = spectral_projection_interval(&t, a, b).map_err(|e| e.to_string())?;
        worst = worst.max(linalg::norm(&(quad - exact.entries())));
    }
    if worst <= 1e-8 {
        Ok(format!("20 instances, max error {worst:.1e}"))
    } else {
        Err(format!("max error {worst:.3e}"))
    }
}

fn jobs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../jobs")
}

fn run_binary(task: &str, job: &str) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_specflow"))
        .args([task, "--job"])
        .arg(jobs_dir().join(job))
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{job}: exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn c15_cli() -> Outcome {
    let mut checks = Vec::new();
    for (task, job) in [("sf", "fuglede_sf.toml"), ("sf", "dirac_sf.toml"), ("metrics", "fuglede_metrics.toml")] {
        let (first, second) = (run_binary(task, job)?, run_binary(task, job)?);
        if first != second {
            return Err(format!("{job}: reports differ between runs"));
        }
        let report: serde_json::Value = serde_json::from_str(&first).map_err(|e| e.to_string())?;
        let result = &report["result"];
        match job {
            "fuglede_sf.toml" | "dirac_sf.toml" => {
                let want = if job == "fuglede_sf.toml" { -1 } else { 1 };
                let sfs: Vec<i64> = result["methods"].as_array().unwrap().iter().map(|m| m["sf"].as_i64().unwrap()).collect();
                if sfs != [want; 3] {
                    return Err(format!("{job}: sf {sfs:?}, expected {want} three times"));
                }
                checks.push(format!("{job} sf {want}"));
            }
            _ => {
                let g = result["gamma"].as_f64().unwrap();
                let riesz = result["riesz"].as_f64().unwrap();
                if rel_err(g, 10.0 / 26.0) > 1e-12 || riesz < 10.0 / 26f64.sqrt() * (1.0 - 1e-12) {
                    return Err(format!("{job}: gamma {g}, riesz {riesz}"));
                }
                checks.push(format!("{job} gamma {g:.6}"));
            }
        }
    }
    let seeded = "version = 1\ntask = \"sf\"\n[family]\nkind = \"random\"\ndim = 5\nseed = 3\nsamples = 80\n";
    let job = specflow_cli::parse_job(seeded).map_err(|e| e.to_string())?;
    let render = || specflow_cli::run_job(&job, seeded).map(|o| specflow_cli::render_report(&o.report));
    if render().map_err(|e| e.to_string())? != render().map_err(|e| e.to_string())? {
        return Err("seeded random job is not byte-stable".into());
    }
    Ok(format!("byte-identical reruns; {}", checks.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 15] = [
        ("fuglede gamma convergence", c1_gamma_convergence),
        ("fuglede riesz divergence", c2_riesz_divergence),
        ("fuglede midpoint bound", c3_midpoint_bound),
        ("fuglede path flow", c4_fuglede_flow),
        ("truncation bound", c5_truncation),
        ("metric equivalences", c6_metric_equivalences),
        ("transform round trips", c7_transforms),
        ("method agreement", c8_method_agreement),
        ("partition independence", c9_partition_independence),
        ("path algebra", c10_path_algebra),
        ("homotopy invariance", c11_homotopy),
        ("dirac toy family", c12_dirac),
        ("connecting path", c13_connect),
        ("contour projection", c14_contour),
        ("cli determinism", c15_cli),
    ];
    let started = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {}/15 passed in {:.1}s", 15 - failed, started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
