//! The fourteen acceptance criteria, one verdict line each. Exits nonzero if any fails.

mod common;

use std::f64::consts::PI;
use std::fs;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use segment_hitting::axis::axis_overstep_law;
use segment_hitting::continuum::{angle_identity, h_segment_exterior, lemma_a1_check, slit_plane_kernel, SegmentSpec, Side, SlitPoint};
use segment_hitting::edge::{compute_mu, compute_nu, corollary1_probe};
use segment_hitting::hitting::hit_segment;
use segment_hitting::lab::{self, ExperimentConfig, Lab};
use segment_hitting::mc::{hit_segment_mc, McConfig};
use segment_hitting::potential::PotentialKernel;
use segment_hitting::probes::eta_resolvent_check;
use segment_hitting::series::{hit_halfline_many, reconstruct_segment_hit, Sign};
use segment_hitting::truncated::{default_half_width, hit_segment_truncated};
use segment_hitting::walk::{make_skew_walk, Site, Walk};
use segment_hitting::Result;

use common::{configs_dir, loglog_slope, SrwRecursion};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { ok, detail: detail.into() })
}

fn c1_continuum_consistency() -> Result<Outcome> {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for x in [1.1, 1.5, 2.0, 5.0].iter().flat_map(|&x| [x, -x]) {
        for s in [0.0, 0.5, -0.5, 0.9, -0.9] {
            let k = slit_plane_kernel(SlitPoint::boundary(s, Side::Above)?, Complex64::new(x, 0.0))?;
            worst = worst.max((2.0 * k - h_segment_exterior(1.0, x, s)?).abs());
        }
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(worst < 1e-10 && secs < 1.0, format!("max |2 slit - h| = {worst:.2e}, {secs:.3} s"))
}

fn c2_boundary_limit() -> Result<Outcome> {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (x, s): (f64, f64) = (rng.gen_range(-0.95..0.95), rng.gen_range(-0.95..0.95));
        if (x - s).abs() < 0.02 {
            continue;
        }
        let (l, r) = lemma_a1_check(x, s)?;
        worst = worst.max((l - r).abs());
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(worst < 1e-6 && secs < 10.0, format!("max |lhs - rhs| = {worst:.2e}, {secs:.2} s"))
}

fn c3_angle_identity() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (a, b): (f64, f64) = (rng.gen_range(0.0..PI), rng.gen_range(0.0..PI));
        let (l, r) = angle_identity(a, b);
        worst = worst.max((l - r).abs() / r.abs().max(1.0));
    }
    outcome(worst < 1e-12, format!("max relative residual {worst:.2e}"))
}

fn c4_potential_kernel() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for walk in [Walk::simple(), Walk::new(make_skew_walk())?] {
        let pk = PotentialKernel::new(&walk, 24)?;
        for _ in 0..50 {
            let z = Site::new(rng.gen_range(-20..=20), rng.gen_range(-20..=20));
            // x -> a(z - x) is harmonic, so average over z - e
            let mean: f64 = walk.law().steps().map(|(e, p)| p * pk.a(z - e).unwrap()).sum();
            let delta = if z == Site::new(0, 0) { 1.0 } else { 0.0 };
            worst = worst.max((mean - pk.a(z)? - delta).abs());
        }
    }
    let rec = SrwRecursion::new(2);
    let pk = PotentialKernel::new(&Walk::simple(), 4)?;
    let d10 = (pk.a(Site::new(1, 0))? - rec.a(Site::new(1, 0))).abs();
    let d11 = (pk.a(Site::new(1, 1))? - rec.a(Site::new(1, 1))).abs();
    outcome(
        worst < 1e-6 && d10 < 1e-8 && d11 < 1e-8,
        format!("harmonicity {worst:.2e}; a(1,0) off {d10:.1e}, a(1,1) off {d11:.1e}"),
    )
}

fn c5_triple_agreement() -> Result<Outcome> {
    let t = Instant::now();
    let walk = Walk::simple();
    let seg = SegmentSpec::new(5)?;
    let x = Site::axis(10);
    let exact = hit_segment(&walk, seg, x)?;
    let boxed = hit_segment_truncated(&walk, seg, x, default_half_width(seg, x))?;
    let cfg = McConfig { samples: 1_000_000, seed: 42, escape: Some(40), ..McConfig::default() };
    let mc = hit_segment_mc(&walk, seg, x, &cfg)?;
    let (mut box_ok, mut worst_z): (bool, f64) = (true, 0.0);
    for s in seg.sites().map(Site::axis) {
        box_ok &= (exact.get(s) - boxed.get(s)).abs() <= 2.0 * boxed.deficit;
        let se = mc.stderr_at(s).unwrap_or(0.0);
        worst_z = worst_z.max((exact.get(s) - mc.get(s)).abs() / se);
    }
    let secs = t.elapsed().as_secs_f64();
    outcome(
        box_ok && worst_z <= 4.0 && secs < 120.0,
        format!("box within 2 x deficit {:.2e}: {box_ok}; mc worst |z| = {worst_z:.2}; {secs:.1} s", boxed.deficit),
    )
}

fn c6_reconstruction() -> Result<Outcome> {
    let mut detail = Vec::new();
    let mut ok = true;
    for walk in [Walk::simple(), Walk::new(make_skew_walk())?] {
        let seg = SegmentSpec::new(2)?;
        let rec = reconstruct_segment_hit(&walk, seg, 4, None)?;
        let exact = hit_segment(&walk, seg, Site::axis(4))?;
        let tol = (2.0 * rec.deficit).max(1e-3);
        let worst = seg.sites().map(|s| (rec.at(s) - exact.at(s)).abs()).fold(0.0, f64::max);
        ok &= worst <= tol;
        detail.push(format!("{}: {worst:.1e} (tol {tol:.0e})", walk.name()));
    }
    outcome(ok, detail.join(", "))
}

fn c7_resolvent() -> Result<Outcome> {
    let n = 4;
    let c = eta_resolvent_check(&Walk::simple(), SegmentSpec::new(n)?, 32 * n as i64, n as i64 + 2, 4 * n as i64)?;
    outcome(c.residual <= 3.0 * c.budget, format!("residual {:.2e}, budget {:.2e}", c.residual, c.budget))
}

fn desk_lab() -> Result<Lab> {
    Lab::new(ExperimentConfig::from_path(&configs_dir().join("desk.json"))?)
}

fn c8_thm1() -> Result<Outcome> {
    let lab = desk_lab()?;
    let r = lab.verify_thm1()?;
    let (a, b) = (r.mean_dev(4), r.mean_dev(16));
    let c = r.summary.fitted_constant;
    outcome(c <= 3.0 && b < a, format!("constant {c:.3}; mean dev n=4 {a:.3e}, n=16 {b:.3e}"))
}

fn c9_halfline_rate() -> Result<Outcome> {
    let walk = Walk::simple();
    let ks: Vec<i64> = (4..=64).collect();
    let starts: Vec<Site> = ks.iter().map(|&k| Site::axis(k)).collect();
    let hl = hit_halfline_many(&walk, Sign::Minus, &starts, 512)?;
    let pts: Vec<(f64, f64)> = ks
        .iter()
        .zip(&hl)
        .map(|(&k, h)| {
            let c = 1.0 / (2.0 * PI * k as f64);
            (k as f64, (h.get(-k) / c - 1.0).abs())
        })
        .collect();
    let e = -loglog_slope(&pts);
    outcome((0.7..=1.3).contains(&e), format!("fitted exponent {e:.3}"))
}

fn c10_c11_edges() -> Result<(Outcome, Outcome)> {
    let walk = Walk::simple();
    let nu = compute_nu(&walk, 2000, 1e-6)?;
    let mu = compute_mu(&walk, 2000, 1e-6)?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for y in 50..=1000 {
        for v in [nu.left_normalized(y).unwrap(), nu.right_normalized(y).unwrap()] {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    let ok10 = nu.residual < 1e-6 && lo >= 0.8 && hi <= 1.2 && nu.monotone;
    let o10 = Outcome {
        ok: ok10,
        detail: format!("residual {:.1e}; normalized range [{lo:.4}, {hi:.4}]; monotone {}", nu.residual, nu.monotone),
    };
    let r8 = corollary1_probe(&walk, SegmentSpec::new(8)?, &mu, &nu)?;
    let r16 = corollary1_probe(&walk, SegmentSpec::new(16)?, &mu, &nu)?;
    let band = r8.rows.iter().all(|r| (0.7..=1.3).contains(&r.ratio));
    let (a, b) = (r8.mean_dev(8), r16.mean_dev(16));
    let o11 = Outcome { ok: band && b < a, detail: format!("n=8 within [0.7, 1.3]: {band}; mean dev {a:.2e} -> {b:.2e}") };
    Ok((o10, o11))
}

fn c12_axis_tail() -> Result<Outcome> {
    let walk = Walk::simple();
    let law = axis_overstep_law(&walk, 400)?;
    let v = 100.0f64.powi(2) * law.get(100) * PI / walk.sigma2();
    outcome((0.85..=1.15).contains(&v), format!("s^2 H_0(s) pi / sigma^2 = {v:.5} at s = 100"))
}

fn read_dir_bytes(dir: &std::path::Path) -> Result<Vec<(String, Vec<u8>)>> {
    let mut v: Vec<(String, Vec<u8>)> = fs::read_dir(dir)?
        .map(|e| {
            let e = e?;
            Ok((e.file_name().to_string_lossy().into_owned(), fs::read(e.path())?))
        })
        .collect::<std::io::Result<_>>()?;
    v.sort();
    Ok(v)
}

fn c13_determinism() -> Result<Outcome> {
    let cfg = ExperimentConfig::from_path(&configs_dir().join("desk.json"))?;
    let claims: Vec<String> = ["thm1", "thm2ii", "cor2", "cor3"].iter().map(|s| s.to_string()).collect();
    let base = std::env::temp_dir().join(format!("seghit-accept-det-{}", std::process::id()));
    let mut outputs = Vec::new();
    for threads in [1, 2, 1] {
        let dir = base.join(format!("run{}", outputs.len()));
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
        pool.install(|| lab::run(cfg.clone(), Some(claims.clone()), Some(dir.clone())))?;
        outputs.push(read_dir_bytes(&dir)?);
    }
    let lab_same = outputs.windows(2).all(|w| w[0] == w[1]);
    let mc_cfg = McConfig { samples: 20_000, seed: 7, escape: Some(24), ..McConfig::default() };
    let seg = SegmentSpec::new(3)?;
    let mut mc = Vec::new();
    for threads in [1, 3] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
        mc.push(pool.install(|| hit_segment_mc(&Walk::simple(), seg, Site::axis(6), &mc_cfg))?.table);
    }
    let _ = fs::remove_dir_all(&base);
    let files = outputs[0].len();
    outcome(lab_same && mc[0] == mc[1], format!("{files} report files identical over 3 runs: {lab_same}; mc identical: {}", mc[0] == mc[1]))
}

fn c14_desk_suite() -> Result<Outcome> {
    let t = Instant::now();
    let cfg = ExperimentConfig::from_path(&configs_dir().join("desk.json"))?;
    let dir = std::env::temp_dir().join(format!("seghit-accept-desk-{}", std::process::id()));
    let summary = lab::run(cfg, None, Some(dir.clone()))?;
    let secs = t.elapsed().as_secs_f64();
    let _ = fs::remove_dir_all(&dir);
    let failed: Vec<&str> = summary.iter().filter(|(_, s)| s.verdict.label() != "pass").map(|(c, _)| c.as_str()).collect();
    let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    outcome(
        secs < 600.0 && failed.is_empty(),
        format!("{} claims in {secs:.1} s on {cores} core(s); failing: {failed:?}", summary.len()),
    )
}

fn main() {
    let mut all_ok = true;
    let mut report = |id: u32, name: &str, r: Result<Outcome>, secs: f64| {
        let (ok, detail) = match r {
            Ok(o) => (o.ok, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all_ok &= ok;
        println!("[{}] {id:2} {name}: {detail} ({secs:.1} s)", if ok { "PASS" } else { "FAIL" });
    };
    let timed = |f: fn() -> Result<Outcome>| {
        let t = Instant::now();
        let r = f();
        (r, t.elapsed().as_secs_f64())
    };
    let (r, s) = timed(c1_continuum_consistency);
    report(1, "continuum consistency", r, s);
    let (r, s) = timed(c2_boundary_limit);
    report(2, "boundary-limit identity", r, s);
    let (r, s) = timed(c3_angle_identity);
    report(3, "angle identity", r, s);
    let (r, s) = timed(c4_potential_kernel);
    report(4, "potential kernel", r, s);
    let (r, s) = timed(c5_triple_agreement);
    report(5, "oracle triple agreement", r, s);
    let (r, s) = timed(c6_reconstruction);
    report(6, "series reconstruction", r, s);
    let (r, s) = timed(c7_resolvent);
    report(7, "resolvent identity", r, s);
    let (r, s) = timed(c8_thm1);
    report(8, "exterior comparison", r, s);
    let (r, s) = timed(c9_halfline_rate);
    report(9, "half-line error exponent", r, s);
    let t = Instant::now();
    let edges = c10_c11_edges();
    let secs = t.elapsed().as_secs_f64();
    match edges {
        Ok((a, b)) => {
            report(10, "edge function solver", Ok(a), secs);
            report(11, "harmonic measure vs edge functions", Ok(b), secs);
        }
        Err(e) => {
            let msg = e.to_string();
            report(10, "edge function solver", Err(e), secs);
            report(11, "harmonic measure vs edge functions", outcome(false, format!("error: {msg}")), secs);
        }
    }
    let (r, s) = timed(c12_axis_tail);
    report(12, "axis tail", r, s);
    let (r, s) = timed(c13_determinism);
    report(13, "determinism", r, s);
    let (r, s) = timed(c14_desk_suite);
    report(14, "desk suite", r, s);
    if !all_ok {
        std::process::exit(1);
    }
}
