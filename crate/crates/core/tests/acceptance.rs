//! Acceptance criteria, one line each. Every tolerance is fixed below; the
//! process exits non-zero if any criterion fails.

use std::f64::consts::E;
use std::path::Path;
use std::time::Instant;

use heat_similarity::curvature_flow::{
    corollary8_error, nara_taniguchi_gap, solve_cf, solve_heat_fd, FdSolverConfig,
};
use heat_similarity::experiments::run_all;
use heat_similarity::kernels::{kernel_g, profile_f, profile_f_quadrature};
use heat_similarity::profile_bounds::{
    constants_error, lemma10_check, lemma9_rhs, profile_error, prop6_check,
};
use heat_similarity::semigroup::{evolve, rescaled_residual, scaled_evolve};
use heat_similarity::{oracle, InitialDatum, QuadratureSpec, Result};

const STEP_TOL: f64 = 2e-10;
const F_ROUTES_TOL: f64 = 1e-12;
const F_QUAD_ABS_TOL: f64 = 1e-13;
const G_ORACLE_TOL: f64 = 1e-8;
const BOUND_SLACK: f64 = 2e-10;
const LADDER_FACTOR: f64 = 5.0;
const LEMMA10_CLOSED_TOL: f64 = 1e-12;
const RATIO_RANGE: (f64, f64) = (3.5, 4.5);
const RESIDUAL_MAX: f64 = 1e-3;
const MAX_PRINCIPLE_TOL: f64 = 1e-12;
const GAP_SPREAD_MAX: f64 = 10.0;
const GAP_FLAT_FACTOR: f64 = 1.1;

const WINDOW: f64 = 4.0;
const NODES: usize = 401;

type Criterion = (&'static str, fn() -> Result<Verdict>);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Result<Verdict> {
    Ok(Verdict { pass, detail })
}

fn window() -> Vec<f64> {
    (0..NODES)
        .map(|i| {
            if i + 1 == NODES {
                WINDOW
            } else {
                -WINDOW + 2.0 * WINDOW * i as f64 / (NODES - 1) as f64
            }
        })
        .collect()
}

fn list(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:.4e}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn c1_step_identity() -> Result<Verdict> {
    let spec = QuadratureSpec::default();
    let u0 = InitialDatum::step(0.0, 1.0);
    let mut worst: f64 = 0.0;
    for t in [0.1, 1.0, 10.0, 1e6] {
        for x in window() {
            worst = worst.max((scaled_evolve(&u0, x, t, &spec)? - profile_f(x)).abs());
        }
    }
    verdict(
        worst <= STEP_TOL,
        format!("max deviation {worst:.3e} (tol {STEP_TOL:e})"),
    )
}

fn c2_special_functions() -> Result<Verdict> {
    let tight = QuadratureSpec::with_tol(F_QUAD_ABS_TOL)?;
    let f_worst = (0..100)
        .map(|i| -8.0 + 16.0 * i as f64 / 99.0)
        .map(|z| (profile_f(z) - profile_f_quadrature(z, &tight)).abs())
        .fold(0.0, f64::max);
    let spec = QuadratureSpec::default();
    let g_worst = (0..20)
        .map(|i| -6.0 + 12.0 * i as f64 / 19.0)
        .map(|z| (kernel_g(z, &spec) - oracle::kernel_g(z)).abs())
        .fold(0.0, f64::max);
    verdict(
        f_worst <= F_ROUTES_TOL && g_worst <= G_ORACLE_TOL,
        format!("F routes {f_worst:.2e} (tol {F_ROUTES_TOL:e}), G vs oracle {g_worst:.2e} (tol {G_ORACLE_TOL:e})"),
    )
}

fn ladder(ts: &[f64]) -> Result<Vec<f64>> {
    let spec = QuadratureSpec::default();
    let u0 = InitialDatum::sub_log(0.5)?;
    ts.iter()
        .map(|&t| Ok(profile_error(&u0, WINDOW, t, NODES, &spec)?.sup_error))
        .collect()
}

fn ladder_verdict(errs: &[f64]) -> Result<Verdict> {
    let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
    let factor = errs[0] / errs[errs.len() - 1];
    verdict(
        decreasing && factor >= LADDER_FACTOR,
        format!(
            "errors [{}], strictly decreasing: {decreasing}, first/last {factor:.3} (need >= {LADDER_FACTOR})",
            list(errs)
        ),
    )
}

fn c3_long_time_ladder() -> Result<Verdict> {
    ladder_verdict(&ladder(&[1e2, 1e4, 1e6, 1e8])?)
}

fn c4_short_time_ladder() -> Result<Verdict> {
    ladder_verdict(&ladder(&[1e-2, 1e-4, 1e-6, 1e-8])?)
}

fn c5_envelope_bound() -> Result<Verdict> {
    let spec = QuadratureSpec::default();
    let data = [
        InitialDatum::step(0.0, 1.0),
        InitialDatum::log_sine(),
        InitialDatum::sub_log(0.5)?,
    ];
    let mut worst_margin = f64::INFINITY;
    let mut cases = 0;
    for u0 in &data {
        for t in [1.0, 1e4] {
            let rep = profile_error(u0, WINDOW, t, NODES, &spec)?;
            for (a, b) in [(rep.coeff_left, rep.coeff_right), (0.0, 0.0)] {
                let measured = constants_error(u0, a, b, WINDOW, t, NODES, &spec)?;
                let rhs = lemma9_rhs(u0, a, b, WINDOW, t, &spec)?;
                worst_margin = worst_margin.min(rhs + BOUND_SLACK - measured);
                cases += 1;
            }
        }
    }
    verdict(
        worst_margin >= 0.0,
        format!("{cases} cases, smallest margin {worst_margin:.4e}"),
    )
}

fn c6_g_bound() -> Result<Verdict> {
    let spec = QuadratureSpec::default();
    let u0 = InitialDatum::log_sine();
    let mut worst_margin = f64::INFINITY;
    let mut cases = 0;
    for t in [1e-4, 1.0, 1e4, 1e8] {
        for x in [-3.0, -1.0, 0.0, 1.0, 3.0] {
            let (lhs, rhs) = prop6_check(&u0, x, t, &spec)?;
            worst_margin = worst_margin.min(rhs + BOUND_SLACK - lhs);
            cases += 1;
        }
    }
    verdict(
        worst_margin >= 0.0,
        format!("{cases} points, smallest margin {worst_margin:.4e}"),
    )
}

fn c7_dilation() -> Result<Verdict> {
    let mut cases = 0;
    let mut violations = Vec::new();
    for u0 in InitialDatum::catalog() {
        if !(u0.sup_left().is_finite() && u0.sup_right().is_finite()) {
            continue;
        }
        for alpha in [0.25, 0.5, 2.0, 4.0] {
            for s in [-1e3, -1.0, -1e-3, 1e-3, 1.0, 1e3] {
                let (lhs, rhs) = lemma10_check(&u0, alpha, s)?;
                cases += 1;
                if lhs > rhs {
                    violations.push(format!("{} alpha={alpha} s={s}", u0.id()));
                }
            }
        }
    }
    let (lhs, _) = lemma10_check(&InitialDatum::log_sine(), E, E)?;
    let closed = (2f64.sin() - 1f64.sin()).abs();
    let dev = (lhs - closed).abs();
    verdict(
        violations.is_empty() && dev <= LEMMA10_CLOSED_TOL,
        format!(
            "{cases} cases, {} violations {:?}; (log_sine, e, e) off closed form by {dev:.2e}",
            violations.len(),
            violations
        ),
    )
}

fn c8_rescaled_residual() -> Result<Verdict> {
    let spec = QuadratureSpec::default();
    let u0 = InitialDatum::step(0.0, 1.0);
    let coarse = rescaled_residual(&u0, 4.0, 0.0, 1e-2, &spec)?;
    let fine = rescaled_residual(&u0, 4.0, 0.0, 5e-3, &spec)?;
    let ratio = coarse / fine;
    verdict(
        (RATIO_RANGE.0..=RATIO_RANGE.1).contains(&ratio) && coarse <= RESIDUAL_MAX,
        format!("residual(1e-2) = {coarse:.3e}, residual(5e-3) = {fine:.3e}, ratio {ratio:.3}"),
    )
}

fn c9_fd_validation() -> Result<Verdict> {
    let spec = QuadratureSpec::default();
    let u0 = InitialDatum::smooth_step(0.0, 1.0);
    let mut errors = Vec::new();
    for dx in [0.2, 0.1, 0.05] {
        let cfg = FdSolverConfig::new(20.0, dx, 1.0, vec![1.0]);
        let snap = &solve_heat_fd(&u0, &cfg)?[0];
        let radius = cfg.observation_radius();
        let mut worst: f64 = 0.0;
        for (i, x) in snap.grid.nodes().enumerate() {
            if x.abs() <= radius {
                worst = worst.max((snap.grid.values()[i] - evolve(&u0, x, 1.0, &spec)?).abs());
            }
        }
        errors.push(worst);
    }
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    let order_ok = ratios
        .iter()
        .all(|r| (RATIO_RANGE.0..=RATIO_RANGE.1).contains(r));

    let mut mp_excess: f64 = 0.0;
    let ladder = vec![0.5, 1.0, 2.0, 4.0];
    for u0 in [
        InitialDatum::smooth_step(0.0, 1.0),
        InitialDatum::smooth_log_sine(1.0)?,
        InitialDatum::gaussian(1.0)?,
    ] {
        let cfg = FdSolverConfig::new(40.0, 0.1, 4.0, ladder.clone());
        let init: Vec<f64> = (0..cfg.nodes())
            .map(|i| u0.eval_raw(-cfg.half_width + cfg.spacing() * i as f64))
            .collect();
        let (lo, hi) = init
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                (a.min(v), b.max(v))
            });
        for snaps in [solve_cf(&u0, &cfg)?, solve_heat_fd(&u0, &cfg)?] {
            for s in snaps {
                mp_excess = mp_excess.max(lo - s.grid.min()).max(s.grid.max() - hi);
            }
        }
    }
    verdict(
        order_ok && mp_excess <= MAX_PRINCIPLE_TOL,
        format!(
            "errors [{}], ratios [{}]; max-principle excess {mp_excess:.1e}",
            list(&errors),
            ratios
                .iter()
                .map(|r| format!("{r:.3}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    )
}

fn c10_flow_gap() -> Result<Verdict> {
    let u0 = InitialDatum::smooth_log_sine(1.0)?;
    let cfg = FdSolverConfig::new(400.0, 0.1, 100.0, vec![1.0, 3.0, 10.0, 30.0, 100.0]);
    let gaps: Vec<f64> = nara_taniguchi_gap(&u0, &cfg, &QuadratureSpec::default())?
        .into_iter()
        .map(|p| p.1)
        .collect();
    let spread = gaps.iter().copied().fold(0.0, f64::max)
        / gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let tail = &gaps[gaps.len() - 3..];
    let flat = tail.windows(2).all(|w| w[1] <= GAP_FLAT_FACTOR * w[0]);
    verdict(
        spread <= GAP_SPREAD_MAX && flat,
        format!(
            "gaps [{}], max/min {spread:.3} (need <= {GAP_SPREAD_MAX}), last three non-increasing within 10%: {flat}",
            list(&gaps)
        ),
    )
}

fn c11_flow_profile_ladder() -> Result<Verdict> {
    let u0 = InitialDatum::smooth_log_sine(0.5)?;
    let ladder = [4.0, 16.0, 64.0];
    let cfg = FdSolverConfig::new(100.0, 0.1, 64.0, ladder.to_vec());
    let errs: Vec<f64> = corollary8_error(&u0, &cfg, WINDOW, &ladder, NODES)?
        .into_iter()
        .map(|p| p.1)
        .collect();
    let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
    verdict(
        decreasing,
        format!(
            "errors [{}], strictly decreasing: {decreasing}",
            list(&errs)
        ),
    )
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .expect("output dir")
        .map(|e| {
            let p = e.expect("entry").path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).expect("read"),
            )
        })
        .collect();
    out.sort();
    out
}

fn c12_determinism() -> Result<Verdict> {
    let suite = Path::new(env!("CARGO_MANIFEST_DIR")).join("suite");
    let a = tempfile::tempdir().expect("tempdir");
    let b = tempfile::tempdir().expect("tempdir");
    let ra = run_all(&suite, Some(a.path()), None)?;
    let rb = run_all(&suite, Some(b.path()), None)?;
    let errors: Vec<String> = ra
        .iter()
        .chain(&rb)
        .filter_map(|(p, r)| r.as_ref().err().map(|e| format!("{}: {e}", p.display())))
        .collect();
    let fa = files(a.path());
    let fb = files(b.path());
    let identical = fa == fb;
    verdict(
        identical && errors.is_empty() && !fa.is_empty(),
        format!(
            "{} configs, {} files, byte-identical: {identical}, run errors: {errors:?}",
            ra.len(),
            fa.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("exact step identity", c1_step_identity),
        ("special-function cross-check", c2_special_functions),
        ("long-time profile ladder, sub_log:1/2", c3_long_time_ladder),
        (
            "short-time profile ladder, sub_log:1/2",
            c4_short_time_ladder,
        ),
        ("envelope bound with constants", c5_envelope_bound),
        ("uniform G bound, log_sine", c6_g_bound),
        ("dilation estimate", c7_dilation),
        ("rescaled-frame residual", c8_rescaled_residual),
        ("finite-difference validation", c9_fd_validation),
        (
            "curvature flow vs heat gap, smooth_log_sine:1",
            c10_flow_gap,
        ),
        (
            "curvature-flow profile ladder, smooth_log_sine:1/2",
            c11_flow_profile_ladder,
        ),
        ("run-all determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match check() {
            Ok(v) => (v.pass, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {detail} [{:.1}s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
