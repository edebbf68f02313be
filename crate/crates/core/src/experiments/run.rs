//! Executes one experiment config and writes its files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::config::{fmt_num, ExperimentConfig, ExperimentKind};
use super::output::{line_chart, output_path, sanitize, write_atomic, Cell, Series, Table};
use crate::curvature_flow::{corollary8_error, nara_taniguchi_gap, solve_cf};
use crate::error::{Error, Result};
use crate::initial_data::InitialDatum;
use crate::kernels::{kernel_g, profile_f};
use crate::profile_bounds::{
    constants_error, fitted_profile, lemma10_check, lemma9_rhs, profile_error, prop6_check,
};
use crate::quadrature::QuadratureSpec;
use crate::semigroup::{rescaled_residual, scaled_evolve, sliding_average};

/// Column order of the main CSV of each kind.
pub fn csv_header(kind: ExperimentKind) -> &'static [&'static str] {
    match kind {
        ExperimentKind::ProfileError => &[
            "t",
            "L",
            "sup_error",
            "argmax_x",
            "coeff_left",
            "coeff_right",
            "lemma9_rhs",
            "prop6_rhs_at_argmax",
        ],
        ExperimentKind::ExactStep => &["t", "x", "numeric", "closed_form", "abs_diff"],
        ExperimentKind::Prop6Bound => &["t", "x", "lhs", "rhs", "margin"],
        ExperimentKind::Lemma9Check => &["t", "L", "constants", "a", "b", "measured", "lemma9_rhs"],
        ExperimentKind::Lemma10Check => &["alpha", "s", "lhs", "rhs"],
        ExperimentKind::RescaledCheck => &["h", "residual"],
        ExperimentKind::CurvatureGap => &["t", "gap"],
        ExperimentKind::Corollary8 => &["t", "sup_error"],
        ExperimentKind::Accumulation => &["lambda", "u_left", "u_right", "fit_alpha", "fit_beta"],
        ExperimentKind::SlidingAverage => &["x", "R", "average"],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Scalar results written to the JSON manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub kind: String,
    pub datum: String,
    pub passed: bool,
    pub assertions: Vec<Assertion>,
    pub scalars: BTreeMap<String, f64>,
    pub files: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub manifest: Manifest,
    pub table: Table,
    /// Every file written, manifest last.
    pub files: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.manifest.passed
    }

    /// 0 when every assertion holds, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

#[derive(Default)]
struct Findings {
    assertions: Vec<Assertion>,
    scalars: BTreeMap<String, f64>,
    chart: Option<String>,
    extra: Vec<(String, String)>,
}

impl Findings {
    fn assert(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn scalar(&mut self, name: impl Into<String>, v: f64) {
        self.scalars.insert(name.into(), v);
    }
}

fn grid(l: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                l
            } else {
                -l + 2.0 * l * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn series(name: &str, xs: &[f64], ys: &[f64]) -> Series {
    Series {
        name: name.to_string(),
        points: xs.iter().copied().zip(ys.iter().copied()).collect(),
    }
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// Applies a command-line tolerance override, widening the tail radius if
/// the configured one no longer covers it.
pub fn apply_tol(cfg: &mut ExperimentConfig, tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::config(format!(
            "--tol must lie in (0, 1), got {tol}"
        )));
    }
    cfg.quadrature.abs_tol = tol;
    cfg.quadrature.tail_radius = cfg
        .quadrature
        .tail_radius
        .max(QuadratureSpec::min_tail_radius(tol));
    Ok(())
}

/// Runs `cfg`, writes `<kind>_<datum>.csv`, an optional `.svg`, and the
/// `.json` manifest into `cfg.out_dir`.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let u0 = InitialDatum::parse(&cfg.datum)?;
    let mut table = Table::new(csv_header(cfg.kind));
    let mut f = Findings::default();
    match cfg.kind {
        ExperimentKind::ProfileError => profile_error_kind(cfg, &u0, &mut table, &mut f)?,
        ExperimentKind::ExactStep => exact_step_kind(cfg, &u0, &mut table, &mut f)?,
        ExperimentKind::Prop6Bound => prop6_kind(cfg, &u0, &mut table, &mut f)?,
        ExperimentKind::Lemma9Check => lemma9_kind(cfg, &u0, &mut table, &mut f)?,
        ExperimentKind::Lemma10Check => lemma10_kind(cfg, &u0, &mut table, &mut f)?,
        ExperimentKind::RescaledCheck => rescaled_kind(cfg, &u0, &mut table, &mut f)?,
        ExperimentKind::CurvatureGap => gap_kind(cfg, &u0, &mut table, &mut f)?,
        ExperimentKind::Corollary8 => corollary8_kind(cfg, &u0, &mut table, &mut f)?,
        ExperimentKind::Accumulation => accumulation_kind(cfg, &u0, &mut table, &mut f)?,
        ExperimentKind::SlidingAverage => sliding_kind(cfg, &u0, &mut table, &mut f)?,
    }

    let kind = cfg.kind.name();
    let mut files = Vec::new();
    let csv = output_path(&cfg.out_dir, kind, &cfg.datum, ".csv");
    write_atomic(&csv, table.to_csv().as_bytes())?;
    files.push(csv);
    if let Some(svg) = &f.chart {
        let p = output_path(&cfg.out_dir, kind, &cfg.datum, ".svg");
        write_atomic(&p, svg.as_bytes())?;
        files.push(p);
    }
    for (suffix, body) in &f.extra {
        let p = output_path(&cfg.out_dir, kind, &cfg.datum, suffix);
        write_atomic(&p, body.as_bytes())?;
        files.push(p);
    }
    let json = output_path(&cfg.out_dir, kind, &cfg.datum, ".json");
    files.push(json.clone());
    let manifest = Manifest {
        kind: kind.to_string(),
        datum: cfg.datum.clone(),
        passed: f.assertions.iter().all(|a| a.passed),
        assertions: f.assertions,
        scalars: f.scalars,
        files: files
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::config(format!("manifest serialisation: {e}")))?;
    text.push('\n');
    write_atomic(&json, text.as_bytes())?;
    Ok(RunOutcome {
        manifest,
        table,
        files,
    })
}

/// Reads and runs one config file. `out_dir` and `tol` override the file.
pub fn run_file(path: &Path, out_dir: Option<&Path>, tol: Option<f64>) -> Result<RunOutcome> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(dir) = out_dir {
        cfg.out_dir = dir.to_path_buf();
    }
    if let Some(tol) = tol {
        apply_tol(&mut cfg, tol)?;
    }
    run(&cfg)
}

/// Runs every `*.cfg` file of `dir` (sorted by name) concurrently. Outputs
/// of distinct configs must not collide; each file is written atomically.
pub fn run_all(
    dir: &Path,
    out_dir: Option<&Path>,
    tol: Option<f64>,
) -> Result<Vec<(PathBuf, Result<RunOutcome>)>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "cfg"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::config(format!("no .cfg files in {}", dir.display())));
    }
    let mut targets = std::collections::BTreeMap::new();
    for p in &paths {
        let Ok(text) = std::fs::read_to_string(p) else {
            continue;
        };
        let Ok(cfg) = ExperimentConfig::parse(&text) else {
            continue;
        };
        let dir = out_dir.map_or(cfg.out_dir.clone(), Path::to_path_buf);
        let key = output_path(&dir, cfg.kind.name(), &cfg.datum, "");
        if let Some(other) = targets.insert(key.clone(), p.clone()) {
            return Err(Error::config(format!(
                "{} and {} both write {}.*",
                other.display(),
                p.display(),
                key.display()
            )));
        }
    }
    Ok(paths
        .into_par_iter()
        .map(|p| {
            let r = run_file(&p, out_dir, tol);
            (p, r)
        })
        .collect())
}

/// Exit status of a batch: the worst individual status.
pub fn batch_exit_code(results: &[(PathBuf, Result<RunOutcome>)]) -> i32 {
    results
        .iter()
        .map(|(_, r)| match r {
            Ok(o) => o.exit_code(),
            Err(e) => e.exit_code(),
        })
        .max()
        .unwrap_or(0)
}

fn profile_error_kind(
    cfg: &ExperimentConfig,
    u0: &InitialDatum,
    table: &mut Table,
    f: &mut Findings,
) -> Result<()> {
    let spec = &cfg.quadrature;
    let slack = 2.0 * spec.abs_tol;
    let finite = u0.sup_left().is_finite() && u0.sup_right().is_finite();
    let exact = u0.sup_left() == 0.0 && u0.sup_right() == 0.0;
    let nodes = grid(cfg.l, cfg.n);
    let g_rhs: Option<Vec<f64>> = finite.then(|| {
        nodes
            .par_iter()
            .map(|&x| kernel_g(-x, spec) * u0.sup_left() + kernel_g(x, spec) * u0.sup_right())
            .collect()
    });
    let mut errs = Vec::new();
    let mut bounds = Vec::new();
    for &t in &cfg.t_ladder {
        let mut rep = profile_error(u0, cfg.l, t, cfg.n, spec)?;
        rep.attach_lemma9(u0, spec)?;
        rep.prop6_rhs_at = g_rhs.clone();
        let imax = nodes.iter().position(|&x| x == rep.argmax_x).unwrap_or(0);
        let g_at = g_rhs.as_ref().map_or(f64::NAN, |r| r[imax]);
        let l9 = rep.lemma9.map_or(f64::NAN, |b| b.rhs);
        table.push(vec![
            t.into(),
            cfg.l.into(),
            rep.sup_error.into(),
            rep.argmax_x.into(),
            rep.coeff_left.into(),
            rep.coeff_right.into(),
            l9.into(),
            g_at.into(),
        ]);
        match rep.check(slack) {
            Ok(()) => f.assert(
                format!("bounds at t={}", fmt_num(t)),
                true,
                "sup_error within envelope and G bounds",
            ),
            Err(msg) => f.assert(format!("bounds at t={}", fmt_num(t)), false, msg),
        }
        if exact {
            f.assert(
                format!("exact profile at t={}", fmt_num(t)),
                rep.sup_error <= slack,
                format!("sup_error {} vs {}", fmt_num(rep.sup_error), fmt_num(slack)),
            );
        }
        errs.push(rep.sup_error);
        bounds.push(l9);
    }
    f.scalar("max_sup_error", errs.iter().copied().fold(0.0, f64::max));
    f.scalar(
        "strictly_decreasing",
        if strictly_decreasing(&errs) { 1.0 } else { 0.0 },
    );
    f.chart = Some(line_chart(
        &format!("profile error, {}", cfg.datum),
        "t",
        "sup error on window",
        &[
            series("sup_error", &cfg.t_ladder, &errs),
            series("envelope bound", &cfg.t_ladder, &bounds),
        ],
        true,
        true,
    ));
    Ok(())
}

fn exact_step_kind(
    cfg: &ExperimentConfig,
    u0: &InitialDatum,
    table: &mut Table,
    f: &mut Findings,
) -> Result<()> {
    if u0.sup_left() != 0.0 || u0.sup_right() != 0.0 {
        return Err(Error::Precondition(format!(
            "exact-step needs a step or constant datum, got {}",
            u0.id()
        )));
    }
    let (a, b) = (u0.eval(-1.0)?, u0.eval(1.0)?);
    let nodes = grid(cfg.l, cfg.n);
    let mut worst: f64 = 0.0;
    for &t in &cfg.t_ladder {
        let numeric = nodes
            .par_iter()
            .map(|&x| scaled_evolve(u0, x, t, &cfg.quadrature))
            .collect::<Result<Vec<f64>>>()?;
        for (&x, &v) in nodes.iter().zip(&numeric) {
            let exact = a * profile_f(-x) + b * profile_f(x);
            let d = (v - exact).abs();
            worst = worst.max(d);
            table.push(vec![t.into(), x.into(), v.into(), exact.into(), d.into()]);
        }
    }
    let slack = 2.0 * cfg.quadrature.abs_tol;
    f.scalar("max_abs_diff", worst);
    f.assert(
        "max abs diff",
        worst <= slack,
        format!("{} <= {}", fmt_num(worst), fmt_num(slack)),
    );
    Ok(())
}

fn prop6_kind(
    cfg: &ExperimentConfig,
    u0: &InitialDatum,
    table: &mut Table,
    f: &mut Findings,
) -> Result<()> {
    let slack = 2.0 * cfg.quadrature.abs_tol;
    let pts: Vec<(f64, f64)> = cfg
        .t_ladder
        .iter()
        .flat_map(|&t| cfg.x_points.iter().map(move |&x| (t, x)))
        .collect();
    let vals = pts
        .par_iter()
        .map(|&(t, x)| prop6_check(u0, x, t, &cfg.quadrature))
        .collect::<Result<Vec<_>>>()?;
    let mut min_margin = f64::INFINITY;
    let mut failures = 0;
    for (&(t, x), &(lhs, rhs)) in pts.iter().zip(&vals) {
        table.push(vec![
            t.into(),
            x.into(),
            lhs.into(),
            rhs.into(),
            (rhs - lhs).into(),
        ]);
        min_margin = min_margin.min(rhs - lhs);
        if lhs > rhs + slack {
            failures += 1;
        }
    }
    f.scalar("min_margin", min_margin);
    f.assert(
        "lhs <= rhs + 2 abs_tol",
        failures == 0,
        format!("{failures} of {} points violate", pts.len()),
    );
    Ok(())
}

fn lemma9_kind(
    cfg: &ExperimentConfig,
    u0: &InitialDatum,
    table: &mut Table,
    f: &mut Findings,
) -> Result<()> {
    let spec = &cfg.quadrature;
    let slack = 2.0 * spec.abs_tol;
    let mut failures = 0;
    let mut rows = 0;
    for &t in &cfg.t_ladder {
        let rep = profile_error(u0, cfg.l, t, cfg.n, spec)?;
        for (name, a, b) in [
            ("profile", rep.coeff_left, rep.coeff_right),
            ("zero", 0.0, 0.0),
        ] {
            let measured = if name == "profile" {
                rep.sup_error
            } else {
                constants_error(u0, a, b, cfg.l, t, cfg.n, spec)?
            };
            let rhs = lemma9_rhs(u0, a, b, cfg.l, t, spec)?;
            if measured > rhs + slack {
                failures += 1;
            }
            rows += 1;
            table.push(vec![
                t.into(),
                cfg.l.into(),
                Cell::from(name),
                a.into(),
                b.into(),
                measured.into(),
                rhs.into(),
            ]);
        }
    }
    f.assert(
        "measured <= lemma9_rhs + 2 abs_tol",
        failures == 0,
        format!("{failures} of {rows} rows violate"),
    );
    Ok(())
}

fn lemma10_kind(
    cfg: &ExperimentConfig,
    u0: &InitialDatum,
    table: &mut Table,
    f: &mut Findings,
) -> Result<()> {
    let mut failures = 0;
    for &alpha in &cfg.alpha_ladder {
        for &s in &cfg.s_points {
            let (lhs, rhs) = lemma10_check(u0, alpha, s)?;
            if lhs > rhs {
                failures += 1;
            }
            table.push(vec![alpha.into(), s.into(), lhs.into(), rhs.into()]);
        }
    }
    f.assert(
        "lhs <= rhs",
        failures == 0,
        format!("{failures} of {} points violate", table.rows.len()),
    );
    Ok(())
}

fn rescaled_kind(
    cfg: &ExperimentConfig,
    u0: &InitialDatum,
    table: &mut Table,
    f: &mut Findings,
) -> Result<()> {
    let res = cfg
        .h_ladder
        .iter()
        .map(|&h| rescaled_residual(u0, cfg.x_window, cfg.tau, h, &cfg.quadrature))
        .collect::<Result<Vec<f64>>>()?;
    for (&h, &r) in cfg.h_ladder.iter().zip(&res) {
        table.push(vec![h.into(), r.into()]);
    }
    let last = *res.last().expect("validated non-empty");
    f.scalar("residual_at_largest_h", last);
    f.assert("residual at largest h <= 1e-3", last <= 1e-3, fmt_num(last));
    for i in 1..res.len() {
        let (h0, h1) = (cfg.h_ladder[i - 1], cfg.h_ladder[i]);
        if ((h1 / h0) - 2.0).abs() < 1e-12 {
            let ratio = res[i] / res[i - 1];
            f.scalar(format!("ratio_{}_{}", fmt_num(h1), fmt_num(h0)), ratio);
            f.assert(
                format!("Richardson ratio h={} over h={}", fmt_num(h1), fmt_num(h0)),
                (3.5..=4.5).contains(&ratio),
                fmt_num(ratio),
            );
        }
    }
    f.chart = Some(line_chart(
        &format!("rescaled-frame residual, {}", cfg.datum),
        "h",
        "residual",
        &[series("residual", &cfg.h_ladder, &res)],
        true,
        true,
    ));
    Ok(())
}

fn gap_kind(
    cfg: &ExperimentConfig,
    u0: &InitialDatum,
    table: &mut Table,
    f: &mut Findings,
) -> Result<()> {
    let fd = cfg.fd_config();
    let gaps = nara_taniguchi_gap(u0, &fd, &cfg.quadrature)?;
    let snaps = solve_cf(u0, &fd)?;
    for s in &snaps {
        let mut snap = Table::new(&["x", "value"]);
        for (x, &v) in s.grid.nodes().zip(s.grid.values()) {
            snap.push(vec![x.into(), v.into()]);
        }
        f.extra
            .push((format!("_t{}.csv", sanitize(&fmt_num(s.t))), snap.to_csv()));
    }
    let (ts, gs): (Vec<f64>, Vec<f64>) = gaps.iter().copied().unzip();
    for (&t, &g) in ts.iter().zip(&gs) {
        table.push(vec![t.into(), g.into()]);
    }
    let max = gs.iter().copied().fold(0.0, f64::max);
    let min = gs.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = max / min;
    f.scalar("max_over_min", spread);
    f.assert("max/min <= 10", spread <= 10.0, fmt_num(spread));
    if gs.len() >= 3 {
        let tail = &gs[gs.len() - 3..];
        let flat = tail.windows(2).all(|w| w[1] <= 1.1 * w[0]);
        f.assert(
            "last three non-increasing within 10%",
            flat,
            tail.iter()
                .map(|v| fmt_num(*v))
                .collect::<Vec<_>>()
                .join(" "),
        );
    }
    f.chart = Some(line_chart(
        &format!("curvature flow vs heat, {}", cfg.datum),
        "t",
        "sqrt(t) sup |cf - heat|",
        &[series("gap", &ts, &gs)],
        true,
        true,
    ));
    Ok(())
}

fn corollary8_kind(
    cfg: &ExperimentConfig,
    u0: &InitialDatum,
    table: &mut Table,
    f: &mut Findings,
) -> Result<()> {
    let rows = corollary8_error(u0, &cfg.fd_config(), cfg.l, &cfg.t_ladder, cfg.n)?;
    let (ts, es): (Vec<f64>, Vec<f64>) = rows.iter().copied().unzip();
    for (&t, &e) in ts.iter().zip(&es) {
        table.push(vec![t.into(), e.into()]);
    }
    f.assert(
        "strictly decreasing",
        strictly_decreasing(&es),
        es.iter().map(|v| fmt_num(*v)).collect::<Vec<_>>().join(" "),
    );
    f.chart = Some(line_chart(
        &format!("curvature-flow profile error, {}", cfg.datum),
        "t",
        "sup error on window",
        &[series("sup_error", &ts, &es)],
        true,
        true,
    ));
    Ok(())
}

fn accumulation_kind(
    cfg: &ExperimentConfig,
    u0: &InitialDatum,
    table: &mut Table,
    f: &mut Findings,
) -> Result<()> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut fit_a = Vec::new();
    let mut fit_b = Vec::new();
    for &lam in &cfg.lambda_ladder {
        let (ul, ur) = (u0.eval(-lam)?, u0.eval(lam)?);
        let (a, b) = fitted_profile(u0, cfg.l, lam * lam, cfg.n, &cfg.quadrature)?;
        table.push(vec![lam.into(), ul.into(), ur.into(), a.into(), b.into()]);
        left.push(ul);
        right.push(ur);
        fit_a.push(a);
        fit_b.push(b);
    }
    f.scalar("u_left_span", span(&left));
    f.scalar("u_right_span", span(&right));
    f.chart = Some(line_chart(
        &format!("accumulation pairs, {}", cfg.datum),
        "left value",
        "right value",
        &[
            series("(u0(-l), u0(l))", &left, &right),
            series("fitted (alpha, beta)", &fit_a, &fit_b),
        ],
        false,
        false,
    ));
    Ok(())
}

fn span(v: &[f64]) -> f64 {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

fn sliding_kind(
    cfg: &ExperimentConfig,
    u0: &InitialDatum,
    table: &mut Table,
    f: &mut Findings,
) -> Result<()> {
    let mut chart = Vec::new();
    for &x in &cfg.x_points {
        let avgs = cfg
            .r_ladder
            .par_iter()
            .map(|&r| sliding_average(u0, x, r, &cfg.quadrature))
            .collect::<Result<Vec<f64>>>()?;
        for (&r, &a) in cfg.r_ladder.iter().zip(&avgs) {
            table.push(vec![x.into(), r.into(), a.into()]);
        }
        f.scalar(
            format!("average_at_largest_R_x={}", fmt_num(x)),
            *avgs.last().expect("non-empty"),
        );
        chart.push(series(&format!("x = {}", fmt_num(x)), &cfg.r_ladder, &avgs));
    }
    f.chart = Some(line_chart(
        &format!("window averages, {}", cfg.datum),
        "R",
        "average over [x-R, x+R]",
        &chart,
        true,
        false,
    ));
    Ok(())
}
