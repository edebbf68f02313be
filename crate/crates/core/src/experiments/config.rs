//! Flat `key = value` experiment documents.
//!
//! One key per line, `#` starts a comment, lists are comma separated and
//! numbers may be written as fractions (`1/2`). Every key except `kind` and
//! `datum` has a default, and [`ExperimentConfig::to_text`] writes all of
//! them back out.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::curvature_flow::{FdSolverConfig, BUFFER_WIDTHS, DEFAULT_CFL};
use crate::error::{Error, Result};
use crate::initial_data::{parse_number, InitialDatum};
use crate::profile_bounds::{DEFAULT_NODES, DEFAULT_WINDOW};
use crate::quadrature::{QuadratureSpec, DEFAULT_TAIL_RADIUS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExperimentKind {
    ProfileError,
    ExactStep,
    Prop6Bound,
    Lemma9Check,
    Lemma10Check,
    RescaledCheck,
    CurvatureGap,
    Corollary8,
    Accumulation,
    SlidingAverage,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 10] = [
        ExperimentKind::ProfileError,
        ExperimentKind::ExactStep,
        ExperimentKind::Prop6Bound,
        ExperimentKind::Lemma9Check,
        ExperimentKind::Lemma10Check,
        ExperimentKind::RescaledCheck,
        ExperimentKind::CurvatureGap,
        ExperimentKind::Corollary8,
        ExperimentKind::Accumulation,
        ExperimentKind::SlidingAverage,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::ProfileError => "profile-error",
            ExperimentKind::ExactStep => "exact-step",
            ExperimentKind::Prop6Bound => "prop6-bound",
            ExperimentKind::Lemma9Check => "lemma9-check",
            ExperimentKind::Lemma10Check => "lemma10-check",
            ExperimentKind::RescaledCheck => "rescaled-check",
            ExperimentKind::CurvatureGap => "curvature-gap",
            ExperimentKind::Corollary8 => "corollary8",
            ExperimentKind::Accumulation => "accumulation",
            ExperimentKind::SlidingAverage => "sliding-average",
        }
    }

    fn uses_fd(self) -> bool {
        matches!(
            self,
            ExperimentKind::CurvatureGap | ExperimentKind::Corollary8
        )
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::config(format!("unknown experiment kind '{s}'")))
    }
}

/// Finite-difference settings of the curvature kinds; the record times are
/// the experiment's `t_ladder`.
#[derive(Debug, Clone, PartialEq)]
pub struct FdOverrides {
    pub half_width: f64,
    pub dx: f64,
    pub cfl: f64,
    pub final_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub datum: String,
    pub t_ladder: Vec<f64>,
    pub lambda_ladder: Vec<f64>,
    pub r_ladder: Vec<f64>,
    pub h_ladder: Vec<f64>,
    pub alpha_ladder: Vec<f64>,
    pub x_points: Vec<f64>,
    pub s_points: Vec<f64>,
    pub tau: f64,
    pub x_window: f64,
    pub l: f64,
    pub n: usize,
    pub quadrature: QuadratureSpec,
    pub fd: FdOverrides,
    pub out_dir: PathBuf,
}

const KEYS: &[&str] = &[
    "kind",
    "datum",
    "out_dir",
    "t_ladder",
    "lambda_ladder",
    "r_ladder",
    "h_ladder",
    "alpha_ladder",
    "x_points",
    "s_points",
    "tau",
    "x_window",
    "L",
    "n",
    "abs_tol",
    "tail_radius",
    "max_panels",
    "singularity_splits",
    "fd_half_width",
    "fd_dx",
    "fd_cfl",
    "fd_final_time",
];

/// Formats a number so that parsing it back gives the same `f64`.
pub(crate) fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(",")
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|p| parse_number(p.trim())).collect()
}

fn default_t_ladder(kind: ExperimentKind) -> Vec<f64> {
    match kind {
        ExperimentKind::ProfileError => vec![1e2, 1e4, 1e6, 1e8],
        ExperimentKind::ExactStep => vec![0.1, 1.0, 10.0, 1e6],
        ExperimentKind::Prop6Bound => vec![1e-4, 1.0, 1e4, 1e8],
        ExperimentKind::Lemma9Check => vec![1.0, 1e4],
        ExperimentKind::CurvatureGap => vec![1.0, 3.0, 10.0, 30.0, 100.0],
        ExperimentKind::Corollary8 => vec![4.0, 16.0, 64.0],
        _ => Vec::new(),
    }
}

fn default_x_points(kind: ExperimentKind) -> Vec<f64> {
    match kind {
        ExperimentKind::Prop6Bound => vec![-3.0, -1.0, 0.0, 1.0, 3.0],
        ExperimentKind::SlidingAverage => vec![0.0],
        _ => Vec::new(),
    }
}

fn default_lambda_ladder(kind: ExperimentKind) -> Vec<f64> {
    if kind == ExperimentKind::Accumulation {
        (0..32).map(|k| (k as f64 * PI / 8.0).exp()).collect()
    } else {
        Vec::new()
    }
}

fn default_r_ladder(kind: ExperimentKind) -> Vec<f64> {
    if kind == ExperimentKind::SlidingAverage {
        (0..=8).map(|k| 10f64.powi(k)).collect()
    } else {
        Vec::new()
    }
}

fn default_h_ladder(kind: ExperimentKind) -> Vec<f64> {
    if kind == ExperimentKind::RescaledCheck {
        vec![5e-3, 1e-2]
    } else {
        Vec::new()
    }
}

fn default_alpha_ladder(kind: ExperimentKind) -> Vec<f64> {
    if kind == ExperimentKind::Lemma10Check {
        vec![0.25, 0.5, 2.0, 4.0]
    } else {
        Vec::new()
    }
}

fn default_s_points(kind: ExperimentKind) -> Vec<f64> {
    if kind == ExperimentKind::Lemma10Check {
        vec![-1e3, -1.0, -1e-3, 1e-3, 1.0, 1e3]
    } else {
        Vec::new()
    }
}

fn default_half_width(kind: ExperimentKind, l: f64, final_time: f64) -> f64 {
    let buffer = BUFFER_WIDTHS * final_time.sqrt();
    match kind {
        ExperimentKind::CurvatureGap => 400.0,
        _ => (l * final_time.sqrt() + buffer).ceil() + 4.0,
    }
}

fn check_ladder(name: &str, v: &[f64]) -> Result<()> {
    if v.iter().any(|x| !(*x > 0.0)) {
        return Err(Error::config(format!("{name} entries must be positive")));
    }
    if v.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::config(format!("{name} must be strictly increasing")));
    }
    Ok(())
}

impl ExperimentConfig {
    /// Minimal config for `kind` on `datum` with every default filled in.
    pub fn with_defaults(kind: ExperimentKind, datum: &str) -> Self {
        let t_ladder = default_t_ladder(kind);
        let final_time = t_ladder.last().copied().unwrap_or(1.0);
        Self {
            kind,
            datum: datum.to_string(),
            t_ladder,
            lambda_ladder: default_lambda_ladder(kind),
            r_ladder: default_r_ladder(kind),
            h_ladder: default_h_ladder(kind),
            alpha_ladder: default_alpha_ladder(kind),
            x_points: default_x_points(kind),
            s_points: default_s_points(kind),
            tau: 0.0,
            x_window: 4.0,
            l: DEFAULT_WINDOW,
            n: DEFAULT_NODES,
            quadrature: QuadratureSpec::default(),
            fd: FdOverrides {
                half_width: default_half_width(kind, DEFAULT_WINDOW, final_time),
                dx: 0.1,
                cfl: DEFAULT_CFL,
                final_time,
            },
            out_dir: PathBuf::from("out"),
        }
    }

    /// Solver configuration of the curvature kinds.
    pub fn fd_config(&self) -> FdSolverConfig {
        FdSolverConfig {
            cfl: self.fd.cfl,
            ..FdSolverConfig::new(
                self.fd.half_width,
                self.fd.dx,
                self.fd.final_time,
                self.t_ladder.clone(),
            )
        }
    }

    pub fn validate(&self) -> Result<()> {
        InitialDatum::parse(&self.datum)?;
        for (name, v) in [
            ("t_ladder", &self.t_ladder),
            ("lambda_ladder", &self.lambda_ladder),
            ("r_ladder", &self.r_ladder),
            ("h_ladder", &self.h_ladder),
            ("alpha_ladder", &self.alpha_ladder),
        ] {
            check_ladder(name, v)?;
        }
        if !(self.l > 0.0) {
            return Err(Error::config(format!("L must be positive, got {}", self.l)));
        }
        if self.n < 3 {
            return Err(Error::config(format!(
                "n must be at least 3, got {}",
                self.n
            )));
        }
        if !(self.x_window > 0.0) {
            return Err(Error::config(format!(
                "x_window must be positive, got {}",
                self.x_window
            )));
        }
        if self
            .x_points
            .iter()
            .chain(&self.s_points)
            .any(|v| !v.is_finite())
            || !self.tau.is_finite()
        {
            return Err(Error::config("points must be finite"));
        }
        self.quadrature
            .validate()
            .map_err(|e| Error::config(format!("quadrature: {e}")))?;
        let required: &[(&str, &Vec<f64>)] = match self.kind {
            ExperimentKind::ProfileError
            | ExperimentKind::ExactStep
            | ExperimentKind::Lemma9Check
            | ExperimentKind::CurvatureGap
            | ExperimentKind::Corollary8 => &[("t_ladder", &self.t_ladder)],
            ExperimentKind::Prop6Bound => {
                &[("t_ladder", &self.t_ladder), ("x_points", &self.x_points)]
            }
            ExperimentKind::Lemma10Check => &[
                ("alpha_ladder", &self.alpha_ladder),
                ("s_points", &self.s_points),
            ],
            ExperimentKind::RescaledCheck => &[("h_ladder", &self.h_ladder)],
            ExperimentKind::Accumulation => &[("lambda_ladder", &self.lambda_ladder)],
            ExperimentKind::SlidingAverage => {
                &[("r_ladder", &self.r_ladder), ("x_points", &self.x_points)]
            }
        };
        for (name, v) in required {
            if v.is_empty() {
                return Err(Error::config(format!(
                    "{} needs a non-empty '{name}'",
                    self.kind
                )));
            }
        }
        if self.kind == ExperimentKind::Lemma10Check && self.s_points.contains(&0.0) {
            return Err(Error::config("s_points must not contain 0"));
        }
        if self.kind.uses_fd() {
            self.fd_config()
                .validate()
                .map_err(|e| Error::config(format!("fd: {e}")))?;
        }
        Ok(())
    }

    /// Parses a config document; all defaults are filled in.
    pub fn parse(text: &str) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut pairs: Vec<(usize, &str, &str)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Syntax {
                line: line_no,
                message: format!("expected 'key = value', got '{line}'"),
            })?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(Error::Syntax {
                    line: line_no,
                    message: format!("unknown key '{k}'"),
                });
            }
            if !seen.insert(k) {
                return Err(Error::Syntax {
                    line: line_no,
                    message: format!("duplicate key '{k}'"),
                });
            }
            pairs.push((line_no, k, v));
        }
        let find = |key: &str| pairs.iter().find(|p| p.1 == key).map(|p| (p.0, p.2));
        let kind: ExperimentKind = match find("kind") {
            Some((line, v)) => v.parse().map_err(|e: Error| Error::Syntax {
                line,
                message: e.to_string(),
            })?,
            None => return Err(Error::config("missing required key 'kind'")),
        };
        let datum = find("datum")
            .map(|(_, v)| v.to_string())
            .ok_or_else(|| Error::config("missing required key 'datum'"))?;

        let mut cfg = Self::with_defaults(kind, &datum);
        let mut fd_half_width = None;
        let mut fd_final_time = None;
        for &(line, key, value) in &pairs {
            let at = |e: Error| Error::Syntax {
                line,
                message: format!("{key}: {e}"),
            };
            let num = || parse_number(value).map_err(at);
            let list = || parse_list(value).map_err(at);
            match key {
                "kind" | "datum" => {}
                "out_dir" => cfg.out_dir = PathBuf::from(value),
                "t_ladder" => cfg.t_ladder = list()?,
                "lambda_ladder" => cfg.lambda_ladder = list()?,
                "r_ladder" => cfg.r_ladder = list()?,
                "h_ladder" => cfg.h_ladder = list()?,
                "alpha_ladder" => cfg.alpha_ladder = list()?,
                "x_points" => cfg.x_points = list()?,
                "s_points" => cfg.s_points = list()?,
                "tau" => cfg.tau = num()?,
                "x_window" => cfg.x_window = num()?,
                "L" => cfg.l = num()?,
                "n" => {
                    cfg.n = value.parse().map_err(|_| Error::Syntax {
                        line,
                        message: format!("n: '{value}' is not a non-negative integer"),
                    })?
                }
                "abs_tol" => cfg.quadrature.abs_tol = num()?,
                "tail_radius" => cfg.quadrature.tail_radius = num()?,
                "max_panels" => {
                    cfg.quadrature.max_panels = value.parse().map_err(|_| Error::Syntax {
                        line,
                        message: format!("max_panels: '{value}' is not a non-negative integer"),
                    })?
                }
                "singularity_splits" => cfg.quadrature.singularity_splits = list()?,
                "fd_half_width" => fd_half_width = Some(num()?),
                "fd_dx" => cfg.fd.dx = num()?,
                "fd_cfl" => cfg.fd.cfl = num()?,
                "fd_final_time" => fd_final_time = Some(num()?),
                _ => unreachable!("key list checked above"),
            }
        }
        if find("abs_tol").is_some() && find("tail_radius").is_none() {
            cfg.quadrature.tail_radius = DEFAULT_TAIL_RADIUS.max(QuadratureSpec::min_tail_radius(
                cfg.quadrature.abs_tol.min(1.0),
            ));
        }
        cfg.fd.final_time =
            fd_final_time.unwrap_or_else(|| cfg.t_ladder.last().copied().unwrap_or(1.0));
        cfg.fd.half_width =
            fd_half_width.unwrap_or_else(|| default_half_width(kind, cfg.l, cfg.fd.final_time));
        cfg.validate()?;
        Ok(cfg)
    }

    /// Writes every key, so that `parse(to_text(c)) == c`.
    pub fn to_text(&self) -> String {
        let q = &self.quadrature;
        let lines = [
            ("kind", self.kind.to_string()),
            ("datum", self.datum.clone()),
            ("out_dir", self.out_dir.display().to_string()),
            ("t_ladder", fmt_list(&self.t_ladder)),
            ("lambda_ladder", fmt_list(&self.lambda_ladder)),
            ("r_ladder", fmt_list(&self.r_ladder)),
            ("h_ladder", fmt_list(&self.h_ladder)),
            ("alpha_ladder", fmt_list(&self.alpha_ladder)),
            ("x_points", fmt_list(&self.x_points)),
            ("s_points", fmt_list(&self.s_points)),
            ("tau", fmt_num(self.tau)),
            ("x_window", fmt_num(self.x_window)),
            ("L", fmt_num(self.l)),
            ("n", self.n.to_string()),
            ("abs_tol", fmt_num(q.abs_tol)),
            ("tail_radius", fmt_num(q.tail_radius)),
            ("max_panels", q.max_panels.to_string()),
            ("singularity_splits", fmt_list(&q.singularity_splits)),
            ("fd_half_width", fmt_num(self.fd.half_width)),
            ("fd_dx", fmt_num(self.fd.dx)),
            ("fd_cfl", fmt_num(self.fd.cfl)),
            ("fd_final_time", fmt_num(self.fd.final_time)),
        ];
        let mut out = String::new();
        for (k, v) in lines {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        }
        out
    }
}

impl Default for FdOverrides {
    fn default() -> Self {
        Self {
            half_width: 400.0,
            dx: 0.1,
            cfl: DEFAULT_CFL,
            final_time: 100.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_gets_defaults() {
        let c = ExperimentConfig::parse("kind = profile-error\ndatum = sub_log:1/2\n").unwrap();
        assert_eq!(c.l, 4.0);
        assert_eq!(c.n, 401);
        assert_eq!(c.quadrature.abs_tol, 1e-10);
        assert_eq!(c.quadrature.tail_radius, 14.0);
        assert_eq!(c.fd.cfl, 0.4);
        assert_eq!(c.t_ladder, vec![1e2, 1e4, 1e6, 1e8]);
    }

    #[test]
    fn negative_window_is_rejected_by_name() {
        let e = ExperimentConfig::parse("kind = profile-error\ndatum = log_sine\nL = -1\n")
            .unwrap_err();
        assert!(e.to_string().contains("L must be positive"), "{e}");
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let e =
            ExperimentConfig::parse("# header\nkind = exact-step\ndatum step:0,1\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 3, .. }), "{e}");
        let e = ExperimentConfig::parse("kind = exact-step\ndatum = step:0,1\ncolour = red\n")
            .unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 3, .. }), "{e}");
        let e = ExperimentConfig::parse("kind = exact-step\n").unwrap_err();
        assert!(e.to_string().contains("'datum'"), "{e}");
        let e = ExperimentConfig::parse("datum = log_sine\n").unwrap_err();
        assert!(e.to_string().contains("'kind'"), "{e}");
    }

    #[test]
    fn ladders_must_increase() {
        let e =
            ExperimentConfig::parse("kind = profile-error\ndatum = log_sine\nt_ladder = 10, 1\n")
                .unwrap_err();
        assert!(e.to_string().contains("strictly increasing"), "{e}");
    }

    #[test]
    fn serialisation_round_trips_for_every_kind() {
        for kind in ExperimentKind::ALL {
            let datum = match kind {
                ExperimentKind::CurvatureGap => "smooth_log_sine:1",
                ExperimentKind::Corollary8 => "smooth_log_sine:0.5",
                _ => "log_sine",
            };
            let c = ExperimentConfig::with_defaults(kind, datum);
            c.validate().unwrap();
            let text = c.to_text();
            let back = ExperimentConfig::parse(&text).unwrap();
            assert_eq!(back, c, "{kind}");
            assert_eq!(back.to_text(), text);
        }
    }

    #[test]
    fn fd_window_follows_ladder() {
        let c =
            ExperimentConfig::parse("kind = corollary8\ndatum = smooth_log_sine:1/2\n").unwrap();
        let fd = c.fd_config();
        assert_eq!(fd.final_time, 64.0);
        fd.require_observable(c.l * 8.0).unwrap();
    }
}
