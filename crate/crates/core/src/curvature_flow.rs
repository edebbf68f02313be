//! Explicit finite differences for the graph curvature flow
//! `u_t = u_xx / (1 + u_x^2)` and, with the same grid, stepping, and
//! boundary treatment, for the heat equation `u_t = u_xx`.
//!
//! Centred second-order differences in space, forward Euler in time with
//! `dt <= cfl dx^2`. The diffusion coefficient `1/(1 + u_x^2)` never exceeds
//! one, so `cfl <= 1/2` makes every update a convex combination of
//! neighbouring values and the scheme obeys a discrete maximum principle.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::initial_data::{DecayClass, InitialDatum};
use crate::kernels::profile_f;
use crate::quadrature::QuadratureSpec;
use crate::semigroup::evolve;

pub const DEFAULT_CFL: f64 = 0.4;
/// Width of the boundary buffer in units of `sqrt(T)`.
pub const BUFFER_WIDTHS: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Boundary {
    /// Homogeneous Neumann condition via mirrored ghost nodes.
    NeumannZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    CurvatureFlow,
    Heat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FdSolverConfig {
    /// Truncation radius `X` of the domain `[-X, X]`.
    pub half_width: f64,
    pub dx: f64,
    /// Time step as a fraction of `dx^2`, in `(0, 0.5]`.
    pub cfl: f64,
    pub final_time: f64,
    pub boundary: Boundary,
    pub record_times: Vec<f64>,
}

impl FdSolverConfig {
    pub fn new(half_width: f64, dx: f64, final_time: f64, record_times: Vec<f64>) -> Self {
        Self {
            half_width,
            dx,
            cfl: DEFAULT_CFL,
            final_time,
            boundary: Boundary::NeumannZero,
            record_times,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dx > 0.0) || !(self.half_width > self.dx) {
            return Err(Error::domain(format!(
                "need 0 < dx < X, got dx = {}, X = {}",
                self.dx, self.half_width
            )));
        }
        if !(self.cfl > 0.0 && self.cfl <= 0.5) {
            return Err(Error::domain(format!(
                "cfl must lie in (0, 0.5], got {}",
                self.cfl
            )));
        }
        if !(self.final_time > 0.0) || !self.final_time.is_finite() {
            return Err(Error::domain(format!(
                "final time must be positive, got {}",
                self.final_time
            )));
        }
        if self.record_times.is_empty() {
            return Err(Error::domain("no record times"));
        }
        let mut prev = 0.0;
        for &t in &self.record_times {
            if !(t > prev) {
                return Err(Error::domain(
                    "record times must be positive and strictly increasing",
                ));
            }
            if t > self.final_time * (1.0 + 1e-12) {
                return Err(Error::domain(format!(
                    "record time {t} exceeds final time {}",
                    self.final_time
                )));
            }
            prev = t;
        }
        if self.observation_radius() <= 0.0 {
            return Err(Error::domain(format!(
                "X = {} leaves no room for the {}*sqrt(T) boundary buffer",
                self.half_width, BUFFER_WIDTHS
            )));
        }
        Ok(())
    }

    pub fn nodes(&self) -> usize {
        (2.0 * self.half_width / self.dx).round() as usize + 1
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.nodes() - 1) as f64
    }

    pub fn dt(&self) -> f64 {
        let h = self.spacing();
        self.cfl * h * h
    }

    pub fn buffer(&self) -> f64 {
        BUFFER_WIDTHS * self.final_time.sqrt()
    }

    /// Largest `|x|` whose values are unaffected by the boundary to
    /// Gaussian-tail accuracy.
    pub fn observation_radius(&self) -> f64 {
        self.half_width - self.buffer()
    }

    pub fn require_observable(&self, x: f64) -> Result<()> {
        if x.abs() > self.observation_radius() {
            return Err(Error::domain(format!(
                "observation at |x| = {} needs X >= {}",
                x.abs(),
                x.abs() + self.buffer()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub grid: GridFunction,
}

fn step(cur: &[f64], next: &mut [f64], lambda: f64, inv_2h: f64, equation: Equation) {
    let n = cur.len();
    next.par_chunks_mut(4096)
        .enumerate()
        .for_each(|(chunk, out)| {
            let base = chunk * 4096;
            for (k, slot) in out.iter_mut().enumerate() {
                let i = base + k;
                let left = if i == 0 { cur[1] } else { cur[i - 1] };
                let right = if i + 1 == n { cur[n - 2] } else { cur[i + 1] };
                let lap = right - 2.0 * cur[i] + left;
                let coef = match equation {
                    Equation::Heat => 1.0,
                    Equation::CurvatureFlow => {
                        let ux = (right - left) * inv_2h;
                        1.0 / (1.0 + ux * ux)
                    }
                };
                *slot = cur[i] + lambda * coef * lap;
            }
        });
}

/// Marches grid data to each record time. Any record time is reached
/// exactly by shortening the steps of the last stretch.
pub fn evolve_grid(
    initial: &GridFunction,
    cfl: f64,
    record_times: &[f64],
    equation: Equation,
) -> Result<Vec<Snapshot>> {
    if !(cfl > 0.0 && cfl <= 0.5) {
        return Err(Error::domain(format!(
            "cfl must lie in (0, 0.5], got {cfl}"
        )));
    }
    if initial.n() < 3 {
        return Err(Error::domain("finite differences need at least 3 nodes"));
    }
    let h = initial.spacing();
    let dt_max = cfl * h * h;
    let lo = initial.min();
    let hi = initial.max();
    let eps = 1e-9 * (1.0 + lo.abs().max(hi.abs()));

    let mut cur = initial.values().to_vec();
    let mut next = vec![0.0; cur.len()];
    let mut now = 0.0;
    let mut out = Vec::with_capacity(record_times.len());
    for &target in record_times {
        if !(target > now) {
            return Err(Error::domain(
                "record times must be positive and strictly increasing",
            ));
        }
        let steps = ((target - now) / dt_max - 1e-9).ceil().max(1.0) as usize;
        let dt = (target - now) / steps as f64;
        let lambda = dt / (h * h);
        for _ in 0..steps {
            step(&cur, &mut next, lambda, 0.5 / h, equation);
            std::mem::swap(&mut cur, &mut next);
        }
        now = target;
        let (smin, smax) = cur
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                (a.min(v), b.max(v))
            });
        if !(smin >= lo - eps && smax <= hi + eps) {
            return Err(Error::Solver(format!(
                "instability at t = {target}: values in [{smin}, {smax}] escape initial range [{lo}, {hi}] (dx = {h}, dt = {dt})"
            )));
        }
        out.push(Snapshot {
            t: target,
            grid: GridFunction::new(initial.x_min(), initial.x_max(), cur.clone())?,
        });
    }
    Ok(out)
}

fn initial_grid(u0: &InitialDatum, cfg: &FdSolverConfig) -> Result<GridFunction> {
    GridFunction::sample(-cfg.half_width, cfg.half_width, cfg.nodes(), |x| {
        u0.eval_raw(x)
    })
}

fn require_smooth(u0: &InitialDatum) -> Result<()> {
    if !u0.is_smooth() {
        return Err(Error::Precondition(format!(
            "{} is not C^2; the curvature flow needs smooth initial data",
            u0.id()
        )));
    }
    Ok(())
}

/// Snapshots of the curvature flow at `cfg.record_times`.
pub fn solve_cf(u0: &InitialDatum, cfg: &FdSolverConfig) -> Result<Vec<Snapshot>> {
    require_smooth(u0)?;
    cfg.validate()?;
    evolve_grid(
        &initial_grid(u0, cfg)?,
        cfg.cfl,
        &cfg.record_times,
        Equation::CurvatureFlow,
    )
}

/// The heat equation on the same grid as [`solve_cf`].
pub fn solve_heat_fd(u0: &InitialDatum, cfg: &FdSolverConfig) -> Result<Vec<Snapshot>> {
    cfg.validate()?;
    evolve_grid(
        &initial_grid(u0, cfg)?,
        cfg.cfl,
        &cfg.record_times,
        Equation::Heat,
    )
}

/// `sqrt(t) * max |u_cf - u_heat|` over the nodes outside the boundary
/// buffer, with the heat solution taken from the quadrature semigroup.
pub fn nara_taniguchi_gap(
    u0: &InitialDatum,
    cfg: &FdSolverConfig,
    spec: &QuadratureSpec,
) -> Result<Vec<(f64, f64)>> {
    let snaps = solve_cf(u0, cfg)?;
    let radius = cfg.observation_radius();
    snaps
        .iter()
        .map(|snap| {
            let g = &snap.grid;
            let worst = (0..g.n())
                .into_par_iter()
                .filter(|&i| g.node(i).abs() <= radius + 1e-9)
                .map(|i| {
                    let x = g.node(i);
                    Ok((g.values()[i] - evolve(u0, x, snap.t, spec)?).abs())
                })
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok((snap.t, snap.t.sqrt() * worst))
        })
        .collect()
}

/// Profile error of the curvature flow on the similarity window `[-L, L]`
/// (`n` nodes), read off the finite-difference grid by cubic interpolation.
pub fn corollary8_error(
    u0: &InitialDatum,
    cfg: &FdSolverConfig,
    l: f64,
    t_ladder: &[f64],
    n: usize,
) -> Result<Vec<(f64, f64)>> {
    require_smooth(u0)?;
    if u0.decay_class() != DecayClass::DecaysAtInfinity {
        return Err(Error::Precondition(format!(
            "{} does not have |x u0'(x)| -> 0 at infinity",
            u0.id()
        )));
    }
    if !(l > 0.0) || n < 3 {
        return Err(Error::domain(format!(
            "invalid similarity window L = {l}, n = {n}"
        )));
    }
    if let Some(&t) = t_ladder
        .iter()
        .find(|&&t| t > cfg.final_time * (1.0 + 1e-12))
    {
        return Err(Error::domain(format!(
            "ladder time {t} exceeds the solver's final time {}",
            cfg.final_time
        )));
    }
    let run = FdSolverConfig {
        record_times: t_ladder.to_vec(),
        ..cfg.clone()
    };
    run.validate()?;
    let t_max = t_ladder.iter().copied().fold(0.0, f64::max);
    run.require_observable(l * t_max.sqrt())?;
    let snaps = solve_cf(u0, &run)?;
    snaps
        .iter()
        .map(|snap| {
            let st = snap.t.sqrt();
            let (a, b) = (u0.eval(-st)?, u0.eval(st)?);
            let mut worst: f64 = 0.0;
            for i in 0..n {
                let z = -l + 2.0 * l * i as f64 / (n - 1) as f64;
                let u = snap.grid.interpolate(st * z)?;
                worst = worst.max((u - (a * profile_f(-z) + b * profile_f(z))).abs());
            }
            Ok((snap.t, worst))
        })
        .collect()
}
