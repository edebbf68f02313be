//! The two-sided similarity profile `F(-x) u0(-sqrt t) + F(x) u0(sqrt t)`,
//! the error of the solution against it on a window `[-L, L]`, and the
//! explicit bounds that control that error.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::initial_data::InitialDatum;
use crate::kernels::{envelope_rho, kernel_g, profile_f, GAUSS_NORM};
use crate::quadrature::{Estimate, QuadratureSpec};
use crate::semigroup::{half_line, scaled_evolve};

pub const DEFAULT_WINDOW: f64 = 4.0;
pub const DEFAULT_NODES: usize = 401;
/// Inflation applied to the sampled annulus supremum in [`lemma10_check`].
pub const ANNULUS_SAFETY: f64 = 1.01;
pub const ANNULUS_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma9Bound {
    pub a: f64,
    pub b: f64,
    pub rhs: f64,
}

/// Profile error at one time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileErrorReport {
    pub t: f64,
    pub l: f64,
    pub sup_error: f64,
    /// Node where the grid maximum is attained.
    pub argmax_x: f64,
    /// `u0(-sqrt t)`.
    pub coeff_left: f64,
    /// `u0(+sqrt t)`.
    pub coeff_right: f64,
    /// Pointwise errors on the uniform grid over `[-L, L]`.
    pub errors: Vec<f64>,
    pub lemma9: Option<Lemma9Bound>,
    pub prop6_rhs_at: Option<Vec<f64>>,
}

fn grid_nodes(l: f64, n: usize) -> Vec<f64> {
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

fn check_window(l: f64, n: usize) -> Result<()> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::domain(format!(
            "window half-width must be positive, got {l}"
        )));
    }
    if n < 3 {
        return Err(Error::domain(format!(
            "window grid needs at least 3 nodes, got {n}"
        )));
    }
    Ok(())
}

impl ProfileErrorReport {
    pub fn nodes(&self) -> Vec<f64> {
        grid_nodes(self.l, self.errors.len())
    }

    /// Adds the envelope bound with the profile coefficients as constants.
    pub fn attach_lemma9(&mut self, u0: &InitialDatum, spec: &QuadratureSpec) -> Result<()> {
        let (a, b) = (self.coeff_left, self.coeff_right);
        let rhs = lemma9_rhs(u0, a, b, self.l, self.t, spec)?;
        self.lemma9 = Some(Lemma9Bound { a, b, rhs });
        Ok(())
    }

    /// Adds `G(-x) sup_left + G(x) sup_right` at every grid node.
    pub fn attach_prop6(&mut self, u0: &InitialDatum, spec: &QuadratureSpec) -> Result<()> {
        let (left, right) = finite_scale_sups(u0)?;
        let rhs = self
            .nodes()
            .par_iter()
            .map(|&x| kernel_g(-x, spec) * left + kernel_g(x, spec) * right)
            .collect();
        self.prop6_rhs_at = Some(rhs);
        Ok(())
    }

    /// Checks the report invariants; `slack` is the absolute allowance on
    /// each bound (twice the quadrature tolerance).
    pub fn check(&self, slack: f64) -> std::result::Result<(), String> {
        if !(self.sup_error >= 0.0 && self.l > 0.0 && self.t > 0.0) {
            return Err(format!("malformed report at t = {}", self.t));
        }
        if let Some(b) = &self.lemma9 {
            if self.sup_error > b.rhs + slack {
                return Err(format!(
                    "t = {}: sup_error {} exceeds envelope bound {}",
                    self.t, self.sup_error, b.rhs
                ));
            }
        }
        if let Some(rhs) = &self.prop6_rhs_at {
            for ((x, e), r) in self.nodes().iter().zip(&self.errors).zip(rhs) {
                if *e > r + slack {
                    return Err(format!(
                        "t = {}, x = {x}: error {e} exceeds G-bound {r}",
                        self.t
                    ));
                }
            }
        }
        Ok(())
    }
}

fn finite_scale_sups(u0: &InitialDatum) -> Result<(f64, f64)> {
    let (l, r) = (u0.sup_left(), u0.sup_right());
    if !l.is_finite() || !r.is_finite() {
        return Err(Error::Precondition(format!(
            "{} has unbounded scale derivative (sup_left = {l}, sup_right = {r})",
            u0.id()
        )));
    }
    Ok((l, r))
}

/// `F(-x) u0(-sqrt t) + F(x) u0(sqrt t)`.
pub fn two_sided_profile(u0: &InitialDatum, x: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    let st = t.sqrt();
    Ok(profile_f(-x) * u0.eval(-st)? + profile_f(x) * u0.eval(st)?)
}

/// `sup_{|x| <= L} |u(sqrt t x, t) - (a F(-x) + b F(x))|` on an `n`-node grid,
/// with the pointwise errors.
fn window_errors(
    u0: &InitialDatum,
    a: f64,
    b: f64,
    l: f64,
    t: f64,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<Vec<f64>> {
    grid_nodes(l, n)
        .par_iter()
        .map(|&x| {
            let u = scaled_evolve(u0, x, t, spec)?;
            Ok((u - (a * profile_f(-x) + b * profile_f(x))).abs())
        })
        .collect()
}

/// Grid supremum of the profile error on `[-L, L]` at time `t`.
pub fn profile_error(
    u0: &InitialDatum,
    l: f64,
    t: f64,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<ProfileErrorReport> {
    check_window(l, n)?;
    if !(t > 0.0) {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    let st = t.sqrt();
    let coeff_left = u0.eval(-st)?;
    let coeff_right = u0.eval(st)?;
    let errors = window_errors(u0, coeff_left, coeff_right, l, t, n, spec)?;
    let (imax, sup_error) = errors
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |acc, (i, e)| if e > acc.1 { (i, e) } else { acc });
    Ok(ProfileErrorReport {
        t,
        l,
        sup_error,
        argmax_x: grid_nodes(l, n)[imax],
        coeff_left,
        coeff_right,
        errors,
        lemma9: None,
        prop6_rhs_at: None,
    })
}

/// Error against the profile with arbitrary constants `(a, b)`.
pub fn constants_error(
    u0: &InitialDatum,
    a: f64,
    b: f64,
    l: f64,
    t: f64,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_window(l, n)?;
    if !(t > 0.0) {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    Ok(window_errors(u0, a, b, l, t, n, spec)?
        .into_iter()
        .fold(0.0, f64::max))
}

/// `(1/(2 sqrt pi)) int_0^inf rho_L(z) (|u0(-sqrt t z) - a| + |u0(sqrt t z) - b|) dz`,
/// truncated at `z = L + W`.
pub fn lemma9_rhs(
    u0: &InitialDatum,
    a: f64,
    b: f64,
    l: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    envelope_rho(l, 0.0)?;
    if !(t > 0.0) {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    spec.validate()?;
    let st = t.sqrt();
    let rho = |z: f64| {
        let d = (z - l).max(0.0);
        (-0.25 * d * d).exp()
    };
    let total = [(-1.0, a), (1.0, b)]
        .iter()
        .map(|&(side, c)| {
            half_line(
                rho,
                |z| (u0.eval_raw(side * st * z) - c).abs(),
                l + spec.tail_radius,
                0.0,
                1.0,
                &[1.0, l],
                0.5 * spec.abs_tol,
                spec,
                true,
            )
        })
        .fold(Estimate::ZERO, Estimate::combine);
    Ok(GAUSS_NORM * total.value)
}

/// Both sides of the dilation estimate
/// `|u0(s alpha) - u0(s)| <= (alpha + 1/alpha)^2 sup_{annulus} |x u0'(x)|`.
///
/// The annulus supremum is sampled at 10^3 log-spaced radii on both signs,
/// inflated by 1%, and never taken above the datum's analytic one-sided
/// suprema.
pub fn lemma10_check(u0: &InitialDatum, alpha: f64, s: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(format!(
            "dilation factor must be positive, got {alpha}"
        )));
    }
    if s == 0.0 || !s.is_finite() {
        return Err(Error::domain(format!(
            "dilation base point must be non-zero, got {s}"
        )));
    }
    let lhs = (u0.eval(s * alpha)? - u0.eval(s)?).abs();
    let lo = alpha.min(1.0 / alpha) * s.abs();
    let hi = alpha.max(1.0 / alpha) * s.abs();
    let sampled = (0..ANNULUS_SAMPLES)
        .map(|k| {
            let frac = k as f64 / (ANNULUS_SAMPLES - 1) as f64;
            lo * (hi / lo).powf(frac)
        })
        .chain([lo, hi])
        .flat_map(|r| [-r, r])
        .map(|x| (x * u0.deriv_raw(x)).abs())
        .filter(|v| !v.is_nan())
        .fold(0.0, f64::max);
    let cap = u0.sup_left().max(u0.sup_right());
    let sup = (ANNULUS_SAFETY * sampled).min(cap);
    let factor = alpha + 1.0 / alpha;
    Ok((lhs, factor * factor * sup))
}

/// Both sides of the uniform-in-time bound
/// `|u(sqrt t x, t) - profile| <= G(-x) sup_left + G(x) sup_right`.
pub fn prop6_check(u0: &InitialDatum, x: f64, t: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let (left, right) = finite_scale_sups(u0)?;
    let lhs = (scaled_evolve(u0, x, t, spec)? - two_sided_profile(u0, x, t)?).abs();
    let rhs = kernel_g(-x, spec) * left + kernel_g(x, spec) * right;
    Ok((lhs, rhs))
}

/// `(u0(-lambda), u0(+lambda))` along a ladder of dilations.
pub fn accumulation_samples(u0: &InitialDatum, lambdas: &[f64]) -> Result<Vec<(f64, f64)>> {
    lambdas
        .iter()
        .map(|&lam| {
            if !(lam > 0.0) {
                return Err(Error::domain(format!(
                    "dilation must be positive, got {lam}"
                )));
            }
            Ok((u0.eval(-lam)?, u0.eval(lam)?))
        })
        .collect()
}

/// Least-squares coefficients `(alpha, beta)` of `alpha F(-x) + beta F(x)`
/// against samples `values` at nodes `xs`.
pub fn best_fit_profile(xs: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != values.len() || xs.len() < 2 {
        return Err(Error::domain(
            "best fit needs at least two matching samples",
        ));
    }
    let (mut pp, mut pq, mut qq, mut pv, mut qv) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&x, &v) in xs.iter().zip(values) {
        let p = profile_f(-x);
        let q = profile_f(x);
        pp += p * p;
        pq += p * q;
        qq += q * q;
        pv += p * v;
        qv += q * v;
    }
    let det = pp * qq - pq * pq;
    if !(det.abs() > 1e-14 * (pp * qq)) {
        return Err(Error::domain("samples do not separate F(-x) from F(x)"));
    }
    Ok(((qq * pv - pq * qv) / det, (pp * qv - pq * pv) / det))
}

/// Fits the two-parameter profile family to `u(sqrt t x, t)` on `[-L, L]`.
pub fn fitted_profile(
    u0: &InitialDatum,
    l: f64,
    t: f64,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    check_window(l, n)?;
    let xs = grid_nodes(l, n);
    let vals = xs
        .par_iter()
        .map(|&x| scaled_evolve(u0, x, t, spec))
        .collect::<Result<Vec<f64>>>()?;
    best_fit_profile(&xs, &vals)
}
