//! The heat semigroup `e^{t Laplacian} u0` by Gaussian-convolution quadrature.
//!
//! [`evolve`] works in physical variables. [`scaled_evolve`] returns
//! `u(sqrt(t) x, t)` computed entirely in similarity variables,
//!
//! ```text
//! u(sqrt(t) x, t) = (1/(2 sqrt pi)) int_0^inf e^{-(x+z)^2/4} u0(-sqrt(t) z) dz
//!                 + (1/(2 sqrt pi)) int_0^inf e^{-(x-z)^2/4} u0(+sqrt(t) z) dz,
//! ```
//!
//! so that nothing of size `sqrt(t)` is formed and divided out again.
//! Near the origin each half-line integral is taken in `s = log z`, which
//! turns the infinitely many oscillations of `sin(log|y|)` into a smooth
//! integrand.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::initial_data::InitialDatum;
use crate::kernels::gauss;
use crate::quadrature::{adaptive_simpson, panel_edges, Estimate, QuadratureSpec};

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(format!(
            "time must be positive and finite, got {t}"
        )));
    }
    Ok(())
}

/// `int_0^inf gauss(z - center) g(z) dz` over the window `|z - center| <= W`.
///
/// Lengths are in units of `scale`: direct panels are at most `scale` wide
/// and the log-substituted piece covers `(0, min(scale, upper)]`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn half_line<G>(
    weight: impl Fn(f64) -> f64,
    g: G,
    upper: f64,
    lower: f64,
    scale: f64,
    breaks: &[f64],
    tol: f64,
    spec: &QuadratureSpec,
    log_near_zero: bool,
) -> Estimate
where
    G: Fn(f64) -> f64,
{
    if !(upper > 0.0) {
        return Estimate::ZERO;
    }
    let lower = lower.max(0.0);
    if lower > 0.0 || !log_near_zero {
        let edges = panel_edges(lower, upper, breaks, scale);
        return adaptive_simpson(|z| weight(z) * g(z), &edges, tol, spec.max_panels);
    }
    let knee = scale.min(upper);
    let top = knee.ln();
    let bottom = top - spec.log_depth();
    let log_breaks: Vec<f64> = breaks
        .iter()
        .filter(|&&b| b > 0.0 && b < knee)
        .map(|b| b.ln())
        .collect();
    let near = adaptive_simpson(
        |s| {
            let z = s.exp();
            weight(z) * g(z) * z
        },
        &panel_edges(bottom, top, &log_breaks, 1.0),
        0.5 * tol,
        spec.max_panels,
    );
    if upper > knee {
        let far = adaptive_simpson(
            |z| weight(z) * g(z),
            &panel_edges(knee, upper, breaks, scale),
            0.5 * tol,
            spec.max_panels,
        );
        near.combine(far)
    } else {
        near
    }
}

/// Physical-space breakpoints of the spec mapped to similarity distance on
/// one side of the origin.
fn side_breaks(spec: &QuadratureSpec, side: f64, scale: f64) -> Vec<f64> {
    spec.sorted_splits()
        .into_iter()
        .filter(|p| p * side > 0.0)
        .map(|p| p.abs() / scale)
        .collect()
}

/// `u(x, t) = int K(x - y, t) u0(y) dy` on the window `|y - x| <= W sqrt(t)`,
/// split at the origin.
pub fn evolve(u0: &InitialDatum, x: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_time(t)?;
    spec.validate()?;
    let st = t.sqrt();
    let reach = spec.tail_radius * st;
    let (lo, hi) = (x - reach, x + reach);
    let kernel = |y: f64| gauss((x - y) / st) / st;
    let tol = spec.abs_tol;
    let splits = spec.sorted_splits();

    let total = if lo < 0.0 && hi > 0.0 {
        let log_near_zero = !u0.is_smooth() || u0.oscillates_at_zero();
        [(-1.0, -lo), (1.0, hi)]
            .iter()
            .map(|&(side, extent)| {
                let breaks: Vec<f64> = splits
                    .iter()
                    .filter(|p| *p * side > 0.0)
                    .map(|p| p.abs())
                    .collect();
                half_line(
                    |r| kernel(side * r),
                    |r| u0.eval_raw(side * r),
                    extent,
                    0.0,
                    st,
                    &breaks,
                    0.5 * tol,
                    spec,
                    log_near_zero,
                )
            })
            .fold(Estimate::ZERO, Estimate::combine)
    } else {
        let edges = panel_edges(lo, hi, &splits, st);
        adaptive_simpson(|y| kernel(y) * u0.eval_raw(y), &edges, tol, spec.max_panels)
    };
    Ok(total.value)
}

/// `u(sqrt(t) x, t)` computed in similarity variables.
pub fn scaled_evolve(u0: &InitialDatum, x: f64, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_time(t)?;
    spec.validate()?;
    let st = t.sqrt();
    let w = spec.tail_radius;
    let total = [-1.0, 1.0]
        .iter()
        .map(|&side| {
            let center = side * x;
            half_line(
                |z| gauss(z - center),
                |z| u0.eval_raw(side * st * z),
                center + w,
                center - w,
                1.0,
                &side_breaks(spec, side, st),
                0.5 * spec.abs_tol,
                spec,
                true,
            )
        })
        .fold(Estimate::ZERO, Estimate::combine);
    Ok(total.value)
}

/// Window average `(1/2R) int_{-R}^{R} u0(x + y) dy`.
pub fn sliding_average(u0: &InitialDatum, x: f64, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!(
            "window radius must be positive, got {r}"
        )));
    }
    spec.validate()?;
    let (lo, hi) = (x - r, x + r);
    let tol = spec.abs_tol * 2.0 * r;
    let integral = if lo < 0.0 && hi > 0.0 {
        [(-1.0, -lo), (1.0, hi)]
            .iter()
            .map(|&(side, extent)| {
                // the whole piece in log variables: data vary on log scales
                let top = extent.ln();
                adaptive_simpson(
                    |s| {
                        let v = s.exp();
                        u0.eval_raw(side * v) * v
                    },
                    &panel_edges(top - spec.log_depth(), top, &[], 1.0),
                    0.5 * tol,
                    spec.max_panels,
                )
            })
            .fold(Estimate::ZERO, Estimate::combine)
    } else {
        let edges = panel_edges(lo, hi, &spec.sorted_splits(), (hi - lo) / 64.0);
        adaptive_simpson(|v| u0.eval_raw(v), &edges, tol, spec.max_panels)
    };
    Ok(integral.value / (2.0 * r))
}

/// Nodes at which [`rescaled_residual`] samples the residual.
pub const RESIDUAL_NODES: usize = 41;

/// Sup-norm over interior nodes of the residual of
/// `v_t = v_xx + (x/2) v_x` for `v(x, tau) = u(e^{tau/2} x, e^tau)`, with all
/// derivatives replaced by centred differences of step `h`.
///
/// The convolution tolerance is tightened to `1e-3 h^4` (floored at 1e-15)
/// so quadrature noise divided by `h^2` stays below the truncation error.
pub fn rescaled_residual(
    u0: &InitialDatum,
    x_window: f64,
    tau: f64,
    h: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(x_window > 0.0) || !(h > 0.0) || !(h < x_window) || !tau.is_finite() {
        return Err(Error::domain(format!(
            "degenerate residual grid: x_window = {x_window}, h = {h}, tau = {tau}"
        )));
    }
    let mut tight = spec.clone();
    tight.abs_tol = spec.abs_tol.min(1e-3 * h.powi(4)).max(1e-15);
    tight.tail_radius = tight
        .tail_radius
        .max(QuadratureSpec::min_tail_radius(tight.abs_tol));
    tight.validate()?;
    let v = |x: f64, tau: f64| evolve(u0, (0.5 * tau).exp() * x, tau.exp(), &tight);
    let step = 2.0 * x_window / (RESIDUAL_NODES - 1) as f64;
    let residuals = (1..RESIDUAL_NODES - 1)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let x = -x_window + step * i as f64;
            let c = v(x, tau)?;
            let xp = v(x + h, tau)?;
            let xm = v(x - h, tau)?;
            let tp = v(x, tau + h)?;
            let tm = v(x, tau - h)?;
            let v_t = (tp - tm) / (2.0 * h);
            let v_x = (xp - xm) / (2.0 * h);
            let v_xx = (xp - 2.0 * c + xm) / (h * h);
            Ok((v_t - v_xx - 0.5 * x * v_x).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(residuals.into_iter().fold(0.0, f64::max))
}
