//! Heat kernel, the similarity profile `F`, the bound kernel `G` and the
//! envelope `rho_L`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_simpson, panel_edges, QuadratureSpec};

/// `1 / (2 sqrt(pi))`, the normalisation of the heat kernel at `t = 1`.
pub const GAUSS_NORM: f64 = 0.282_094_791_773_878_14;

/// Lower cut of the substitution `y = e^s` used for `G` on `(0, 1]`.
pub const G_LOG_CUTOFF: f64 = -40.0;

/// Physical heat kernel `exp(-x^2 / 4t) / (2 sqrt(pi t))`.
pub fn heat_kernel(x: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("heat kernel needs t > 0, got {t}")));
    }
    Ok((-x * x / (4.0 * t)).exp() / (2.0 * (PI * t).sqrt()))
}

/// Gaussian weight of the kernel in similarity form.
#[inline]
pub(crate) fn gauss(w: f64) -> f64 {
    GAUSS_NORM * (-0.25 * w * w).exp()
}

/// Similarity profile `F(z) = (1 + erf(z/2)) / 2`, the cumulative Gaussian
/// with variance 2. The complementary branch keeps full relative accuracy in
/// the far left tail.
pub fn profile_f(z: f64) -> f64 {
    if z < 0.0 {
        0.5 * libm::erfc(-0.5 * z)
    } else {
        0.5 * (1.0 + libm::erf(0.5 * z))
    }
}

/// `F(z)` by adaptive quadrature of the Gaussian density on `[-W, z]`.
pub fn profile_f_quadrature(z: f64, spec: &QuadratureSpec) -> f64 {
    let w = spec.tail_radius;
    let lo = (-w).min(z - w);
    let edges = panel_edges(lo, z, &spec.sorted_splits(), 1.0);
    adaptive_simpson(gauss, &edges, spec.abs_tol, spec.max_panels).value
}

/// Bound kernel `G(z) = (1/(2 sqrt pi)) * int_0^inf exp(-(z-y)^2/4) |log y| dy`.
///
/// The part over `(0, 1]` is taken in the variable `s = log y`, which removes
/// the logarithmic singularity, and is cut at `s = -40`. The part over
/// `[1, inf)` is integrated directly on the window around `z`.
pub fn kernel_g(z: f64, spec: &QuadratureSpec) -> f64 {
    let w = spec.tail_radius;
    let splits = spec.sorted_splits();
    let tol = 0.5 * spec.abs_tol;

    let inner = |s: f64| {
        let y = s.exp();
        gauss(z - y) * (-s) * y
    };
    let log_breaks: Vec<f64> = splits
        .iter()
        .filter(|&&p| p > 0.0 && p < 1.0)
        .map(|p| p.ln())
        .collect();
    let near = adaptive_simpson(
        inner,
        &panel_edges(G_LOG_CUTOFF, 0.0, &log_breaks, 1.0),
        tol,
        spec.max_panels,
    );

    let lo = 1.0f64.max(z - w);
    let hi = 1.0f64.max(z + w);
    let far = if hi > lo {
        let outer = |y: f64| gauss(z - y) * y.ln();
        adaptive_simpson(
            outer,
            &panel_edges(lo, hi, &splits, 1.0),
            tol,
            spec.max_panels,
        )
    } else {
        crate::quadrature::Estimate::ZERO
    };
    near.value + far.value
}

/// Envelope `rho_L(z) = sup_{|z0| <= L} exp(-(z - z0)^2 / 4)`.
pub fn envelope_rho(l: f64, z: f64) -> Result<f64> {
    if !(l > 0.0) {
        return Err(Error::domain(format!("envelope needs L > 0, got {l}")));
    }
    let d = (z.abs() - l).max(0.0);
    Ok((-0.25 * d * d).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heat_kernel_values() {
        assert!((heat_kernel(0.0, 1.0).unwrap() - 0.282_094_791_8).abs() < 1e-10);
        assert!((heat_kernel(2.0, 1.0).unwrap() - 0.103_776_874_4).abs() < 1e-10);
        assert!(heat_kernel(1.0, 0.0).is_err());
        assert!(heat_kernel(1.0, -2.0).is_err());
    }

    #[test]
    fn heat_kernel_has_unit_mass() {
        let spec = QuadratureSpec::default();
        for t in [0.01, 1.0, 100.0] {
            let w = spec.tail_radius * f64::sqrt(t);
            let edges = panel_edges(-w, w, &[], f64::sqrt(t));
            let mass = adaptive_simpson(
                |x| heat_kernel(x, t).unwrap(),
                &edges,
                spec.abs_tol,
                spec.max_panels,
            );
            assert!(
                (mass.value - 1.0).abs() < spec.abs_tol,
                "t={t}: {}",
                mass.value
            );
        }
    }

    #[test]
    fn profile_f_values() {
        assert_eq!(profile_f(0.0), 0.5);
        assert!((profile_f(2.0) - 0.921_350_396_4).abs() < 1e-10);
        for z in [0.5, 1.0, 3.0] {
            assert!((profile_f(z) + profile_f(-z) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn profile_f_routes_agree() {
        let spec = QuadratureSpec::with_tol(1e-13).unwrap();
        for z in [-7.5, -2.0, 0.0, 0.3, 2.0, 7.9] {
            let d = (profile_f(z) - profile_f_quadrature(z, &spec)).abs();
            assert!(d < 1e-12, "z={z}: {d:e}");
        }
    }

    #[test]
    fn envelope_values() {
        assert_eq!(envelope_rho(1.0, 0.5).unwrap(), 1.0);
        assert!((envelope_rho(1.0, 3.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!((envelope_rho(2.0, -5.0).unwrap() - (-2.25f64).exp()).abs() < 1e-15);
        assert!(envelope_rho(0.0, 1.0).is_err());
    }

    #[test]
    fn g_is_split_invariant() {
        let a = QuadratureSpec {
            singularity_splits: vec![0.5, 2.0, 0.1],
            ..QuadratureSpec::default()
        };
        let b = QuadratureSpec {
            singularity_splits: vec![2.0, 0.1, 0.5],
            ..QuadratureSpec::default()
        };
        let plain = QuadratureSpec::default();
        for z in [-3.0, 0.0, 1.5] {
            let ga = kernel_g(z, &a);
            assert_eq!(ga, kernel_g(z, &b));
            assert!((ga - kernel_g(z, &plain)).abs() < plain.abs_tol);
        }
    }

    #[test]
    fn g_far_left_is_small() {
        let spec = QuadratureSpec::default();
        let g0 = kernel_g(0.0, &spec);
        let gm = kernel_g(-10.0, &spec);
        assert!(gm >= 0.0 && gm < g0 + 0.1);
        assert!(gm < 1e-9);
    }
}
