//! Slow, fixed-rule reference integrals.
//!
//! These use composite trapezoid (or midpoint) rules with a million panels
//! and share no code with the adaptive path in [`crate::quadrature`]. They
//! mint the frozen values the tests compare against and back the `oracle`
//! command of the CLI.

use crate::initial_data::InitialDatum;
use crate::kernels::{envelope_rho, gauss};

pub const ORACLE_PANELS: usize = 1_000_000;
const WINDOW: f64 = 14.0;
const LOG_CUT: f64 = -40.0;

pub fn trapezoid<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let h = (b - a) / n as f64;
    let mut sum = 0.5 * (f(a) + f(b));
    for i in 1..n {
        sum += f(a + h * i as f64);
    }
    sum * h
}

pub fn midpoint<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let h = (b - a) / n as f64;
    (0..n).map(|i| f(a + h * (i as f64 + 0.5))).sum::<f64>() * h
}

/// `int_0^upper g(z) dz`, with `z = e^s` on `(0, min(1, upper)]`.
fn half_line<G: Fn(f64) -> f64>(g: G, upper: f64, n: usize) -> f64 {
    if !(upper > 0.0) {
        return 0.0;
    }
    let knee = upper.min(1.0);
    let near = trapezoid(
        |s| {
            let z = s.exp();
            g(z) * z
        },
        LOG_CUT,
        knee.ln(),
        n,
    );
    near + trapezoid(&g, knee, upper, n)
}

/// `(1 + erf(z/2)) / 2` by the trapezoid rule on `[-14, z]`.
pub fn profile_f(z: f64) -> f64 {
    trapezoid(gauss, (-WINDOW).min(z - WINDOW), z, ORACLE_PANELS)
}

pub fn kernel_g(z: f64) -> f64 {
    let near = trapezoid(
        |s| {
            let y = s.exp();
            gauss(z - y) * (-s) * y
        },
        LOG_CUT,
        0.0,
        ORACLE_PANELS,
    );
    let lo = 1.0f64.max(z - WINDOW);
    let hi = 1.0f64.max(z + WINDOW);
    near + trapezoid(|y| gauss(z - y) * y.ln(), lo, hi, ORACLE_PANELS)
}

/// Total mass of the heat kernel at time `t` over `|x| <= 14 sqrt(t)`.
pub fn heat_mass(t: f64) -> f64 {
    let w = WINDOW * t.sqrt();
    trapezoid(
        |x| (-x * x / (4.0 * t)).exp() / (2.0 * (std::f64::consts::PI * t).sqrt()),
        -w,
        w,
        ORACLE_PANELS,
    )
}

/// `u(sqrt(t) x, t)` in similarity variables, split at the origin.
pub fn scaled_evolve(u0: &InitialDatum, x: f64, t: f64) -> f64 {
    let st = t.sqrt();
    [-1.0, 1.0]
        .iter()
        .map(|&side| {
            let center = side * x;
            half_line(
                |z| gauss(z - center) * u0.eval_raw(side * st * z),
                center + WINDOW,
                ORACLE_PANELS,
            )
        })
        .sum()
}

/// Right-hand side of the envelope bound for constants `(a, b)`.
pub fn lemma9_rhs(u0: &InitialDatum, a: f64, b: f64, l: f64, t: f64) -> f64 {
    let st = t.sqrt();
    let g = |z: f64| {
        let rho = envelope_rho(l, z).unwrap_or(0.0);
        rho * ((u0.eval_raw(-st * z) - a).abs() + (u0.eval_raw(st * z) - b).abs())
    };
    // kinks at z = 1 and z = L
    let knees = [1.0f64.min(l), 1.0f64.max(l)];
    let mut total = half_line(g, knees[0], ORACLE_PANELS);
    total += trapezoid(g, knees[0], knees[1], ORACLE_PANELS);
    total += trapezoid(g, knees[1], l + WINDOW, ORACLE_PANELS);
    crate::kernels::GAUSS_NORM * total
}

/// Window average `(1/2R) int_{-R}^{R} u0(x + y) dy` by the midpoint rule.
pub fn sliding_average(u0: &InitialDatum, x: f64, r: f64) -> f64 {
    midpoint(|y| u0.eval_raw(x + y), -r, r, ORACLE_PANELS) / (2.0 * r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_are_exact_on_lines() {
        assert!((trapezoid(|x| 2.0 * x + 1.0, 0.0, 3.0, 7) - 12.0).abs() < 1e-12);
        assert!((midpoint(|x| 2.0 * x + 1.0, 0.0, 3.0, 7) - 12.0).abs() < 1e-12);
    }

    #[test]
    fn f_oracle_matches_closed_form() {
        assert!((profile_f(2.0) - 0.921_350_396_4).abs() < 1e-10);
        assert!((profile_f(0.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn heat_mass_is_one() {
        assert!((heat_mass(1.0) - 1.0).abs() < 1e-10);
    }
}
