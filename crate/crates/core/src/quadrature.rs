//! Adaptive Simpson quadrature with a Richardson error estimate.
//!
//! Every integral in the crate goes through [`adaptive_simpson`]: the
//! interval is cut into top-level panels (at breakpoints and at a maximum
//! panel width), each panel receives an equal share of the absolute
//! tolerance, and panels are bisected until the local estimate
//! `|S(left) + S(right) - S(whole)| / 15` is below the panel's share.

use crate::error::{Error, Result};

/// Default absolute tolerance for every Gaussian convolution.
pub const DEFAULT_ABS_TOL: f64 = 1e-10;
/// Default half-width of the integration window in similarity units.
pub const DEFAULT_TAIL_RADIUS: f64 = 14.0;
pub const DEFAULT_MAX_PANELS: usize = 1 << 22;

const MIN_DEPTH: u32 = 2;
const MAX_DEPTH: u32 = 52;

/// Controls the evaluation of the Gaussian convolution integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    /// Dimensionless absolute error target.
    pub abs_tol: f64,
    /// Half-width `W` of the integration window in similarity units.
    pub tail_radius: f64,
    /// Cap on the number of leaf panels of a single integral.
    pub max_panels: usize,
    /// Interior points where integrands are split in addition to the ones
    /// each operation inserts itself.
    pub singularity_splits: Vec<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: DEFAULT_ABS_TOL,
            tail_radius: DEFAULT_TAIL_RADIUS,
            max_panels: DEFAULT_MAX_PANELS,
            singularity_splits: Vec::new(),
        }
    }
}

impl QuadratureSpec {
    pub fn new(
        abs_tol: f64,
        tail_radius: f64,
        max_panels: usize,
        singularity_splits: Vec<f64>,
    ) -> Result<Self> {
        let spec = Self {
            abs_tol,
            tail_radius,
            max_panels,
            singularity_splits,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Default spec with a different tolerance. The tail radius is widened
    /// if the default no longer covers the tolerance.
    pub fn with_tol(abs_tol: f64) -> Result<Self> {
        let tail = if abs_tol > 0.0 && abs_tol < 1.0 {
            Self::min_tail_radius(abs_tol).max(DEFAULT_TAIL_RADIUS)
        } else {
            DEFAULT_TAIL_RADIUS
        };
        Self::new(abs_tol, tail, DEFAULT_MAX_PANELS, Vec::new())
    }

    /// Smallest window half-width whose discarded Gaussian mass is below `abs_tol`.
    pub fn min_tail_radius(abs_tol: f64) -> f64 {
        2.0 * (1.0 / abs_tol).ln().max(0.0).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::domain(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if !(self.tail_radius >= Self::min_tail_radius(self.abs_tol))
            || !self.tail_radius.is_finite()
        {
            return Err(Error::domain(format!(
                "tail_radius {} below 2*sqrt(ln(1/abs_tol)) = {}",
                self.tail_radius,
                Self::min_tail_radius(self.abs_tol)
            )));
        }
        if self.max_panels < 2 {
            return Err(Error::domain(format!(
                "max_panels must be at least 2, got {}",
                self.max_panels
            )));
        }
        if self.singularity_splits.iter().any(|s| !s.is_finite()) {
            return Err(Error::domain("singularity_splits must be finite"));
        }
        Ok(())
    }

    /// Lower truncation depth in log variables for the substitution
    /// `y = e^s` near a singular point, measured from the scale of the
    /// region being integrated.
    pub fn log_depth(&self) -> f64 {
        (1.0 / self.abs_tol).ln() + self.tail_radius * self.tail_radius / 4.0
    }

    pub(crate) fn sorted_splits(&self) -> Vec<f64> {
        let mut s = self.singularity_splits.clone();
        s.sort_by(f64::total_cmp);
        s.dedup();
        s
    }
}

/// Result of one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Sum of the local Richardson error estimates.
    pub error: f64,
    pub panels: usize,
    /// False when the panel cap or the depth limit stopped refinement.
    pub converged: bool,
}

impl Estimate {
    pub const ZERO: Estimate = Estimate {
        value: 0.0,
        error: 0.0,
        panels: 0,
        converged: true,
    };

    pub fn combine(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value + other.value,
            error: self.error + other.error,
            panels: self.panels + other.panels,
            converged: self.converged && other.converged,
        }
    }
}

/// Top-level panel edges covering `[a, b]`: every breakpoint strictly inside
/// is an edge, and segments wider than `max_width` are cut uniformly.
pub fn panel_edges(a: f64, b: f64, breaks: &[f64], max_width: f64) -> Vec<f64> {
    if !(b > a) {
        return vec![a, a];
    }
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&p| p > a && p < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = vec![a];
    let mut lo = a;
    for hi in cuts.into_iter().chain(std::iter::once(b)) {
        let k = ((hi - lo) / max_width).ceil().max(1.0) as usize;
        for j in 1..k {
            edges.push(lo + (hi - lo) * j as f64 / k as f64);
        }
        edges.push(hi);
        lo = hi;
    }
    edges
}

/// Integrates `f` over consecutive top-level panels `edges[i]..edges[i+1]`.
pub fn adaptive_simpson<F>(f: F, edges: &[f64], tol: f64, max_panels: usize) -> Estimate
where
    F: Fn(f64) -> f64,
{
    let n_top = edges.len().saturating_sub(1);
    if n_top == 0 {
        return Estimate::ZERO;
    }
    let local_tol = tol / n_top as f64;
    let mut state = Budget {
        panels: n_top,
        max_panels: max_panels.max(n_top),
        converged: true,
    };
    let mut value = 0.0;
    let mut error = 0.0;
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            continue;
        }
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a), f(m), f(b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        let (v, e) = refine(&f, a, b, fa, fm, fb, whole, local_tol, 0, &mut state);
        value += v;
        error += e;
    }
    Estimate {
        value,
        error,
        panels: state.panels,
        converged: state.converged,
    }
}

/// Convenience wrapper: integrate `f` over `[a, b]` with extra breakpoints.
pub fn integrate<F>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    max_width: f64,
    tol: f64,
    max_panels: usize,
) -> Estimate
where
    F: Fn(f64) -> f64,
{
    adaptive_simpson(f, &panel_edges(a, b, breaks, max_width), tol, max_panels)
}

struct Budget {
    panels: usize,
    max_panels: usize,
    converged: bool,
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    budget: &mut Budget,
) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    let floor = 8.0 * f64::EPSILON * (left.abs() + right.abs());
    let done = depth >= MIN_DEPTH && delta.abs() <= 15.0 * tol.max(floor);
    if done || !delta.is_finite() {
        return (left + right + delta / 15.0, delta.abs() / 15.0);
    }
    if depth >= MAX_DEPTH || budget.panels >= budget.max_panels || !(lm > a && rm < b) {
        budget.converged = false;
        return (left + right + delta / 15.0, delta.abs() / 15.0);
    }
    budget.panels += 1;
    let (vl, el) = refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, budget);
    let (vr, er) = refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, budget);
    (vl + vr, el + er)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let est = integrate(
            |x| x * x * x - 2.0 * x + 1.0,
            -1.0,
            2.0,
            &[],
            1.0,
            1e-12,
            1000,
        );
        // x^4/4 - x^2 + x from -1 to 2
        let exact = (4.0 - 4.0 + 2.0) - (0.25 - 1.0 - 1.0);
        assert!((est.value - exact).abs() < 1e-13);
        assert!(est.converged);
    }

    #[test]
    fn kink_is_resolved_with_breakpoint() {
        let est = integrate(|x: f64| x.abs(), -1.0, 3.0, &[0.0], 1.0, 1e-12, 1000);
        assert!((est.value - 5.0).abs() < 1e-13);
    }

    #[test]
    fn panel_cap_is_reported() {
        let est = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &[], 1.0, 1e-14, 8);
        assert!(!est.converged);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::default().validate().is_ok());
        assert!(QuadratureSpec::new(0.0, 14.0, 10, vec![]).is_err());
        assert!(QuadratureSpec::new(1e-10, 5.0, 10, vec![]).is_err());
        assert!(QuadratureSpec::new(1e-10, 14.0, 1, vec![]).is_err());
        let tight = QuadratureSpec::with_tol(1e-40).unwrap();
        assert!(tight.tail_radius >= QuadratureSpec::min_tail_radius(1e-40));
    }

    #[test]
    fn edges_include_breaks_and_respect_width() {
        let e = panel_edges(-2.0, 3.0, &[0.5, 7.0, -5.0], 1.0);
        assert_eq!(e.first(), Some(&-2.0));
        assert_eq!(e.last(), Some(&3.0));
        assert!(e.contains(&0.5));
        assert!(e
            .windows(2)
            .all(|w| w[1] > w[0] && w[1] - w[0] <= 1.0 + 1e-12));
    }
}
