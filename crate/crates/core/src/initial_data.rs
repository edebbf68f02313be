//! Catalog of bounded initial values with exact derivatives and the
//! analytic metadata the error bounds consume.
//!
//! Every entry carries `sup |u0|` and the one-sided suprema of the scale
//! derivative `|x u0'(x)|`. Those suprema are derived in closed form, never
//! estimated from samples, so bounds built from them are genuine upper
//! bounds. [`InitialDatum::check_metadata`] re-checks them against dense
//! log-spaced sampling.

use std::f64::consts::E;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{gauss, profile_f};

/// Asymptotic behaviour of the scale derivative `x u0'(x)` at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DecayClass {
    /// `|x u0'(x)| -> 0` as `|x| -> inf`.
    DecaysAtInfinity,
    /// `|x u0'(x)| -> 0` as `|x| -> 0` only.
    DecaysAtZero,
    /// `sup |x u0'(x)| < inf` without a limit.
    BoundedOnly,
    None,
}

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Analytic description of a datum. For custom data it is supplied by the
/// caller and re-checked by sampling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub sup_norm: f64,
    /// Lower and upper bound of the values of the datum.
    pub range: (f64, f64),
    /// `sup_{y<0} |y u0'(y)|`.
    pub sup_left: f64,
    /// `sup_{y>0} |y u0'(y)|`.
    pub sup_right: f64,
    pub decay_class: DecayClass,
    /// `|x u0'(x)| -> 0` as `x -> 0`; the short-time hypothesis.
    pub decays_at_zero: bool,
    /// C^2 with Holder second derivative.
    pub smooth: bool,
    /// Infinitely many oscillations accumulate at the origin.
    pub oscillates_at_zero: bool,
}

#[derive(Clone)]
enum Shape {
    Constant(f64),
    Step { a: f64, b: f64 },
    LogSine,
    SubLog { alpha: f64 },
    SmoothLogSine { alpha: f64 },
    Gaussian { s: f64 },
    SmoothStep { a: f64, b: f64 },
    Custom { eval: ScalarFn, deriv: ScalarFn },
}

#[derive(Clone)]
pub struct InitialDatum {
    id: String,
    shape: Shape,
    meta: Metadata,
}

impl fmt::Debug for InitialDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InitialDatum")
            .field("id", &self.id)
            .field("meta", &self.meta)
            .finish()
    }
}

/// Unique `w > e` with `(1 - alpha)(w - e) = e log w`, the stationary point
/// of `alpha (log w)^(alpha-1) (1 - e/w)`.
fn scale_derivative_peak(alpha: f64) -> f64 {
    let phi = |w: f64| (1.0 - alpha) * (w - E) - E * w.ln();
    let mut lo = E;
    let mut hi = 2.0 * E;
    while phi(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

impl InitialDatum {
    pub fn constant(c: f64) -> Self {
        Self {
            id: format!("constant:{c}"),
            shape: Shape::Constant(c),
            meta: Metadata {
                sup_norm: c.abs(),
                range: (c, c),
                sup_left: 0.0,
                sup_right: 0.0,
                decay_class: DecayClass::DecaysAtInfinity,
                decays_at_zero: true,
                smooth: true,
                oscillates_at_zero: false,
            },
        }
    }

    /// `a` on the negative half-line, `b` on the positive one, `(a+b)/2` at 0.
    pub fn step(a: f64, b: f64) -> Self {
        Self {
            id: format!("step:{a},{b}"),
            shape: Shape::Step { a, b },
            meta: Metadata {
                sup_norm: a.abs().max(b.abs()),
                range: (a.min(b), a.max(b)),
                sup_left: 0.0,
                sup_right: 0.0,
                decay_class: DecayClass::DecaysAtInfinity,
                decays_at_zero: true,
                smooth: false,
                oscillates_at_zero: false,
            },
        }
    }

    /// `sin(log |x|)`: bounded scale derivative `cos(log|x|)` with no limit
    /// at either end.
    pub fn log_sine() -> Self {
        Self {
            id: "log_sine".to_string(),
            shape: Shape::LogSine,
            meta: Metadata {
                sup_norm: 1.0,
                range: (-1.0, 1.0),
                sup_left: 1.0,
                sup_right: 1.0,
                decay_class: DecayClass::BoundedOnly,
                decays_at_zero: false,
                smooth: false,
                oscillates_at_zero: true,
            },
        }
    }

    /// `sin(log(e + |x|)^alpha)` for `0 < alpha < 1`.
    pub fn sub_log(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain(format!(
                "sub_log needs 0 < alpha < 1, got {alpha}"
            )));
        }
        let w = scale_derivative_peak(alpha);
        let sup = alpha * w.ln().powf(alpha - 1.0) * (1.0 - E / w);
        Ok(Self {
            id: format!("sub_log:{alpha}"),
            shape: Shape::SubLog { alpha },
            meta: Metadata {
                sup_norm: 1.0,
                range: (-1.0, 1.0),
                sup_left: sup,
                sup_right: sup,
                decay_class: DecayClass::DecaysAtInfinity,
                decays_at_zero: true,
                smooth: false,
                oscillates_at_zero: false,
            },
        })
    }

    /// `sin((log(e + x^2) / 2)^alpha)` for `0 < alpha <= 1`; smooth on the
    /// whole line.
    pub fn smooth_log_sine(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::domain(format!(
                "smooth_log_sine needs 0 < alpha <= 1, got {alpha}"
            )));
        }
        let (sup, decay) = if alpha < 1.0 {
            let w = scale_derivative_peak(alpha);
            (
                alpha * (0.5 * w.ln()).powf(alpha - 1.0) * (1.0 - E / w),
                DecayClass::DecaysAtInfinity,
            )
        } else {
            // x^2/(e + x^2) -> 1 along the maxima of |cos|
            (1.0, DecayClass::BoundedOnly)
        };
        Ok(Self {
            id: format!("smooth_log_sine:{alpha}"),
            shape: Shape::SmoothLogSine { alpha },
            meta: Metadata {
                sup_norm: 1.0,
                range: (-1.0, 1.0),
                sup_left: sup,
                sup_right: sup,
                decay_class: decay,
                decays_at_zero: true,
                smooth: true,
                oscillates_at_zero: false,
            },
        })
    }

    /// `exp(-x^2 / 4s)`, the heat kernel profile at time `s` (unnormalised).
    pub fn gaussian(s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::domain(format!("gaussian needs s > 0, got {s}")));
        }
        let sup = 2.0 / E;
        Ok(Self {
            id: format!("gaussian:{s}"),
            shape: Shape::Gaussian { s },
            meta: Metadata {
                sup_norm: 1.0,
                range: (0.0, 1.0),
                sup_left: sup,
                sup_right: sup,
                decay_class: DecayClass::DecaysAtInfinity,
                decays_at_zero: true,
                smooth: true,
                oscillates_at_zero: false,
            },
        })
    }

    /// `a F(-x) + b F(x)`: the step evolved for unit time.
    pub fn smooth_step(a: f64, b: f64) -> Self {
        // max of x exp(-x^2/4) / (2 sqrt pi) is at x = sqrt 2
        let sup = (b - a).abs() * std::f64::consts::SQRT_2 * gauss(std::f64::consts::SQRT_2);
        Self {
            id: format!("smooth_step:{a},{b}"),
            shape: Shape::SmoothStep { a, b },
            meta: Metadata {
                sup_norm: a.abs().max(b.abs()),
                range: (a.min(b), a.max(b)),
                sup_left: sup,
                sup_right: sup,
                decay_class: DecayClass::DecaysAtInfinity,
                decays_at_zero: true,
                smooth: true,
                oscillates_at_zero: false,
            },
        }
    }

    /// User datum from an `(eval, deriv, metadata)` triple. The metadata is
    /// trusted but must survive [`InitialDatum::check_metadata`].
    pub fn custom(
        id: impl Into<String>,
        eval: ScalarFn,
        deriv: ScalarFn,
        meta: Metadata,
    ) -> Result<Self> {
        let d = Self {
            id: id.into(),
            shape: Shape::Custom { eval, deriv },
            meta,
        };
        d.check_metadata()?;
        Ok(d)
    }

    /// Parses catalog ids such as `step:0,1`, `log_sine`, `sub_log:0.5`,
    /// `smooth_log_sine:1`, `constant:2`, `gaussian:1`, `smooth_step:0,1`.
    pub fn parse(id: &str) -> Result<Self> {
        let id = id.trim();
        let (name, args) = match id.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a)),
            None => (id, None),
        };
        let nums = |expected: usize| -> Result<Vec<f64>> {
            let raw = args.ok_or_else(|| {
                Error::config(format!("datum '{id}' needs {expected} argument(s)"))
            })?;
            let v = raw
                .split(',')
                .map(|s| parse_number(s.trim()))
                .collect::<Result<Vec<f64>>>()?;
            if v.len() != expected {
                return Err(Error::config(format!(
                    "datum '{id}' needs {expected} argument(s), got {}",
                    v.len()
                )));
            }
            Ok(v)
        };
        match name {
            "constant" => Ok(Self::constant(nums(1)?[0])),
            "step" => {
                let v = nums(2)?;
                Ok(Self::step(v[0], v[1]))
            }
            "log_sine" if args.is_none() => Ok(Self::log_sine()),
            "sub_log" => Self::sub_log(nums(1)?[0]),
            "smooth_log_sine" => Self::smooth_log_sine(nums(1)?[0]),
            "gaussian" => Self::gaussian(nums(1)?[0]),
            "smooth_step" => {
                let v = nums(2)?;
                Ok(Self::smooth_step(v[0], v[1]))
            }
            _ => Err(Error::config(format!("unknown datum id '{id}'"))),
        }
    }

    /// The entries exercised by the default experiment suite.
    pub fn catalog() -> Vec<InitialDatum> {
        vec![
            Self::constant(0.5),
            Self::step(0.0, 1.0),
            Self::log_sine(),
            Self::sub_log(0.5).expect("valid alpha"),
            Self::smooth_log_sine(1.0).expect("valid alpha"),
            Self::smooth_log_sine(0.5).expect("valid alpha"),
            Self::gaussian(1.0).expect("valid s"),
            Self::smooth_step(0.0, 1.0),
        ]
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn metadata(&self) -> &Metadata {
        &self.meta
    }

    pub fn sup_norm(&self) -> f64 {
        self.meta.sup_norm
    }

    pub fn sup_left(&self) -> f64 {
        self.meta.sup_left
    }

    pub fn sup_right(&self) -> f64 {
        self.meta.sup_right
    }

    pub fn decay_class(&self) -> DecayClass {
        self.meta.decay_class
    }

    pub fn decays_at_zero(&self) -> bool {
        self.meta.decays_at_zero
    }

    pub fn is_smooth(&self) -> bool {
        self.meta.smooth
    }

    pub fn oscillates_at_zero(&self) -> bool {
        self.meta.oscillates_at_zero
    }

    /// `u0(x)`; an error where the datum is undefined.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = self.eval_raw(x);
        if v.is_nan() {
            return Err(Error::domain(format!(
                "{} is undefined at x = {x}",
                self.id
            )));
        }
        Ok(v)
    }

    /// `u0'(x)`; an error at the origin for data that are not C^1 there.
    pub fn deriv(&self, x: f64) -> Result<f64> {
        let v = self.deriv_raw(x);
        if v.is_nan() {
            return Err(Error::domain(format!(
                "{}' is undefined at x = {x}",
                self.id
            )));
        }
        Ok(v)
    }

    /// `x u0'(x)`.
    pub fn scale_derivative(&self, x: f64) -> Result<f64> {
        Ok(x * self.deriv(x)?)
    }

    /// Unchecked evaluation; NaN where undefined. Integrators never sample
    /// the undefined points.
    pub fn eval_raw(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Constant(c) => *c,
            Shape::Step { a, b } => {
                if x < 0.0 {
                    *a
                } else if x > 0.0 {
                    *b
                } else {
                    0.5 * (a + b)
                }
            }
            Shape::LogSine => {
                if x == 0.0 {
                    f64::NAN
                } else {
                    x.abs().ln().sin()
                }
            }
            Shape::SubLog { alpha } => (E + x.abs()).ln().powf(*alpha).sin(),
            Shape::SmoothLogSine { alpha } => (0.5 * (E + x * x).ln()).powf(*alpha).sin(),
            Shape::Gaussian { s } => (-x * x / (4.0 * s)).exp(),
            Shape::SmoothStep { a, b } => a * profile_f(-x) + b * profile_f(x),
            Shape::Custom { eval, .. } => eval(x),
        }
    }

    pub fn deriv_raw(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Constant(_) => 0.0,
            Shape::Step { .. } => {
                if x == 0.0 {
                    f64::NAN
                } else {
                    0.0
                }
            }
            Shape::LogSine => {
                if x == 0.0 {
                    f64::NAN
                } else {
                    x.abs().ln().cos() / x
                }
            }
            Shape::SubLog { alpha } => {
                if x == 0.0 {
                    return f64::NAN;
                }
                let l = (E + x.abs()).ln();
                (l.powf(*alpha)).cos() * alpha * l.powf(alpha - 1.0) * x.signum() / (E + x.abs())
            }
            Shape::SmoothLogSine { alpha } => {
                let w = E + x * x;
                let m = 0.5 * w.ln();
                m.powf(*alpha).cos() * alpha * m.powf(alpha - 1.0) * x / w
            }
            Shape::Gaussian { s } => -x / (2.0 * s) * (-x * x / (4.0 * s)).exp(),
            Shape::SmoothStep { a, b } => (b - a) * gauss(x),
            Shape::Custom { deriv, .. } => deriv(x),
        }
    }

    /// Re-checks the metadata against 10^4 log-spaced samples per side over
    /// `1e-8 <= |x| <= 1e8`.
    pub fn check_metadata(&self) -> Result<()> {
        const N: usize = 10_000;
        let slack = |bound: f64| bound * (1.0 + 1e-12) + 1e-15;
        let m = &self.meta;
        for side in [-1.0, 1.0] {
            let sup_side = if side < 0.0 { m.sup_left } else { m.sup_right };
            for k in 0..N {
                let mag = 10f64.powf(-8.0 + 16.0 * k as f64 / (N - 1) as f64);
                let x = side * mag;
                let v = self.eval_raw(x);
                let sd = x * self.deriv_raw(x);
                if !(v.abs() <= slack(m.sup_norm)) {
                    return Err(Error::domain(format!(
                        "{}: |u0({x:e})| = {} exceeds sup_norm {}",
                        self.id,
                        v.abs(),
                        m.sup_norm
                    )));
                }
                if !(v >= m.range.0 - 1e-12 && v <= m.range.1 + 1e-12) {
                    return Err(Error::domain(format!(
                        "{}: u0({x:e}) = {v} outside range",
                        self.id
                    )));
                }
                if !(sd.abs() <= slack(sup_side)) {
                    return Err(Error::domain(format!(
                        "{}: |x u0'(x)| = {} at x = {x:e} exceeds one-sided sup {sup_side}",
                        self.id,
                        sd.abs()
                    )));
                }
            }
            if m.decay_class == DecayClass::DecaysAtInfinity {
                let x = side * 1e8;
                let sd = (x * self.deriv_raw(x)).abs();
                if !(sd < 0.05) {
                    return Err(Error::domain(format!(
                        "{}: claims decay at infinity but |x u0'(x)| = {sd} at x = {x:e}",
                        self.id
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Parses a decimal number or a fraction `p/q`.
pub(crate) fn parse_number(s: &str) -> Result<f64> {
    let bad = || Error::config(format!("'{s}' is not a number"));
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            p / q
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if !v.is_finite() {
        return Err(bad());
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_values() {
        let d = InitialDatum::step(0.0, 1.0);
        assert_eq!(d.eval(-3.0).unwrap(), 0.0);
        assert_eq!(d.eval(7.0).unwrap(), 1.0);
        assert_eq!(d.eval(0.0).unwrap(), 0.5);
        assert_eq!((d.sup_left(), d.sup_right()), (0.0, 0.0));
        assert!(d.deriv(0.0).is_err());
        assert_eq!(d.deriv(2.0).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_step_is_constant() {
        let s = InitialDatum::step(0.3, 0.3);
        let c = InitialDatum::constant(0.3);
        for x in [-5.0, -1e-9, 0.0, 2.0, 1e9] {
            assert_eq!(s.eval(x).unwrap(), c.eval(x).unwrap());
        }
    }

    #[test]
    fn log_sine_values() {
        let d = InitialDatum::log_sine();
        assert!(d.eval(1.0).unwrap().abs() < 1e-16);
        assert!((d.eval(std::f64::consts::FRAC_PI_2.exp()).unwrap() - 1.0).abs() < 1e-15);
        let x = E * E;
        assert!((d.scale_derivative(x).unwrap() - (-0.416_146_836_5)).abs() < 1e-10);
        assert!(d.eval(0.0).is_err());
        assert!(d.deriv(0.0).is_err());
        assert_eq!(d.decay_class(), DecayClass::BoundedOnly);
    }

    #[test]
    fn sub_log_values() {
        let d = InitialDatum::sub_log(0.5).unwrap();
        assert!((d.eval(0.0).unwrap() - 0.841_470_984_8).abs() < 1e-10);
        assert!(d.scale_derivative(1e8).unwrap().abs() <= 0.15);
        assert!(d.scale_derivative(-1e8).unwrap().abs() <= 0.15);
        assert!(d.scale_derivative(1e-8).unwrap().abs() <= 1e-7);
        assert!(InitialDatum::sub_log(1.0).is_err());
        assert!(InitialDatum::sub_log(0.0).is_err());
    }

    #[test]
    fn sub_log_sup_is_attained_envelope() {
        // the closed-form sup is the peak of the cosine-free envelope
        let d = InitialDatum::sub_log(0.5).unwrap();
        let env = |r: f64| 0.5 * (E + r).ln().powf(-0.5) * r / (E + r);
        let sampled = (0..200_000)
            .map(|k| env(10f64.powf(-2.0 + 8.0 * k as f64 / 200_000.0)))
            .fold(0.0, f64::max);
        assert!(d.sup_right() >= sampled);
        assert!(d.sup_right() - sampled < 1e-9);
    }

    #[test]
    fn smooth_log_sine_values() {
        let d = InitialDatum::smooth_log_sine(1.0).unwrap();
        assert!((d.eval(0.0).unwrap() - 0.479_425_538_6).abs() < 1e-10);
        assert_eq!(d.deriv(0.0).unwrap(), 0.0);
        assert_eq!(d.decay_class(), DecayClass::BoundedOnly);
        let h = InitialDatum::smooth_log_sine(0.5).unwrap();
        assert!(h.scale_derivative(1e6).unwrap().abs() <= 0.2);
        assert_eq!(h.decay_class(), DecayClass::DecaysAtInfinity);
        assert!(InitialDatum::smooth_log_sine(1.5).is_err());
    }

    #[test]
    fn catalog_metadata_is_honest() {
        for d in InitialDatum::catalog() {
            d.check_metadata().unwrap_or_else(|e| panic!("{e}"));
        }
    }

    #[test]
    fn scale_derivative_decreases_on_decades() {
        for d in [
            InitialDatum::sub_log(0.5).unwrap(),
            InitialDatum::smooth_log_sine(0.5).unwrap(),
        ] {
            let vals: Vec<f64> = (4..=8)
                .map(|k| d.scale_derivative(10f64.powi(k)).unwrap().abs())
                .collect();
            assert!(
                vals.windows(2).all(|w| w[1] <= w[0]),
                "{}: {vals:?}",
                d.id()
            );
        }
    }

    #[test]
    fn step_is_dilation_invariant() {
        let d = InitialDatum::step(-2.0, 3.0);
        for lambda in [1e-6, 0.5, 3.0, 1e9] {
            for x in [-4.0, -1e-3, 2.0, 1e5] {
                assert_eq!(d.eval(lambda * x).unwrap(), d.eval(x).unwrap());
            }
        }
    }

    #[test]
    fn parse_ids() {
        assert_eq!(InitialDatum::parse("step:0,1").unwrap().id(), "step:0,1");
        assert_eq!(
            InitialDatum::parse("sub_log:1/2").unwrap().id(),
            "sub_log:0.5"
        );
        assert_eq!(
            InitialDatum::parse("smooth_log_sine:1").unwrap().id(),
            "smooth_log_sine:1"
        );
        assert_eq!(InitialDatum::parse("log_sine").unwrap().id(), "log_sine");
        assert!(InitialDatum::parse("log_sine:2").is_err());
        assert!(InitialDatum::parse("step:1").is_err());
        assert!(InitialDatum::parse("nope").is_err());
        assert!(InitialDatum::parse("sub_log:2").is_err());
    }

    #[test]
    fn custom_metadata_is_rechecked() {
        let good = Metadata {
            sup_norm: 1.0,
            range: (-1.0, 1.0),
            sup_left: 1.0,
            sup_right: 1.0,
            decay_class: DecayClass::BoundedOnly,
            decays_at_zero: false,
            smooth: false,
            oscillates_at_zero: true,
        };
        let eval: ScalarFn = Arc::new(|x: f64| x.abs().ln().cos());
        let deriv: ScalarFn = Arc::new(|x: f64| -x.abs().ln().sin() / x);
        assert!(
            InitialDatum::custom("log_cosine", eval.clone(), deriv.clone(), good.clone()).is_ok()
        );
        let lying = Metadata {
            sup_right: 0.5,
            ..good
        };
        assert!(InitialDatum::custom("log_cosine", eval, deriv, lying).is_err());
    }
}
