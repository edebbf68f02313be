//! Pairs (u0(-l), u0(l)) along dilations and the profile fitted to the
//! solution at t = l^2. For log_sine both trace the diagonal of [-1, 1]^2.

use heat_similarity::profile_bounds::{accumulation_samples, fitted_profile};
use heat_similarity::{InitialDatum, QuadratureSpec, Result};

fn main() -> Result<()> {
    let spec = QuadratureSpec::default();
    let u0 = InitialDatum::log_sine();
    let lambdas: Vec<f64> = (0..16)
        .map(|k| (k as f64 * std::f64::consts::PI / 4.0).exp())
        .collect();
    let pairs = accumulation_samples(&u0, &lambdas)?;
    for (lam, (l, r)) in lambdas.iter().zip(pairs) {
        let (a, b) = fitted_profile(&u0, 4.0, lam * lam, 101, &spec)?;
        println!("lambda = {lam:>12.3}: ({l:+.4}, {r:+.4})  fit ({a:+.4}, {b:+.4})");
    }
    Ok(())
}
