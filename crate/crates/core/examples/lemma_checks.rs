//! Envelope bound with arbitrary constants, and the dilation estimate.

use heat_similarity::profile_bounds::{constants_error, lemma10_check, lemma9_rhs};
use heat_similarity::{InitialDatum, QuadratureSpec, Result};

fn main() -> Result<()> {
    let spec = QuadratureSpec::default();
    let u0 = InitialDatum::log_sine();
    for (a, b) in [(0.0, 0.0), (0.5, -0.5)] {
        for t in [1.0, 1e4] {
            let measured = constants_error(&u0, a, b, 4.0, t, 201, &spec)?;
            let rhs = lemma9_rhs(&u0, a, b, 4.0, t, &spec)?;
            println!("(a, b) = ({a}, {b}), t = {t}: {measured:.5} <= {rhs:.5}");
        }
    }
    let e = std::f64::consts::E;
    for alpha in [0.25, 2.0, e] {
        for s in [-1000.0, 1e-3, e] {
            let (lhs, rhs) = lemma10_check(&u0, alpha, s)?;
            println!("alpha = {alpha:.4}, s = {s}: {lhs:.6} <= {rhs:.6}");
        }
    }
    Ok(())
}
