//! Window averages over growing radii. They settle for sub_log data and keep
//! oscillating for log_sine.

use heat_similarity::semigroup::sliding_average;
use heat_similarity::{InitialDatum, QuadratureSpec, Result};

fn main() -> Result<()> {
    let spec = QuadratureSpec::default();
    for u0 in [
        InitialDatum::log_sine(),
        InitialDatum::sub_log(0.5)?,
        InitialDatum::step(0.0, 1.0),
    ] {
        println!("{}", u0.id());
        for k in 0..=8 {
            let r = 10f64.powi(k);
            println!("  R = 1e{k}: {:+.6}", sliding_average(&u0, 0.0, r, &spec)?);
        }
    }
    Ok(())
}
