//! The G-kernel bound on the profile error holds uniformly in time.

use heat_similarity::profile_bounds::prop6_check;
use heat_similarity::{InitialDatum, QuadratureSpec, Result};

fn main() -> Result<()> {
    let spec = QuadratureSpec::default();
    let u0 = InitialDatum::log_sine();
    for t in [1e-4, 1.0, 1e4, 1e8] {
        for x in [-3.0, -1.0, 0.0, 1.0, 3.0] {
            let (lhs, rhs) = prop6_check(&u0, x, t, &spec)?;
            println!("t = {t:>6.0e} x = {x:>4}: {lhs:.4e} <= {rhs:.4e}");
        }
    }
    Ok(())
}
