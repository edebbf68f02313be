//! Residual of the rescaled equation under centred differences; halving
//! the step should divide it by about four.

use heat_similarity::semigroup::rescaled_residual;
use heat_similarity::{InitialDatum, QuadratureSpec, Result};

fn main() -> Result<()> {
    let spec = QuadratureSpec::default();
    let u0 = InitialDatum::step(0.0, 1.0);
    let coarse = rescaled_residual(&u0, 4.0, 0.0, 1e-2, &spec)?;
    let fine = rescaled_residual(&u0, 4.0, 0.0, 5e-3, &spec)?;
    println!("h = 1e-2: {coarse:.4e}");
    println!("h = 5e-3: {fine:.4e}");
    println!("ratio {:.3}", coarse / fine);
    Ok(())
}
