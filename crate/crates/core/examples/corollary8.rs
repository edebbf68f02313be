//! Profile error of the curvature flow read off the finite-difference grid.

use heat_similarity::curvature_flow::{corollary8_error, FdSolverConfig};
use heat_similarity::{InitialDatum, Result};

fn main() -> Result<()> {
    let u0 = InitialDatum::smooth_log_sine(0.5)?;
    let ladder = [4.0, 16.0, 64.0, 256.0];
    let cfg = FdSolverConfig::new(260.0, 0.2, 256.0, ladder.to_vec());
    for (t, e) in corollary8_error(&u0, &cfg, 4.0, &ladder, 201)? {
        println!("t = {t:>4}: sup error {e:.4e}");
    }
    Ok(())
}
