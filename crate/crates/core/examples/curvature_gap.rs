//! Distance between the curvature flow and the heat equation, scaled by
//! sqrt(t). Arguments: half-width and dx (defaults 100 and 0.2; the
//! acceptance run uses 400 and 0.1).

use heat_similarity::curvature_flow::{nara_taniguchi_gap, FdSolverConfig};
use heat_similarity::{InitialDatum, QuadratureSpec, Result};

fn main() -> Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<f64>().expect("number"));
    let x = args.next().unwrap_or(100.0);
    let dx = args.next().unwrap_or(0.2);
    let cfg = FdSolverConfig::new(x, dx, 100.0, vec![1.0, 3.0, 10.0, 30.0, 100.0]);
    let u0 = InitialDatum::smooth_log_sine(1.0)?;
    for (t, gap) in nara_taniguchi_gap(&u0, &cfg, &QuadratureSpec::default())? {
        println!("t = {t:>5}: gap = {gap:.4e}");
    }
    Ok(())
}
