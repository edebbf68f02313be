//! For step data the rescaled solution is exactly the profile, at every time.

use heat_similarity::kernels::profile_f;
use heat_similarity::semigroup::scaled_evolve;
use heat_similarity::{InitialDatum, QuadratureSpec, Result};

fn main() -> Result<()> {
    let spec = QuadratureSpec::default();
    let u0 = InitialDatum::step(-1.0, 2.0);
    for t in [0.1, 1.0, 10.0, 1e6] {
        let worst = (0..=80)
            .map(|i| -4.0 + 0.1 * i as f64)
            .map(|x| {
                Ok(
                    (scaled_evolve(&u0, x, t, &spec)? - (-profile_f(-x) + 2.0 * profile_f(x)))
                        .abs(),
                )
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!("t = {t:>8}: max deviation {worst:.3e}");
    }
    Ok(())
}
