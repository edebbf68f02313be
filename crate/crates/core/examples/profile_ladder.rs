//! Profile error along a time ladder, with the envelope bound alongside.
//!
//! Pass a datum id as the first argument (default `sub_log:1/2`).

use heat_similarity::profile_bounds::profile_error;
use heat_similarity::{InitialDatum, QuadratureSpec, Result};

fn main() -> Result<()> {
    let id = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "sub_log:1/2".into());
    let u0 = InitialDatum::parse(&id)?;
    let spec = QuadratureSpec::default();
    println!("{id}");
    println!(
        "{:>8} {:>12} {:>12} {:>10} {:>10}",
        "t", "sup_error", "bound", "u0(-rt)", "u0(rt)"
    );
    for k in [-8, -4, -2, 2, 4, 8, 12, 16] {
        let t = 10f64.powi(k);
        let mut rep = profile_error(&u0, 4.0, t, 201, &spec)?;
        rep.attach_lemma9(&u0, &spec)?;
        println!(
            "{t:>8.0e} {:>12.4e} {:>12.4e} {:>10.5} {:>10.5}",
            rep.sup_error,
            rep.lemma9.map_or(f64::NAN, |b| b.rhs),
            rep.coeff_left,
            rep.coeff_right
        );
    }
    Ok(())
}
