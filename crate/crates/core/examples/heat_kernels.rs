//! Heat kernel, similarity profile F, bound kernel G and the envelope.

use heat_similarity::kernels::{
    envelope_rho, heat_kernel, kernel_g, profile_f, profile_f_quadrature,
};
use heat_similarity::{QuadratureSpec, Result};

fn main() -> Result<()> {
    let spec = QuadratureSpec::default();
    println!(
        "{:>6} {:>22} {:>22} {:>12} {:>12}",
        "z", "F(z)", "F by quadrature", "G(z)", "rho_4(z)"
    );
    for z in [-6.0, -2.0, -0.5, 0.0, 0.5, 2.0, 6.0] {
        println!(
            "{z:>6} {:>22.17} {:>22.17} {:>12.6e} {:>12.6e}",
            profile_f(z),
            profile_f_quadrature(z, &spec),
            kernel_g(z, &spec),
            envelope_rho(4.0, z)?
        );
    }
    for t in [0.01, 1.0, 100.0] {
        println!("K(0, {t}) = {:.12}", heat_kernel(0.0, t)?);
    }
    Ok(())
}
