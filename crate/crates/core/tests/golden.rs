//! Reference values minted once with the slow trapezoid oracles and frozen.
//! The library's adaptive routes must reproduce them.

#![allow(clippy::excessive_precision)]

use heat_similarity::kernels::{kernel_g, profile_f};
use heat_similarity::profile_bounds::lemma9_rhs;
use heat_similarity::semigroup::{scaled_evolve, sliding_average};
use heat_similarity::{InitialDatum, QuadratureSpec};

const TOL: f64 = 1e-8;

fn close(got: f64, want: f64, what: &str) {
    assert!(
        (got - want).abs() <= TOL,
        "{what}: got {got:.17e}, frozen {want:.17e}"
    );
}

#[test]
fn kernel_g_values() {
    let spec = QuadratureSpec::default();
    for (z, want) in [
        (-1.0, 2.25498211187781683e-1),
        (0.0, 4.04890083660239819e-1),
        (0.5, 4.93914613815406189e-1),
        (2.0, 7.89291498134834235e-1),
        (5.0, 1.56483375818324233e0),
    ] {
        close(kernel_g(z, &spec), want, &format!("G({z})"));
    }
}

#[test]
fn profile_values() {
    for (z, want) in [
        (-2.0, 7.86496035268379745e-2),
        (0.3, 5.83997985712988665e-1),
        (1.7, 8.85334028801773920e-1),
    ] {
        close(profile_f(z), want, &format!("F({z})"));
    }
}

#[test]
fn scaled_solutions() {
    let spec = QuadratureSpec::default();
    let sub = InitialDatum::sub_log(0.5).unwrap();
    for (x, t, want) in [
        (0.0, 1e2, 9.76668032134182962e-1),
        (1.5, 1e4, 7.92116235551701853e-1),
        (-2.0, 1e-4, 8.43533875602778815e-1),
    ] {
        close(
            scaled_evolve(&sub, x, t, &spec).unwrap(),
            want,
            &format!("sub_log at ({x}, {t})"),
        );
    }
    let ls = InitialDatum::log_sine();
    for (x, t, want) in [
        (0.7, 1.0, 3.78965850681303937e-2),
        (-1.0, 1e6, 4.58518740215941079e-1),
    ] {
        close(
            scaled_evolve(&ls, x, t, &spec).unwrap(),
            want,
            &format!("log_sine at ({x}, {t})"),
        );
    }
}

#[test]
fn window_averages() {
    let spec = QuadratureSpec::default();
    let sub = InitialDatum::sub_log(0.5).unwrap();
    close(
        sliding_average(&sub, 0.0, 10.0, &spec).unwrap(),
        9.72087594150407908e-1,
        "R = 10",
    );
    close(
        sliding_average(&sub, 0.0, 1e3, &spec).unwrap(),
        6.39556045520686900e-1,
        "R = 1e3",
    );
}

#[test]
fn envelope_bound_value() {
    let spec = QuadratureSpec::default();
    let got = lemma9_rhs(&InitialDatum::log_sine(), 0.0, 0.0, 4.0, 1.0, &spec).unwrap();
    close(
        got,
        2.47823099843647876e0,
        "envelope bound, log_sine, zero constants",
    );
}

#[test]
fn suite_profile_csv_is_stable() {
    // First rows of the default sub_log ladder, frozen from a reference run.
    use heat_similarity::experiments::{run, ExperimentConfig};
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::parse(
        "kind = profile-error\ndatum = sub_log:1/2\nt_ladder = 1e-2, 1e2, 1e4\n",
    )
    .unwrap();
    cfg.out_dir = dir.path().to_path_buf();
    let out = run(&cfg).unwrap();
    let errs = out.table.column("sup_error");
    for (got, want) in errs.iter().zip([
        0.02395628454294685,
        0.06493897543098592,
        0.18667729672369193,
    ]) {
        assert!((got - want).abs() <= TOL, "{got} vs {want}");
    }
}
