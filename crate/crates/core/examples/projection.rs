//! The projection-expectation identity: for u uniform on the KSS unit
//! sphere and the band I = [t_lo, t_hi] in mu_n units,
//! E(|pi u|^2) / E(|u|^2) equals the sum of nu-tilde_j over the band.
//! As n grows the sum converges to the normalized integral of the
//! scaling limit over I.

use kss_spectra::experiments::projection_expectation;

fn main() {
    let (t_lo, t_hi) = (0.5f64, 1.5f64);
    println!("band [{t_lo}, {t_hi}] in mu_n units:");
    for n in [10u32, 100, 10_000] {
        let r = projection_expectation(2, n, t_lo, t_hi, 10_000, 20260824, 8).unwrap();
        println!(
            "  n = {:>5}: estimate {:.5} +- {:.5}, finite-n target {:.5}, limit {:.5}, pass={}",
            n,
            r.estimate,
            r.std_error,
            r.target,
            r.parameters["limit_target"].parse::<f64>().unwrap(),
            r.passed()
        );
    }
}
