//! Critical point of the continuous spectral weight nu-tilde(x) and the
//! discrete peak j*, with the localization bound
//! mu_n - (m+1)/2 < x_c < mu_n + 2 checked at large n.

use kss_spectra::spectra::SpectrumContext;

fn main() {
    println!(
        "{:>3} {:>9} {:>12} {:>12} {:>8} {:>12} {:>6}",
        "m", "n", "mu_n", "x_c", "j*", "nu_bar", "bound"
    );
    for m in 2..=5u32 {
        for n in [10_000u32, 100_000, 1_000_000] {
            let ctx = SpectrumContext::new(m, n).expect("valid parameters");
            let cp = ctx.critical_point().expect("concave target");
            let j_star = ctx.discrete_peak().expect("peak exists");
            let ok = cp.mu_n - (m as f64 + 1.0) / 2.0 < cp.x_c && cp.x_c < cp.mu_n + 2.0;
            println!(
                "{:>3} {:>9} {:>12.4} {:>12.4} {:>8} {:>12.5e} {:>6}",
                m, n, cp.mu_n, cp.x_c, j_star, cp.nu_bar, ok
            );
        }
    }
}
