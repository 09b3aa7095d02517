//! Uniform convergence of the rescaled weights nu-tilde(mu_n t)/nu-bar_n
//! to (t^2 e^{1 - t^2})^{(m-1)/2}, plus the peak asymptotics
//! nu-bar_n ~ A_m / sqrt(n).

use kss_spectra::experiments::scaling_convergence;
use kss_spectra::spectra::{a_const, SpectrumContext};

fn main() {
    let grid: Vec<f64> = (1..=30).map(|i| i as f64 / 10.0).collect();
    for m in [2u32, 3] {
        let r = scaling_convergence(m, &[1_000, 10_000, 100_000], &grid).expect("valid run");
        println!("m = {m}: sup-errors over the t-grid");
        for n in [1_000u32, 10_000, 100_000] {
            println!("  n = {:>6}: {}", n, r.parameters[&format!("sup_error_n{n}")]);
        }
        println!("  pass (monotone, final < 0.02): {}\n", r.passed());
    }

    println!("peak asymptotics at n = 10^6: nu_bar sqrt(n) vs A_m");
    for m in 2..=5u32 {
        let ctx = SpectrumContext::new(m, 1_000_000).unwrap();
        let cp = ctx.critical_point().unwrap();
        let lhs = cp.nu_bar * 1.0e3;
        let a = a_const(m);
        println!(
            "  m = {m}: {:.6} vs {:.6} (relative gap {:.2e})",
            lhs,
            a,
            (lhs - a).abs() / a
        );
    }
}
