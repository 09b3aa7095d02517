//! Monte Carlo checks of the closed-form sphere integrals: the power
//! moment of a coordinate block and the ratio of two block norms.

use kss_spectra::experiments::{sphere_moment_power, sphere_moment_ratio};

fn main() {
    let (samples, seed) = (100_000usize, 20260824u64);
    println!("power moments E(|x_1|^a) on S^(d-1), d = d1 + d2 + d3:");
    for (d1, d2, d3, a) in [(1u32, 1u32, 1u32, 2.0f64), (2, 3, 0, 1.0), (3, 2, 2, 4.0), (2, 2, 1, -1.0)] {
        let r = sphere_moment_power(d1, d2, d3, a, samples, seed).unwrap();
        println!(
            "  d1={d1} d2={d2} d3={d3} a={a:>4}: {:.5} +- {:.5} vs {:.5}  pass={}",
            r.estimate,
            r.std_error,
            r.target,
            r.passed()
        );
    }

    println!("block-norm ratios E(|x_1|^2/|x_2|^2) = d1/(d2 - 2):");
    for (d1, d2, d3) in [(3u32, 5u32, 0u32), (2, 6, 1)] {
        let r = sphere_moment_ratio(d1, d2, d3, samples, seed).unwrap();
        println!(
            "  d1={d1} d2={d2} d3={d3}: {:.5} +- {:.5} vs {:.5}  pass={}",
            r.estimate,
            r.std_error,
            r.target,
            r.passed()
        );
    }
}
