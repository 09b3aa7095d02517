//! Exact coefficient table for a small case: per-component dimensions,
//! tau_j, nu-tilde_j, and the identities they satisfy.

use kss_spectra::exact::{format_rational, ExactCoefficientTable};

fn main() {
    for (m, n) in [(2u32, 3u32), (2, 4), (3, 6)] {
        let t = ExactCoefficientTable::build(m, n).expect("valid parameters");
        println!("m = {m}, n = {n} (identities verified exactly during build)");
        println!("{:>4} {:>8} {:>12} {:>12} {:>8}", "j", "dim H_j", "tau_j", "nu~_j", "s_j^2");
        for r in &t.rows {
            println!(
                "{:>4} {:>8} {:>12} {:>12} {:>8}",
                r.j,
                r.dim_h,
                format_rational(&r.tau_j),
                format_rational(&r.nu_tilde_j),
                format_rational(&r.s_j_sq),
            );
        }
        println!(
            "  c^2 = {}, s^2_L2 = {}, s~^2 = {}\n",
            t.c_sq(),
            format_rational(&t.s_sq_l2()),
            format_rational(&t.s_sq_kss()),
        );
    }
}
