//! Low-degree approximation of a random polynomial in Sobolev norm: with
//! the schedule l_n ~ sqrt((m + 2q + 1) n ln n), the H^q distance to
//! degree-l_n polynomials is below eps_n |x|_q except with frequency at
//! most eta_n.

use kss_spectra::experiments::{approx_experiment, build_schedule};

fn main() {
    let (m, q, n) = (2u32, 0.0f64, 10_000u32);
    let schedule = build_schedule(m, q, n, 0.625, None, None).expect("valid schedule");
    println!(
        "m = {m}, q = {q}, n = {n}: l_n = {}, t_n = {:.2}, eps_n = {:.4}, eta_n = {:.4}",
        schedule.l_n, schedule.t_n, schedule.eps_n, schedule.eta_n
    );

    let report = approx_experiment(&schedule, 10_000, 20260824, 8).expect("run succeeds");
    println!(
        "failure frequency over {} profile samples: {:.5} (allowed eta_n = {:.5})",
        report.parameters["samples"], report.estimate, report.target
    );
    match report.pass {
        Some(ok) => println!("pass: {ok}"),
        None => println!("pre-asymptotic (eps_n >= 1): frequency recorded, no verdict"),
    }
}
