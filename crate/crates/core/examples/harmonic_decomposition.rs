//! Exact harmonic decomposition of a homogeneous polynomial by Laplacian
//! peeling: p = sum_j kappa^{(n-j)/2} h_j with every h_j harmonic,
//! reconstruction and Parseval holding as hard rational equalities.

use kss_spectra::exact::{format_rational, tau_exact, Rational};
use kss_spectra::polyalg::{fischer_inner, harmonic_decompose, to_text, HomPoly};
use num::BigInt;

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

fn main() {
    // p = x0^2 x1 - 2 x1 x2^2 in 3 variables (m = 2, degree 3)
    let p = HomPoly::from_terms(
        2,
        3,
        vec![(vec![2, 1, 0], rat(1, 1)), (vec![0, 1, 2], rat(-2, 1))],
    )
    .unwrap();
    println!("p:\n{}", to_text(&p));

    let comps = harmonic_decompose(&p);
    for (&j, h) in &comps.parts {
        if h.is_zero() {
            continue;
        }
        assert!(h.laplacian().is_zero(), "h_{j} must be harmonic");
        println!("h_{j} (harmonic, exact):\n{}", to_text(h));
        let kss = comps.kss_norm_sq(j).unwrap();
        let l2 = comps.l2_norm_sq(j).unwrap();
        let tau = tau_exact(2, 3, j).unwrap();
        println!(
            "  |kappa^k h_{j}|~^2 = {}, |h_{j}|_L2^2 = {}, ratio = 1/tau_{j} = {}",
            format_rational(&kss),
            format_rational(&l2),
            format_rational(&tau.recip()),
        );
        assert_eq!(l2 / kss, tau);
    }

    assert_eq!(comps.reconstruct(), p, "reconstruction is exact");
    let total = fischer_inner(&p, &p).unwrap();
    let parseval: Rational = comps
        .parts
        .keys()
        .map(|&j| comps.kss_norm_sq(j).unwrap())
        .sum();
    assert_eq!(total, parseval, "KSS Parseval is exact");
    println!(
        "reconstruction exact; Parseval: |p|~^2 = {}",
        format_rational(&total)
    );
}
