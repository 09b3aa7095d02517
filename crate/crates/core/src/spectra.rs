//! Log-domain floating-point engine for the spectral weights.
//!
//! The continuous extension nu-tilde(x) = n! tau(x) c^2(x) is handled
//! entirely through ln-gamma so that degrees up to 10^6 stay in range.
//! The product-form ratio rho_n is evaluated directly, never as a
//! difference of logs, since the section-4 arguments manipulate exactly
//! that expression near rho = 1.

use statrs::function::gamma::{digamma, ln_gamma};

use crate::error::{Error, Result};
use crate::exact::index_set;

/// Fixed (m, n) context with the log-domain constants precomputed.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumContext {
    pub m: u32,
    pub n: u32,
    /// ln K_n = -n ln 2 + ln Gamma((m+1)/2)
    pub ln_k_n: f64,
    /// ln n!
    pub ln_n_fact: f64,
}

/// Which invariant inner product a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    L2,
    Kss,
}

/// Output of the concave maximization of ln nu-tilde on (0, n).
#[derive(Debug, Clone, Copy)]
pub struct CriticalPointResult {
    pub x_c: f64,
    /// nu-bar_n = nu-tilde(x_c)
    pub nu_bar: f64,
    /// mu_n = sqrt((m-1) n)
    pub mu_n: f64,
    /// final bisection bracket containing x_c
    pub bracket: (f64, f64),
}

impl SpectrumContext {
    pub fn new(m: u32, n: u32) -> Result<Self> {
        if m < 2 || n <= m {
            return Err(Error::InvalidParams { m, n });
        }
        let mf = m as f64;
        let nf = n as f64;
        Ok(SpectrumContext {
            m,
            n,
            ln_k_n: -nf * std::f64::consts::LN_2 + ln_gamma((mf + 1.0) / 2.0),
            ln_n_fact: ln_gamma(nf + 1.0),
        })
    }

    fn check_open_interval(&self, x: f64, hi: f64) -> Result<()> {
        if x > 0.0 && x < hi {
            Ok(())
        } else {
            Err(Error::Domain { x, lo: 0.0, hi })
        }
    }

    /// ln tau(x) on (0, n).
    pub fn log_tau(&self, x: f64) -> Result<f64> {
        self.check_open_interval(x, self.n as f64)?;
        let (mf, nf) = (self.m as f64, self.n as f64);
        Ok(self.ln_k_n - ln_gamma((nf - x + 2.0) / 2.0) - ln_gamma((mf + nf + x + 1.0) / 2.0))
    }

    /// ln c^2(x): the degree-(m-1) polynomial extension of dim H_j.
    fn log_c_sq(&self, x: f64) -> f64 {
        let mf = self.m as f64;
        ln_gamma(mf + x - 1.0) - ln_gamma(mf) - ln_gamma(x + 1.0) + (mf + 2.0 * x - 1.0).ln()
    }

    /// ln nu-tilde(x) = ln n! + ln tau(x) + ln c^2(x) on (0, n).
    pub fn log_nu_tilde(&self, x: f64) -> Result<f64> {
        Ok(self.ln_n_fact + self.log_tau(x)? + self.log_c_sq(x))
    }

    /// d/dx ln nu-tilde(x); digamma-based, used by the bisection solver.
    fn dlog_nu_tilde(&self, x: f64) -> f64 {
        let (mf, nf) = (self.m as f64, self.n as f64);
        let dtau = 0.5 * digamma((nf - x + 2.0) / 2.0) - 0.5 * digamma((mf + nf + x + 1.0) / 2.0);
        let dcsq = digamma(mf + x - 1.0) - digamma(x + 1.0) + 2.0 / (mf + 2.0 * x - 1.0);
        dtau + dcsq
    }

    /// rho_n(x) = nu-tilde(x+2)/nu-tilde(x), evaluated by the product form
    /// on (0, n-2).
    pub fn rho(&self, x: f64) -> Result<f64> {
        self.check_open_interval(x, self.n as f64 - 2.0)?;
        let (mf, nf) = (self.m as f64, self.n as f64);
        Ok((1.0 + (mf - 2.0) / (x + 1.0))
            * (1.0 + (mf - 2.0) / (x + 2.0))
            * (1.0 + 2.0 / (x + (mf - 1.0) / 2.0))
            * (nf - x)
            / (nf + x + mf + 1.0))
    }

    /// Unique maximizer of ln nu-tilde on (0, n), by bisection on the
    /// digamma derivative.  Strict concavity makes this unconditionally
    /// convergent.
    pub fn critical_point(&self) -> Result<CriticalPointResult> {
        let nf = self.n as f64;
        let mut lo = (1e-6 * nf).max(0.1);
        let mut hi = nf - 0.1;
        let d_lo = self.dlog_nu_tilde(lo);
        let d_hi = self.dlog_nu_tilde(hi);
        if !(d_lo > 0.0 && d_hi < 0.0) {
            return Err(Error::SolverFailure(format!(
                "derivative not bracketing a maximum: d({lo})={d_lo}, d({hi})={d_hi}"
            )));
        }
        let tol = 1e-10 * nf;
        for _ in 0..200 {
            if hi - lo <= tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.dlog_nu_tilde(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if hi - lo > tol {
            return Err(Error::SolverFailure("bisection stalled".into()));
        }
        let x_c = 0.5 * (lo + hi);
        Ok(CriticalPointResult {
            x_c,
            nu_bar: self.log_nu_tilde(x_c)?.exp(),
            mu_n: mu(self.m, self.n),
            bracket: (lo, hi),
        })
    }

    /// argmax of nu-tilde_j over the discrete index set J_n
    /// (smallest j on exact ties).  By log-concavity the maximizer is one
    /// of the two parity-matched grid points around x_c.
    pub fn discrete_peak(&self) -> Result<u32> {
        let x_c = self.critical_point()?.x_c;
        let parity = self.n % 2;
        // largest j in J_n with j <= x_c, clamped into J_n
        let below = x_c.floor() as i64;
        let mut j0 = below - ((below - parity as i64).rem_euclid(2));
        let j_min = parity as i64;
        if j0 < j_min {
            j0 = j_min;
        }
        let candidates = [j0, j0 + 2];
        let mut best: Option<(u32, f64)> = None;
        for &j in &candidates {
            if j < j_min || j > self.n as i64 {
                continue;
            }
            let ju = j as u32;
            let v = self.nu_tilde_at(ju)?;
            match best {
                Some((_, bv)) if v <= bv => {}
                _ => best = Some((ju, v)),
            }
        }
        Ok(best.expect("candidate set is non-empty").0)
    }

    /// nu-tilde at an integer j in J_n (with exact endpoint handling:
    /// j = 0 and j = n are fine because the gamma arguments stay positive).
    pub fn nu_tilde_at(&self, j: u32) -> Result<f64> {
        Ok(self.log_nu_tilde_at(j)?.exp())
    }

    /// ln nu-tilde at an integer j in J_n, endpoints included.
    fn log_nu_tilde_at(&self, j: u32) -> Result<f64> {
        if !crate::exact::in_index_set(self.n, j) {
            return Err(Error::ParityViolation { n: self.n, j });
        }
        let (mf, nf) = (self.m as f64, self.n as f64);
        let x = j as f64;
        let log_tau =
            self.ln_k_n - ln_gamma((nf - x + 2.0) / 2.0) - ln_gamma((mf + nf + x + 1.0) / 2.0);
        Ok(self.ln_n_fact + log_tau + self.log_c_sq(x))
    }

    /// All (j, nu-tilde_j) over J_n.
    pub fn nu_tilde_all(&self) -> Vec<(u32, f64)> {
        index_set(self.n)
            .into_iter()
            .map(|j| (j, self.nu_tilde_at(j).expect("j in J_n")))
            .collect()
    }

    /// Sum of nu-tilde_j for j > l, accumulated in descending magnitude
    /// with compensation; the weights span hundreds of orders of magnitude
    /// at large n.
    pub fn tail_mass(&self, l: u32) -> f64 {
        let mut terms: Vec<f64> = index_set(self.n)
            .into_iter()
            .filter(|&j| j > l)
            .map(|j| self.nu_tilde_at(j).expect("j in J_n"))
            .collect();
        terms.sort_by(|a, b| b.partial_cmp(a).unwrap());
        kahan_sum(&terms)
    }

    /// Log-domain left and right sides of the tail estimate
    /// nu(j+2)/nu(j_n+2) < (j/j_n)^{m-1} e^{(j_n^2 - j^2)/(2n)},
    /// where j_n = min { j in J_n : j > mu_n }.  Callers assert lhs < rhs.
    /// Both sides underflow f64 deep in the tail, hence the logs.
    pub fn nu_upper_bound_check(&self, j: u32) -> Result<(f64, f64)> {
        if !crate::exact::in_index_set(self.n, j) {
            return Err(Error::ParityViolation { n: self.n, j });
        }
        let j_n = self.j_n();
        if j <= j_n {
            return Err(Error::Domain {
                x: j as f64,
                lo: j_n as f64,
                hi: self.n as f64,
            });
        }
        let lhs = self.log_nu_tilde_at(j + 2)? - self.log_nu_tilde_at(j_n + 2)?;
        let (jf, jnf, nf) = (j as f64, j_n as f64, self.n as f64);
        let rhs =
            (self.m as f64 - 1.0) * (jf / jnf).ln() + (jnf * jnf - jf * jf) / (2.0 * nf);
        Ok((lhs, rhs))
    }

    /// j_n = min { j in J_n : j > mu_n }.
    pub fn j_n(&self) -> u32 {
        let mu = mu(self.m, self.n);
        let parity = self.n % 2;
        let mut j = mu.floor() as u32 + 1;
        if (j % 2) != parity {
            j += 1;
        }
        j
    }

    /// ln of alpha(x) = x^{2q} tau(x); kept in the log domain because tau
    /// underflows f64 already for moderate n.
    pub fn log_alpha_weight(&self, q: f64, x: f64) -> Result<f64> {
        Ok(2.0 * q * x.ln() + self.log_tau(x)?)
    }
}

/// mu_n = sqrt((m-1) n).
pub fn mu(m: u32, n: u32) -> f64 {
    (((m - 1) as f64) * n as f64).sqrt()
}

/// The scaling limit (t^2 e^{1-t^2})^{(m-1)/2} of nu-tilde(mu_n t)/nu-bar_n.
pub fn scaling_limit(m: u32, t: f64) -> f64 {
    (t * t * (1.0 - t * t).exp()).powf((m as f64 - 1.0) / 2.0)
}

/// A_m = 2 sqrt(2) / Gamma(m/2) * ((m-1)/(2e))^{(m-1)/2}, the limit of
/// nu-bar_n sqrt(n).
pub fn a_const(m: u32) -> f64 {
    let mf = m as f64;
    2.0 * std::f64::consts::SQRT_2 / ln_gamma(mf / 2.0).exp()
        * ((mf - 1.0) / (2.0 * std::f64::consts::E)).powf((mf - 1.0) / 2.0)
}

/// s^2 for the chosen norm: n (m + n + 1)/(m + 2) for L2, n for KSS.
pub fn s_sq(m: u32, n: u32, norm: NormKind) -> f64 {
    match norm {
        NormKind::L2 => n as f64 * (m + n + 1) as f64 / (m + 2) as f64,
        NormKind::Kss => n as f64,
    }
}

/// Compensated (Kahan) summation.
pub fn kahan_sum(terms: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for &t in terms {
        let y = t - c;
        let s = sum + y;
        c = (s - sum) - y;
        sum = s;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;
    use approx::assert_relative_eq;

    #[test]
    fn log_tau_matches_exact() {
        let ctx = SpectrumContext::new(2, 3).unwrap();
        assert_relative_eq!(
            ctx.log_tau(1.0).unwrap(),
            (1.0f64 / 30.0).ln(),
            max_relative = 1e-13
        );
        let ctx = SpectrumContext::new(2, 4).unwrap();
        assert_relative_eq!(
            ctx.log_tau(4.0 - 1e-12).unwrap(),
            (1.0f64 / 945.0).ln(),
            max_relative = 1e-9
        );
        assert!(ctx.log_tau(4.0).is_err());
        assert!(ctx.log_tau(0.0).is_err());
    }

    #[test]
    fn log_nu_tilde_matches_exact_sweep() {
        for m in 2..=6u32 {
            for n in (m + 1)..=40u32 {
                let ctx = SpectrumContext::new(m, n).unwrap();
                for j in exact::index_set(n) {
                    let float = ctx.nu_tilde_at(j).unwrap();
                    let exact = exact::rational_to_f64(&exact::nu_tilde_exact(m, n, j).unwrap());
                    assert_relative_eq!(float, exact, max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn nu_tilde_positive_off_grid() {
        let ctx = SpectrumContext::new(2, 4).unwrap();
        let v = ctx.log_nu_tilde(0.5).unwrap();
        assert!(v.is_finite());
        assert!(v.exp() > 0.0);
        assert_relative_eq!(
            ctx.log_nu_tilde(2.0).unwrap().exp(),
            4.0 / 7.0,
            max_relative = 1e-12
        );
        let ctx3 = SpectrumContext::new(2, 3).unwrap();
        assert_relative_eq!(
            ctx3.log_nu_tilde(3.0 - 1e-11).unwrap().exp(),
            2.0 / 5.0,
            max_relative = 1e-8
        );
    }

    #[test]
    fn rho_fixtures() {
        let ctx = SpectrumContext::new(2, 4).unwrap();
        assert_relative_eq!(ctx.rho(1e-12).unwrap(), 20.0 / 7.0, max_relative = 1e-9);
        assert!(ctx.rho(2.0).is_err()); // domain is (0, n-2) open
        assert_relative_eq!(ctx.rho(2.0 - 1e-12).unwrap(), 2.0 / 5.0, max_relative = 1e-9);
        // rho(x) * nu(x) = nu(x+2)
        let ctx = SpectrumContext::new(3, 17).unwrap();
        for x in [0.5, 3.1, 7.7, 12.0] {
            let lhs = ctx.rho(x).unwrap() * ctx.log_nu_tilde(x).unwrap().exp();
            let rhs = ctx.log_nu_tilde(x + 2.0).unwrap().exp();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn rho_decreasing_convex() {
        for (m, n) in [(2u32, 50u32), (3, 200), (5, 1000)] {
            let ctx = SpectrumContext::new(m, n).unwrap();
            let hi = n as f64 - 2.0;
            let grid: Vec<f64> = (1..100).map(|i| i as f64 / 100.0 * hi).collect();
            for w in grid.windows(3) {
                let (a, b, c) = (
                    ctx.rho(w[0]).unwrap(),
                    ctx.rho(w[1]).unwrap(),
                    ctx.rho(w[2]).unwrap(),
                );
                assert!(b < a, "rho not decreasing at m={m} n={n}");
                assert!(b <= (a + c) / 2.0 + 1e-12, "rho not convex at m={m} n={n}");
            }
        }
    }

    #[test]
    fn log_concavity() {
        for (m, n) in [(2u32, 30u32), (4, 500), (3, 10_000)] {
            let ctx = SpectrumContext::new(m, n).unwrap();
            let nf = n as f64;
            let grid: Vec<f64> = (1..200).map(|i| i as f64 / 200.0 * (nf - 0.2) + 0.1).collect();
            for w in grid.windows(3) {
                let (a, b, c) = (
                    ctx.log_nu_tilde(w[0]).unwrap(),
                    ctx.log_nu_tilde(w[1]).unwrap(),
                    ctx.log_nu_tilde(w[2]).unwrap(),
                );
                assert!(a - 2.0 * b + c <= 1e-9, "second difference positive");
            }
        }
    }

    #[test]
    fn critical_point_small_case() {
        // For (2, 4) the rho = 1 root solves 4x^2 + 12x - 13 = 0.
        let root = (-12.0 + (144.0f64 + 208.0).sqrt()) / 8.0;
        let ctx = SpectrumContext::new(2, 4).unwrap();
        let cp = ctx.critical_point().unwrap();
        assert!(cp.x_c > root && cp.x_c < root + 2.0);
        assert!(cp.bracket.0 < cp.x_c && cp.x_c < cp.bracket.1);
        // x_c really is a local max
        let d = 1e-4;
        let at = ctx.log_nu_tilde(cp.x_c).unwrap();
        assert!(at >= ctx.log_nu_tilde(cp.x_c - d).unwrap());
        assert!(at >= ctx.log_nu_tilde(cp.x_c + d).unwrap());
    }

    #[test]
    fn critical_point_localization() {
        for (m, n) in [(2u32, 10_000u32), (3, 10_000)] {
            let ctx = SpectrumContext::new(m, n).unwrap();
            let cp = ctx.critical_point().unwrap();
            assert!(cp.x_c > cp.mu_n - (m as f64 + 1.0) / 2.0);
            assert!(cp.x_c < cp.mu_n + 2.0);
        }
    }

    #[test]
    fn discrete_peak_fixtures() {
        assert_eq!(SpectrumContext::new(2, 4).unwrap().discrete_peak().unwrap(), 2);
        assert_eq!(SpectrumContext::new(2, 3).unwrap().discrete_peak().unwrap(), 1);
        let ctx = SpectrumContext::new(2, 10_000).unwrap();
        let j = ctx.discrete_peak().unwrap();
        assert_eq!(j % 2, 0);
        assert!((j as f64) > 98.0 && (j as f64) < 104.0);
        // peak beats both parity neighbors
        let v = ctx.nu_tilde_at(j).unwrap();
        assert!(v >= ctx.nu_tilde_at(j - 2).unwrap());
        assert!(v >= ctx.nu_tilde_at(j + 2).unwrap());
    }

    #[test]
    fn nu_sums_to_one() {
        for (m, n) in [(2u32, 100u32), (3, 5_000), (2, 1_000_000)] {
            let ctx = SpectrumContext::new(m, n).unwrap();
            let total = ctx.tail_mass(0) + if n % 2 == 0 { ctx.nu_tilde_at(0).unwrap() } else { 0.0 };
            // log-gamma rounding accumulates to ~1e-9 relative at n = 1e6
            assert_relative_eq!(total, 1.0, max_relative = 1e-8);
        }
    }

    #[test]
    fn tail_mass_fixtures() {
        let ctx = SpectrumContext::new(2, 4).unwrap();
        assert_relative_eq!(ctx.tail_mass(2), 8.0 / 35.0, max_relative = 1e-12);
        assert_eq!(ctx.tail_mass(4), 0.0);
        let odd = SpectrumContext::new(2, 5).unwrap();
        assert_relative_eq!(odd.tail_mass(0), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn scaling_limit_values() {
        for m in 2..=6 {
            assert_relative_eq!(scaling_limit(m, 1.0), 1.0, max_relative = 1e-15);
        }
        assert_relative_eq!(scaling_limit(3, 2.0), 4.0 * (-3.0f64).exp(), max_relative = 1e-14);
        assert!(scaling_limit(2, 1e-8) < 1e-7);
    }

    #[test]
    fn a_const_bounds() {
        let upper = 2.0 / std::f64::consts::E.sqrt();
        let lower = 2.0 / std::f64::consts::PI.sqrt();
        assert_relative_eq!(a_const(2), upper, max_relative = 1e-14);
        let mut prev = f64::INFINITY;
        for m in 2..=50 {
            let a = a_const(m);
            assert!(a > lower && a <= upper + 1e-15, "A_{m} out of range: {a}");
            assert!(a < prev + 1e-15, "A_m not decreasing at m={m}");
            prev = a;
        }
    }

    #[test]
    fn rho_at_mu() {
        // rho_n(mu_n) < 1 for large n, and n (1 - rho_n(mu_n)) -> 2(m+1).
        for m in 2..=4u32 {
            let n = 1_000_000u32;
            let ctx = SpectrumContext::new(m, n).unwrap();
            let r = ctx.rho(mu(m, n)).unwrap();
            assert!(r < 1.0);
            let lim = 2.0 * (m as f64 + 1.0);
            let got = n as f64 * (1.0 - r);
            assert!((got - lim).abs() / lim < 0.1, "m={m}: {got} vs {lim}");
        }
    }

    #[test]
    fn nu_upper_bound_sweep() {
        for (m, n) in [(2u32, 1_000u32), (3, 100_000), (5, 1_000)] {
            let ctx = SpectrumContext::new(m, n).unwrap();
            let j_n = ctx.j_n();
            let js: Vec<u32> = exact::index_set(n)
                .into_iter()
                .filter(|&j| j >= j_n + 2 && j <= n - 2)
                .collect();
            // dense spot-check: every 5th index plus the extremes
            for (i, &j) in js.iter().enumerate() {
                if i % 5 != 0 && i != js.len() - 1 {
                    continue;
                }
                let (lhs, rhs) = ctx.nu_upper_bound_check(j).unwrap();
                assert!(lhs < rhs, "bound failed at m={m} n={n} j={j}");
            }
            assert!(ctx.nu_upper_bound_check(j_n).is_err());
        }
    }

    #[test]
    fn alpha_weight_monotone() {
        // q = 0: tau strictly decreasing on all of (0, n)
        let ctx = SpectrumContext::new(2, 100).unwrap();
        let mut prev = f64::INFINITY;
        for i in 1..100 {
            let v = ctx.log_alpha_weight(0.0, i as f64).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert_relative_eq!(
            SpectrumContext::new(2, 4).unwrap().log_alpha_weight(0.0, 2.0).unwrap(),
            (1.0f64 / 210.0).ln(),
            max_relative = 1e-13
        );
        // q = 1, large n: decreasing past sqrt(2qn) + 2
        let ctx = SpectrumContext::new(2, 10_000).unwrap();
        let start = (2.0f64 * 10_000.0).sqrt() + 3.0;
        assert!(
            ctx.log_alpha_weight(1.0, start).unwrap()
                > ctx.log_alpha_weight(1.0, 9_999.0).unwrap()
        );
    }

    #[test]
    fn s_sq_values() {
        assert_relative_eq!(s_sq(2, 3, NormKind::L2), 4.5);
        assert_relative_eq!(s_sq(2, 3, NormKind::Kss), 3.0);
        // s^2 lies between lambda_min/m and lambda_max/m over J_n
        for (m, n) in [(2u32, 9u32), (4, 20)] {
            let js = exact::index_set(n);
            let lam = |j: u32| (j * (j + m - 1)) as f64 / m as f64;
            let lo = lam(*js.first().unwrap());
            let hi = lam(*js.last().unwrap());
            let s2 = s_sq(m, n, NormKind::L2);
            assert!(s2 > lo && s2 < hi);
        }
    }

    #[test]
    fn scaling_convergence_small() {
        // sup-error decreasing along n, spot check at m = 2
        let grid: Vec<f64> = (1..=30).map(|i| i as f64 / 10.0).collect();
        let mut prev = f64::INFINITY;
        for n in [1_000u32, 10_000, 100_000] {
            let ctx = SpectrumContext::new(2, n).unwrap();
            let cp = ctx.critical_point().unwrap();
            let sup = grid
                .iter()
                .map(|&t| {
                    let x = cp.mu_n * t;
                    let v = if x > 0.0 && x < n as f64 {
                        ctx.log_nu_tilde(x).unwrap().exp() / cp.nu_bar
                    } else {
                        0.0
                    };
                    (v - scaling_limit(2, t)).abs()
                })
                .fold(0.0f64, f64::max);
            assert!(sup <= prev);
            prev = sup;
        }
        assert!(prev < 0.02);
    }
}
