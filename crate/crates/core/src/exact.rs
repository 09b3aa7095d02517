//! Arbitrary-precision rational oracle for the spectral coefficients.
//!
//! Everything here is exact: gamma functions at half-integers are expanded
//! symbolically so that the square roots of pi cancel, and the theorem-level
//! identities (the nu-tilde weights sum to 1, the weighted eigenvalue sum
//! equals n) are verified as hard equalities during table construction.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the oracle.
pub type Rational = BigRational;

/// The index set J_n: degrees 0 <= j <= n with n - j even.
pub fn index_set(n: u32) -> Vec<u32> {
    (0..=n).filter(|j| (n - j) % 2 == 0).collect()
}

/// True iff j lies in J_n.
pub fn in_index_set(n: u32, j: u32) -> bool {
    j <= n && (n - j) % 2 == 0
}

/// Binomial coefficient C(n, k); zero for k < 0 or k > n.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = k as u64;
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// n! as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// dim P_n = C(n + m, m), the dimension of homogeneous degree-n
/// polynomials in m + 1 variables.
pub fn dim_p(m: u32, n: u32) -> BigInt {
    binomial((n + m) as u64, m as i64)
}

/// dim H_j, the dimension of the space of degree-j harmonic polynomials
/// in m + 1 variables.  The factorial formula applies for j >= 2; the
/// j = 0 and j = 1 values are 1 and m + 1.
pub fn dim_h(m: u32, j: u32) -> BigInt {
    match j {
        0 => BigInt::one(),
        1 => BigInt::from(m + 1),
        _ => {
            let num = factorial((m + j - 2) as u64) * BigInt::from(m + 2 * j - 1);
            let den = factorial((m - 1) as u64) * factorial(j as u64);
            num / den
        }
    }
}

/// Gamma(t / 2) written as r * sqrt(pi)^s with r rational and s in {0, 1}.
///
/// For even t this is an ordinary factorial; for odd t = 2k + 1 we use
/// Gamma(k + 1/2) = (2k)! / (4^k k!) * sqrt(pi).  Requires t >= 1.
fn gamma_half(t: u64) -> (Rational, bool) {
    assert!(t >= 1, "gamma_half needs a positive half-integer argument");
    if t % 2 == 0 {
        (Rational::from_integer(factorial(t / 2 - 1)), false)
    } else {
        let k = (t - 1) / 2;
        let num = factorial(2 * k);
        let den = BigInt::from(4u32).pow(k as u32) * factorial(k);
        (Rational::new(num, den), true)
    }
}

/// The rescaling factor tau_j between the L2(S^m) and Fischer squared
/// norms on the j-th harmonic component:
/// tau_j = K_n / (Gamma((n-j+2)/2) Gamma((m+n+j+1)/2)), K_n = 2^{-n} Gamma((m+1)/2).
///
/// Rational because n - j is even, so the sqrt(pi) factors cancel.
pub fn tau_exact(m: u32, n: u32, j: u32) -> Result<Rational> {
    if !in_index_set(n, j) {
        return Err(Error::ParityViolation { n, j });
    }
    let (g_top, s_top) = gamma_half((m + 1) as u64);
    let (g1, s1) = gamma_half((n - j + 2) as u64);
    let (g2, s2) = gamma_half((m + n + j + 1) as u64);
    debug_assert!(!s1 && s_top == s2, "sqrt(pi) factors must cancel");
    let _ = (s_top, s1, s2);
    let k_n = g_top / Rational::from_integer(BigInt::from(2u32).pow(n));
    Ok(k_n / (g1 * g2))
}

/// The KSS spectral weight nu-tilde_j = n! * tau_j * dim H_j.
pub fn nu_tilde_exact(m: u32, n: u32, j: u32) -> Result<Rational> {
    let tau = tau_exact(m, n, j)?;
    Ok(Rational::from_integer(factorial(n as u64)) * tau * Rational::from_integer(dim_h(m, j)))
}

/// Squared coefficient of metric homothety s_j^2 = j (m + j - 1) / m for
/// the j-th harmonic component.
pub fn s_j_sq_exact(m: u32, j: u32) -> Rational {
    Rational::new(BigInt::from(j as u64 * (m + j - 1) as u64), BigInt::from(m))
}

/// One row of the exact coefficient table.
#[derive(Debug, Clone)]
pub struct ExactRow {
    pub j: u32,
    pub dim_h: BigInt,
    pub c_j_sq: BigInt,
    pub tau_j: Rational,
    pub nu_tilde_j: Rational,
    pub s_j_sq: Rational,
}

/// Exact per-component coefficient table for a fixed (m, n).
///
/// Construction fails hard if any of the theorem-level identities does
/// not hold exactly.
#[derive(Debug, Clone)]
pub struct ExactCoefficientTable {
    pub m: u32,
    pub n: u32,
    pub rows: Vec<ExactRow>,
}

impl ExactCoefficientTable {
    pub fn build(m: u32, n: u32) -> Result<Self> {
        if m < 2 || n <= m {
            return Err(Error::InvalidParams { m, n });
        }
        let rows: Vec<ExactRow> = index_set(n)
            .into_iter()
            .map(|j| {
                let dim = dim_h(m, j);
                let tau = tau_exact(m, n, j)?;
                let nu = nu_tilde_exact(m, n, j)?;
                Ok(ExactRow {
                    j,
                    dim_h: dim.clone(),
                    c_j_sq: dim,
                    tau_j: tau,
                    nu_tilde_j: nu,
                    s_j_sq: s_j_sq_exact(m, j),
                })
            })
            .collect::<Result<_>>()?;

        let table = ExactCoefficientTable { m, n, rows };
        table.check_identities()?;
        Ok(table)
    }

    fn check_identities(&self) -> Result<()> {
        let one = Rational::one();
        let n_rat = Rational::from_integer(BigInt::from(self.n));

        let nu_sum: Rational = self.rows.iter().map(|r| r.nu_tilde_j.clone()).sum();
        if nu_sum != one {
            return Err(Error::IdentityViolation(format!(
                "sum of nu_tilde_j = {} != 1",
                nu_sum
            )));
        }
        let s_sum: Rational = self
            .rows
            .iter()
            .map(|r| r.nu_tilde_j.clone() * r.s_j_sq.clone())
            .sum();
        if s_sum != n_rat {
            return Err(Error::IdentityViolation(format!(
                "sum of nu_tilde_j s_j^2 = {} != n",
                s_sum
            )));
        }
        let c_sum: BigInt = self.rows.iter().map(|r| r.c_j_sq.clone()).sum();
        if c_sum != dim_p(self.m, self.n) {
            return Err(Error::IdentityViolation(format!(
                "sum of c_j^2 = {} != dim P_n",
                c_sum
            )));
        }
        Ok(())
    }

    /// c^2 = dim P_n.
    pub fn c_sq(&self) -> BigInt {
        dim_p(self.m, self.n)
    }

    /// L2 coefficient of metric homothety squared:
    /// s^2 = sum nu_j s_j^2 = n (m + n + 1) / (m + 2).
    pub fn s_sq_l2(&self) -> Rational {
        let c_sq = Rational::from_integer(self.c_sq());
        self.rows
            .iter()
            .map(|r| {
                Rational::from_integer(r.c_j_sq.clone()) / c_sq.clone() * r.s_j_sq.clone()
            })
            .sum()
    }

    /// KSS coefficient of metric homothety squared, s-tilde^2 = n.
    pub fn s_sq_kss(&self) -> Rational {
        self.rows
            .iter()
            .map(|r| r.nu_tilde_j.clone() * r.s_j_sq.clone())
            .sum()
    }

    pub fn row(&self, j: u32) -> Option<&ExactRow> {
        self.rows.iter().find(|r| r.j == j)
    }
}

/// Render a rational as "p/q" (or just "p" when integral).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Convert a rational to f64, accurate as long as numerator and
/// denominator fit after a common shift.
pub fn rational_to_f64(r: &Rational) -> f64 {
    // num's ToPrimitive on BigRational handles large values by scaling.
    use num::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}
