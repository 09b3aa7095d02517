//! Homogeneous polynomial algebra in m + 1 variables: Fischer inner
//! product, Laplacian, harmonic decomposition by Laplacian peeling, and
//! the component norms it induces.
//!
//! All operations are generic over the scalar backend: `Rational` is the
//! exact oracle (decompositions and Parseval identities hold as hard
//! equalities), `f64` is the workhorse for sampling.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::bigint::BigInt;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Scalar backend for polynomial coefficients.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug {
    /// Exact backends get their invariants checked as hard equalities.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(v: u64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn to_f64(&self) -> f64;
    fn format(&self) -> String;
    fn parse(s: &str) -> Result<Self>;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_u64(v: u64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn format(&self) -> String {
        // {:?} prints the shortest representation that round-trips
        format!("{:?}", self)
    }
    fn parse(s: &str) -> Result<Self> {
        s.parse::<f64>()
            .map_err(|e| Error::Parse(format!("bad float '{s}': {e}")))
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as One>::one()
    }
    fn from_u64(v: u64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn to_f64(&self) -> f64 {
        crate::exact::rational_to_f64(self)
    }
    fn format(&self) -> String {
        crate::exact::format_rational(self)
    }
    fn parse(s: &str) -> Result<Self> {
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|e| Error::Parse(format!("bad numerator '{num}': {e}")))?;
        let den: BigInt = den
            .parse()
            .map_err(|e| Error::Parse(format!("bad denominator '{den}': {e}")))?;
        if Zero::is_zero(&den) {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational::new(num, den))
    }
}

/// Exponent tuple of a monomial; ordering is lexicographic, which fixes
/// the serialization order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// alpha! as a scalar.
    pub fn factorial<S: Scalar>(&self) -> S {
        let mut acc = S::one();
        for &e in &self.0 {
            for i in 2..=e as u64 {
                acc = acc.mul(&S::from_u64(i));
            }
        }
        acc
    }
}

/// Sparse homogeneous polynomial of fixed degree in m + 1 variables.
/// No explicit zeros are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct HomPoly<S: Scalar> {
    pub m: u32,
    pub degree: u32,
    coeffs: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> HomPoly<S> {
    pub fn zero(m: u32, degree: u32) -> Self {
        HomPoly {
            m,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(m: u32, exponents: Vec<u32>, coeff: S) -> Self {
        assert_eq!(exponents.len(), m as usize + 1, "need m + 1 exponents");
        let idx = MultiIndex(exponents);
        let degree = idx.total_degree();
        let mut p = HomPoly::zero(m, degree);
        p.add_term(idx, coeff);
        p
    }

    pub fn from_terms(m: u32, degree: u32, terms: Vec<(Vec<u32>, S)>) -> Result<Self> {
        let mut p = HomPoly::zero(m, degree);
        for (exps, c) in terms {
            let idx = MultiIndex(exps);
            if idx.0.len() != m as usize + 1 || idx.total_degree() != degree {
                return Err(Error::PolyMismatch(format!(
                    "term {:?} incompatible with m={m}, degree={degree}",
                    idx.0
                )));
            }
            p.add_term(idx, c);
        }
        Ok(p)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> S {
        self.coeffs.get(idx).cloned().unwrap_or_else(S::zero)
    }

    fn add_term(&mut self, idx: MultiIndex, c: S) {
        debug_assert_eq!(idx.total_degree(), self.degree);
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().add(&c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (idx, c) in rhs.coeffs.iter() {
            out.add_term(idx.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (idx, c) in rhs.coeffs.iter() {
            out.add_term(idx.clone(), S::zero().sub(c));
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = HomPoly::zero(self.m, self.degree);
        for (idx, c) in self.coeffs.iter() {
            out.add_term(idx.clone(), c.mul(s));
        }
        out
    }

    /// Value at the base point o = (1, 0, ..., 0): the coefficient of x0^degree.
    pub fn value_at_base_point(&self) -> S {
        let mut exps = vec![0u32; self.m as usize + 1];
        exps[0] = self.degree;
        self.coeff(&MultiIndex(exps))
    }

    /// Euclidean Laplacian; degree drops by 2 (degree < 2 yields zero).
    pub fn laplacian(&self) -> Self {
        let new_degree = self.degree.saturating_sub(2);
        let mut out = HomPoly::zero(self.m, new_degree);
        if self.degree < 2 {
            return out;
        }
        for (idx, c) in self.coeffs.iter() {
            for i in 0..=self.m as usize {
                let e = idx.0[i];
                if e >= 2 {
                    let mut exps = idx.0.clone();
                    exps[i] -= 2;
                    let factor = S::from_u64(e as u64 * (e as u64 - 1));
                    out.add_term(MultiIndex(exps), c.mul(&factor));
                }
            }
        }
        out
    }

    /// kappa^k * p, where kappa = |x|^2; degree rises by 2k.
    pub fn multiply_kappa(&self, k: u32) -> Self {
        let mut cur = self.clone();
        for _ in 0..k {
            let mut out = HomPoly::zero(cur.m, cur.degree + 2);
            for (idx, c) in cur.coeffs.iter() {
                for i in 0..=cur.m as usize {
                    let mut exps = idx.0.clone();
                    exps[i] += 2;
                    out.add_term(MultiIndex(exps), c.clone());
                }
            }
            cur = out;
        }
        cur
    }
}

/// Fischer (Bombieri) inner product: sum over monomials of u_a v_a a!.
pub fn fischer_inner<S: Scalar>(u: &HomPoly<S>, v: &HomPoly<S>) -> Result<S> {
    if u.m != v.m || u.degree != v.degree {
        return Err(Error::PolyMismatch(format!(
            "fischer_inner: ({}, deg {}) vs ({}, deg {})",
            u.m, u.degree, v.m, v.degree
        )));
    }
    let mut acc = S::zero();
    for (idx, cu) in u.coeffs.iter() {
        if let Some(cv) = v.coeffs.get(idx) {
            acc = acc.add(&cu.mul(cv).mul(&idx.factorial::<S>()));
        }
    }
    Ok(acc)
}

/// L2(S^m) squared norm of a harmonic polynomial of degree j:
/// |u|^2 = (prod_{i=1}^{j} (m + 2i - 1))^{-1} sum u_a^2 a!.
/// Harmonicity is checked for exact backends and trusted for floats.
pub fn l2_norm_sq_harmonic<S: Scalar>(h: &HomPoly<S>) -> Result<S> {
    if S::EXACT && !h.laplacian().is_zero() {
        return Err(Error::NotHarmonic);
    }
    let fischer = fischer_inner(h, h)?;
    let mut div = S::one();
    for i in 1..=h.degree as u64 {
        div = div.mul(&S::from_u64(h.m as u64 + 2 * i - 1));
    }
    Ok(fischer.div(&div))
}

/// The KSS reproducing element: x0^n / n!.  For every p of degree n,
/// fischer_inner(p, phi) = p(o) with o = (1, 0, ..., 0).
pub fn evaluation_vector<S: Scalar>(m: u32, n: u32) -> HomPoly<S> {
    let mut n_fact = S::one();
    for i in 2..=n as u64 {
        n_fact = n_fact.mul(&S::from_u64(i));
    }
    let mut exps = vec![0u32; m as usize + 1];
    exps[0] = n;
    HomPoly::monomial(m, exps, S::one().div(&n_fact))
}

/// Harmonic components (h_j) of p = sum_j kappa^{(n-j)/2} h_j.
#[derive(Debug, Clone)]
pub struct HarmonicComponents<S: Scalar> {
    pub m: u32,
    pub n: u32,
    pub parts: BTreeMap<u32, HomPoly<S>>,
}

impl<S: Scalar> HarmonicComponents<S> {
    pub fn part(&self, j: u32) -> &HomPoly<S> {
        &self.parts[&j]
    }

    /// Rebuild sum_j kappa^{(n-j)/2} h_j; exact reconstruction of the
    /// input in rational mode.
    pub fn reconstruct(&self) -> HomPoly<S> {
        let mut acc = HomPoly::zero(self.m, self.n);
        for (&j, h) in &self.parts {
            acc = acc.add(&h.multiply_kappa((self.n - j) / 2));
        }
        acc
    }

    /// Squared KSS (Fischer) norm of the lifted component kappa^k h_j.
    pub fn kss_norm_sq(&self, j: u32) -> Result<S> {
        let lifted = self.part(j).multiply_kappa((self.n - j) / 2);
        fischer_inner(&lifted, &lifted)
    }

    /// Squared L2(S^m) norm of h_j.
    pub fn l2_norm_sq(&self, j: u32) -> Result<S> {
        l2_norm_sq_harmonic(self.part(j))
    }
}

/// Laplacian peeling: recursively decompose the Laplacian, divide each
/// level by 2k (m + 2n - 2k - 1), and recover the top harmonic part by
/// subtraction.  Exact in rational mode.
pub fn harmonic_decompose<S: Scalar>(p: &HomPoly<S>) -> HarmonicComponents<S> {
    let (m, n) = (p.m, p.degree);
    let mut parts: BTreeMap<u32, HomPoly<S>> = BTreeMap::new();
    if n < 2 {
        parts.insert(n, p.clone());
        return HarmonicComponents { m, n, parts };
    }
    let sub = harmonic_decompose(&p.laplacian());
    let mut lifted_sum = HomPoly::zero(m, n);
    for (&j, g) in &sub.parts {
        let k = (n - j) / 2;
        let divisor = S::from_u64(2 * k as u64 * (m as u64 + 2 * n as u64 - 2 * k as u64 - 1));
        let h = g.scale(&S::one().div(&divisor));
        lifted_sum = lifted_sum.add(&h.multiply_kappa(k));
        parts.insert(j, h);
    }
    parts.insert(n, p.sub(&lifted_sum));
    HarmonicComponents { m, n, parts }
}

/// Norm selector for per-component squared norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComponentNorm {
    L2,
    Kss,
    Sobolev(f64),
}

/// Squared norms of each harmonic component of p under the chosen norm.
/// Sobolev(q) weights the L2 values by j^{2q} (weight 1 at j = 0).
pub fn component_norms<S: Scalar>(
    p: &HomPoly<S>,
    norm: ComponentNorm,
) -> Result<BTreeMap<u32, f64>> {
    let comps = harmonic_decompose(p);
    let mut out = BTreeMap::new();
    for &j in comps.parts.keys() {
        let v = match norm {
            ComponentNorm::Kss => comps.kss_norm_sq(j)?.to_f64(),
            ComponentNorm::L2 => comps.l2_norm_sq(j)?.to_f64(),
            ComponentNorm::Sobolev(q) => {
                let w = if j == 0 { 1.0 } else { (j as f64).powf(2.0 * q) };
                w * comps.l2_norm_sq(j)?.to_f64()
            }
        };
        out.insert(j, v);
    }
    Ok(out)
}

/// Sobolev H^q distance from p to the polynomials of degree <= l:
/// sqrt(sum_{j > l} j^{2q} |h_j|_{L2}^2).
pub fn sobolev_dist<S: Scalar>(p: &HomPoly<S>, l: u32, q: f64) -> Result<f64> {
    let comps = harmonic_decompose(p);
    let mut acc = 0.0;
    for &j in comps.parts.keys() {
        if j > l {
            let w = if j == 0 { 1.0 } else { (j as f64).powf(2.0 * q) };
            acc += w * comps.l2_norm_sq(j)?.to_f64();
        }
    }
    Ok(acc.sqrt())
}

/// Text serialization: header "m n mode", then one line per term,
/// "e0 e1 ... em coefficient" in lexicographic order.  Bit-exact
/// round-trip in rational mode.
pub fn to_text<S: Scalar>(p: &HomPoly<S>) -> String {
    let mode = if S::EXACT { "rational" } else { "float" };
    let mut out = format!("{} {} {}\n", p.m, p.degree, mode);
    for (idx, c) in p.terms() {
        for e in &idx.0 {
            let _ = write!(out, "{} ", e);
        }
        let _ = writeln!(out, "{}", c.format());
    }
    out
}

pub fn from_text<S: Scalar>(text: &str) -> Result<HomPoly<S>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
    let mut it = header.split_whitespace();
    let m: u32 = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("bad header: m".into()))?;
    let degree: u32 = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("bad header: n".into()))?;
    let mode = it.next().ok_or_else(|| Error::Parse("bad header: mode".into()))?;
    let expect_mode = if S::EXACT { "rational" } else { "float" };
    if mode != expect_mode {
        return Err(Error::Parse(format!(
            "mode mismatch: file says '{mode}', backend is '{expect_mode}'"
        )));
    }
    let mut terms = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != m as usize + 2 {
            return Err(Error::Parse(format!("bad term line: '{line}'")));
        }
        let exps: Vec<u32> = toks[..m as usize + 1]
            .iter()
            .map(|t| t.parse().map_err(|e| Error::Parse(format!("bad exponent: {e}"))))
            .collect::<Result<_>>()?;
        let coeff = S::parse(toks[m as usize + 1])?;
        terms.push((exps, coeff));
    }
    HomPoly::from_terms(m, degree, terms)
}

/// All multi-indices of total degree n in m + 1 variables, lexicographic.
pub fn multi_indices(m: u32, n: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; m as usize + 1];
    fill(&mut out, &mut cur, 0, n);
    fn fill(out: &mut Vec<MultiIndex>, cur: &mut Vec<u32>, pos: usize, remaining: u32) {
        if pos == cur.len() - 1 {
            cur[pos] = remaining;
            out.push(MultiIndex(cur.clone()));
            return;
        }
        // descending exponent gives ascending... we want lexicographic on tuples
        for e in (0..=remaining).rev() {
            cur[pos] = e;
            fill(out, cur, pos + 1, remaining - e);
        }
        cur[pos] = 0;
    }
    // the recursion above emits descending-first; sort to plain lexicographic
    out.sort();
    out
}

/// kappa itself as a polynomial, for tests and examples.
pub fn kappa<S: Scalar>(m: u32) -> HomPoly<S> {
    HomPoly::monomial(m, {
        let mut e = vec![0u32; m as usize + 1];
        e[0] = 0;
        e
    }, S::one())
    .multiply_kappa(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{self, tau_exact};
    use approx::assert_relative_eq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    type RPoly = HomPoly<Rational>;

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    fn random_rational_poly(rng: &mut StdRng, m: u32, n: u32) -> RPoly {
        let mut p = RPoly::zero(m, n);
        for idx in multi_indices(m, n) {
            let c: i64 = rng.gen_range(-9..=9);
            if c != 0 {
                p.add_term(idx, rat(c, 1));
            }
        }
        p
    }

    #[test]
    fn fischer_fixtures() {
        let x0sq = RPoly::monomial(2, vec![2, 0, 0], rat(1, 1));
        let x0x1 = RPoly::monomial(2, vec![1, 1, 0], rat(1, 1));
        let x1sq = RPoly::monomial(2, vec![0, 2, 0], rat(1, 1));
        assert_eq!(fischer_inner(&x0sq, &x0sq).unwrap(), rat(2, 1));
        assert_eq!(fischer_inner(&x0x1, &x0x1).unwrap(), rat(1, 1));
        assert_eq!(fischer_inner(&x0sq, &x1sq).unwrap(), rat(0, 1));
        let deg3 = RPoly::monomial(2, vec![3, 0, 0], rat(1, 1));
        assert!(fischer_inner(&x0sq, &deg3).is_err());
    }

    #[test]
    fn laplacian_fixtures() {
        let k: RPoly = kappa(2);
        let lap = k.laplacian();
        assert_eq!(lap.coeff(&MultiIndex(vec![0, 0, 0])), rat(6, 1));
        let x0x1 = RPoly::monomial(2, vec![1, 1, 0], rat(1, 1));
        assert!(x0x1.laplacian().is_zero());
    }

    #[test]
    fn laplacian_kappa_power_identity() {
        // Delta(kappa^k u) = 2k (m + 2j + 2k - 1) kappa^{k-1} u for harmonic u
        let m = 3u32;
        let u = RPoly::monomial(m, vec![1, 1, 0, 0], rat(1, 1)); // harmonic, j = 2
        for k in 1..=4u32 {
            let lifted = u.multiply_kappa(k);
            let lap = lifted.laplacian();
            let factor = 2 * k * (m + 2 * 2 + 2 * k - 1);
            let expect = u.multiply_kappa(k - 1).scale(&rat(factor as i64, 1));
            assert_eq!(lap, expect, "k = {k}");
        }
    }

    #[test]
    fn decompose_kappa() {
        let k: RPoly = kappa(2);
        let comps = harmonic_decompose(&k);
        assert_eq!(comps.part(0).coeff(&MultiIndex(vec![0, 0, 0])), rat(1, 1));
        assert!(comps.part(2).is_zero());
    }

    #[test]
    fn decompose_x0_squared() {
        let p = RPoly::monomial(2, vec![2, 0, 0], rat(1, 1));
        let comps = harmonic_decompose(&p);
        assert_eq!(comps.part(0).coeff(&MultiIndex(vec![0, 0, 0])), rat(1, 3));
        assert!(comps.part(2).laplacian().is_zero());
        assert_eq!(comps.reconstruct(), p);
        // h2 = x0^2 - kappa/3
        let h2 = comps.part(2);
        assert_eq!(h2.coeff(&MultiIndex(vec![2, 0, 0])), rat(2, 3));
        assert_eq!(h2.coeff(&MultiIndex(vec![0, 2, 0])), rat(-1, 3));
    }

    #[test]
    fn random_decompositions_exact() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..25 {
            let m = rng.gen_range(2..=4u32);
            let n = rng.gen_range(3..=9u32);
            let p = random_rational_poly(&mut rng, m, n);
            let comps = harmonic_decompose(&p);
            assert_eq!(comps.reconstruct(), p);
            let mut kss_total = Rational::from_integer(BigInt::from(0));
            for &j in comps.parts.keys() {
                assert!(comps.part(j).laplacian().is_zero(), "h_{j} not harmonic");
                kss_total += comps.kss_norm_sq(j).unwrap();
            }
            // Parseval in the Fischer norm
            assert_eq!(kss_total, fischer_inner(&p, &p).unwrap());
        }
    }

    #[test]
    fn l2_norm_fixtures() {
        let one = RPoly::monomial(2, vec![0, 0, 0], rat(1, 1));
        assert_eq!(l2_norm_sq_harmonic(&one).unwrap(), rat(1, 1));
        let x0 = RPoly::monomial(2, vec![1, 0, 0], rat(1, 1));
        assert_eq!(l2_norm_sq_harmonic(&x0).unwrap(), rat(1, 3));
        let x0x1 = RPoly::monomial(2, vec![1, 1, 0], rat(1, 1));
        assert_eq!(l2_norm_sq_harmonic(&x0x1).unwrap(), rat(1, 15));
        let x0sq = RPoly::monomial(2, vec![2, 0, 0], rat(1, 1));
        assert!(l2_norm_sq_harmonic(&x0sq).is_err());
    }

    #[test]
    fn kss_to_l2_ratio_is_inverse_tau() {
        // for u in H_j lifted by kappa^k, KSS/L2 = 1/tau_j with n = j + 2k
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..10 {
            let m = rng.gen_range(2..=4u32);
            let j = rng.gen_range(1..=4u32);
            let k = rng.gen_range(1..=3u32);
            let n = j + 2 * k;
            let seedp = random_rational_poly(&mut rng, m, j);
            let comps = harmonic_decompose(&seedp);
            let u = comps.part(j);
            if u.is_zero() {
                continue;
            }
            let lifted = u.multiply_kappa(k);
            let kss = fischer_inner(&lifted, &lifted).unwrap();
            let l2 = l2_norm_sq_harmonic(u).unwrap();
            assert_eq!(kss / l2, tau_exact(m, n, j).unwrap().recip());
        }
    }

    #[test]
    fn component_norms_parseval_and_sobolev() {
        let p = RPoly::monomial(2, vec![3, 0, 0], rat(1, 1));
        let kss = component_norms(&p, ComponentNorm::Kss).unwrap();
        let total: f64 = kss.values().sum();
        assert_relative_eq!(total, 6.0, max_relative = 1e-12);
        // q = 0 Sobolev equals L2
        let l2 = component_norms(&p, ComponentNorm::L2).unwrap();
        let s0 = component_norms(&p, ComponentNorm::Sobolev(0.0)).unwrap();
        for (j, v) in &l2 {
            assert_relative_eq!(*v, s0[j], max_relative = 1e-14);
        }
    }

    #[test]
    fn sobolev_dist_fixtures() {
        let p = RPoly::monomial(2, vec![2, 0, 0], rat(1, 1));
        assert_eq!(sobolev_dist(&p, 2, 0.0).unwrap(), 0.0);
        let d = sobolev_dist(&p, 0, 0.0).unwrap();
        assert_relative_eq!(d, (4.0f64 / 45.0).sqrt(), max_relative = 1e-12);
        // harmonic p of degree n with l < n: distance is the full L2 norm
        let h = RPoly::monomial(2, vec![1, 1, 0], rat(1, 1));
        assert_relative_eq!(
            sobolev_dist(&h, 0, 0.0).unwrap(),
            (1.0f64 / 15.0).sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn brute_force_l2_oracle() {
        // Independent check of (koltwo) against direct monomial sphere
        // integration: int_{S^m} x^alpha dx = 0 unless all alpha_i even,
        // else Gamma(d/2) prod Gamma((a_i+1)/2) / (Gamma((d+|a|)/2) prod Gamma(1/2))
        // with d = m + 1 (invariant probability measure).
        fn sphere_moment(m: u32, alpha: &[u32]) -> f64 {
            if alpha.iter().any(|&a| a % 2 == 1) {
                return 0.0;
            }
            let d = (m + 1) as f64;
            let total: u32 = alpha.iter().sum();
            use statrs::function::gamma::ln_gamma;
            let mut ln = ln_gamma(d / 2.0) - ln_gamma((d + total as f64) / 2.0);
            for &a in alpha {
                ln += ln_gamma((a as f64 + 1.0) / 2.0) - ln_gamma(0.5);
            }
            ln.exp()
        }

        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..10 {
            let n = rng.gen_range(1..=3u32);
            let p = random_rational_poly(&mut rng, 2, n);
            let comps = harmonic_decompose(&p);
            for &j in comps.parts.keys() {
                let h = comps.part(j);
                if h.is_zero() {
                    continue;
                }
                // brute-force integral of h^2 over the sphere
                let mut direct = 0.0;
                for (a, ca) in h.terms() {
                    for (b, cb) in h.terms() {
                        let alpha: Vec<u32> =
                            a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
                        direct += ca.to_f64() * cb.to_f64() * sphere_moment(2, &alpha);
                    }
                }
                let koltwo = comps.l2_norm_sq(j).unwrap().to_f64();
                assert_relative_eq!(direct, koltwo, max_relative = 1e-12, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn reproducing_property() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..100 {
            let m = rng.gen_range(2..=3u32);
            let n = rng.gen_range(1..=6u32);
            let p = random_rational_poly(&mut rng, m, n);
            let phi: RPoly = evaluation_vector(m, n);
            assert_eq!(fischer_inner(&p, &phi).unwrap(), p.value_at_base_point());
        }
        // <phi, phi> = 1/n!
        let phi: RPoly = evaluation_vector(2, 5);
        assert_eq!(
            fischer_inner(&phi, &phi).unwrap(),
            rat(1, 120)
        );
    }

    #[test]
    fn text_round_trip_exact() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..20 {
            let m = rng.gen_range(2..=4u32);
            let n = rng.gen_range(0..=6u32);
            let p = random_rational_poly(&mut rng, m, n);
            let text = to_text(&p);
            let q: RPoly = from_text(&text).unwrap();
            assert_eq!(p, q);
        }
        // zero polynomial: header only
        let z = RPoly::zero(2, 4);
        assert_eq!(from_text::<Rational>(&to_text(&z)).unwrap(), z);
        // mode mismatch is rejected
        assert!(from_text::<f64>(&to_text(&z)).is_err());
    }

    #[test]
    fn multi_indices_count() {
        assert_eq!(multi_indices(2, 3).len(), 10); // C(5,2)
        assert_eq!(multi_indices(2, 4).len(), 15);
        let idxs = multi_indices(2, 2);
        // lexicographic order
        let mut sorted = idxs.clone();
        sorted.sort();
        assert_eq!(idxs, sorted);
    }
}
