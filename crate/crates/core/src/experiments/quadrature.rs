//! Adaptive Simpson quadrature, with an exponential-tail truncation
//! helper for improper upper limits.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 60;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::QuadratureFailure(depth));
    }
    let l = adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
    let r = adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
    Ok(l + r)
}

/// Adaptive estimate of the integral of f over [a, b] with absolute
/// error <= tol.
pub fn quadrature<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    adapt(&f, a, b, fa, fm, fb, whole, tol, 0)
}

/// Integral of f over [a, infinity) for integrands with an exponential
/// tail: the upper limit is advanced by doubling until the integrand
/// drops below tol relative to machine scale, then adaptive quadrature
/// runs on the finite interval.
pub fn quadrature_to_inf<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> Result<f64> {
    let floor = tol * 1e-3;
    let mut b = a.max(0.0) + 1.0;
    let mut steps = 0;
    while (f(b).abs() > floor || f(b + 0.5).abs() > floor) && steps < 60 {
        b *= 2.0;
        steps += 1;
    }
    if steps >= 60 {
        return Err(Error::QuadratureFailure(steps));
    }
    quadrature(f, a, b, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use statrs::function::gamma::ln_gamma;

    #[test]
    fn constant_and_gaussian() {
        assert_relative_eq!(quadrature(|_| 1.0, 0.0, 1.0, 1e-12).unwrap(), 1.0);
        let g = quadrature_to_inf(|t| (-t * t).exp(), 0.0, 1e-11).unwrap();
        assert_relative_eq!(g, std::f64::consts::PI.sqrt() / 2.0, max_relative = 1e-10);
    }

    #[test]
    fn scaling_limit_integral_closed_form() {
        // int_0^inf (t^2 e^{1-t^2})^{(m-1)/2} dt = Gamma(m/2)/(2 sqrt(e)) (2e/(m-1))^{m/2}
        for m in 2..=5u32 {
            let mf = m as f64;
            let got = quadrature_to_inf(
                |t| crate::spectra::scaling_limit(m, t),
                0.0,
                1e-11,
            )
            .unwrap();
            let expect = ln_gamma(mf / 2.0).exp() / (2.0 * std::f64::consts::E.sqrt())
                * (2.0 * std::f64::consts::E / (mf - 1.0)).powf(mf / 2.0);
            assert_relative_eq!(got, expect, max_relative = 1e-10);
        }
    }
}
