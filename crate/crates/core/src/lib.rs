//! Harmonic decomposition of the Kostlan random polynomial ensemble on
//! the sphere S^m.
//!
//! A homogeneous degree-n polynomial splits as a sum of solid harmonics
//! |x|^{n-j} H_j over the index set J_n = {0 <= j <= n, n - j even}.
//! This crate computes every coefficient of that decomposition for the
//! invariant Gaussian (KSS) ensemble, both exactly in big-rational
//! arithmetic and in a log-domain floating engine that scales to
//! n = 10^6, and backs the asymptotic statements (scaling limit of the
//! spectral weights, critical-point localization, low-degree Sobolev
//! approximation of random polynomials) with Monte Carlo experiments.
//!
//! Modules:
//! - [`exact`]: big-rational oracle for dimensions, tau_j, nu-tilde_j,
//!   with theorem-level identities enforced as hard equalities
//! - [`spectra`]: log-domain continuous engine, critical point, scaling
//!   limit
//! - [`polyalg`]: sparse homogeneous polynomials over f64 or rationals,
//!   Fischer inner product, harmonic decomposition by Laplacian peeling
//! - [`ensembles`]: seeded splittable samplers (full monomial sampler
//!   and the chi-square norm-profile shortcut)
//! - [`experiments`]: quadrature and the Monte Carlo verification suites
//! - [`cli`]: the `kss` command-line front end

pub mod cli;
pub mod ensembles;
pub mod error;
pub mod exact;
pub mod experiments;
pub mod polyalg;
pub mod spectra;

pub use error::{Error, Result};
