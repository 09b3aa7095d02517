use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameters outside the standing assumption 1 < m < n.
    #[error("invalid parameters: require 2 <= m < n, got m={m}, n={n}")]
    InvalidParams { m: u32, n: u32 },

    /// An index j outside J_n = {0 <= j <= n, n - j even}.
    #[error("index j={j} not in J_n for n={n} (need 0 <= j <= n with n - j even)")]
    ParityViolation { n: u32, j: u32 },

    /// Argument outside the domain of a continuous-extension function.
    #[error("argument x={x} outside domain ({lo}, {hi})")]
    Domain { x: f64, lo: f64, hi: f64 },

    /// Mixing polynomials with different variable counts or degrees.
    #[error("polynomial mismatch: {0}")]
    PolyMismatch(String),

    /// Non-harmonic input where a harmonic polynomial is required.
    #[error("polynomial is not harmonic")]
    NotHarmonic,

    /// A theorem-level exact identity failed during table construction.
    #[error("exact identity violated: {0}")]
    IdentityViolation(String),

    /// Exact mode requested past the configured degree cap.
    #[error("exact mode capped at n <= {cap}, got n={n}")]
    ExactCapExceeded { n: u32, cap: u32 },

    /// Root solver failed to converge (should be impossible for concave targets).
    #[error("internal error: solver did not converge: {0}")]
    SolverFailure(String),

    /// Quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge after {0} refinements")]
    QuadratureFailure(u32),

    /// Bad experiment configuration.
    #[error("invalid experiment configuration: {0}")]
    BadConfig(String),

    /// Malformed polynomial text serialization.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
