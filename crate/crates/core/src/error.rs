use thiserror::Error;

/// Error type shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The weight function `f(t) = t/((a²−t)(b²−t)(c²−t))` was evaluated at
    /// one of its poles `t ∈ {a², b², c²}`.
    #[error("f(t) has a pole at t = {t}")]
    Pole { t: f64 },

    /// An iteration (duplication, Newton, quadrature refinement) failed to
    /// reach its tolerance within the allotted number of steps.
    #[error("{context}: no convergence after {iterations} iterations")]
    NonConvergence {
        context: &'static str,
        iterations: usize,
    },

    /// A nominally real quantity was computed with an imaginary residue
    /// exceeding the accepted bound, which signals a branch-cut mistake.
    #[error("branch error: imaginary residue {im_abs:.3e} exceeds {limit:.3e}")]
    Branch { im_abs: f64, limit: f64 },

    /// A sample table violates strict monotonicity.
    #[error("sample table is not strictly increasing at index {index}")]
    NonMonotoneInput { index: usize },

    /// A requested series truncation order exceeds the configured limit.
    #[error("truncation order {requested} exceeds the limit {limit}")]
    OrderTooLarge { requested: usize, limit: usize },

    /// Series reversion cannot proceed because the leading coefficient
    /// vanishes. Cannot occur for a valid ellipsoid shape.
    #[error("series reversion is degenerate: leading coefficient is zero")]
    ReversionDegenerate,

    /// File output failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
