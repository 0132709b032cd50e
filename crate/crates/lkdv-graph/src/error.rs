//! Error taxonomy shared by every module in the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Unified error type for the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the domain on which an operation is defined
    /// (for example λ inside the protected disc of the spectral map).
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method failed to converge within its iteration budget.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// An internal singularity that the radius/wellposedness contracts should
    /// have excluded; indicates a configuration or implementation problem.
    #[error("singularity encountered: {0}")]
    Singular(String),

    /// A defect problem whose coefficients violate the solvability criterion
    /// of its vertex family.
    #[error("ill-posed vertex coupling: {0}")]
    IllPosed(String),

    /// The characteristic determinant Δ came too close to zero on a
    /// quadrature contour relative to its leading-order magnitude.
    #[error("determinant zero-guard tripped at λ = {lambda}")]
    GuardTripped {
        /// The offending contour node.
        lambda: Complex64,
    },

    /// Adaptive quadrature could not meet the requested tolerance.
    #[error("quadrature tolerance not met: error estimate {estimate:.3e} exceeds 10 × {tolerance:.3e}")]
    ToleranceNotMet {
        /// Achieved error estimate.
        estimate: f64,
        /// Requested absolute tolerance.
        tolerance: f64,
    },

    /// The periodized whole-line reference grid cannot contain the dispersive
    /// spreading of the data at the requested time.
    #[error("aliasing risk in whole-line reference solve: {0}")]
    AliasingRisk(String),

    /// A lead-edge truncation in the global-relation check was not sound.
    #[error("truncation unsound: {0}")]
    TruncationUnsound(String),

    /// A run configuration failed validation.
    #[error("configuration error: {0}")]
    Config(String),
}
