//! Contour-integral solver for the linearized Korteweg–de Vries equation
//! `u_t = u_xxx + a u_x` posed on a metric graph: an incoming lead `(-∞, 0]`,
//! an outgoing lead `[0, ∞)`, and optionally one finite bond `[0, η]`, all
//! meeting at a single defect vertex.
//!
//! The solution is represented exactly as a sum of contour integrals in a
//! spectral variable λ: a Fourier-type integral along the real axis carrying
//! the initial data, plus integrals along the boundary of a sector `D` in the
//! lower half-plane carrying the boundary/vertex information. The vertex
//! coupling enters through a small complex linear system `A(λ) x = Y(λ)`
//! whose Cramer determinants `δ_k/Δ` appear in the integrands. Four vertex
//! coupling families are supported: a plain interface mismatch (no bond) and
//! three single-bond defects (loop, source, sink).
//!
//! Module layout:
//!
//! * [`nu_map`] — the spectral change of variables ν(λ) with ν³ − aν = λ³.
//! * [`pw_data`] — piecewise-polynomial data and their exact transforms.
//! * [`contours`] — contour geometry and adaptive complex-path quadrature.
//! * [`spectral_system`] — per-λ assembly of `A`, `Y`, `Δ`, `δ_k`.
//! * [`solver`] — evaluation of the solution formulae at points `(x, t)`.
//! * [`oracle`] — independent reference solvers for cross-validation.
//! * [`verify`] — identity, deformation, and residual test batteries.

pub mod contours;
pub mod error;
pub mod nu_map;
pub mod oracle;
pub mod pw_data;
pub mod solver;
pub mod spectral_system;
pub mod verify;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
