//! Continuous-variable Gaussian measurement toolkit.
//!
//! This crate implements the parameter calculus of Gaussian quantum
//! measurements on `N` bosonic modes: states `(m, V)`, channels `(A, B, v)`,
//! observables `(A0, B0, v0)`, their validity conditions, classification
//! (commutative / sharp / covariant / informationally complete), dilation
//! synthesis, covariant decomposition, outcome statistics, Gaussian-state
//! reconstruction, and non-uniqueness witnesses. A truncated Fock-basis
//! oracle ([`fock`]) provides brute-force cross-checks for every analytic
//! formula on single-mode cases.
//!
//! # Conventions
//!
//! Fixed once here and used by every module:
//!
//! - Quadratures are interleaved, `R = (Q_1, P_1, ..., Q_N, P_N)`, so the
//!   symplectic form is block diagonal with `N` copies of
//!   `[[0, 1], [-1, 0]]` (see [`symplectic::omega`]).
//! - Covariance matrices use the anticommutator (symmetrized) convention:
//!   the vacuum has `V = I`. The uncertainty relation reads `V + iΩ ⪰ 0`.
//! - The Weyl operator is `W(x) = exp(-i xᵀΩR)`; the Weyl transform of a
//!   state is `ρ̂(x) = tr[ρ W(x)]`, and Fourier transforms use the
//!   `e^{+i y·x}` sign throughout.
//! - Outcome laws are reported in the standard probability convention
//!   (characteristic function `e^{iμᵀp - ½pᵀΣp}`); see
//!   [`observables::GaussianDistribution`] for the mapping to the
//!   phase-space `(C, d)` convention used internally.
//!
//! All numerical boundary decisions (PSD tests, ranks, symplectic tests)
//! take an explicit tolerance; [`DEFAULT_TOL`] is used by the CLI when none
//! is given. Several canonical objects (the Q-function POVM, pure states)
//! sit exactly on the PSD boundary, so checks are one-sided with slack
//! `-tol` rather than strict.

pub mod bosonic;
pub mod channels;
pub mod fock;
pub mod infocomplete;
pub mod observables;
pub mod problem;
pub mod random;
pub mod report;
pub mod sample;
pub mod schema;
pub mod states;
pub mod symplectic;

use thiserror::Error;

/// Default tolerance for boundary-sensitive checks (PSD tests, symplectic
/// tests, numerical rank).
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default Fock-space truncation dimension for the oracle.
pub const DEFAULT_CUTOFF: usize = 40;

/// Errors produced by the library.
///
/// Operations that *decide* validity (e.g. [`channels::validate_channel`])
/// return a [`Validity`] verdict instead of failing; errors are reserved for
/// inputs that are structurally unusable (dimension mismatches, violated
/// preconditions).
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix/vector dimensions are inconsistent or not of the form 2N.
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    /// An argument is malformed for reasons other than shape.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A state violates the uncertainty relation `V + iΩ ⪰ 0`.
    #[error("state violates the uncertainty relation (min eigenvalue {min_eig:.3e})")]
    InvalidState {
        /// Minimum eigenvalue of `V + iΩ`.
        min_eig: f64,
    },
    /// A channel fails the complete-positivity condition.
    #[error("channel fails complete positivity (min eigenvalue {min_eig:.3e})")]
    InvalidChannel {
        /// Minimum eigenvalue of the CP test matrix.
        min_eig: f64,
    },
    /// An observable fails the positivity condition.
    #[error("observable fails positivity (min eigenvalue {min_eig:.3e})")]
    InvalidObservable {
        /// Minimum eigenvalue of `B0 - iA0ᵀΩA0`.
        min_eig: f64,
    },
    /// A smearing noise covariance is not positive semidefinite.
    #[error("noise covariance is not positive semidefinite: {0}")]
    InvalidNoise(String),
    /// A matrix required to be positive definite is not.
    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),
    /// An operation requiring informational completeness got a deficient
    /// observable.
    #[error("observable is not informationally complete: rank {rank} < {required}")]
    NotInformationallyComplete {
        /// Numerical rank of `A0`.
        rank: usize,
        /// Required rank `2N`.
        required: usize,
    },
    /// An internal consistency condition failed (indicates an invalid input
    /// slipped past an earlier check, or a genuine bug).
    #[error("internal consistency error: {0}")]
    Inconsistent(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Outcome of a tolerance-aware validity test, with the diagnostic that
/// drove the decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validity {
    /// Verdict at the supplied tolerance.
    pub ok: bool,
    /// Minimum eigenvalue of the Hermitian test matrix; the verdict is
    /// `min_eig >= -tol`.
    pub min_eig: f64,
}
