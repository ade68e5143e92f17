//! Gaussian states `(m, V)` and their analytic Weyl transforms.
//!
//! A state on `N` modes is a displacement vector `m ∈ R^{2N}` together with
//! a symmetric covariance matrix `V` in the anticommutator convention
//! (vacuum: `V = I`). Validity is the uncertainty relation `V + iΩ ⪰ 0`;
//! pure states sit exactly on that boundary, which is why the check is
//! tolerance-aware.
//!
//! The Weyl transform of a Gaussian state is itself Gaussian:
//!
//! ```text
//! ρ̂(x) = tr[ρ W(x)] = exp(-¼ xᵀ(ΩᵀVΩ)x - i(Ωm)ᵀx)
//! ```
//!
//! and determines the state uniquely — everything downstream (pushforwards,
//! informational completeness, reconstruction) works at the level of this
//! function.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::symplectic::{hermitian_min_eig, is_symmetric, omega_mat, to_complex};
use crate::{Error, Result, Validity};

/// A validated Gaussian state.
///
/// Construction enforces the uncertainty relation, so a value of this type
/// is always a physical state (at the tolerance it was built with).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n_modes: usize,
    m: DVector<f64>,
    v: DMatrix<f64>,
}

impl GaussianState {
    /// Builds and validates a state from displacement `m` and covariance `v`.
    ///
    /// # Errors
    ///
    /// Dimension mismatch, asymmetric `v`, or uncertainty-relation violation
    /// (the error carries the offending minimum eigenvalue of `V + iΩ`).
    pub fn new(m: DVector<f64>, v: DMatrix<f64>, tol: f64) -> Result<Self> {
        let validity = state_validity(&m, &v, tol)?;
        if !validity.ok {
            return Err(Error::InvalidState {
                min_eig: validity.min_eig,
            });
        }
        Ok(GaussianState {
            n_modes: v.nrows() / 2,
            m,
            v,
        })
    }

    /// Wraps parameters whose validity is guaranteed by the caller (used by
    /// operations whose outputs are valid by theorem, e.g. channel action).
    pub(crate) fn from_parts_unchecked(m: DVector<f64>, v: DMatrix<f64>) -> Self {
        GaussianState {
            n_modes: v.nrows() / 2,
            m,
            v,
        }
    }

    /// The vacuum on `n_modes` modes: `m = 0`, `V = I`.
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidDimension("state needs at least one mode".into()));
        }
        let dim = 2 * n_modes;
        Ok(GaussianState {
            n_modes,
            m: DVector::zeros(dim),
            v: DMatrix::identity(dim, dim),
        })
    }

    /// Number of modes `N`.
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Displacement vector `m ∈ R^{2N}`.
    pub fn m(&self) -> &DVector<f64> {
        &self.m
    }

    /// Covariance matrix `V` (anticommutator convention).
    pub fn v(&self) -> &DMatrix<f64> {
        &self.v
    }
}

/// Uncertainty-relation verdict for raw `(m, v)` data, without constructing
/// a state. Used by the CLI to report on invalid inputs instead of refusing
/// them.
///
/// # Errors
///
/// Only structural problems (shape mismatch, asymmetry); the physical
/// verdict is the returned [`Validity`].
pub fn state_validity(m: &DVector<f64>, v: &DMatrix<f64>, tol: f64) -> Result<Validity> {
    let dim = crate::symplectic::check_even_square_f(v)?;
    if m.len() != dim {
        return Err(Error::InvalidDimension(format!(
            "displacement has length {}, covariance is {}x{}",
            m.len(),
            dim,
            dim
        )));
    }
    if !is_symmetric(v, tol.max(1e-12)) {
        return Err(Error::InvalidInput("covariance must be symmetric".into()));
    }
    let test = to_complex(v) + to_complex(&omega_mat(dim / 2)).map(|z| z * Complex64::I);
    let min_eig = hermitian_min_eig(&test)?;
    Ok(Validity {
        ok: min_eig >= -tol,
        min_eig,
    })
}

/// Evaluates the Weyl transform `ρ̂(x) = e^{-¼xᵀ(ΩᵀVΩ)x - i(Ωm)ᵀx}`.
///
/// # Errors
///
/// `x` of wrong length.
pub fn weyl_transform(state: &GaussianState, x: &DVector<f64>) -> Result<Complex64> {
    let dim = 2 * state.n_modes;
    if x.len() != dim {
        return Err(Error::InvalidDimension(format!(
            "argument has length {}, state lives on R^{}",
            x.len(),
            dim
        )));
    }
    let om = omega_mat(state.n_modes);
    let ox = &om * x;
    let quad = (ox.transpose() * &state.v * &ox)[(0, 0)];
    let lin = (&om * &state.m).dot(x);
    // exp(-quad/4) * exp(-i*lin)
    Ok(Complex64::from_polar((-0.25 * quad).exp(), -lin))
}
