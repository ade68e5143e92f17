//! Gaussian observables `(A0, B0, v0)`: validation, outcome statistics,
//! classification, postprocessing algebra, and covariant decomposition.
//!
//! A Gaussian observable with `M`-dimensional outcomes on `N` modes is the
//! POVM whose operator-valued characteristic function is
//!
//! ```text
//! Ê(p) = W(A0 p) · exp(-¼ pᵀB0 p - i v0ᵀp),    p ∈ R^M
//! ```
//!
//! with `A0` real `2N x M`, `B0` real symmetric PSD-compatible, `v0 ∈ R^M`.
//! Positivity of the POVM is equivalent to
//!
//! ```text
//! B0 - i A0ᵀ Ω A0  ⪰  0
//! ```
//!
//! which [`validate_observable`] tests. Measuring a Gaussian state `(m, V)`
//! produces the normal outcome law given by [`pushforward`].
//!
//! The classification predicates follow the parameter criteria:
//! commutative iff `A0ᵀΩA0 = 0`; sharp iff additionally `B0 = 0`; covariant
//! (phase-space) iff `M = 2N` and `A0 = -Ω`; informationally complete iff
//! `rank A0 = 2N`. Every informationally complete observable with `M = 2N`
//! factors — [`decompose_covariant`] — as a linear postprocessing of a
//! classically smeared, symplectically transformed Q-function.
//!
//! Outcome-space conventions: distributions are reported in the standard
//! probability convention (mean `μ`, covariance `Σ`, characteristic function
//! `e^{iμᵀp - ½pᵀΣp}`). The phase-space literature often writes the same
//! object as `e^{-¼pᵀCp - idᵀp}`; the mapping is `C = 2Σ`, `d = -μ`.
//!
//! Note on outcome dimensions: `M` is arbitrary (odd values allowed), which
//! is broader than some definitions of "Gaussian observable" in the
//! literature that restrict to even-dimensional outcome spaces.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::states::GaussianState;
use crate::symplectic::{
    hermitian_min_eig, is_symmetric, max_abs, numerical_rank, omega_mat,
    to_complex, williamson,
};
use crate::{Error, Result, Validity};

/// A Gaussian observable, shape-checked at construction.
///
/// Construction validates dimensions and symmetry of `B0` only; the
/// positivity condition is a separate, tolerance-aware question answered by
/// [`validate_observable`], so that invalid parameter sets can still be
/// represented and diagnosed.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianObservable {
    n_modes: usize,
    outcome_dim: usize,
    a0: DMatrix<f64>,
    b0: DMatrix<f64>,
    v0: DVector<f64>,
}

impl GaussianObservable {
    /// Builds an observable from raw parameters.
    ///
    /// # Errors
    ///
    /// Shape mismatch or non-symmetric `b0`.
    pub fn new(a0: DMatrix<f64>, b0: DMatrix<f64>, v0: DVector<f64>, tol: f64) -> Result<Self> {
        let (rows, m) = a0.shape();
        if rows == 0 || rows % 2 != 0 || m == 0 {
            return Err(Error::InvalidDimension(format!(
                "A0 must be 2NxM with N, M >= 1, got {rows}x{m}"
            )));
        }
        if b0.shape() != (m, m) {
            return Err(Error::InvalidDimension(format!(
                "B0 must be {m}x{m}, got {}x{}",
                b0.nrows(),
                b0.ncols()
            )));
        }
        if v0.len() != m {
            return Err(Error::InvalidDimension(format!(
                "v0 must have length {m}, got {}",
                v0.len()
            )));
        }
        if !is_symmetric(&b0, tol.max(1e-12)) {
            return Err(Error::InvalidInput("B0 must be symmetric".into()));
        }
        Ok(GaussianObservable {
            n_modes: rows / 2,
            outcome_dim: m,
            a0,
            b0,
            v0,
        })
    }

    /// Wraps parameters the caller guarantees to be shape-consistent (used
    /// by operations whose outputs are well-formed by construction).
    pub(crate) fn from_parts_unchecked(
        a0: DMatrix<f64>,
        b0: DMatrix<f64>,
        v0: DVector<f64>,
    ) -> Self {
        GaussianObservable {
            n_modes: a0.nrows() / 2,
            outcome_dim: a0.ncols(),
            a0,
            b0,
            v0,
        }
    }

    /// The covariant phase-space observable `(-Ω, I, 0)` whose outcome law
    /// on a state `(m, V)` is `N(m, (V + I)/2)` — the Q-function.
    pub fn q_function(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidDimension("observable needs at least one mode".into()));
        }
        let dim = 2 * n_modes;
        Ok(GaussianObservable {
            n_modes,
            outcome_dim: dim,
            a0: -omega_mat(n_modes),
            b0: DMatrix::identity(dim, dim),
            v0: DVector::zeros(dim),
        })
    }

    /// The sharp generalized quadrature along direction `a`: parameters
    /// `(a, 0, 0)` with one-dimensional outcomes.
    pub fn quadrature(a: DVector<f64>) -> Result<Self> {
        let rows = a.len();
        if rows == 0 || rows % 2 != 0 {
            return Err(Error::InvalidDimension(format!(
                "quadrature direction must live in R^2N, got length {rows}"
            )));
        }
        Ok(GaussianObservable {
            n_modes: rows / 2,
            outcome_dim: 1,
            a0: DMatrix::from_column_slice(rows, 1, a.as_slice()),
            b0: DMatrix::zeros(1, 1),
            v0: DVector::zeros(1),
        })
    }

    /// Number of modes `N`.
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Outcome dimension `M`.
    pub fn outcome_dim(&self) -> usize {
        self.outcome_dim
    }

    /// The `2N x M` matrix `A0`.
    pub fn a0(&self) -> &DMatrix<f64> {
        &self.a0
    }

    /// The symmetric `M x M` matrix `B0`.
    pub fn b0(&self) -> &DMatrix<f64> {
        &self.b0
    }

    /// The offset vector `v0 ∈ R^M`.
    pub fn v0(&self) -> &DVector<f64> {
        &self.v0
    }
}

/// Classification of a Gaussian observable against the parameter criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    /// All effects commute: `A0ᵀΩA0 = 0`.
    pub commutative: bool,
    /// Projection-valued (commutative and `B0 = 0`).
    pub sharp: bool,
    /// Phase-space covariant: `M = 2N` and `A0 = -Ω`.
    pub covariant: bool,
    /// Informationally complete: `rank A0 = 2N`.
    pub informationally_complete: bool,
}

/// A normal outcome law in the standard probability convention.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianDistribution {
    /// Mean `μ`.
    pub mean: DVector<f64>,
    /// Covariance `Σ` (symmetric PSD).
    pub cov: DMatrix<f64>,
}

impl GaussianDistribution {
    /// Builds a distribution, checking symmetry and positive
    /// semidefiniteness of the covariance at `tol`.
    ///
    /// # Errors
    ///
    /// Shape mismatch, asymmetric or indefinite covariance.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>, tol: f64) -> Result<Self> {
        if cov.nrows() != cov.ncols() || cov.nrows() == 0 {
            return Err(Error::InvalidDimension(format!(
                "covariance must be square and nonempty, got {}x{}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mean.len() != cov.nrows() {
            return Err(Error::InvalidDimension(format!(
                "mean has length {}, covariance is {}x{}",
                mean.len(),
                cov.nrows(),
                cov.ncols()
            )));
        }
        if !is_symmetric(&cov, tol.max(1e-12)) {
            return Err(Error::InvalidInput("covariance must be symmetric".into()));
        }
        let min_eig = hermitian_min_eig(&to_complex(&cov))?;
        if min_eig < -tol {
            return Err(Error::InvalidInput(format!(
                "covariance must be PSD (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(GaussianDistribution { mean, cov })
    }

    pub(crate) fn from_parts_unchecked(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        GaussianDistribution { mean, cov }
    }

    /// Outcome dimension.
    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

/// Covariant decomposition of an informationally complete observable with
/// `M = 2N`: the factorization into postprocessing `P`, symplectic
/// transform, and classical noise over the Q-function.
///
/// [`CovariantDecomposition::recompose`] rebuilds the observable: smear the
/// Q-function with `(noise_c, noise_d)`, transform by `s⁻¹` (the field `s`
/// is the Williamson congruence of the covariant noise matrix), then
/// postprocess by `p`.
#[derive(Debug, Clone)]
pub struct CovariantDecomposition {
    /// Invertible outcome postprocessing `P = -A0ᵀΩ`.
    pub p: DMatrix<f64>,
    /// Williamson symplectic of `B0_cov = P⁻¹B0P⁻ᵀ`.
    pub s: DMatrix<f64>,
    /// Classical noise covariance `⊕_k (β_k - 1) I_2` in paper convention
    /// (`C = 2Σ`); PSD because every `β_k >= 1`.
    pub noise_c: DMatrix<f64>,
    /// Classical noise offset.
    pub noise_d: DVector<f64>,
    /// Symplectic eigenvalues of `B0_cov`, sorted descending.
    pub betas: Vec<f64>,
}

impl CovariantDecomposition {
    /// Reassembles the observable from the decomposition data.
    ///
    /// # Errors
    ///
    /// Propagated from the constituent operations; a failure indicates the
    /// decomposition fields were tampered with.
    pub fn recompose(&self, tol: f64) -> Result<GaussianObservable> {
        let n = self.betas.len();
        let base = GaussianObservable::q_function(n)?;
        let smeared = smear(&base, &self.noise_c, &self.noise_d, tol)?;
        let s_inv = self
            .s
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Inconsistent("decomposition s is singular".into()))?;
        let transformed = symplectic_transform_covariant(&smeared, &s_inv, tol)?;
        linear_postprocess(&transformed, &self.p)
    }
}

/// Tests the positivity condition `B0 - iA0ᵀΩA0 ⪰ 0` at `tol`.
pub fn validate_observable(obs: &GaussianObservable, tol: f64) -> Result<Validity> {
    let min_eig = hermitian_min_eig(&positivity_matrix(obs))?;
    Ok(Validity {
        ok: min_eig >= -tol,
        min_eig,
    })
}

/// The Hermitian test matrix `B0 - iA0ᵀΩA0`.
fn positivity_matrix(obs: &GaussianObservable) -> DMatrix<Complex64> {
    let skew = obs.a0.transpose() * omega_mat(obs.n_modes) * &obs.a0;
    to_complex(&obs.b0) - to_complex(&skew).map(|z| z * Complex64::I)
}

/// Outcome law of measuring `obs` on `state`: the normal distribution with
///
/// ```text
/// Σ = ½ [ (ΩA0)ᵀ V (ΩA0) + B0 ],    μ = -(A0ᵀΩm + v0)
/// ```
///
/// obtained by matching the measured characteristic function
/// `ρ̂(A0 p)·e^{-¼pᵀB0p - iv0ᵀp}` against `e^{iμᵀp - ½pᵀΣp}`.
///
/// # Errors
///
/// Mode-count mismatch.
pub fn pushforward(obs: &GaussianObservable, state: &GaussianState) -> Result<GaussianDistribution> {
    if obs.n_modes != state.n_modes() {
        return Err(Error::InvalidDimension(format!(
            "observable acts on {} modes, state has {}",
            obs.n_modes,
            state.n_modes()
        )));
    }
    let om = omega_mat(obs.n_modes);
    let oa = &om * &obs.a0;
    let sigma = ((oa.transpose() * state.v() * &oa) + &obs.b0).scale(0.5);
    let sigma = (&sigma + sigma.transpose()).scale(0.5);
    let mu = -(obs.a0.transpose() * &om * state.m() + &obs.v0);
    // Σ ⪰ 0 holds for every valid (obs, state) pair: both summands are PSD.
    Ok(GaussianDistribution::from_parts_unchecked(mu, sigma))
}

/// Classifies `obs` against the commutative / sharp / covariant /
/// informationally-complete parameter criteria at tolerance `tol`.
pub fn classify(obs: &GaussianObservable, tol: f64) -> Classification {
    let om = omega_mat(obs.n_modes);
    let skew = obs.a0.transpose() * &om * &obs.a0;
    let commutative = max_abs(&skew) <= tol;
    let sharp = commutative && max_abs(&obs.b0) <= tol;
    let covariant =
        obs.outcome_dim == 2 * obs.n_modes && max_abs(&(&obs.a0 + om)) <= tol;
    let informationally_complete = numerical_rank(&obs.a0, tol) == 2 * obs.n_modes;
    Classification {
        commutative,
        sharp,
        covariant,
        informationally_complete,
    }
}

/// Pushes outcomes through the linear map `P` (any real `M' x M`):
/// parameters become `(A0Pᵀ, PB0Pᵀ, Pv0)`. Validity is preserved —
/// the positivity matrix transforms by congruence with `Pᵀ`.
///
/// # Errors
///
/// `P` with the wrong number of columns, or empty.
pub fn linear_postprocess(obs: &GaussianObservable, p: &DMatrix<f64>) -> Result<GaussianObservable> {
    if p.ncols() != obs.outcome_dim || p.nrows() == 0 {
        return Err(Error::InvalidDimension(format!(
            "postprocessing must be M'x{} with M' >= 1, got {}x{}",
            obs.outcome_dim,
            p.nrows(),
            p.ncols()
        )));
    }
    let b0 = p * &obs.b0 * p.transpose();
    Ok(GaussianObservable {
        n_modes: obs.n_modes,
        outcome_dim: p.nrows(),
        a0: &obs.a0 * p.transpose(),
        b0: (&b0 + b0.transpose()).scale(0.5),
        v0: p * &obs.v0,
    })
}

/// Convolves the outcome law with classical Gaussian noise of covariance
/// `c` (paper convention) and offset `d`: parameters become
/// `(A0, B0 + C, v0 + d)`. Singular PSD `c` is allowed.
///
/// # Errors
///
/// Shape mismatch, or `c` not PSD at `tol`.
pub fn smear(
    obs: &GaussianObservable,
    c: &DMatrix<f64>,
    d: &DVector<f64>,
    tol: f64,
) -> Result<GaussianObservable> {
    let m = obs.outcome_dim;
    if c.shape() != (m, m) || d.len() != m {
        return Err(Error::InvalidDimension(format!(
            "noise must be {m}x{m} with offset length {m}, got {}x{} and {}",
            c.nrows(),
            c.ncols(),
            d.len()
        )));
    }
    if !is_symmetric(c, tol.max(1e-12)) {
        return Err(Error::InvalidNoise("covariance must be symmetric".into()));
    }
    let min_eig = hermitian_min_eig(&to_complex(c))?;
    if min_eig < -tol {
        return Err(Error::InvalidNoise(format!(
            "covariance must be PSD (min eigenvalue {min_eig:.3e})"
        )));
    }
    Ok(GaussianObservable {
        n_modes: obs.n_modes,
        outcome_dim: m,
        a0: obs.a0.clone(),
        b0: &obs.b0 + c,
        v0: &obs.v0 + d,
    })
}

/// The generalized-quadrature direction smeared by the marginal of a
/// phase-space observable along the outcome functional `p` (a `1 x M` row):
/// returns `A0 pᵀ`.
///
/// # Errors
///
/// Requires `M = 2N` (phase-space outcomes) and a matching row length.
pub fn marginal_direction(obs: &GaussianObservable, p: &DMatrix<f64>) -> Result<DVector<f64>> {
    if obs.outcome_dim != 2 * obs.n_modes {
        return Err(Error::InvalidDimension(
            "marginal directions are defined for phase-space outcomes (M = 2N)".into(),
        ));
    }
    if p.shape() != (1, obs.outcome_dim) {
        return Err(Error::InvalidDimension(format!(
            "selector must be 1x{}, got {}x{}",
            obs.outcome_dim,
            p.nrows(),
            p.ncols()
        )));
    }
    let col = &obs.a0 * p.transpose();
    Ok(DVector::from_column_slice(col.as_slice()))
}

/// Transforms a *covariant* observable by a symplectic matrix at parameter
/// level: `(-Ω, B0, v0) ↦ (-Ω, SB0Sᵀ, Sv0)`. This is conjugation by the
/// metaplectic unitary of `S` combined with the matching outcome
/// relabeling, which keeps `A0 = -Ω` fixed.
///
/// # Errors
///
/// `obs` not covariant at `tol`, or `s` not symplectic at `tol`.
pub fn symplectic_transform_covariant(
    obs: &GaussianObservable,
    s: &DMatrix<f64>,
    tol: f64,
) -> Result<GaussianObservable> {
    let cls = classify(obs, tol.max(1e-12));
    if !cls.covariant {
        return Err(Error::InvalidInput(
            "symplectic transform at parameter level requires a covariant observable".into(),
        ));
    }
    if s.shape() != (obs.outcome_dim, obs.outcome_dim) {
        return Err(Error::InvalidDimension(format!(
            "symplectic must be {0}x{0}",
            obs.outcome_dim
        )));
    }
    if !crate::symplectic::is_symplectic(s, tol.max(1e-8))? {
        return Err(Error::InvalidInput("transform matrix is not symplectic".into()));
    }
    let b0 = s * &obs.b0 * s.transpose();
    Ok(GaussianObservable {
        n_modes: obs.n_modes,
        outcome_dim: obs.outcome_dim,
        a0: obs.a0.clone(),
        b0: (&b0 + b0.transpose()).scale(0.5),
        v0: s * &obs.v0,
    })
}

/// Decomposes an informationally complete observable with `M = 2N` into
/// postprocessing, symplectic transform, and classical noise over the
/// Q-function.
///
/// With `P = -A0ᵀΩ` (invertible by the rank condition), the covariant core
/// `B0_cov = P⁻¹B0P⁻ᵀ` has Williamson eigenvalues `β_k >= 1` (this is
/// exactly the positivity condition), and the observable equals the
/// `noise`-smeared, `s⁻¹`-transformed, `P`-postprocessed Q-function.
///
/// # Errors
///
/// `M ≠ 2N`; rank `A0 < 2N` (not informationally complete); or `β_k < 1 -
/// tol`, which signals a positivity violation in the input.
pub fn decompose_covariant(obs: &GaussianObservable, tol: f64) -> Result<CovariantDecomposition> {
    let dim = 2 * obs.n_modes;
    if obs.outcome_dim != dim {
        return Err(Error::InvalidDimension(format!(
            "covariant decomposition needs M = 2N, got M = {} with N = {}",
            obs.outcome_dim, obs.n_modes
        )));
    }
    let rank = numerical_rank(&obs.a0, tol);
    if rank < dim {
        return Err(Error::NotInformationallyComplete {
            rank,
            required: dim,
        });
    }
    let p = -(obs.a0.transpose() * omega_mat(obs.n_modes));
    let p_inv = p
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Inconsistent("P passed the rank test but is singular".into()))?;
    let b_cov = &p_inv * &obs.b0 * p_inv.transpose();
    let b_cov = (&b_cov + b_cov.transpose()).scale(0.5);
    let will = williamson(&b_cov, tol)?;
    for beta in &will.betas {
        if *beta < 1.0 - tol {
            return Err(Error::Inconsistent(format!(
                "symplectic eigenvalue {beta} < 1: input violates positivity"
            )));
        }
    }
    let noise_c = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            (will.betas[i / 2] - 1.0).max(0.0)
        } else {
            0.0
        }
    });
    let noise_d = &will.s * (&p_inv * &obs.v0);
    Ok(CovariantDecomposition {
        p,
        s: will.s,
        noise_c,
        noise_d,
        betas: will.betas,
    })
}
