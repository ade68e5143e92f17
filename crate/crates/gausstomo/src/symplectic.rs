//! Symplectic linear algebra: the form `Ω_N`, symplectic tests, Williamson
//! normal form, and tolerance-aware Hermitian PSD checks.
//!
//! Every validity condition in this crate (uncertainty relation, channel
//! complete positivity, observable positivity) reduces to "is this Hermitian
//! matrix positive semidefinite up to a tolerance", and every structural
//! statement reduces to algebra against the fixed form
//!
//! ```text
//! Ω_N = ⊕_{k=1}^{N} [[0, 1], [-1, 0]]
//! ```
//!
//! in the interleaved quadrature ordering `(Q_1, P_1, ..., Q_N, P_N)`.
//! Boundary cases are the norm, not the exception — the Q-function POVM and
//! every pure state sit exactly on the PSD boundary — so all checks here
//! accept `min eigenvalue >= -tol` rather than testing strict positivity.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

/// The standard symplectic form `Ω_N` on `N` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n_modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    /// Number of modes `N`.
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// The `2N x 2N` matrix `Ω_N`.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Consumes the form, returning the matrix.
    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }
}

/// Williamson normal form of a positive-definite matrix `B`:
/// `S B Sᵀ = ⊕_k β_k I_2` with `S` symplectic.
#[derive(Debug, Clone)]
pub struct WilliamsonResult {
    /// The symplectic congruence `S`.
    pub s: DMatrix<f64>,
    /// Symplectic eigenvalues `β_k`, sorted descending. The decomposition is
    /// unique only in this multiset; `S` carries residual symplectic-orthogonal
    /// freedom.
    pub betas: Vec<f64>,
}

impl WilliamsonResult {
    /// The diagonal normal form `⊕_k β_k I_2`.
    pub fn normal_form(&self) -> DMatrix<f64> {
        let dim = 2 * self.betas.len();
        DMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                self.betas[i / 2]
            } else {
                0.0
            }
        })
    }
}

/// Builds the symplectic form on `n_modes` modes.
///
/// # Errors
///
/// `n_modes = 0` is an invalid dimension.
pub fn omega(n_modes: usize) -> Result<SymplecticForm> {
    if n_modes == 0 {
        return Err(Error::InvalidDimension(
            "symplectic form needs at least one mode".into(),
        ));
    }
    Ok(SymplecticForm {
        n_modes,
        matrix: omega_mat(n_modes),
    })
}

/// Internal infallible construction of `Ω_N` for already-validated `N >= 1`.
pub(crate) fn omega_mat(n_modes: usize) -> DMatrix<f64> {
    let dim = 2 * n_modes;
    DMatrix::from_fn(dim, dim, |i, j| {
        if i / 2 != j / 2 {
            0.0
        } else if i % 2 == 0 && j % 2 == 1 {
            1.0
        } else if i % 2 == 1 && j % 2 == 0 {
            -1.0
        } else {
            0.0
        }
    })
}

/// Tests `SᵀΩS = Ω` entrywise at tolerance `tol`.
///
/// # Errors
///
/// Non-square or odd-dimensional input.
pub fn is_symplectic(s: &DMatrix<f64>, tol: f64) -> Result<bool> {
    let dim = check_even_square_f(s)?;
    let om = omega_mat(dim / 2);
    let resid = s.transpose() * &om * s - om;
    Ok(max_abs(&resid) <= tol)
}

/// Tests positive semidefiniteness of the Hermitian part of `m` at
/// tolerance `tol`: true iff the minimum eigenvalue of `(m + m†)/2` is
/// `>= -tol`.
///
/// # Errors
///
/// Non-square input, or negative `tol`.
pub fn psd_check(m: &DMatrix<Complex64>, tol: f64) -> Result<bool> {
    if tol < 0.0 {
        return Err(Error::InvalidInput("psd_check tolerance must be >= 0".into()));
    }
    Ok(hermitian_min_eig(m)? >= -tol)
}

/// Numerical rank: the number of singular values above `tol` times the
/// largest one. Zero matrices have rank 0 regardless of `tol`.
pub fn numerical_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.max();
    if smax <= 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > tol * smax).count()
}

/// Minimum eigenvalue of the Hermitian part `(m + m†)/2`.
///
/// This is the diagnostic behind every validity verdict in the crate.
///
/// # Errors
///
/// Non-square input.
pub fn hermitian_min_eig(m: &DMatrix<Complex64>) -> Result<f64> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::InvalidDimension(format!(
            "expected a nonempty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    Ok(eig.eigenvalues.min())
}

/// Williamson decomposition of a symmetric positive-definite `B`:
/// returns `(S, β)` with `S B Sᵀ = ⊕_k β_k I_2` and `S` symplectic.
///
/// The algorithm works entirely with symmetric eigenproblems. With
/// `W = B^{1/2}`, the antisymmetric matrix `A = W⁻¹ Ω W⁻¹` has singular
/// values `λ_k = 1/β_k`, each twice. Eigenvectors of `K = AᵀA` give, pair by
/// pair, an orthonormal `Q` with `Qᵀ A Q = ⊕ λ_k ω`; then
/// `S = D^{1/2} Qᵀ W⁻¹` with `D = ⊕ β_k I_2` satisfies both invariants by
/// construction. Eigenvalues of `K` are clustered before pairing so exact
/// multiplicities (isotropic `B`) do not destabilize the eigenvectors.
///
/// # Errors
///
/// `B` not symmetric within `tol` (invalid input), not positive definite
/// (decomposition error), or not of even nonzero dimension.
pub fn williamson(b: &DMatrix<f64>, tol: f64) -> Result<WilliamsonResult> {
    let dim = check_even_square_f(b)?;
    let n = dim / 2;
    if !is_symmetric(b, tol) {
        return Err(Error::InvalidInput(
            "williamson input must be symmetric".into(),
        ));
    }
    let b_sym = (b + b.transpose()).scale(0.5);
    let eig = b_sym.symmetric_eigen();
    let d_max = eig.eigenvalues.max();
    if eig.eigenvalues.min() <= tol.max(1e-14) * d_max.max(1.0) {
        return Err(Error::NotPositiveDefinite(format!(
            "minimum eigenvalue {:.3e}",
            eig.eigenvalues.min()
        )));
    }
    // W^{-1} = B^{-1/2} from the same eigenbasis.
    let d_inv_half = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| 1.0 / x.sqrt()));
    let w_inv = &eig.eigenvectors * d_inv_half * eig.eigenvectors.transpose();
    let a = &w_inv * omega_mat(n) * &w_inv;
    let k = a.transpose() * &a;
    let keig = k.symmetric_eigen();

    // Sort eigenpairs of K ascending (final β = 1/λ comes out descending).
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| keig.eigenvalues[i].total_cmp(&keig.eigenvalues[j]));
    let vals: Vec<f64> = order.iter().map(|&i| keig.eigenvalues[i]).collect();
    let vecs: Vec<DVector<f64>> = order
        .iter()
        .map(|&i| keig.eigenvectors.column(i).into_owned())
        .collect();

    // Cluster doubly-degenerate eigenvalues. True pairs agree to machine
    // precision; the threshold only needs to keep well-separated symplectic
    // eigenvalues apart.
    let scale = vals.last().copied().unwrap_or(1.0).max(1.0);
    let gap = 1e-8 * scale;
    let mut clusters: Vec<(usize, usize)> = Vec::new(); // half-open index ranges
    let mut start = 0;
    for i in 1..=dim {
        if i == dim || vals[i] - vals[i - 1] > gap {
            clusters.push((start, i));
            start = i;
        }
    }
    // A cluster split across a true pair would have odd size; merge forward.
    let mut merged: Vec<(usize, usize)> = Vec::new();
    let mut iter = clusters.into_iter().peekable();
    while let Some((s0, e0)) = iter.next() {
        if (e0 - s0) % 2 == 0 {
            merged.push((s0, e0));
        } else if let Some((_, e1)) = iter.next() {
            merged.push((s0, e1));
        } else {
            return Err(Error::Inconsistent(
                "odd eigenvalue cluster in williamson pairing".into(),
            ));
        }
    }

    // Within each cluster, peel off (y, x) pairs with y = Ax/|Ax|; the
    // antisymmetry of A makes x ⊥ y automatic, and re-orthogonalization
    // against already-chosen columns keeps Q orthonormal.
    let mut q_cols: Vec<DVector<f64>> = Vec::with_capacity(dim);
    let mut lambdas: Vec<f64> = Vec::with_capacity(n);
    for &(s0, e0) in &merged {
        let m_pairs = (e0 - s0) / 2;
        let mut chosen: Vec<DVector<f64>> = Vec::with_capacity(2 * m_pairs);
        for _ in 0..m_pairs {
            // Most-independent remaining basis vector of the cluster. Ties
            // are broken by visiting each adjacent index pair second-first,
            // which makes S come out as the identity for B already in
            // normal form (the eigenvectors are then coordinate vectors and
            // x = e_{2k+1} pairs with y = Ωe_{2k+1} ∝ e_{2k}).
            let mut best: Option<(f64, DVector<f64>)> = None;
            for idx in 0..(e0 - s0) {
                // clusters have even size, so idx ^ 1 stays in range
                let u = &vecs[s0 + (idx ^ 1)];
                let mut r = u.clone();
                for c in &chosen {
                    let coeff = c.dot(&r);
                    r -= c.scale(coeff);
                }
                let norm = r.norm();
                if best.as_ref().is_none_or(|(b0, _)| norm > *b0) {
                    best = Some((norm, r));
                }
            }
            let (norm, r) = best.expect("cluster is nonempty");
            if norm < 1e-6 {
                return Err(Error::Inconsistent(
                    "degenerate basis in williamson pairing".into(),
                ));
            }
            let x = r.scale(1.0 / norm);
            let y_raw = &a * &x;
            let lambda = y_raw.norm();
            if lambda <= 0.0 {
                return Err(Error::Inconsistent(
                    "zero singular value in williamson pairing".into(),
                ));
            }
            let mut y = y_raw.scale(1.0 / lambda);
            for c in chosen.iter().chain(std::iter::once(&x)) {
                let coeff = c.dot(&y);
                y -= c.scale(coeff);
            }
            let y_norm = y.norm();
            if y_norm < 0.5 {
                return Err(Error::Inconsistent(
                    "lost orthogonality in williamson pairing".into(),
                ));
            }
            y = y.scale(1.0 / y_norm);
            // Column order (y, x) realizes the block [[0, λ], [-λ, 0]] = λω.
            chosen.push(y.clone());
            chosen.push(x.clone());
            q_cols.push(y);
            q_cols.push(x);
            lambdas.push(lambda);
        }
    }

    let q = DMatrix::from_columns(&q_cols);
    let d_half = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            1.0 / lambdas[i / 2].sqrt()
        } else {
            0.0
        }
    });
    let s = d_half * q.transpose() * w_inv;
    let betas: Vec<f64> = lambdas.iter().map(|l| 1.0 / l).collect();
    Ok(WilliamsonResult { s, betas })
}

/// Largest absolute entry of a real matrix (max norm).
pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Largest absolute entry of a complex matrix.
pub(crate) fn max_abs_c(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.norm()))
}

/// Entrywise symmetry test.
pub(crate) fn is_symmetric(m: &DMatrix<f64>, tol: f64) -> bool {
    m.nrows() == m.ncols() && max_abs(&(m - m.transpose())) <= tol
}

/// Lifts a real matrix into the complex field.
pub(crate) fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Checks that `m` is square with even, nonzero dimension; returns it.
pub(crate) fn check_even_square_f(m: &DMatrix<f64>) -> Result<usize> {
    let (r, c) = m.shape();
    if r != c || r == 0 || r % 2 != 0 {
        return Err(Error::InvalidDimension(format!(
            "expected a 2Nx2N matrix, got {r}x{c}"
        )));
    }
    Ok(r)
}
