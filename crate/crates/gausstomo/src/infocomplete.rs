//! Informational completeness: decisions for single observables and finite
//! sets, coverage diagnostics for infinite direction families, Gaussian
//! witness pairs for sets that are not informationally complete, and
//! Gaussian-state reconstruction from outcome statistics.
//!
//! The decision structure mirrors the theory of Gaussian measurements:
//!
//! * a single Gaussian observable is informationally complete iff
//!   `rank A0 = 2N` ([`ic_single`]);
//! * a *finite* set is informationally complete iff some member already is
//!   ([`ic_finite_set`]) — finite unions contribute nothing extra;
//! * an *infinite* family of sharp quadratures is informationally complete
//!   iff its direction set is dense in the projective sphere. Density is
//!   undecidable from finite data, so [`direction_coverage`] reports the
//!   quantitative surrogate: the covering radius of the sampled directions
//!   against a deterministic probe grid.
//!
//! When a finite set fails the rank criterion, [`gaussian_witness`] hunts
//! for a *Gaussian* pair of states with identical outcome statistics on
//! every member. The search is sound but incomplete: general
//! indistinguishability witnesses are non-Gaussian trace-class operators,
//! so a `None` here does not certify completeness (the rank test does).

use nalgebra::{DMatrix, DVector};

use crate::observables::{validate_observable, GaussianDistribution, GaussianObservable};
use crate::states::{state_validity, GaussianState};
use crate::symplectic::{numerical_rank, omega_mat};
use crate::{Error, Result, Validity};

/// A finite collection of Gaussian observables on a common mode count.
#[derive(Debug, Clone)]
pub struct ObservableSet {
    members: Vec<GaussianObservable>,
    n_modes: usize,
}

impl ObservableSet {
    /// Builds a set, requiring at least one member, a common mode count,
    /// and validity of every member at `tol`.
    ///
    /// # Errors
    ///
    /// Empty input, mixed mode counts, or an invalid member.
    pub fn new(members: Vec<GaussianObservable>, tol: f64) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidInput("observable set must be nonempty".into()))?;
        let n_modes = first.n_modes();
        for (idx, obs) in members.iter().enumerate() {
            if obs.n_modes() != n_modes {
                return Err(Error::InvalidDimension(format!(
                    "member {idx} acts on {} modes, expected {n_modes}",
                    obs.n_modes()
                )));
            }
            let validity = validate_observable(obs, tol)?;
            if !validity.ok {
                return Err(Error::InvalidObservable {
                    min_eig: validity.min_eig,
                });
            }
        }
        Ok(ObservableSet { members, n_modes })
    }

    /// The members, in insertion order.
    pub fn members(&self) -> &[GaussianObservable] {
        &self.members
    }

    /// Common mode count `N`.
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }
}

/// Unit directions in `R^{2N}` under antipodal identification (`u ~ -u`).
#[derive(Debug, Clone)]
pub struct DirectionSample {
    directions: Vec<DVector<f64>>,
}

impl DirectionSample {
    /// Wraps direction vectors, requiring unit norm within `1e-12` and a
    /// common even dimension.
    ///
    /// # Errors
    ///
    /// Non-unit vector or inconsistent dimensions.
    pub fn new(directions: Vec<DVector<f64>>) -> Result<Self> {
        let mut dim = None;
        for (idx, u) in directions.iter().enumerate() {
            let d = u.len();
            if d == 0 || d % 2 != 0 || *dim.get_or_insert(d) != d {
                return Err(Error::InvalidDimension(format!(
                    "direction {idx} has length {d}; directions live in a common R^2N"
                )));
            }
            if (u.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidInput(format!(
                    "direction {idx} has norm {}, expected 1",
                    u.norm()
                )));
            }
        }
        Ok(DirectionSample { directions })
    }

    /// Normalizes arbitrary nonzero vectors into a sample.
    ///
    /// # Errors
    ///
    /// A zero vector (no direction) or inconsistent dimensions.
    pub fn normalized(vectors: Vec<DVector<f64>>) -> Result<Self> {
        let mut directions = Vec::with_capacity(vectors.len());
        for (idx, v) in vectors.into_iter().enumerate() {
            let norm = v.norm();
            if norm <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "vector {idx} is zero and has no direction"
                )));
            }
            directions.push(v.unscale(norm));
        }
        DirectionSample::new(directions)
    }

    /// The unit directions.
    pub fn directions(&self) -> &[DVector<f64>] {
        &self.directions
    }
}

/// A parametrized family of single-mode quadrature directions.
#[derive(Debug, Clone)]
pub enum DirectionFamily {
    /// Rotated quadratures: direction `(-sin θ, cos θ)` per angle.
    Rotated(Vec<f64>),
    /// Squeezed rotated quadratures: direction proportional to
    /// `(-e^{-r} sin θ, e^{r} cos θ)` per `(θ, r)` pair.
    Squeezed(Vec<(f64, f64)>),
}

/// A witness that a set of observables is not informationally complete:
/// two distinct Gaussian states with identical outcome statistics on every
/// member.
#[derive(Debug, Clone)]
pub struct WitnessPair {
    /// First state of the indistinguishable pair.
    pub state_a: GaussianState,
    /// Second state; differs from `state_a` in displacement or covariance.
    pub state_b: GaussianState,
    /// The set both states fool.
    pub certified_against: ObservableSet,
}

/// Orthonormal basis of the span of the union of outcome-direction spaces
/// `Σ_j col(A0ʲ)`.
#[derive(Debug, Clone)]
pub struct SubspaceSpan {
    /// Numerical dimension of the span.
    pub dimension: usize,
    /// `2N x dimension` matrix with orthonormal columns spanning the union.
    pub basis: DMatrix<f64>,
}

/// Result of a Gaussian-state reconstruction.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// The minimum-norm least-squares estimate. Not re-validated: see
    /// `validity` for whether it satisfies the uncertainty relation.
    pub state: GaussianState,
    /// Uncertainty-relation check of the estimate (can fail for noisy or
    /// inconsistent input statistics).
    pub validity: Validity,
    /// Euclidean norm of the constraint residual at the estimate.
    pub residual: f64,
    /// Numerical rank of the constraint map on the `(m, V)` parameters.
    pub rank: usize,
    /// Parameters not determined by the data: `dim - rank` with
    /// `dim = 2N + N(2N+1)`. Zero means the statistics identify the state.
    pub nullspace_dim: usize,
}

/// Single-observable informational completeness: `rank A0 = 2N`.
///
/// The rank is numerical (singular values above `tol` relative to the
/// largest); validity of the observable is not re-checked here.
pub fn ic_single(obs: &GaussianObservable, tol: f64) -> bool {
    numerical_rank(obs.a0(), tol) == 2 * obs.n_modes()
}

/// Finite-set informational completeness: true iff some member passes
/// [`ic_single`]. Finite unions of non-complete Gaussian observables are
/// never informationally complete, so the disjunction is the whole test.
pub fn ic_finite_set(set: &ObservableSet, tol: f64) -> bool {
    set.members.iter().any(|obs| ic_single(obs, tol))
}

/// Orthonormal basis of `Σ_j col(A0ʲ)` with its numerical dimension.
pub fn subspace_union_span(set: &ObservableSet, tol: f64) -> SubspaceSpan {
    let rows = 2 * set.n_modes;
    let total: usize = set.members.iter().map(|o| o.outcome_dim()).sum();
    let mut stacked = DMatrix::<f64>::zeros(rows, total);
    let mut col = 0;
    for obs in &set.members {
        stacked.view_mut((0, col), (rows, obs.outcome_dim())).copy_from(obs.a0());
        col += obs.outcome_dim();
    }
    let svd = stacked.svd(true, false);
    let smax = svd.singular_values.max();
    let rank = if smax <= 0.0 {
        0
    } else {
        svd.singular_values.iter().filter(|s| **s > tol * smax).count()
    };
    let u = svd.u.expect("u was requested");
    let basis = u.columns(0, rank).into_owned();
    SubspaceSpan {
        dimension: rank,
        basis,
    }
}

/// Direction vectors of the named quadrature family, normalized.
///
/// # Errors
///
/// Empty parameter list.
pub fn family_directions(family: &DirectionFamily) -> Result<DirectionSample> {
    let raw: Vec<DVector<f64>> = match family {
        DirectionFamily::Rotated(thetas) => thetas
            .iter()
            .map(|t| DVector::from_vec(vec![-t.sin(), t.cos()]))
            .collect(),
        DirectionFamily::Squeezed(pairs) => pairs
            .iter()
            .map(|(t, r)| DVector::from_vec(vec![-(-r).exp() * t.sin(), r.exp() * t.cos()]))
            .collect(),
    };
    if raw.is_empty() {
        return Err(Error::InvalidInput("direction family has no parameters".into()));
    }
    DirectionSample::normalized(raw)
}

/// Covering radius of the sample against a deterministic probe grid on the
/// projective unit sphere: the largest geodesic distance
/// `arccos |u·v|` from a probe point to its nearest sample direction.
///
/// Zero covering radius in the limit of arbitrarily fine probes is the
/// finite-sample surrogate for density of the direction family. The result
/// is monotone non-increasing in the sample and invariant under negating
/// directions.
///
/// # Errors
///
/// Empty sample or zero probe grid size.
pub fn direction_coverage(sample: &DirectionSample, probe_grid_size: usize) -> Result<f64> {
    let dirs = &sample.directions;
    let first = dirs
        .first()
        .ok_or_else(|| Error::InvalidInput("cannot cover with an empty sample".into()))?;
    if probe_grid_size == 0 {
        return Err(Error::InvalidInput("probe grid must have at least one point".into()));
    }
    let dim = first.len();
    let mut worst = 0.0f64;
    for k in 0..probe_grid_size {
        let probe = probe_point(dim, k, probe_grid_size);
        let mut best_dot = 0.0f64;
        for u in dirs {
            best_dot = best_dot.max(probe.dot(u).abs());
        }
        worst = worst.max(best_dot.min(1.0).acos());
    }
    Ok(worst)
}

/// `k`-th point of the deterministic probe grid of `total` points on the
/// unit sphere in `R^dim`.
///
/// For the circle the grid is uniform on `[0, π)` (projective line). In
/// higher dimensions it is a Kronecker lattice (fractional parts of
/// multiples of square-root irrationals) pushed onto the sphere through the
/// Box–Muller map — a low-discrepancy Fibonacci-type construction.
fn probe_point(dim: usize, k: usize, total: usize) -> DVector<f64> {
    if dim == 2 {
        let t = std::f64::consts::PI * (k as f64 + 0.5) / total as f64;
        return DVector::from_vec(vec![t.cos(), t.sin()]);
    }
    const ROOTS: [f64; 8] = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0];
    let mut coords = Vec::with_capacity(dim);
    let mut pair = 0;
    while coords.len() < dim {
        let z1 = ((k as f64 + 0.5) * ROOTS[2 * pair % ROOTS.len()].sqrt()).fract();
        let z2 = ((k as f64 + 0.5) * ROOTS[(2 * pair + 1) % ROOTS.len()].sqrt()).fract();
        let radius = (-2.0 * z1.max(1e-300).ln()).sqrt();
        let angle = std::f64::consts::TAU * z2;
        coords.push(radius * angle.cos());
        coords.push(radius * angle.sin());
        pair += 1;
    }
    coords.truncate(dim);
    let v = DVector::from_vec(coords);
    let norm = v.norm();
    if norm > 0.0 {
        v.unscale(norm)
    } else {
        let mut e = DVector::zeros(dim);
        e[0] = 1.0;
        e
    }
}

/// Searches for a pair of Gaussian states with identical outcome statistics
/// on every member of `set`.
///
/// Outcome laws depend on the state through `A0ʲᵀΩm` (means) and
/// `(ΩA0ʲ)ᵀV(ΩA0ʲ)` (covariances), so the search space splits: a
/// displacement witness needs `δ ≠ 0` in the joint kernel of the mean maps,
/// a covariance witness needs a symmetric `Δ ≠ 0` annihilated by all the
/// quadratic maps. Displacement witnesses are tried first. The base state
/// uses `V = 2I`, whose slack above the uncertainty boundary leaves room
/// for `±t` covariance steps; `t` is half the guaranteed-feasible step.
///
/// `None` means no *Gaussian* witness direction exists; it does not certify
/// informational completeness (general witnesses are non-Gaussian).
pub fn gaussian_witness(set: &ObservableSet, tol: f64) -> Result<Option<WitnessPair>> {
    let n = set.n_modes;
    let dim = 2 * n;
    let om = omega_mat(n);
    let base_v = DMatrix::<f64>::identity(dim, dim).scale(2.0);

    // Displacement witness: stack the mean maps A0ʲᵀΩ and look for a kernel.
    let total_rows: usize = set.members.iter().map(|o| o.outcome_dim()).sum();
    let mut mean_map = DMatrix::<f64>::zeros(total_rows, dim);
    let mut row = 0;
    for obs in &set.members {
        let block = obs.a0().transpose() * &om;
        mean_map.view_mut((row, 0), (obs.outcome_dim(), dim)).copy_from(&block);
        row += obs.outcome_dim();
    }
    let kernel = nullspace(&mean_map, tol);
    if kernel.ncols() > 0 {
        let delta = kernel.column(0).into_owned();
        let state_a = GaussianState::new(DVector::zeros(dim), base_v.clone(), tol)?;
        let state_b = GaussianState::new(delta, base_v, tol)?;
        return Ok(Some(WitnessPair {
            state_a,
            state_b,
            certified_against: set.clone(),
        }));
    }

    // Covariance witness: the quadratic constraint map on Sym(2N) in the
    // basis {E_kk} ∪ {E_kl + E_lk : k < l}.
    let sym_dim = n * (dim + 1);
    let pairs: Vec<(usize, usize)> = (0..dim)
        .flat_map(|k| (k..dim).map(move |l| (k, l)))
        .collect();
    let total_rows: usize = set
        .members
        .iter()
        .map(|o| o.outcome_dim() * (o.outcome_dim() + 1) / 2)
        .collect::<Vec<_>>()
        .iter()
        .sum();
    let mut quad_map = DMatrix::<f64>::zeros(total_rows, sym_dim);
    let mut row = 0;
    for obs in &set.members {
        let g = &om * obs.a0(); // columns g_α
        let m_out = obs.outcome_dim();
        for alpha in 0..m_out {
            for beta in alpha..m_out {
                for (col, &(k, l)) in pairs.iter().enumerate() {
                    let v = if k == l {
                        g[(k, alpha)] * g[(k, beta)]
                    } else {
                        g[(k, alpha)] * g[(l, beta)] + g[(l, alpha)] * g[(k, beta)]
                    };
                    quad_map[(row, col)] = v;
                }
                row += 1;
            }
        }
    }
    let kernel = nullspace(&quad_map, tol);
    if kernel.ncols() == 0 {
        return Ok(None);
    }
    // Rebuild the symmetric perturbation with unit Frobenius norm.
    let coeffs = kernel.column(0);
    let mut delta = DMatrix::<f64>::zeros(dim, dim);
    for (col, &(k, l)) in pairs.iter().enumerate() {
        delta[(k, l)] = coeffs[col];
        delta[(l, k)] = coeffs[col];
    }
    let fro = delta.norm();
    delta /= fro;
    // Spectral norm bounds the feasible step: min eig(2I + iΩ ± tΔ) ≥ 1 - t‖Δ‖₂.
    let spectral = delta
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, e| acc.max(e.abs()));
    let t = 0.5 / spectral.max(1e-12);
    let base_m = DVector::zeros(dim);
    let state_a = GaussianState::new(base_m.clone(), &base_v + delta.scale(t), tol)?;
    let state_b = GaussianState::new(base_m, &base_v - delta.scale(t), tol)?;
    Ok(Some(WitnessPair {
        state_a,
        state_b,
        certified_against: set.clone(),
    }))
}

/// Orthonormal basis of the (numerical) nullspace of `a`, as columns.
///
/// The input is padded with zero rows so the thin SVD produces a complete
/// set of right singular vectors even for wide matrices.
fn nullspace(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let cols = a.ncols();
    let padded = if a.nrows() < cols {
        let mut p = DMatrix::<f64>::zeros(cols, cols);
        p.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("v_t was requested");
    let smax = svd.singular_values.max();
    let threshold = tol.max(1e-12) * smax.max(1.0);
    let null_rows: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= threshold)
        .collect();
    let mut basis = DMatrix::<f64>::zeros(cols, null_rows.len());
    for (j, &i) in null_rows.iter().enumerate() {
        basis.column_mut(j).copy_from(&v_t.row(i).transpose());
    }
    basis
}

/// Least-squares reconstruction of a Gaussian state from exact or measured
/// outcome statistics.
///
/// Each observation contributes linear constraints on `(m, V)`: means give
/// `-A0ᵀΩ m = μ + v0`, covariances give `½ g_αᵀ V g_β = Σ_{αβ} - ½ B0_{αβ}`
/// with `g = ΩA0`. The stacked system is solved by minimum-norm least
/// squares; rank and undetermined-parameter count are reported, and for a
/// single informationally complete observable with `M = 2N` the system is
/// square in `V` and the solve reproduces the exact closed-form inversion.
///
/// # Errors
///
/// Empty observations, inconsistent mode counts, or distribution dimensions
/// that do not match their observable.
pub fn reconstruct_gaussian(
    observations: &[(GaussianObservable, GaussianDistribution)],
    tol: f64,
) -> Result<Reconstruction> {
    let first = observations
        .first()
        .ok_or_else(|| Error::InvalidInput("reconstruction needs at least one observation".into()))?;
    let n = first.0.n_modes();
    let dim = 2 * n;
    let sym_dim = n * (dim + 1);
    let param_dim = dim + sym_dim;
    let pairs: Vec<(usize, usize)> = (0..dim)
        .flat_map(|k| (k..dim).map(move |l| (k, l)))
        .collect();

    let mut rows = 0;
    for (obs, dist) in observations {
        if obs.n_modes() != n {
            return Err(Error::InvalidDimension(format!(
                "observable acts on {} modes, expected {n}",
                obs.n_modes()
            )));
        }
        if dist.dim() != obs.outcome_dim() {
            return Err(Error::InvalidDimension(format!(
                "distribution dimension {} does not match outcome dimension {}",
                dist.dim(),
                obs.outcome_dim()
            )));
        }
        let m_out = obs.outcome_dim();
        rows += m_out + m_out * (m_out + 1) / 2;
    }

    let om = omega_mat(n);
    let mut a_ls = DMatrix::<f64>::zeros(rows, param_dim);
    let mut b_ls = DVector::<f64>::zeros(rows);
    let mut row = 0;
    for (obs, dist) in observations {
        let m_out = obs.outcome_dim();
        let mean_block = -(obs.a0().transpose() * &om);
        for i in 0..m_out {
            for j in 0..dim {
                a_ls[(row, j)] = mean_block[(i, j)];
            }
            b_ls[row] = dist.mean[i] + obs.v0()[i];
            row += 1;
        }
        let g = &om * obs.a0();
        for alpha in 0..m_out {
            for beta in alpha..m_out {
                for (col, &(k, l)) in pairs.iter().enumerate() {
                    let coeff = if k == l {
                        0.5 * g[(k, alpha)] * g[(k, beta)]
                    } else {
                        0.5 * (g[(k, alpha)] * g[(l, beta)] + g[(l, alpha)] * g[(k, beta)])
                    };
                    a_ls[(row, dim + col)] = coeff;
                }
                b_ls[row] = dist.cov[(alpha, beta)] - 0.5 * obs.b0()[(alpha, beta)];
                row += 1;
            }
        }
    }

    let svd = a_ls.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let threshold = tol.max(1e-12) * smax.max(1.0);
    let rank = svd.singular_values.iter().filter(|s| **s > threshold).count();
    let theta = svd
        .solve(&b_ls, threshold)
        .map_err(|e| Error::Inconsistent(format!("least-squares solve failed: {e}")))?;
    let residual = (&a_ls * &theta - &b_ls).norm();

    let m_est = theta.rows(0, dim).into_owned();
    let mut v_est = DMatrix::<f64>::zeros(dim, dim);
    for (col, &(k, l)) in pairs.iter().enumerate() {
        v_est[(k, l)] = theta[dim + col];
        v_est[(l, k)] = theta[dim + col];
    }
    let validity = state_validity(&m_est, &v_est, tol)?;
    Ok(Reconstruction {
        state: GaussianState::from_parts_unchecked(m_est, v_est),
        validity,
        residual,
        rank,
        nullspace_dim: param_dim - rank,
    })
}
