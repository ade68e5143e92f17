//! Seeded generators of random symplectic matrices, states, observables and
//! channels.
//!
//! These exist for property tests and fuzzing: every generator takes an
//! explicit [`rand::Rng`] so callers control reproducibility, and every
//! output is valid by construction (symplectic to machine precision, states
//! satisfying the uncertainty relation, observables satisfying positivity).

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channels::{channel_from_dilation, DilationSpec, GaussianChannel};
use crate::observables::GaussianObservable;
use crate::states::GaussianState;
use crate::symplectic::omega_mat;

/// Random `2N x 2N` symplectic matrix, built as a product of single-mode
/// rotations and squeezers, two-mode mixers, and (occasionally) `Ω` itself.
/// Exactly symplectic up to rounding in the matrix products.
pub fn random_symplectic<R: Rng + ?Sized>(n_modes: usize, rng: &mut R) -> DMatrix<f64> {
    let dim = 2 * n_modes;
    let mut s = DMatrix::<f64>::identity(dim, dim);
    let factors = 4 + 2 * n_modes;
    for _ in 0..factors {
        let choice = rng.random_range(0..4u8);
        let factor = match choice {
            0 => mode_rotation(n_modes, rng.random_range(0..n_modes), rng.random_range(0.0..std::f64::consts::TAU)),
            1 => mode_squeeze(n_modes, rng.random_range(0..n_modes), rng.random_range(-1.0..1.0)),
            2 if n_modes >= 2 => {
                let j = rng.random_range(0..n_modes);
                let mut k = rng.random_range(0..n_modes - 1);
                if k >= j {
                    k += 1;
                }
                pair_mix(n_modes, j, k, rng.random_range(0.0..std::f64::consts::TAU))
            }
            _ => omega_mat(n_modes),
        };
        s = factor * s;
    }
    s
}

/// Random symmetric positive-definite matrix `G Gᵀ/dim + εI`, randomly
/// scaled. Strictly PD with spread-out spectrum.
pub fn random_spd<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<f64> {
    let g: DMatrix<f64> = DMatrix::from_fn(dim, dim, |_, _| StandardNormal.sample(rng));
    let base = (&g * g.transpose()).scale(1.0 / dim as f64)
        + DMatrix::<f64>::identity(dim, dim).scale(0.1);
    let scale: f64 = rng.random_range(-1.0f64..1.0).exp();
    base.scale(scale)
}

/// Random valid Gaussian state: a symplectically transformed vacuum
/// (pure, on the uncertainty boundary), optionally blurred by classical
/// noise, with a normally distributed displacement.
pub fn random_state<R: Rng + ?Sized>(n_modes: usize, rng: &mut R) -> GaussianState {
    let dim = 2 * n_modes;
    let s = random_symplectic(n_modes, rng);
    let mut v = &s * s.transpose();
    if rng.random_bool(0.5) {
        // classical (PSD) noise keeps validity: (V + Y) + iΩ ⪰ V + iΩ ⪰ 0
        let g: DMatrix<f64> = DMatrix::from_fn(dim, dim, |_, _| StandardNormal.sample(rng));
        v += (&g * g.transpose()).scale(0.3 / dim as f64);
    }
    v = (&v + v.transpose()).scale(0.5);
    let m = DVector::from_fn(dim, |_, _| {
        let z: f64 = StandardNormal.sample(rng);
        1.5 * z
    });
    GaussianState::new(m, v, 1e-9).expect("construction is valid by design")
}

/// Random valid Gaussian observable with `M`-dimensional outcomes.
///
/// `A0` is normally distributed (with an occasional rank-1 degradation so
/// commutative cases appear), and `B0 = GGᵀ/M + ‖A0ᵀΩA0‖_F·I` dominates the
/// symplectic skew term, which makes positivity hold by construction.
pub fn random_observable<R: Rng + ?Sized>(
    n_modes: usize,
    outcome_dim: usize,
    rng: &mut R,
) -> GaussianObservable {
    let rows = 2 * n_modes;
    let m = outcome_dim;
    let mut a0: DMatrix<f64> = DMatrix::from_fn(rows, m, |_, _| StandardNormal.sample(rng));
    if m >= 2 && rng.random_bool(0.25) {
        // rank-1 (hence commutative) branch
        let u: DVector<f64> = DVector::from_fn(rows, |_, _| StandardNormal.sample(rng));
        let w: DVector<f64> = DVector::from_fn(m, |_, _| StandardNormal.sample(rng));
        a0 = &u * w.transpose();
    }
    let skew = a0.transpose() * omega_mat(n_modes) * &a0;
    let shift = skew.norm();
    let g: DMatrix<f64> = DMatrix::from_fn(m, m, |_, _| StandardNormal.sample(rng));
    let b0 = (&g * g.transpose()).scale(1.0 / m as f64)
        + DMatrix::<f64>::identity(m, m).scale(shift);
    let b0 = (&b0 + b0.transpose()).scale(0.5);
    let v0 = DVector::from_fn(m, |_, _| StandardNormal.sample(rng));
    GaussianObservable::new(a0, b0, v0, 1e-9).expect("construction is valid by design")
}

/// Random informationally complete observable with phase-space outcomes
/// (`M = 2N`): resamples until `A0` is well-conditioned, so the rank
/// condition holds with a comfortable margin.
pub fn random_ic_observable<R: Rng + ?Sized>(n_modes: usize, rng: &mut R) -> GaussianObservable {
    let dim = 2 * n_modes;
    let a0 = loop {
        let cand: DMatrix<f64> = DMatrix::from_fn(dim, dim, |_, _| StandardNormal.sample(rng));
        let sv = cand.clone().svd(false, false).singular_values;
        if sv.min() > 0.1 * sv.max() {
            break cand;
        }
    };
    let skew = a0.transpose() * omega_mat(n_modes) * &a0;
    let shift = skew.norm();
    let g: DMatrix<f64> = DMatrix::from_fn(dim, dim, |_, _| StandardNormal.sample(rng));
    let b0 = (&g * g.transpose()).scale(1.0 / dim as f64)
        + DMatrix::<f64>::identity(dim, dim).scale(shift);
    let b0 = (&b0 + b0.transpose()).scale(0.5);
    let v0 = DVector::from_fn(dim, |_, _| StandardNormal.sample(rng));
    GaussianObservable::new(a0, b0, v0, 1e-9).expect("construction is valid by design")
}

/// Random unitary dilation: a random symplectic coupling of `system_modes`
/// system modes with an `ancilla_modes`-mode random Gaussian ancilla
/// (`ancilla_modes = 0` omits the ancilla), random displacement, keeping
/// `kept_modes` of the outputs.
///
/// # Panics
///
/// When `kept_modes` is 0 or exceeds `system_modes + ancilla_modes`, or
/// `system_modes` is 0 — programmer error in test setup.
pub fn random_dilation<R: Rng + ?Sized>(
    system_modes: usize,
    ancilla_modes: usize,
    kept_modes: usize,
    rng: &mut R,
) -> DilationSpec {
    let total = system_modes + ancilla_modes;
    let s = random_symplectic(total, rng);
    let d = DVector::from_fn(2 * total, |_, _| {
        let z: f64 = StandardNormal.sample(rng);
        1.5 * z
    });
    let ancilla = if ancilla_modes == 0 {
        None
    } else {
        Some(random_state(ancilla_modes, rng))
    };
    DilationSpec::new(s, d, ancilla, kept_modes, 1e-9).expect("construction is valid by design")
}

/// Random valid Gaussian channel from `in_modes` to `out_modes`, realized
/// through a random unitary dilation (hence completely positive by
/// construction).
pub fn random_channel<R: Rng + ?Sized>(
    in_modes: usize,
    out_modes: usize,
    rng: &mut R,
) -> GaussianChannel {
    // Enough ancilla modes that the kept count fits, plus one for noise.
    let ancilla_modes = (out_modes + 1).saturating_sub(in_modes).max(1);
    let spec = random_dilation(in_modes, ancilla_modes, out_modes, rng);
    channel_from_dilation(&spec).expect("construction is valid by design")
}

/// Rotation by `theta` in mode `k`, identity elsewhere. Any unit-determinant
/// 2x2 block is symplectic on its own mode.
fn mode_rotation(n_modes: usize, k: usize, theta: f64) -> DMatrix<f64> {
    let mut s = DMatrix::<f64>::identity(2 * n_modes, 2 * n_modes);
    let (c, sn) = (theta.cos(), theta.sin());
    s[(2 * k, 2 * k)] = c;
    s[(2 * k, 2 * k + 1)] = sn;
    s[(2 * k + 1, 2 * k)] = -sn;
    s[(2 * k + 1, 2 * k + 1)] = c;
    s
}

/// Squeezer `diag(e^r, e^{-r})` in mode `k`.
fn mode_squeeze(n_modes: usize, k: usize, r: f64) -> DMatrix<f64> {
    let mut s = DMatrix::<f64>::identity(2 * n_modes, 2 * n_modes);
    s[(2 * k, 2 * k)] = r.exp();
    s[(2 * k + 1, 2 * k + 1)] = (-r).exp();
    s
}

/// Beam-splitter-type mixer between modes `j` and `k`: rotates the two
/// modes' quadrature planes into each other with a common angle.
fn pair_mix(n_modes: usize, j: usize, k: usize, theta: f64) -> DMatrix<f64> {
    let mut s = DMatrix::<f64>::identity(2 * n_modes, 2 * n_modes);
    let (c, sn) = (theta.cos(), theta.sin());
    for off in 0..2 {
        let (a, b) = (2 * j + off, 2 * k + off);
        s[(a, a)] = c;
        s[(a, b)] = sn;
        s[(b, a)] = -sn;
        s[(b, b)] = c;
    }
    s
}
