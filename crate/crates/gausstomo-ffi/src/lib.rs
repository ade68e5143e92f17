//! C ABI for the gausstomo library.
//!
//! Objects cross the boundary as opaque handles ([`GtState`],
//! [`GtObservable`], [`GtChannel`]) that this library allocates and frees;
//! numeric data crosses as caller-allocated row-major `double` buffers
//! whose lengths are fixed by the object's dimensions (`2N` phase-space
//! coordinates per mode, `M` outcome coordinates). Every function returns
//! a [`GtStatus`]; out-parameters are written only when the status is
//! `Ok`. Panics never unwind across the boundary — they surface as
//! `Internal`.
//!
//! The matching C header is generated into `include/gausstomo.h` at build
//! time.

use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use nalgebra::{DMatrix, DVector};

use gausstomo::channels::{
    apply_channel, channel_from_observable, observable_from_channel, GaussianChannel,
};
use gausstomo::observables::{classify, pushforward, validate_observable, GaussianObservable};
use gausstomo::states::{state_validity, weyl_transform, GaussianState};
use gausstomo::symplectic::williamson;
use gausstomo::Error;

/// Call outcome. Nonzero values are failures; no out-parameter is written
/// unless the call returns `Ok`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GtStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Array or matrix dimensions are inconsistent.
    InvalidDimension = 2,
    /// An argument is malformed for reasons other than shape.
    InvalidInput = 3,
    /// A state violates the uncertainty relation.
    InvalidState = 4,
    /// A channel fails complete positivity.
    InvalidChannel = 5,
    /// An observable fails its positivity condition.
    InvalidObservable = 6,
    /// The operation requires an informationally complete observable.
    NotInformationallyComplete = 7,
    /// Unexpected internal failure (including a caught panic).
    Internal = 8,
}

impl From<&Error> for GtStatus {
    fn from(err: &Error) -> Self {
        match err {
            Error::InvalidDimension(_) => GtStatus::InvalidDimension,
            Error::InvalidInput(_) | Error::InvalidNoise(_) | Error::NotPositiveDefinite(_) => {
                GtStatus::InvalidInput
            }
            Error::InvalidState { .. } => GtStatus::InvalidState,
            Error::InvalidChannel { .. } => GtStatus::InvalidChannel,
            Error::InvalidObservable { .. } => GtStatus::InvalidObservable,
            Error::NotInformationallyComplete { .. } => GtStatus::NotInformationallyComplete,
            Error::Inconsistent(_) => GtStatus::Internal,
        }
    }
}

/// Opaque Gaussian state (mean vector and covariance matrix).
pub struct GtState(GaussianState);

/// Opaque Gaussian observable (direction matrix, noise form, offset).
pub struct GtObservable(GaussianObservable);

/// Opaque Gaussian channel.
pub struct GtChannel(GaussianChannel);

// ---------------------------------------------------------------------------
// Internal plumbing
// ---------------------------------------------------------------------------

/// Runs a call body, translating any panic into `Internal`.
fn guard<F: FnOnce() -> GtStatus>(body: F) -> GtStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(GtStatus::Internal)
}

macro_rules! nonnull {
    ($ptr:expr) => {
        if $ptr.is_null() {
            return GtStatus::NullPointer;
        }
    };
}

macro_rules! try_ffi {
    ($expr:expr) => {
        match $expr {
            Ok(value) => value,
            Err(err) => return GtStatus::from(&err),
        }
    };
}

unsafe fn matrix_in(ptr: *const f64, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_row_slice(rows, cols, std::slice::from_raw_parts(ptr, rows * cols))
}

unsafe fn vector_in(ptr: *const f64, len: usize) -> DVector<f64> {
    DVector::from_column_slice(std::slice::from_raw_parts(ptr, len))
}

unsafe fn write_matrix(m: &DMatrix<f64>, out: *mut f64) {
    let buffer = std::slice::from_raw_parts_mut(out, m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            buffer[i * m.ncols() + j] = m[(i, j)];
        }
    }
}

unsafe fn write_vector(v: &DVector<f64>, out: *mut f64) {
    std::slice::from_raw_parts_mut(out, v.len()).copy_from_slice(v.as_slice());
}

// ---------------------------------------------------------------------------
// Library metadata
// ---------------------------------------------------------------------------

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static NUL-terminated name of a status code.
#[no_mangle]
pub extern "C" fn gt_status_name(status: GtStatus) -> *const c_char {
    let name: &'static str = match status {
        GtStatus::Ok => "ok\0",
        GtStatus::NullPointer => "null pointer\0",
        GtStatus::InvalidDimension => "invalid dimension\0",
        GtStatus::InvalidInput => "invalid input\0",
        GtStatus::InvalidState => "invalid state\0",
        GtStatus::InvalidChannel => "invalid channel\0",
        GtStatus::InvalidObservable => "invalid observable\0",
        GtStatus::NotInformationallyComplete => "not informationally complete\0",
        GtStatus::Internal => "internal error\0",
    };
    name.as_ptr() as *const c_char
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

/// Creates a Gaussian state from its mean (length `2 * n_modes`) and
/// covariance (`2N x 2N`, row-major). The state must satisfy the
/// uncertainty relation at `tol`.
///
/// # Safety
///
/// `mean` and `covariance` must point to readable buffers of the stated
/// lengths; `out_state` must be a writable pointer slot. On `Ok` the slot
/// receives a handle that must be released with [`gt_state_free`].
#[no_mangle]
pub unsafe extern "C" fn gt_state_new(
    n_modes: usize,
    mean: *const f64,
    covariance: *const f64,
    tol: f64,
    out_state: *mut *mut GtState,
) -> GtStatus {
    guard(|| {
        nonnull!(mean);
        nonnull!(covariance);
        nonnull!(out_state);
        if n_modes == 0 {
            return GtStatus::InvalidDimension;
        }
        let dim = 2 * n_modes;
        let state = try_ffi!(GaussianState::new(
            vector_in(mean, dim),
            matrix_in(covariance, dim, dim),
            tol,
        ));
        *out_state = Box::into_raw(Box::new(GtState(state)));
        GtStatus::Ok
    })
}

/// Creates the vacuum state on `n_modes` modes.
///
/// # Safety
///
/// `out_state` must be a writable pointer slot; release the handle with
/// [`gt_state_free`].
#[no_mangle]
pub unsafe extern "C" fn gt_state_vacuum(n_modes: usize, out_state: *mut *mut GtState) -> GtStatus {
    guard(|| {
        nonnull!(out_state);
        let state = try_ffi!(GaussianState::vacuum(n_modes));
        *out_state = Box::into_raw(Box::new(GtState(state)));
        GtStatus::Ok
    })
}

/// Releases a state handle. Null is a no-op.
///
/// # Safety
///
/// `state` must be a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn gt_state_free(state: *mut GtState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of modes of a state.
///
/// # Safety
///
/// `state` must be a live handle; `out_n_modes` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gt_state_n_modes(
    state: *const GtState,
    out_n_modes: *mut usize,
) -> GtStatus {
    guard(|| {
        nonnull!(state);
        nonnull!(out_n_modes);
        *out_n_modes = (*state).0.n_modes();
        GtStatus::Ok
    })
}

/// Copies the mean vector into `out_mean` (length `2N`).
///
/// # Safety
///
/// `state` must be a live handle; `out_mean` must hold `2N` doubles.
#[no_mangle]
pub unsafe extern "C" fn gt_state_mean(state: *const GtState, out_mean: *mut f64) -> GtStatus {
    guard(|| {
        nonnull!(state);
        nonnull!(out_mean);
        write_vector((*state).0.m(), out_mean);
        GtStatus::Ok
    })
}

/// Copies the covariance matrix into `out_covariance` (`2N x 2N`,
/// row-major).
///
/// # Safety
///
/// `state` must be a live handle; `out_covariance` must hold `4N^2`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn gt_state_covariance(
    state: *const GtState,
    out_covariance: *mut f64,
) -> GtStatus {
    guard(|| {
        nonnull!(state);
        nonnull!(out_covariance);
        write_matrix((*state).0.v(), out_covariance);
        GtStatus::Ok
    })
}

/// Tests the uncertainty relation at `tol`, reporting the verdict and the
/// minimum eigenvalue of the test matrix.
///
/// # Safety
///
/// `state` must be a live handle; `out_ok` and `out_min_eig` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn gt_state_validity(
    state: *const GtState,
    tol: f64,
    out_ok: *mut bool,
    out_min_eig: *mut f64,
) -> GtStatus {
    guard(|| {
        nonnull!(state);
        nonnull!(out_ok);
        nonnull!(out_min_eig);
        let s = &(*state).0;
        let validity = try_ffi!(state_validity(s.m(), s.v(), tol));
        *out_ok = validity.ok;
        *out_min_eig = validity.min_eig;
        GtStatus::Ok
    })
}

/// Evaluates the state's Weyl transform at the phase-space argument
/// `argument` (length `2N`), writing the complex value as real and
/// imaginary parts.
///
/// # Safety
///
/// `state` must be a live handle; `argument` must hold `2N` doubles;
/// `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gt_weyl_transform(
    state: *const GtState,
    argument: *const f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> GtStatus {
    guard(|| {
        nonnull!(state);
        nonnull!(argument);
        nonnull!(out_re);
        nonnull!(out_im);
        let s = &(*state).0;
        let x = vector_in(argument, 2 * s.n_modes());
        let value = try_ffi!(weyl_transform(s, &x));
        *out_re = value.re;
        *out_im = value.im;
        GtStatus::Ok
    })
}

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

/// Creates a Gaussian observable from its parameter triple: `a0`
/// (`2N x M`, row-major), `b0` (`M x M`, row-major, symmetric), `v0`
/// (length `M`). The parameters must satisfy the positivity condition at
/// `tol`.
///
/// # Safety
///
/// The buffers must be readable at the stated lengths; `out_observable`
/// must be a writable pointer slot. Release the handle with
/// [`gt_observable_free`].
#[no_mangle]
pub unsafe extern "C" fn gt_observable_new(
    n_modes: usize,
    outcome_dim: usize,
    a0: *const f64,
    b0: *const f64,
    v0: *const f64,
    tol: f64,
    out_observable: *mut *mut GtObservable,
) -> GtStatus {
    guard(|| {
        nonnull!(a0);
        nonnull!(b0);
        nonnull!(v0);
        nonnull!(out_observable);
        if n_modes == 0 || outcome_dim == 0 {
            return GtStatus::InvalidDimension;
        }
        let obs = try_ffi!(GaussianObservable::new(
            matrix_in(a0, 2 * n_modes, outcome_dim),
            matrix_in(b0, outcome_dim, outcome_dim),
            vector_in(v0, outcome_dim),
            tol,
        ));
        let validity = try_ffi!(validate_observable(&obs, tol));
        if !validity.ok {
            return GtStatus::InvalidObservable;
        }
        *out_observable = Box::into_raw(Box::new(GtObservable(obs)));
        GtStatus::Ok
    })
}

/// Creates the covariant phase-space observable (Q-function measurement)
/// on `n_modes` modes.
///
/// # Safety
///
/// `out_observable` must be a writable pointer slot; release with
/// [`gt_observable_free`].
#[no_mangle]
pub unsafe extern "C" fn gt_observable_q_function(
    n_modes: usize,
    out_observable: *mut *mut GtObservable,
) -> GtStatus {
    guard(|| {
        nonnull!(out_observable);
        let obs = try_ffi!(GaussianObservable::q_function(n_modes));
        *out_observable = Box::into_raw(Box::new(GtObservable(obs)));
        GtStatus::Ok
    })
}

/// Creates the sharp quadrature observable along `direction` (length
/// `dim`, which must be even).
///
/// # Safety
///
/// `direction` must hold `dim` doubles; `out_observable` must be a
/// writable pointer slot. Release with [`gt_observable_free`].
#[no_mangle]
pub unsafe extern "C" fn gt_observable_quadrature(
    direction: *const f64,
    dim: usize,
    out_observable: *mut *mut GtObservable,
) -> GtStatus {
    guard(|| {
        nonnull!(direction);
        nonnull!(out_observable);
        if dim == 0 {
            return GtStatus::InvalidDimension;
        }
        let obs = try_ffi!(GaussianObservable::quadrature(vector_in(direction, dim)));
        *out_observable = Box::into_raw(Box::new(GtObservable(obs)));
        GtStatus::Ok
    })
}

/// Releases an observable handle. Null is a no-op.
///
/// # Safety
///
/// `observable` must be a handle from this library that has not been
/// freed.
#[no_mangle]
pub unsafe extern "C" fn gt_observable_free(observable: *mut GtObservable) {
    if !observable.is_null() {
        drop(Box::from_raw(observable));
    }
}

/// Number of modes of an observable.
///
/// # Safety
///
/// `observable` must be a live handle; `out_n_modes` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gt_observable_n_modes(
    observable: *const GtObservable,
    out_n_modes: *mut usize,
) -> GtStatus {
    guard(|| {
        nonnull!(observable);
        nonnull!(out_n_modes);
        *out_n_modes = (*observable).0.n_modes();
        GtStatus::Ok
    })
}

/// Outcome dimension of an observable.
///
/// # Safety
///
/// `observable` must be a live handle; `out_outcome_dim` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn gt_observable_outcome_dim(
    observable: *const GtObservable,
    out_outcome_dim: *mut usize,
) -> GtStatus {
    guard(|| {
        nonnull!(observable);
        nonnull!(out_outcome_dim);
        *out_outcome_dim = (*observable).0.outcome_dim();
        GtStatus::Ok
    })
}

/// Copies the parameter triple into caller buffers: `out_a0`
/// (`2N x M` row-major), `out_b0` (`M x M` row-major), `out_v0`
/// (length `M`).
///
/// # Safety
///
/// `observable` must be a live handle; the buffers must be writable at
/// the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn gt_observable_params(
    observable: *const GtObservable,
    out_a0: *mut f64,
    out_b0: *mut f64,
    out_v0: *mut f64,
) -> GtStatus {
    guard(|| {
        nonnull!(observable);
        nonnull!(out_a0);
        nonnull!(out_b0);
        nonnull!(out_v0);
        let obs = &(*observable).0;
        write_matrix(obs.a0(), out_a0);
        write_matrix(obs.b0(), out_b0);
        write_vector(obs.v0(), out_v0);
        GtStatus::Ok
    })
}

/// Tests the positivity condition at `tol`, reporting the verdict and the
/// minimum eigenvalue of the test matrix.
///
/// # Safety
///
/// `observable` must be a live handle; `out_ok` and `out_min_eig` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn gt_observable_validity(
    observable: *const GtObservable,
    tol: f64,
    out_ok: *mut bool,
    out_min_eig: *mut f64,
) -> GtStatus {
    guard(|| {
        nonnull!(observable);
        nonnull!(out_ok);
        nonnull!(out_min_eig);
        let validity = try_ffi!(validate_observable(&(*observable).0, tol));
        *out_ok = validity.ok;
        *out_min_eig = validity.min_eig;
        GtStatus::Ok
    })
}

/// Classifies an observable at `tol`: commutative (outcome operators
/// commute), sharp (projection valued), covariant (phase-space translation
/// covariant), and informationally complete.
///
/// # Safety
///
/// `observable` must be a live handle; all four out-pointers must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn gt_observable_classify(
    observable: *const GtObservable,
    tol: f64,
    out_commutative: *mut bool,
    out_sharp: *mut bool,
    out_covariant: *mut bool,
    out_informationally_complete: *mut bool,
) -> GtStatus {
    guard(|| {
        nonnull!(observable);
        nonnull!(out_commutative);
        nonnull!(out_sharp);
        nonnull!(out_covariant);
        nonnull!(out_informationally_complete);
        let class = classify(&(*observable).0, tol);
        *out_commutative = class.commutative;
        *out_sharp = class.sharp;
        *out_covariant = class.covariant;
        *out_informationally_complete = class.informationally_complete;
        GtStatus::Ok
    })
}

/// Computes the outcome law of `observable` on `state`: a normal
/// distribution written as `out_mean` (length `M`) and `out_covariance`
/// (`M x M`, row-major).
///
/// # Safety
///
/// Both handles must be live; the out buffers must be writable at the
/// stated lengths.
#[no_mangle]
pub unsafe extern "C" fn gt_pushforward(
    observable: *const GtObservable,
    state: *const GtState,
    out_mean: *mut f64,
    out_covariance: *mut f64,
) -> GtStatus {
    guard(|| {
        nonnull!(observable);
        nonnull!(state);
        nonnull!(out_mean);
        nonnull!(out_covariance);
        let law = try_ffi!(pushforward(&(*observable).0, &(*state).0));
        write_vector(&law.mean, out_mean);
        write_matrix(&law.cov, out_covariance);
        GtStatus::Ok
    })
}

// ---------------------------------------------------------------------------
// Channels
// ---------------------------------------------------------------------------

/// Builds the measurement channel of an observable (one output mode per
/// outcome dimension).
///
/// # Safety
///
/// `observable` must be a live handle; `out_channel` must be a writable
/// pointer slot. Release with [`gt_channel_free`].
#[no_mangle]
pub unsafe extern "C" fn gt_channel_from_observable(
    observable: *const GtObservable,
    tol: f64,
    out_channel: *mut *mut GtChannel,
) -> GtStatus {
    guard(|| {
        nonnull!(observable);
        nonnull!(out_channel);
        let channel = try_ffi!(channel_from_observable(&(*observable).0, tol));
        *out_channel = Box::into_raw(Box::new(GtChannel(channel)));
        GtStatus::Ok
    })
}

/// Extracts the observable measured by the `Q` quadratures of a channel's
/// output modes.
///
/// # Safety
///
/// `channel` must be a live handle; `out_observable` must be a writable
/// pointer slot. Release with [`gt_observable_free`].
#[no_mangle]
pub unsafe extern "C" fn gt_observable_from_channel(
    channel: *const GtChannel,
    out_observable: *mut *mut GtObservable,
) -> GtStatus {
    guard(|| {
        nonnull!(channel);
        nonnull!(out_observable);
        let obs = observable_from_channel(&(*channel).0);
        *out_observable = Box::into_raw(Box::new(GtObservable(obs)));
        GtStatus::Ok
    })
}

/// Applies a channel to a state, producing the output state.
///
/// # Safety
///
/// Both handles must be live; `out_state` must be a writable pointer
/// slot. Release with [`gt_state_free`].
#[no_mangle]
pub unsafe extern "C" fn gt_channel_apply(
    channel: *const GtChannel,
    state: *const GtState,
    out_state: *mut *mut GtState,
) -> GtStatus {
    guard(|| {
        nonnull!(channel);
        nonnull!(state);
        nonnull!(out_state);
        let output = try_ffi!(apply_channel(&(*channel).0, &(*state).0));
        *out_state = Box::into_raw(Box::new(GtState(output)));
        GtStatus::Ok
    })
}

/// Input mode count of a channel.
///
/// # Safety
///
/// `channel` must be a live handle; `out_in_modes` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gt_channel_in_modes(
    channel: *const GtChannel,
    out_in_modes: *mut usize,
) -> GtStatus {
    guard(|| {
        nonnull!(channel);
        nonnull!(out_in_modes);
        *out_in_modes = (*channel).0.in_modes();
        GtStatus::Ok
    })
}

/// Output mode count of a channel.
///
/// # Safety
///
/// `channel` must be a live handle; `out_out_modes` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gt_channel_out_modes(
    channel: *const GtChannel,
    out_out_modes: *mut usize,
) -> GtStatus {
    guard(|| {
        nonnull!(channel);
        nonnull!(out_out_modes);
        *out_out_modes = (*channel).0.out_modes();
        GtStatus::Ok
    })
}

/// Releases a channel handle. Null is a no-op.
///
/// # Safety
///
/// `channel` must be a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn gt_channel_free(channel: *mut GtChannel) {
    if !channel.is_null() {
        drop(Box::from_raw(channel));
    }
}

// ---------------------------------------------------------------------------
// Symplectic linear algebra
// ---------------------------------------------------------------------------

/// Williamson normal form of a positive-definite `dim x dim` matrix
/// (`dim` even): writes a symplectic `S` with `S B Sᵀ = diag(β_1, β_1,
/// ..., β_{dim/2}, β_{dim/2})` into `out_symplectic` (row-major) and the
/// symplectic eigenvalues into `out_betas` (length `dim / 2`).
///
/// # Safety
///
/// `matrix` must hold `dim * dim` doubles; `out_symplectic` must hold
/// `dim * dim` doubles; `out_betas` must hold `dim / 2` doubles.
#[no_mangle]
pub unsafe extern "C" fn gt_williamson(
    matrix: *const f64,
    dim: usize,
    tol: f64,
    out_symplectic: *mut f64,
    out_betas: *mut f64,
) -> GtStatus {
    guard(|| {
        nonnull!(matrix);
        nonnull!(out_symplectic);
        nonnull!(out_betas);
        if dim == 0 || dim % 2 != 0 {
            return GtStatus::InvalidDimension;
        }
        let result = try_ffi!(williamson(&matrix_in(matrix, dim, dim), tol));
        write_matrix(&result.s, out_symplectic);
        std::slice::from_raw_parts_mut(out_betas, dim / 2).copy_from_slice(&result.betas);
        GtStatus::Ok
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;
    use std::path::Path;
    use std::ptr;

    unsafe fn make_vacuum(n_modes: usize) -> *mut GtState {
        let mut handle: *mut GtState = ptr::null_mut();
        assert_eq!(gt_state_vacuum(n_modes, &mut handle), GtStatus::Ok);
        assert!(!handle.is_null());
        handle
    }

    #[test]
    fn version_and_status_names_are_c_strings() {
        unsafe {
            let version = CStr::from_ptr(gt_version()).to_str().unwrap();
            assert_eq!(version, env!("CARGO_PKG_VERSION"));
            assert_eq!(
                CStr::from_ptr(gt_status_name(GtStatus::Ok)).to_str().unwrap(),
                "ok"
            );
            assert_eq!(
                CStr::from_ptr(gt_status_name(GtStatus::InvalidObservable))
                    .to_str()
                    .unwrap(),
                "invalid observable"
            );
        }
    }

    #[test]
    fn state_round_trip_and_validity() {
        unsafe {
            let mean = [0.3, -0.4];
            let cov = [1.0, 0.0, 0.0, 1.0];
            let mut handle: *mut GtState = ptr::null_mut();
            assert_eq!(
                gt_state_new(1, mean.as_ptr(), cov.as_ptr(), 1e-9, &mut handle),
                GtStatus::Ok
            );

            let mut n = 0usize;
            assert_eq!(gt_state_n_modes(handle, &mut n), GtStatus::Ok);
            assert_eq!(n, 1);

            let mut mean_out = [0.0; 2];
            let mut cov_out = [0.0; 4];
            assert_eq!(gt_state_mean(handle, mean_out.as_mut_ptr()), GtStatus::Ok);
            assert_eq!(
                gt_state_covariance(handle, cov_out.as_mut_ptr()),
                GtStatus::Ok
            );
            assert_eq!(mean_out, mean);
            assert_eq!(cov_out, cov);

            let mut ok = false;
            let mut min_eig = f64::NAN;
            assert_eq!(
                gt_state_validity(handle, 1e-9, &mut ok, &mut min_eig),
                GtStatus::Ok
            );
            assert!(ok);
            assert!(min_eig.abs() < 1e-12);

            gt_state_free(handle);
        }
    }

    #[test]
    fn invalid_and_null_arguments_are_reported() {
        unsafe {
            // Sub-vacuum covariance violates the uncertainty relation.
            let mean = [0.0, 0.0];
            let cov = [0.5, 0.0, 0.0, 0.5];
            let mut handle: *mut GtState = ptr::null_mut();
            assert_eq!(
                gt_state_new(1, mean.as_ptr(), cov.as_ptr(), 1e-9, &mut handle),
                GtStatus::InvalidState
            );
            assert!(handle.is_null(), "failed constructor must not write");

            assert_eq!(
                gt_state_new(1, ptr::null(), cov.as_ptr(), 1e-9, &mut handle),
                GtStatus::NullPointer
            );
            let mut n = 0usize;
            assert_eq!(gt_state_n_modes(ptr::null(), &mut n), GtStatus::NullPointer);

            // An observable just below the positivity boundary.
            let a0 = [0.0, -1.0, 1.0, 0.0];
            let b0 = [0.99, 0.0, 0.0, 0.99];
            let v0 = [0.0, 0.0];
            let mut obs: *mut GtObservable = ptr::null_mut();
            assert_eq!(
                gt_observable_new(
                    1,
                    2,
                    a0.as_ptr(),
                    b0.as_ptr(),
                    v0.as_ptr(),
                    1e-9,
                    &mut obs
                ),
                GtStatus::InvalidObservable
            );
        }
    }

    #[test]
    fn q_function_classification_pushforward_and_weyl() {
        unsafe {
            let mut obs: *mut GtObservable = ptr::null_mut();
            assert_eq!(gt_observable_q_function(1, &mut obs), GtStatus::Ok);

            let (mut comm, mut sharp, mut cov, mut ic) = (true, true, false, false);
            assert_eq!(
                gt_observable_classify(obs, 1e-9, &mut comm, &mut sharp, &mut cov, &mut ic),
                GtStatus::Ok
            );
            assert!(!comm && !sharp && cov && ic);

            let vacuum = make_vacuum(1);
            let mut law_mean = [f64::NAN; 2];
            let mut law_cov = [f64::NAN; 4];
            assert_eq!(
                gt_pushforward(obs, vacuum, law_mean.as_mut_ptr(), law_cov.as_mut_ptr()),
                GtStatus::Ok
            );
            // Q-function law of the vacuum: standard normal.
            assert!(law_mean.iter().all(|x| x.abs() < 1e-12));
            let expected = [1.0, 0.0, 0.0, 1.0];
            for (got, want) in law_cov.iter().zip(expected) {
                assert!((got - want).abs() < 1e-12);
            }

            let x = [1.0, 0.0];
            let (mut re, mut im) = (f64::NAN, f64::NAN);
            assert_eq!(
                gt_weyl_transform(vacuum, x.as_ptr(), &mut re, &mut im),
                GtStatus::Ok
            );
            assert!((re - (-0.25f64).exp()).abs() < 1e-12);
            assert!(im.abs() < 1e-15);

            gt_state_free(vacuum);
            gt_observable_free(obs);
        }
    }

    #[test]
    fn observable_channel_round_trip() {
        unsafe {
            let a0 = [0.0, -1.0, 1.0, 0.0];
            let b0 = [1.0, 0.0, 0.0, 1.0];
            let v0 = [0.25, -0.5];
            let mut obs: *mut GtObservable = ptr::null_mut();
            assert_eq!(
                gt_observable_new(
                    1,
                    2,
                    a0.as_ptr(),
                    b0.as_ptr(),
                    v0.as_ptr(),
                    1e-9,
                    &mut obs
                ),
                GtStatus::Ok
            );

            let mut channel: *mut GtChannel = ptr::null_mut();
            assert_eq!(
                gt_channel_from_observable(obs, 1e-9, &mut channel),
                GtStatus::Ok
            );
            let (mut in_modes, mut out_modes) = (0usize, 0usize);
            assert_eq!(gt_channel_in_modes(channel, &mut in_modes), GtStatus::Ok);
            assert_eq!(gt_channel_out_modes(channel, &mut out_modes), GtStatus::Ok);
            assert_eq!((in_modes, out_modes), (1, 2));

            let mut back: *mut GtObservable = ptr::null_mut();
            assert_eq!(gt_observable_from_channel(channel, &mut back), GtStatus::Ok);
            let mut a0_back = [f64::NAN; 4];
            let mut b0_back = [f64::NAN; 4];
            let mut v0_back = [f64::NAN; 2];
            assert_eq!(
                gt_observable_params(
                    back,
                    a0_back.as_mut_ptr(),
                    b0_back.as_mut_ptr(),
                    v0_back.as_mut_ptr()
                ),
                GtStatus::Ok
            );
            for (got, want) in a0_back
                .iter()
                .chain(&b0_back)
                .chain(&v0_back)
                .zip(a0.iter().chain(&b0).chain(&v0))
            {
                assert!((got - want).abs() <= 1e-12);
            }

            gt_observable_free(back);
            gt_channel_free(channel);
            gt_observable_free(obs);
        }
    }

    #[test]
    fn williamson_normal_form() {
        unsafe {
            let b = [4.0, 0.0, 0.0, 1.0];
            let mut s = [f64::NAN; 4];
            let mut betas = [f64::NAN; 1];
            assert_eq!(
                gt_williamson(b.as_ptr(), 2, 1e-9, s.as_mut_ptr(), betas.as_mut_ptr()),
                GtStatus::Ok
            );
            assert!((betas[0] - 2.0).abs() < 1e-9);

            // S B Sᵀ must equal β·I entrywise.
            let sb = [
                s[0] * b[0] * s[0] + s[1] * b[3] * s[1],
                s[0] * b[0] * s[2] + s[1] * b[3] * s[3],
                s[2] * b[0] * s[0] + s[3] * b[3] * s[1],
                s[2] * b[0] * s[2] + s[3] * b[3] * s[3],
            ];
            let expected = [2.0, 0.0, 0.0, 2.0];
            for (got, want) in sb.iter().zip(expected) {
                assert!((got - want).abs() < 1e-9, "SBSᵀ = {sb:?}");
            }

            assert_eq!(
                gt_williamson(b.as_ptr(), 3, 1e-9, s.as_mut_ptr(), betas.as_mut_ptr()),
                GtStatus::InvalidDimension
            );
        }
    }

    #[test]
    fn generated_header_is_valid_c() {
        let header = Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("include")
            .join("gausstomo.h");
        let text = std::fs::read_to_string(&header).expect("build.rs must generate the header");
        for needle in [
            "GtState",
            "GtObservable",
            "GtChannel",
            "GtStatus",
            "gt_pushforward",
            "gt_williamson",
            "gt_version",
        ] {
            assert!(text.contains(needle), "header is missing {needle}");
        }

        let check = std::process::Command::new("cc")
            .args(["-std=c99", "-fsyntax-only", "-x", "c"])
            .arg(&header)
            .output()
            .expect("cc must be invocable");
        assert!(
            check.status.success(),
            "header fails C compilation:\n{}",
            String::from_utf8_lossy(&check.stderr)
        );
    }
}
