#ifndef GAUSSTOMO_H
#define GAUSSTOMO_H

/* Generated by cbindgen from the gausstomo-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Call outcome. Nonzero values are failures; no out-parameter is written
// unless the call returns `Ok`.
typedef enum GtStatus {
  // Success.
  GtStatus_Ok = 0,
  // A required pointer argument was null.
  GtStatus_NullPointer = 1,
  // Array or matrix dimensions are inconsistent.
  GtStatus_InvalidDimension = 2,
  // An argument is malformed for reasons other than shape.
  GtStatus_InvalidInput = 3,
  // A state violates the uncertainty relation.
  GtStatus_InvalidState = 4,
  // A channel fails complete positivity.
  GtStatus_InvalidChannel = 5,
  // An observable fails its positivity condition.
  GtStatus_InvalidObservable = 6,
  // The operation requires an informationally complete observable.
  GtStatus_NotInformationallyComplete = 7,
  // Unexpected internal failure (including a caught panic).
  GtStatus_Internal = 8,
} GtStatus;

// Opaque Gaussian channel.
typedef struct GtChannel GtChannel;

// Opaque Gaussian observable (direction matrix, noise form, offset).
typedef struct GtObservable GtObservable;

// Opaque Gaussian state (mean vector and covariance matrix).
typedef struct GtState GtState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *gt_version(void);

// Static NUL-terminated name of a status code.
const char *gt_status_name(enum GtStatus status);

// Creates a Gaussian state from its mean (length `2 * n_modes`) and
// covariance (`2N x 2N`, row-major). The state must satisfy the
// uncertainty relation at `tol`.
//
// # Safety
//
// `mean` and `covariance` must point to readable buffers of the stated
// lengths; `out_state` must be a writable pointer slot. On `Ok` the slot
// receives a handle that must be released with [`gt_state_free`].
enum GtStatus gt_state_new(size_t n_modes,
                           const double *mean,
                           const double *covariance,
                           double tol,
                           struct GtState **out_state);

// Creates the vacuum state on `n_modes` modes.
//
// # Safety
//
// `out_state` must be a writable pointer slot; release the handle with
// [`gt_state_free`].
enum GtStatus gt_state_vacuum(size_t n_modes, struct GtState **out_state);

// Releases a state handle. Null is a no-op.
//
// # Safety
//
// `state` must be a handle from this library that has not been freed.
void gt_state_free(struct GtState *state);

// Number of modes of a state.
//
// # Safety
//
// `state` must be a live handle; `out_n_modes` must be writable.
enum GtStatus gt_state_n_modes(const struct GtState *state, size_t *out_n_modes);

// Copies the mean vector into `out_mean` (length `2N`).
//
// # Safety
//
// `state` must be a live handle; `out_mean` must hold `2N` doubles.
enum GtStatus gt_state_mean(const struct GtState *state, double *out_mean);

// Copies the covariance matrix into `out_covariance` (`2N x 2N`,
// row-major).
//
// # Safety
//
// `state` must be a live handle; `out_covariance` must hold `4N^2`
// doubles.
enum GtStatus gt_state_covariance(const struct GtState *state, double *out_covariance);

// Tests the uncertainty relation at `tol`, reporting the verdict and the
// minimum eigenvalue of the test matrix.
//
// # Safety
//
// `state` must be a live handle; `out_ok` and `out_min_eig` must be
// writable.
enum GtStatus gt_state_validity(const struct GtState *state,
                                double tol,
                                bool *out_ok,
                                double *out_min_eig);

// Evaluates the state's Weyl transform at the phase-space argument
// `argument` (length `2N`), writing the complex value as real and
// imaginary parts.
//
// # Safety
//
// `state` must be a live handle; `argument` must hold `2N` doubles;
// `out_re` and `out_im` must be writable.
enum GtStatus gt_weyl_transform(const struct GtState *state,
                                const double *argument,
                                double *out_re,
                                double *out_im);

// Creates a Gaussian observable from its parameter triple: `a0`
// (`2N x M`, row-major), `b0` (`M x M`, row-major, symmetric), `v0`
// (length `M`). The parameters must satisfy the positivity condition at
// `tol`.
//
// # Safety
//
// The buffers must be readable at the stated lengths; `out_observable`
// must be a writable pointer slot. Release the handle with
// [`gt_observable_free`].
enum GtStatus gt_observable_new(size_t n_modes,
                                size_t outcome_dim,
                                const double *a0,
                                const double *b0,
                                const double *v0,
                                double tol,
                                struct GtObservable **out_observable);

// Creates the covariant phase-space observable (Q-function measurement)
// on `n_modes` modes.
//
// # Safety
//
// `out_observable` must be a writable pointer slot; release with
// [`gt_observable_free`].
enum GtStatus gt_observable_q_function(size_t n_modes, struct GtObservable **out_observable);

// Creates the sharp quadrature observable along `direction` (length
// `dim`, which must be even).
//
// # Safety
//
// `direction` must hold `dim` doubles; `out_observable` must be a
// writable pointer slot. Release with [`gt_observable_free`].
enum GtStatus gt_observable_quadrature(const double *direction,
                                       size_t dim,
                                       struct GtObservable **out_observable);

// Releases an observable handle. Null is a no-op.
//
// # Safety
//
// `observable` must be a handle from this library that has not been
// freed.
void gt_observable_free(struct GtObservable *observable);

// Number of modes of an observable.
//
// # Safety
//
// `observable` must be a live handle; `out_n_modes` must be writable.
enum GtStatus gt_observable_n_modes(const struct GtObservable *observable, size_t *out_n_modes);

// Outcome dimension of an observable.
//
// # Safety
//
// `observable` must be a live handle; `out_outcome_dim` must be
// writable.
enum GtStatus gt_observable_outcome_dim(const struct GtObservable *observable,
                                        size_t *out_outcome_dim);

// Copies the parameter triple into caller buffers: `out_a0`
// (`2N x M` row-major), `out_b0` (`M x M` row-major), `out_v0`
// (length `M`).
//
// # Safety
//
// `observable` must be a live handle; the buffers must be writable at
// the stated lengths.
enum GtStatus gt_observable_params(const struct GtObservable *observable,
                                   double *out_a0,
                                   double *out_b0,
                                   double *out_v0);

// Tests the positivity condition at `tol`, reporting the verdict and the
// minimum eigenvalue of the test matrix.
//
// # Safety
//
// `observable` must be a live handle; `out_ok` and `out_min_eig` must be
// writable.
enum GtStatus gt_observable_validity(const struct GtObservable *observable,
                                     double tol,
                                     bool *out_ok,
                                     double *out_min_eig);

// Classifies an observable at `tol`: commutative (outcome operators
// commute), sharp (projection valued), covariant (phase-space translation
// covariant), and informationally complete.
//
// # Safety
//
// `observable` must be a live handle; all four out-pointers must be
// writable.
enum GtStatus gt_observable_classify(const struct GtObservable *observable,
                                     double tol,
                                     bool *out_commutative,
                                     bool *out_sharp,
                                     bool *out_covariant,
                                     bool *out_informationally_complete);

// Computes the outcome law of `observable` on `state`: a normal
// distribution written as `out_mean` (length `M`) and `out_covariance`
// (`M x M`, row-major).
//
// # Safety
//
// Both handles must be live; the out buffers must be writable at the
// stated lengths.
enum GtStatus gt_pushforward(const struct GtObservable *observable,
                             const struct GtState *state,
                             double *out_mean,
                             double *out_covariance);

// Builds the measurement channel of an observable (one output mode per
// outcome dimension).
//
// # Safety
//
// `observable` must be a live handle; `out_channel` must be a writable
// pointer slot. Release with [`gt_channel_free`].
enum GtStatus gt_channel_from_observable(const struct GtObservable *observable,
                                         double tol,
                                         struct GtChannel **out_channel);

// Extracts the observable measured by the `Q` quadratures of a channel's
// output modes.
//
// # Safety
//
// `channel` must be a live handle; `out_observable` must be a writable
// pointer slot. Release with [`gt_observable_free`].
enum GtStatus gt_observable_from_channel(const struct GtChannel *channel,
                                         struct GtObservable **out_observable);

// Applies a channel to a state, producing the output state.
//
// # Safety
//
// Both handles must be live; `out_state` must be a writable pointer
// slot. Release with [`gt_state_free`].
enum GtStatus gt_channel_apply(const struct GtChannel *channel,
                               const struct GtState *state,
                               struct GtState **out_state);

// Input mode count of a channel.
//
// # Safety
//
// `channel` must be a live handle; `out_in_modes` must be writable.
enum GtStatus gt_channel_in_modes(const struct GtChannel *channel, size_t *out_in_modes);

// Output mode count of a channel.
//
// # Safety
//
// `channel` must be a live handle; `out_out_modes` must be writable.
enum GtStatus gt_channel_out_modes(const struct GtChannel *channel, size_t *out_out_modes);

// Releases a channel handle. Null is a no-op.
//
// # Safety
//
// `channel` must be a handle from this library that has not been freed.
void gt_channel_free(struct GtChannel *channel);

// Williamson normal form of a positive-definite `dim x dim` matrix
// (`dim` even): writes a symplectic `S` with `S B Sᵀ = diag(β_1, β_1,
// ..., β_{dim/2}, β_{dim/2})` into `out_symplectic` (row-major) and the
// symplectic eigenvalues into `out_betas` (length `dim / 2`).
//
// # Safety
//
// `matrix` must hold `dim * dim` doubles; `out_symplectic` must hold
// `dim * dim` doubles; `out_betas` must hold `dim / 2` doubles.
enum GtStatus gt_williamson(const double *matrix,
                            size_t dim,
                            double tol,
                            double *out_symplectic,
                            double *out_betas);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAUSSTOMO_H */
