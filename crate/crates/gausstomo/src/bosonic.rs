//! Bosonic generalization of Gaussian observables: `Ê(p) = W(A0 p) f0(p)`
//! where `f0` need not be the characteristic function of a Gaussian.
//!
//! Two concrete families are representable:
//!
//! * **noisy smearings** — a valid Gaussian observable convolved with an
//!   extra noise whose characteristic function is evaluable in closed form
//!   (trivial, Fejér triangular hat, or a synthetic zero-ball profile);
//! * **covariant Fock-generated observables** — single-mode phase-space
//!   observables generated by a density operator `σ`, with `A0 = -Ω` fixed
//!   and `f0(p) = σ̂(Ωp)` computed through the truncated-Fock oracle.
//!
//! Informational completeness for such observables is governed by density
//! of the set `Y = {A0 p : f0(p) ≠ 0}` in phase space. Density cannot be
//! certified from finitely many samples, so [`ic_bosonic_verdict`] reports
//! an explicitly finite-resolution verdict: `not-IC` only with a concrete
//! violation witness (an empty ball in the probed union, or bounded
//! support), and `IC-consistent` otherwise.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::fock::{oracle_weyl_transform, FockOperator, OracleValue};
use crate::observables::{validate_observable, GaussianObservable};
use crate::symplectic::{numerical_rank, omega_mat};
use crate::{Error, Result};

/// Characteristic function of the extra (non-Gaussian) smearing noise.
#[derive(Debug, Clone)]
pub enum NoiseProfile {
    /// No extra noise: `hat ≡ 1`. The observable stays Gaussian.
    Trivial,
    /// Fejér-kernel noise per coordinate: `hat(p) = Π_i max(0, 1 - |p_i|/width)`.
    /// Compact support makes the observable provably not informationally
    /// complete.
    Fejer {
        /// Half-width of the triangular hat support in each coordinate.
        width: f64,
    },
    /// Synthetic profile vanishing exactly on a ball: `hat(p) = 0` for
    /// `‖p - center‖ ≤ radius`, `1` elsewhere. Not a bona fide noise
    /// characteristic function; used to build complementary-zero-set
    /// examples.
    ZeroBall {
        /// Center of the zero ball in outcome space.
        center: DVector<f64>,
        /// Radius of the zero ball.
        radius: f64,
    },
}

impl NoiseProfile {
    /// Evaluates the noise characteristic function at `p`.
    fn eval(&self, p: &DVector<f64>) -> f64 {
        match self {
            NoiseProfile::Trivial => 1.0,
            NoiseProfile::Fejer { width } => p
                .iter()
                .map(|c| (1.0 - c.abs() / width).max(0.0))
                .product(),
            NoiseProfile::ZeroBall { center, radius } => {
                if (p - center).norm() <= *radius {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }
}

/// The non-Gaussian part of a bosonic observable.
#[derive(Debug, Clone)]
pub enum BosonicKernel {
    /// Gaussian factor `exp(-¼ pᵀB0 p - i v0·p)` times a noise profile.
    SmearedGaussian {
        /// Covariance part of the underlying Gaussian observable.
        b0: DMatrix<f64>,
        /// Displacement part of the underlying Gaussian observable.
        v0: DVector<f64>,
        /// Extra noise characteristic function.
        noise: NoiseProfile,
    },
    /// `f0(p) = σ̂(Ω₁ p)`, the Weyl transform of a single-mode density
    /// operator evaluated through the truncated-Fock oracle.
    CovariantFock {
        /// Generating density operator.
        sigma: FockOperator,
    },
}

/// An observable of the form `Ê(p) = W(A0 p) f0(p)`.
#[derive(Debug, Clone)]
pub struct BosonicObservable {
    n_modes: usize,
    outcome_dim: usize,
    a0: DMatrix<f64>,
    f0: BosonicKernel,
}

impl BosonicObservable {
    /// Wraps a valid Gaussian observable with extra smearing noise.
    ///
    /// # Errors
    ///
    /// Invalid underlying observable, or a zero-ball center whose
    /// dimension does not match the outcome space.
    pub fn smeared(base: &GaussianObservable, noise: NoiseProfile, tol: f64) -> Result<Self> {
        let validity = validate_observable(base, tol)?;
        if !validity.ok {
            return Err(Error::InvalidObservable {
                min_eig: validity.min_eig,
            });
        }
        match &noise {
            NoiseProfile::Fejer { width } if !(*width > 0.0) => {
                return Err(Error::InvalidInput("Fejér width must be positive".into()));
            }
            NoiseProfile::ZeroBall { center, radius } => {
                if center.len() != base.outcome_dim() {
                    return Err(Error::InvalidDimension(format!(
                        "zero-ball center has length {}, expected outcome dimension {}",
                        center.len(),
                        base.outcome_dim()
                    )));
                }
                if !(*radius > 0.0) {
                    return Err(Error::InvalidInput("zero-ball radius must be positive".into()));
                }
            }
            _ => {}
        }
        Ok(BosonicObservable {
            n_modes: base.n_modes(),
            outcome_dim: base.outcome_dim(),
            a0: base.a0().clone(),
            f0: BosonicKernel::SmearedGaussian {
                b0: base.b0().clone(),
                v0: base.v0().clone(),
                noise,
            },
        })
    }

    /// Single-mode covariant observable generated by the density operator
    /// `sigma`; `A0 = -Ω₁` is fixed by covariance.
    ///
    /// # Errors
    ///
    /// `sigma` failing the density-operator check (Hermitian, PSD, unit
    /// trace) at `tol`.
    pub fn covariant_fock(sigma: FockOperator, tol: f64) -> Result<Self> {
        let validity = sigma.density_validity(tol)?;
        if !validity.ok {
            return Err(Error::InvalidInput(format!(
                "generator is not a density operator (min eig {:.3e})",
                validity.min_eig
            )));
        }
        Ok(BosonicObservable {
            n_modes: 1,
            outcome_dim: 2,
            a0: -omega_mat(1),
            f0: BosonicKernel::CovariantFock { sigma },
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

    /// The `2N x M` outcome-direction matrix.
    pub fn a0(&self) -> &DMatrix<f64> {
        &self.a0
    }

    /// The non-Gaussian kernel.
    pub fn f0(&self) -> &BosonicKernel {
        &self.f0
    }
}

/// Rectangular probe grid: `points_per_axis` points per coordinate over
/// `[-range, range]`.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    points_per_axis: usize,
    range: f64,
}

impl GridSpec {
    /// Builds a grid specification.
    ///
    /// # Errors
    ///
    /// Fewer than two points per axis or a non-positive range.
    pub fn new(points_per_axis: usize, range: f64) -> Result<Self> {
        if points_per_axis < 2 {
            return Err(Error::InvalidInput("grid needs at least 2 points per axis".into()));
        }
        if !(range > 0.0) {
            return Err(Error::InvalidInput("grid range must be positive".into()));
        }
        Ok(GridSpec {
            points_per_axis,
            range,
        })
    }

    /// Default probe: 101 points per axis over ±4 — fine enough to resolve
    /// the one-photon zero circle.
    pub fn default_probe() -> Self {
        GridSpec {
            points_per_axis: 101,
            range: 4.0,
        }
    }

    /// Points per coordinate axis.
    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// Half-width of the grid.
    pub fn range(&self) -> f64 {
        self.range
    }

    /// Distance between adjacent grid points along one axis.
    pub fn spacing(&self) -> f64 {
        2.0 * self.range / (self.points_per_axis - 1) as f64
    }

    /// All grid points in `R^dim`, in row-major order.
    fn points(&self, dim: usize) -> Result<Vec<DVector<f64>>> {
        let total = self.points_per_axis.checked_pow(dim as u32).filter(|t| *t <= 4_000_000);
        let total = total.ok_or_else(|| {
            Error::InvalidInput(format!(
                "grid of {} points per axis in dimension {dim} is too large",
                self.points_per_axis
            ))
        })?;
        let axis: Vec<f64> = (0..self.points_per_axis)
            .map(|i| -self.range + i as f64 * self.spacing())
            .collect();
        let mut out = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rem = flat;
            let mut coords = vec![0.0; dim];
            for c in (0..dim).rev() {
                coords[c] = axis[rem % self.points_per_axis];
                rem /= self.points_per_axis;
            }
            out.push(DVector::from_vec(coords));
        }
        Ok(out)
    }
}

/// Zero-set probe of a single bosonic observable over a finite grid in its
/// outcome space.
#[derive(Debug, Clone)]
pub struct SupportProbe {
    /// Probed points `p` in `R^M`.
    pub points: Vec<DVector<f64>>,
    /// `|f0(p)| ≤ threshold · max |f0|` per point.
    pub zero_mask: Vec<bool>,
    /// Images `A0 p` of the nonzero points — a sample of the set `Y`.
    pub y_nonzero: Vec<DVector<f64>>,
    /// Fraction of grid points classified nonzero.
    pub nonzero_fraction: f64,
    /// Largest distance from any zero point to its nearest nonzero grid
    /// point; lower-bounds the radius of the biggest ball in the probed
    /// zero set. Zero when nothing is flagged zero.
    pub hole_radius: f64,
    /// Grid point minimizing `|f0|` — locates the zero set even when no
    /// point falls below the threshold.
    pub min_abs_point: DVector<f64>,
    /// The minimal `|f0|` attained on the grid.
    pub min_abs_value: f64,
    /// Grid spacing, for interpreting `hole_radius`.
    pub spacing: f64,
    /// Worst truncated-tail weight across oracle evaluations (0 for
    /// closed-form kernels).
    pub max_truncation_weight: f64,
}

/// Evidence attached to an informational-completeness verdict.
#[derive(Debug, Clone)]
pub enum VerdictEvidence {
    /// The probed union of `Y` sets has no empty ball at grid resolution.
    Coverage {
        /// Fraction of probe points covered by at least one member.
        nonzero_fraction: f64,
        /// Largest zero-to-nonzero distance observed.
        hole_radius: f64,
    },
    /// A ball in phase space where every member vanishes.
    ZeroHole {
        /// A grid point deep inside the uncovered region.
        center: DVector<f64>,
        /// Distance from `center` to the nearest covered point.
        radius: f64,
    },
    /// All covered points lie inside a bounded region; the exterior of the
    /// grid is entirely uncovered.
    BoundedSupport {
        /// Largest norm of a covered point.
        radius: f64,
    },
    /// No member has a full-rank `A0`; every image set lies in a proper
    /// subspace and the union cannot be dense.
    DegenerateDirections,
}

/// Finite-resolution informational-completeness verdict.
#[derive(Debug, Clone)]
pub struct BosonicVerdict {
    /// `true` when the probe found no violation. Never a proof of
    /// completeness — density is not certifiable from finite samples.
    pub ic_consistent: bool,
    /// What the probe saw.
    pub evidence: VerdictEvidence,
}

/// Evaluates `f0(p)`.
///
/// For smeared Gaussians this is the closed form
/// `hat(p) · exp(-¼ pᵀB0 p) · exp(-i v0·p)`; for Fock-generated covariant
/// observables it is `σ̂(Ω₁ p)` computed by the truncated-Fock oracle, and
/// the returned truncation weight reports the oracle's tail diagnostic.
///
/// # Errors
///
/// Dimension mismatch between `p` and the outcome space.
pub fn f0_eval(obs: &BosonicObservable, p: &DVector<f64>) -> Result<OracleValue> {
    if p.len() != obs.outcome_dim {
        return Err(Error::InvalidDimension(format!(
            "argument has length {}, expected outcome dimension {}",
            p.len(),
            obs.outcome_dim
        )));
    }
    match &obs.f0 {
        BosonicKernel::SmearedGaussian { b0, v0, noise } => {
            let gauss = (-0.25 * (p.transpose() * b0 * p)[(0, 0)]).exp();
            let value = Complex64::from_polar(noise.eval(p) * gauss, -v0.dot(p));
            Ok(OracleValue {
                value,
                truncation_weight: 0.0,
            })
        }
        BosonicKernel::CovariantFock { sigma } => {
            let arg = omega_mat(1) * p;
            oracle_weyl_transform(sigma, &arg)
        }
    }
}

/// Probes the zero set of `f0` over a rectangular grid in outcome space.
///
/// Points with `|f0| ≤ threshold · max_grid |f0|` are flagged zero. The
/// probe reports the covered images `A0 p`, the largest zero hole (largest
/// distance from a zero point to its nearest nonzero point), and the
/// location of the minimal `|f0|`, which tracks measure-zero zero sets
/// that slip between threshold and grid.
///
/// # Errors
///
/// Oversized grids (`points_per_axis^M` capped at 4·10⁶) or oracle
/// failures.
pub fn support_probe(
    obs: &BosonicObservable,
    grid: &GridSpec,
    threshold: f64,
) -> Result<SupportProbe> {
    let points = grid.points(obs.outcome_dim)?;
    let mut abs_values = Vec::with_capacity(points.len());
    let mut max_truncation_weight = 0.0f64;
    for p in &points {
        let val = f0_eval(obs, p)?;
        max_truncation_weight = max_truncation_weight.max(val.truncation_weight);
        abs_values.push(val.value.norm());
    }
    let max_abs_val = abs_values.iter().fold(0.0f64, |a, b| a.max(*b));
    let cut = threshold * max_abs_val;
    let zero_mask: Vec<bool> = abs_values.iter().map(|a| *a <= cut).collect();

    let mut min_idx = 0;
    for (i, a) in abs_values.iter().enumerate() {
        if *a < abs_values[min_idx] {
            min_idx = i;
        }
    }
    let y_nonzero: Vec<DVector<f64>> = points
        .iter()
        .zip(&zero_mask)
        .filter(|(_, z)| !**z)
        .map(|(p, _)| &obs.a0 * p)
        .collect();
    let nonzero = zero_mask.iter().filter(|z| !**z).count();
    let hole_radius = largest_hole(&points, &zero_mask);
    Ok(SupportProbe {
        min_abs_point: points[min_idx].clone(),
        min_abs_value: abs_values[min_idx],
        zero_mask,
        y_nonzero,
        nonzero_fraction: nonzero as f64 / points.len() as f64,
        hole_radius,
        spacing: grid.spacing(),
        max_truncation_weight,
        points,
    })
}

/// Largest distance from a zero-flagged point to its nearest
/// nonzero-flagged point; 0 when either class is empty.
fn largest_hole(points: &[DVector<f64>], zero_mask: &[bool]) -> f64 {
    let nonzero: Vec<&DVector<f64>> = points
        .iter()
        .zip(zero_mask)
        .filter(|(_, z)| !**z)
        .map(|(p, _)| p)
        .collect();
    if nonzero.is_empty() || nonzero.len() == points.len() {
        return 0.0;
    }
    let mut worst = 0.0f64;
    for (p, z) in points.iter().zip(zero_mask) {
        if !*z {
            continue;
        }
        let mut nearest = f64::INFINITY;
        for q in &nonzero {
            nearest = nearest.min((p - *q).norm_squared());
        }
        worst = worst.max(nearest);
    }
    worst.sqrt()
}

/// Probes whether the union `∪_j Y_j` could be dense in phase space.
///
/// Members with invertible `A0` (`M = 2N`, full numerical rank) are pulled
/// back onto a common phase-space grid: a grid point `x` is covered by
/// member `j` when `|f0ʲ(A0ʲ⁻¹ x)|` exceeds `threshold` relative to that
/// member's maximum. Since an invertible `A0` is a bi-Lipschitz map,
/// empty-interior and boundedness conclusions transfer between outcome and
/// phase space. Rank-deficient members contribute images inside a proper
/// subspace; they are skipped, and a set with no full-rank member is
/// reported `not-IC` outright.
///
/// Verdict logic: `BoundedSupport` when the grid's outer shell is entirely
/// uncovered; otherwise `ZeroHole` when some uncovered point is at least
/// two grid spacings from every covered point; otherwise `IC-consistent`.
///
/// # Errors
///
/// Empty set, mixed mode counts, or oversized grids.
pub fn ic_bosonic_verdict(
    observables: &[BosonicObservable],
    grid: &GridSpec,
    threshold: f64,
) -> Result<BosonicVerdict> {
    let first = observables
        .first()
        .ok_or_else(|| Error::InvalidInput("verdict needs at least one observable".into()))?;
    let n = first.n_modes;
    let dim = 2 * n;
    for obs in observables {
        if obs.n_modes != n {
            return Err(Error::InvalidDimension(format!(
                "member acts on {} modes, expected {n}",
                obs.n_modes
            )));
        }
    }

    // Pull back each full-rank member onto the common phase-space grid.
    let mut usable: Vec<(&BosonicObservable, DMatrix<f64>)> = Vec::new();
    for obs in observables {
        if obs.outcome_dim != dim || numerical_rank(&obs.a0, 1e-10) < dim {
            continue;
        }
        if let Some(inv) = obs.a0.clone().try_inverse() {
            usable.push((obs, inv));
        }
    }
    if usable.is_empty() {
        return Ok(BosonicVerdict {
            ic_consistent: false,
            evidence: VerdictEvidence::DegenerateDirections,
        });
    }

    let points = grid.points(dim)?;
    let mut covered = vec![false; points.len()];
    for (obs, inv) in &usable {
        let mut abs_values = Vec::with_capacity(points.len());
        for x in &points {
            let p = inv * x;
            abs_values.push(f0_eval(obs, &p)?.value.norm());
        }
        let max_abs_val = abs_values.iter().fold(0.0f64, |a, b| a.max(*b));
        let cut = threshold * max_abs_val;
        for (c, a) in covered.iter_mut().zip(&abs_values) {
            *c = *c || *a > cut;
        }
    }

    let covered_count = covered.iter().filter(|c| **c).count();
    let nonzero_fraction = covered_count as f64 / points.len() as f64;

    // Bounded support: the outer shell of the grid is entirely uncovered.
    let shell = 0.85 * grid.range();
    let shell_covered = points
        .iter()
        .zip(&covered)
        .any(|(x, c)| *c && x.amax() > shell);
    if !shell_covered && covered_count > 0 {
        let radius = points
            .iter()
            .zip(&covered)
            .filter(|(_, c)| **c)
            .map(|(x, _)| x.norm())
            .fold(0.0f64, f64::max);
        return Ok(BosonicVerdict {
            ic_consistent: false,
            evidence: VerdictEvidence::BoundedSupport { radius },
        });
    }

    let zero_mask: Vec<bool> = covered.iter().map(|c| !*c).collect();
    let hole_radius = largest_hole(&points, &zero_mask);
    if hole_radius >= 2.0 * grid.spacing() {
        // Re-find the worst point for the evidence record.
        let covered_pts: Vec<&DVector<f64>> = points
            .iter()
            .zip(&covered)
            .filter(|(_, c)| **c)
            .map(|(p, _)| p)
            .collect();
        let mut center = points[0].clone();
        let mut radius = 0.0f64;
        for (p, c) in points.iter().zip(&covered) {
            if *c {
                continue;
            }
            let nearest = covered_pts
                .iter()
                .map(|q| (p - *q).norm_squared())
                .fold(f64::INFINITY, f64::min)
                .sqrt();
            if nearest > radius {
                radius = nearest;
                center = p.clone();
            }
        }
        return Ok(BosonicVerdict {
            ic_consistent: false,
            evidence: VerdictEvidence::ZeroHole { center, radius },
        });
    }

    Ok(BosonicVerdict {
        ic_consistent: true,
        evidence: VerdictEvidence::Coverage {
            nonzero_fraction,
            hole_radius,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{number_state_density, pure_gaussian_density, vacuum_density};
    use crate::infocomplete::ic_single;
    use crate::random::{random_ic_observable, random_state};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    const CUTOFF: usize = 30;

    fn vacuum_covariant() -> BosonicObservable {
        BosonicObservable::covariant_fock(vacuum_density(CUTOFF).unwrap(), 1e-9).unwrap()
    }

    fn one_photon_covariant() -> BosonicObservable {
        BosonicObservable::covariant_fock(number_state_density(1, CUTOFF).unwrap(), 1e-9).unwrap()
    }

    fn fejer_q_function() -> BosonicObservable {
        let base = GaussianObservable::q_function(1).unwrap();
        BosonicObservable::smeared(&base, NoiseProfile::Fejer { width: 1.0 }, 1e-9).unwrap()
    }

    #[test]
    fn f0_eval_examples() {
        // Trace normalization at the origin.
        let vac = vacuum_covariant();
        let at0 = f0_eval(&vac, &DVector::zeros(2)).unwrap();
        assert!((at0.value - Complex64::new(1.0, 0.0)).norm() < 1e-12);

        // One-photon zero circle: f0 vanishes when ‖Ωp‖ = √2.
        let one = one_photon_covariant();
        let p = DVector::from_vec(vec![1.0, 1.0]);
        let on_circle = f0_eval(&one, &p).unwrap();
        assert!(on_circle.value.norm() < 1e-10, "got {}", on_circle.value.norm());

        // Fejér hat kills everything beyond its support.
        let quad = GaussianObservable::quadrature(DVector::from_vec(vec![0.0, 1.0])).unwrap();
        let smeared =
            BosonicObservable::smeared(&quad, NoiseProfile::Fejer { width: 1.0 }, 1e-9).unwrap();
        let outside = f0_eval(&smeared, &DVector::from_vec(vec![2.0])).unwrap();
        assert_eq!(outside.value, Complex64::new(0.0, 0.0));
        // Sharp quadratures have B0 = 0, leaving the bare hat value.
        let inside = f0_eval(&smeared, &DVector::from_vec(vec![0.5])).unwrap();
        assert!((inside.value.norm() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn one_photon_weyl_transform_matches_laguerre_form() {
        let one = one_photon_covariant();
        for (px, py) in [(0.3, -0.4), (1.2, 0.5), (0.0, 2.0)] {
            let p = DVector::from_vec(vec![px, py]);
            let r2: f64 = px * px + py * py; // ‖Ωp‖ = ‖p‖
            let expect = (1.0 - r2 / 2.0) * (-r2 / 4.0).exp();
            let got = f0_eval(&one, &p).unwrap().value;
            assert!((got.re - expect).abs() < 1e-8, "re at ({px},{py})");
            assert!(got.im.abs() < 1e-8, "im at ({px},{py})");
        }
    }

    #[test]
    fn covariant_f0_is_hermitian_symmetric() {
        let mut rng = ChaCha12Rng::seed_from_u64(0xf0);
        let state = random_state(1, &mut rng);
        // Any S·Sᵀ with S symplectic is a pure covariance; borrow the
        // Williamson transform of a random state to get a generic one.
        let sigma = pure_gaussian_density(
            &crate::states::GaussianState::new(
                state.m().clone(),
                {
                    let w = crate::symplectic::williamson(state.v(), 1e-10).unwrap();
                    &w.s * w.s.transpose()
                },
                1e-9,
            )
            .unwrap(),
            CUTOFF,
        )
        .unwrap();
        let obs = BosonicObservable::covariant_fock(sigma, 1e-8).unwrap();
        for _ in 0..10 {
            let p = DVector::from_fn(2, |_, _| rng.random_range(-1.5..1.5));
            let plus = f0_eval(&obs, &p).unwrap().value;
            let minus = f0_eval(&obs, &(-p)).unwrap().value;
            assert!((plus - minus.conj()).norm() < 1e-8);
        }
    }

    #[test]
    fn support_probe_vacuum_is_everywhere_nonzero() {
        let probe = support_probe(&vacuum_covariant(), &GridSpec::default_probe(), 1e-8).unwrap();
        assert_eq!(probe.nonzero_fraction, 1.0);
        assert_eq!(probe.hole_radius, 0.0);
        assert!(probe.max_truncation_weight < 1e-6);
        assert_eq!(probe.points.len(), 101 * 101);
    }

    #[test]
    fn support_probe_locates_the_one_photon_zero_circle() {
        let grid = GridSpec::default_probe();
        // At the default threshold the circle is measure zero: grid points
        // all but surely miss it, but the minimizer tracks it.
        let tight = support_probe(&one_photon_covariant(), &grid, 1e-8).unwrap();
        assert!(tight.nonzero_fraction > 0.999);
        let radius = tight.min_abs_point.norm();
        assert!(
            (radius - 2.0f64.sqrt()).abs() <= grid.spacing(),
            "minimizer at radius {radius}"
        );

        // A loose threshold exhibits the ring of near-zeros around √2.
        let loose = support_probe(&one_photon_covariant(), &grid, 0.05).unwrap();
        let ring: Vec<&DVector<f64>> = loose
            .points
            .iter()
            .zip(&loose.zero_mask)
            .filter(|(_, z)| **z)
            .map(|(p, _)| p)
            .collect();
        assert!(!ring.is_empty());
        assert!(ring
            .iter()
            .any(|p| (p.norm() - 2.0f64.sqrt()).abs() <= 2.0 * grid.spacing()));
    }

    #[test]
    fn support_probe_fejer_support_is_bounded() {
        let probe = support_probe(&fejer_q_function(), &GridSpec::default_probe(), 1e-8).unwrap();
        // hat(p) = 0 whenever either coordinate leaves [-1, 1].
        assert!(probe.nonzero_fraction < 0.07);
        for y in &probe.y_nonzero {
            assert!(y.amax() < 1.0 + 1e-12, "image escaped the bounded square");
        }
        assert!(probe.hole_radius > 2.0 * probe.spacing);
    }

    #[test]
    fn verdict_examples() {
        let grid = GridSpec::default_probe();
        let vac = ic_bosonic_verdict(&[vacuum_covariant()], &grid, 1e-8).unwrap();
        assert!(vac.ic_consistent);
        assert!(matches!(vac.evidence, VerdictEvidence::Coverage { .. }));

        let one = ic_bosonic_verdict(&[one_photon_covariant()], &grid, 1e-8).unwrap();
        assert!(one.ic_consistent, "empty-interior zero set must not flag");

        let fejer = ic_bosonic_verdict(&[fejer_q_function()], &grid, 1e-8).unwrap();
        assert!(!fejer.ic_consistent);
        match fejer.evidence {
            VerdictEvidence::BoundedSupport { radius } => {
                assert!(radius < 1.6, "square support has diameter 2√2, got {radius}")
            }
            other => panic!("expected bounded-support evidence, got {other:?}"),
        }

        assert!(ic_bosonic_verdict(&[], &grid, 1e-8).is_err());
    }

    #[test]
    fn complementary_zero_balls_cover_jointly() {
        let grid = GridSpec::default_probe();
        let base = GaussianObservable::q_function(1).unwrap();
        let left = BosonicObservable::smeared(
            &base,
            NoiseProfile::ZeroBall {
                center: DVector::from_vec(vec![2.0, 0.0]),
                radius: 1.0,
            },
            1e-9,
        )
        .unwrap();
        let right = BosonicObservable::smeared(
            &base,
            NoiseProfile::ZeroBall {
                center: DVector::from_vec(vec![0.0, 2.0]),
                radius: 1.0,
            },
            1e-9,
        )
        .unwrap();

        let alone = ic_bosonic_verdict(&[left.clone()], &grid, 1e-8).unwrap();
        assert!(!alone.ic_consistent);
        match alone.evidence {
            VerdictEvidence::ZeroHole { center, radius } => {
                // The hole sits at the image -Ω·(2,0) = (0,2) of the ball center.
                assert!((center - DVector::from_vec(vec![0.0, 2.0])).norm() < 0.2);
                assert!(radius > 0.5);
            }
            other => panic!("expected a zero-hole witness, got {other:?}"),
        }
        let alone_r = ic_bosonic_verdict(&[right.clone()], &grid, 1e-8).unwrap();
        assert!(!alone_r.ic_consistent);

        let pair = ic_bosonic_verdict(&[left, right], &grid, 1e-8).unwrap();
        assert!(pair.ic_consistent, "disjoint zero balls must cover jointly");
    }

    #[test]
    fn gaussian_kernels_agree_with_rank_classification() {
        // A Gaussian kernel is analytically nonzero everywhere, so with an
        // exact-zero threshold the verdict must coincide with the rank
        // criterion: full-rank A0 → covered grid, rank-deficient →
        // degenerate directions. (A positive relative threshold would
        // truncate Gaussian tails on a large window by design.)
        let mut rng = ChaCha12Rng::seed_from_u64(0xb050);
        let grid = GridSpec::new(41, 2.0).unwrap();
        for i in 0..50 {
            let gaussian = if rng.random_bool(0.5) {
                random_ic_observable(1, &mut rng)
            } else {
                // Force a rank-deficient direction matrix on M = 2N.
                let u = DVector::from_fn(2, |_, _| rng.random_range(-1.0f64..1.0));
                let w = DVector::from_fn(2, |_, _| rng.random_range(-1.0f64..1.0));
                let a0 = &u * w.transpose();
                let m = 2;
                let skew = a0.transpose() * omega_mat(1) * &a0;
                let b0 = DMatrix::identity(m, m).scale(1.0 + skew.norm());
                GaussianObservable::new(a0, b0, DVector::zeros(m), 1e-9).unwrap()
            };
            let bosonic =
                BosonicObservable::smeared(&gaussian, NoiseProfile::Trivial, 1e-9).unwrap();
            let verdict = ic_bosonic_verdict(std::slice::from_ref(&bosonic), &grid, 0.0).unwrap();
            assert_eq!(
                verdict.ic_consistent,
                ic_single(&gaussian, 1e-9),
                "case {i} disagrees"
            );
        }
    }

    #[test]
    fn constructor_guards() {
        // Invalid Gaussian part is rejected.
        let bad = GaussianObservable::new(
            -omega_mat(1),
            DMatrix::zeros(2, 2),
            DVector::zeros(2),
            1e-9,
        )
        .unwrap();
        assert!(matches!(
            BosonicObservable::smeared(&bad, NoiseProfile::Trivial, 1e-9),
            Err(Error::InvalidObservable { .. })
        ));

        // Non-density generator is rejected.
        let mut not_density = vacuum_density(CUTOFF).unwrap().into_matrix();
        not_density[(0, 0)] = Complex64::new(2.0, 0.0);
        let op = FockOperator::new(not_density).unwrap();
        assert!(BosonicObservable::covariant_fock(op, 1e-9).is_err());

        // Zero-ball center must live in outcome space.
        let base = GaussianObservable::q_function(1).unwrap();
        assert!(BosonicObservable::smeared(
            &base,
            NoiseProfile::ZeroBall {
                center: DVector::zeros(3),
                radius: 1.0
            },
            1e-9
        )
        .is_err());

        // Quadrature smearing alone can never be informationally complete.
        let quad = GaussianObservable::quadrature(DVector::from_vec(vec![0.0, 1.0])).unwrap();
        let deg = BosonicObservable::smeared(&quad, NoiseProfile::Trivial, 1e-9).unwrap();
        let verdict =
            ic_bosonic_verdict(&[deg], &GridSpec::new(21, 3.0).unwrap(), 1e-8).unwrap();
        assert!(!verdict.ic_consistent);
        assert!(matches!(verdict.evidence, VerdictEvidence::DegenerateDirections));
    }
}
