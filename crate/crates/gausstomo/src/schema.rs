//! JSON wire formats.
//!
//! Data-transfer types mirror the library objects field by field, with
//! matrices as row-major nested arrays and complex matrices split into
//! real and imaginary parts. Conversions *into* library types go through
//! the validating constructors, so a parsed file cannot smuggle in an
//! invalid object.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channels::{DilationSpec, GaussianChannel};
use crate::fock::FockOperator;
use crate::observables::{GaussianDistribution, GaussianObservable};
use crate::states::GaussianState;
use crate::{Error, Result};

/// Nested row-major array → matrix.
///
/// # Errors
///
/// Empty or ragged rows.
pub fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    if nrows == 0 || ncols == 0 {
        return Err(Error::InvalidInput("matrix must be nonempty".into()));
    }
    let mut flat = Vec::with_capacity(nrows * ncols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(Error::InvalidInput(format!(
                "row {i} has {} entries, expected {ncols}",
                row.len()
            )));
        }
        flat.extend_from_slice(row);
    }
    Ok(DMatrix::from_row_slice(nrows, ncols, &flat))
}

/// Matrix → nested row-major array.
pub fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Real/imaginary row-major pair → complex matrix.
///
/// # Errors
///
/// Ragged input or mismatched shapes.
pub fn rows_to_complex(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<DMatrix<Complex64>> {
    let re = rows_to_matrix(re)?;
    let im = rows_to_matrix(im)?;
    if re.shape() != im.shape() {
        return Err(Error::InvalidDimension(format!(
            "real part is {:?} but imaginary part is {:?}",
            re.shape(),
            im.shape()
        )));
    }
    Ok(DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| {
        Complex64::new(re[(i, j)], im[(i, j)])
    }))
}

/// Complex matrix → (real rows, imaginary rows).
pub fn complex_to_rows(m: &DMatrix<Complex64>) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let re = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect())
        .collect();
    let im = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect())
        .collect();
    (re, im)
}

/// Gaussian state: `{"n_modes": N, "m": [...], "v": [[...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateDto {
    /// Mode count `N`.
    pub n_modes: usize,
    /// Mean vector, length `2N`.
    pub m: Vec<f64>,
    /// Covariance matrix, `2N x 2N` row-major.
    pub v: Vec<Vec<f64>>,
}

impl StateDto {
    /// Serializes a state.
    pub fn from_state(state: &GaussianState) -> Self {
        StateDto {
            n_modes: state.n_modes(),
            m: state.m().iter().copied().collect(),
            v: matrix_to_rows(state.v()),
        }
    }

    /// Parses and validates at `tol`.
    ///
    /// # Errors
    ///
    /// Shape mismatch with the declared `n_modes`, or an invalid state.
    pub fn to_state(&self, tol: f64) -> Result<GaussianState> {
        let m = DVector::from_vec(self.m.clone());
        let v = rows_to_matrix(&self.v)?;
        if m.len() != 2 * self.n_modes {
            return Err(Error::InvalidDimension(format!(
                "mean has length {}, expected {}",
                m.len(),
                2 * self.n_modes
            )));
        }
        GaussianState::new(m, v, tol)
    }
}

/// Gaussian channel:
/// `{"in_modes", "out_modes", "a", "b_re", "b_im", "v"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelDto {
    /// Input mode count `N`.
    pub in_modes: usize,
    /// Output mode count `M`.
    pub out_modes: usize,
    /// `2N x 2M` real matrix, row-major.
    pub a: Vec<Vec<f64>>,
    /// Real part of the `2M x 2M` noise form.
    pub b_re: Vec<Vec<f64>>,
    /// Imaginary part of the noise form.
    pub b_im: Vec<Vec<f64>>,
    /// Displacement, length `2M`.
    pub v: Vec<f64>,
}

impl ChannelDto {
    /// Serializes a channel.
    pub fn from_channel(ch: &GaussianChannel) -> Self {
        let (b_re, b_im) = complex_to_rows(ch.b());
        ChannelDto {
            in_modes: ch.in_modes(),
            out_modes: ch.out_modes(),
            a: matrix_to_rows(ch.a()),
            b_re,
            b_im,
            v: ch.v().iter().copied().collect(),
        }
    }

    /// Parses and validates structural invariants at `tol`.
    ///
    /// # Errors
    ///
    /// Shape mismatches or a non-Hermitian noise form.
    pub fn to_channel(&self, tol: f64) -> Result<GaussianChannel> {
        let a = rows_to_matrix(&self.a)?;
        if a.shape() != (2 * self.in_modes, 2 * self.out_modes) {
            return Err(Error::InvalidDimension(format!(
                "matrix a is {:?}, expected ({}, {})",
                a.shape(),
                2 * self.in_modes,
                2 * self.out_modes
            )));
        }
        let b = rows_to_complex(&self.b_re, &self.b_im)?;
        let v = DVector::from_vec(self.v.clone());
        GaussianChannel::new(a, b, v, tol)
    }
}

/// Gaussian observable: `{"n_modes", "outcome_dim", "a0", "b0", "v0"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObservableDto {
    /// Mode count `N`.
    pub n_modes: usize,
    /// Outcome dimension `M`.
    pub outcome_dim: usize,
    /// `2N x M` matrix, row-major.
    pub a0: Vec<Vec<f64>>,
    /// `M x M` symmetric matrix.
    pub b0: Vec<Vec<f64>>,
    /// Length-`M` vector.
    pub v0: Vec<f64>,
}

impl ObservableDto {
    /// Serializes an observable.
    pub fn from_observable(obs: &GaussianObservable) -> Self {
        ObservableDto {
            n_modes: obs.n_modes(),
            outcome_dim: obs.outcome_dim(),
            a0: matrix_to_rows(obs.a0()),
            b0: matrix_to_rows(obs.b0()),
            v0: obs.v0().iter().copied().collect(),
        }
    }

    /// Parses and checks structural invariants at `tol`.
    ///
    /// # Errors
    ///
    /// Shape mismatches with the declared dimensions, or an asymmetric
    /// `b0`.
    pub fn to_observable(&self, tol: f64) -> Result<GaussianObservable> {
        let a0 = rows_to_matrix(&self.a0)?;
        if a0.shape() != (2 * self.n_modes, self.outcome_dim) {
            return Err(Error::InvalidDimension(format!(
                "matrix a0 is {:?}, expected ({}, {})",
                a0.shape(),
                2 * self.n_modes,
                self.outcome_dim
            )));
        }
        let b0 = rows_to_matrix(&self.b0)?;
        let v0 = DVector::from_vec(self.v0.clone());
        GaussianObservable::new(a0, b0, v0, tol)
    }
}

/// Outcome law: `{"mean": [...], "cov": [[...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistributionDto {
    /// Mean of the outcome distribution.
    pub mean: Vec<f64>,
    /// Covariance of the outcome distribution.
    pub cov: Vec<Vec<f64>>,
}

impl DistributionDto {
    /// Serializes a distribution.
    pub fn from_distribution(dist: &GaussianDistribution) -> Self {
        DistributionDto {
            mean: dist.mean.iter().copied().collect(),
            cov: matrix_to_rows(&dist.cov),
        }
    }

    /// Parses and validates (symmetry, positive semidefiniteness) at `tol`.
    ///
    /// # Errors
    ///
    /// Invalid covariance.
    pub fn to_distribution(&self, tol: f64) -> Result<GaussianDistribution> {
        GaussianDistribution::new(
            DVector::from_vec(self.mean.clone()),
            rows_to_matrix(&self.cov)?,
            tol,
        )
    }
}

/// Dilation: `{"s", "d", "ancilla", "kept_modes"}` with `ancilla` null for
/// the no-ancilla case.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DilationDto {
    /// Symplectic matrix on system plus ancilla, row-major.
    pub s: Vec<Vec<f64>>,
    /// Phase-space displacement, length matching `s`.
    pub d: Vec<f64>,
    /// Ancilla Gaussian state, or null for none.
    pub ancilla: Option<StateDto>,
    /// Number of output modes kept after the symplectic action.
    pub kept_modes: usize,
}

impl DilationDto {
    /// Serializes a dilation specification.
    pub fn from_dilation(spec: &DilationSpec) -> Self {
        DilationDto {
            s: matrix_to_rows(spec.s()),
            d: spec.d().iter().copied().collect(),
            ancilla: spec.ancilla().map(StateDto::from_state),
            kept_modes: spec.kept_modes(),
        }
    }

    /// Parses and validates (symplectic `s`, consistent shapes) at `tol`.
    ///
    /// # Errors
    ///
    /// Non-symplectic `s`, bad shapes, or an invalid ancilla state.
    pub fn to_dilation(&self, tol: f64) -> Result<DilationSpec> {
        let s = rows_to_matrix(&self.s)?;
        let d = DVector::from_vec(self.d.clone());
        let ancilla = match &self.ancilla {
            Some(dto) => Some(dto.to_state(tol)?),
            None => None,
        };
        DilationSpec::new(s, d, ancilla, self.kept_modes, tol)
    }
}

/// Truncated-Fock operator: `{"re": [[...]], "im": [[...]]}` with the
/// cutoff implied by the matrix dimension.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FockOperatorDto {
    /// Real part, `D x D` row-major.
    pub re: Vec<Vec<f64>>,
    /// Imaginary part, `D x D` row-major.
    pub im: Vec<Vec<f64>>,
}

impl FockOperatorDto {
    /// Serializes a Fock-space operator.
    pub fn from_operator(op: &FockOperator) -> Self {
        let (re, im) = complex_to_rows(op.matrix());
        FockOperatorDto { re, im }
    }

    /// Parses.
    ///
    /// # Errors
    ///
    /// Non-square or undersized matrix.
    pub fn to_operator(&self) -> Result<FockOperator> {
        FockOperator::new(rows_to_complex(&self.re, &self.im)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_channel, random_dilation, random_observable, random_state};
    use crate::symplectic::max_abs_c;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn state_round_trips_through_json() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let state = random_state(2, &mut rng);
        let text = serde_json::to_string(&StateDto::from_state(&state)).unwrap();
        let back: StateDto = serde_json::from_str(&text).unwrap();
        let state2 = back.to_state(1e-9).unwrap();
        assert_eq!(state.m(), state2.m());
        assert_eq!(state.v(), state2.v());
    }

    #[test]
    fn channel_round_trips_through_json() {
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let ch = random_channel(1, 2, &mut rng);
        let text = serde_json::to_string(&ChannelDto::from_channel(&ch)).unwrap();
        let ch2: GaussianChannel = serde_json::from_str::<ChannelDto>(&text)
            .unwrap()
            .to_channel(1e-9)
            .unwrap();
        assert_eq!(ch.a(), ch2.a());
        assert!(max_abs_c(&(ch.b() - ch2.b())) == 0.0);
        assert_eq!(ch.v(), ch2.v());
    }

    #[test]
    fn observable_and_distribution_round_trip() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let obs = random_observable(2, 3, &mut rng);
        let text = serde_json::to_string(&ObservableDto::from_observable(&obs)).unwrap();
        let obs2 = serde_json::from_str::<ObservableDto>(&text)
            .unwrap()
            .to_observable(1e-9)
            .unwrap();
        assert_eq!(obs.a0(), obs2.a0());
        assert_eq!(obs.b0(), obs2.b0());

        let law = crate::observables::pushforward(&obs, &random_state(2, &mut rng)).unwrap();
        let text = serde_json::to_string(&DistributionDto::from_distribution(&law)).unwrap();
        let law2 = serde_json::from_str::<DistributionDto>(&text)
            .unwrap()
            .to_distribution(1e-8)
            .unwrap();
        assert_eq!(law.mean, law2.mean);
        assert_eq!(law.cov, law2.cov);
    }

    #[test]
    fn dilation_round_trips_with_and_without_ancilla() {
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        for (anc, kept) in [(0, 1), (2, 2)] {
            let spec = random_dilation(2, anc, kept, &mut rng);
            let text = serde_json::to_string(&DilationDto::from_dilation(&spec)).unwrap();
            let spec2 = serde_json::from_str::<DilationDto>(&text)
                .unwrap()
                .to_dilation(1e-8)
                .unwrap();
            assert_eq!(spec.s(), spec2.s());
            assert_eq!(spec.ancilla().is_some(), spec2.ancilla().is_some());
            assert_eq!(spec.kept_modes(), spec2.kept_modes());
        }
    }

    #[test]
    fn fock_operator_round_trips() {
        let op = crate::fock::coherent_density(&DVector::from_vec(vec![0.4, -0.2]), 12).unwrap();
        let text = serde_json::to_string(&FockOperatorDto::from_operator(&op)).unwrap();
        let op2 = serde_json::from_str::<FockOperatorDto>(&text)
            .unwrap()
            .to_operator()
            .unwrap();
        assert!(max_abs_c(&(op.matrix() - op2.matrix())) == 0.0);
    }

    #[test]
    fn malformed_input_is_rejected() {
        // Ragged matrix.
        assert!(rows_to_matrix(&[vec![1.0, 2.0], vec![3.0]]).is_err());
        // Mismatched re/im shapes.
        assert!(rows_to_complex(&[vec![1.0]], &[vec![1.0, 2.0]]).is_err());
        // Declared dimension contradicting the payload.
        let dto = StateDto {
            n_modes: 2,
            m: vec![0.0, 0.0],
            v: matrix_to_rows(&DMatrix::identity(2, 2)),
        };
        assert!(dto.to_state(1e-9).is_err());
        // Covariance violating the uncertainty relation.
        let bad = StateDto {
            n_modes: 1,
            m: vec![0.0, 0.0],
            v: matrix_to_rows(&DMatrix::identity(2, 2).scale(0.5)),
        };
        assert!(bad.to_state(1e-9).is_err());
    }
}
