//! Gaussian channels `(A, B, v)`: complete positivity, action on states,
//! the channel ↔ observable correspondence, and unitary dilations.
//!
//! A Gaussian channel from `N` to `M` modes acts on Weyl transforms by
//!
//! ```text
//! Φ(ρ)^(x) = ρ̂(Ax) · exp(-¼ xᵀBx - i vᵀx),    x ∈ R^{2M}
//! ```
//!
//! with `A` real `2N x 2M`, `B` complex `2M x 2M`, `v ∈ R^{2M}`. Complete
//! positivity is equivalent to
//!
//! ```text
//! B + iΩ_M - iAᵀΩ_N A  ⪰  0,
//! ```
//!
//! tested by [`validate_channel`]. `B` is stored complex because the
//! observable → channel converse produces `B = B′ - iΩ_M`: the antisymmetric
//! imaginary part vanishes inside the real quadratic form above (so it never
//! affects statistics or state evolution) but participates in the positivity
//! test. Only the symmetric real part of `B` enters [`apply_channel`].
//!
//! [`observable_from_channel`] reads off the POVM obtained by measuring the
//! canonical `Q`-quadratures of all output modes behind the channel;
//! [`channel_from_observable`] is the exact converse. [`channel_from_dilation`]
//! synthesizes a channel from a symplectic coupling to a Gaussian ancilla
//! followed by a partial trace.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::observables::{validate_observable, GaussianObservable};
use crate::states::GaussianState;
use crate::symplectic::{
    check_even_square_f, hermitian_min_eig, is_symmetric, is_symplectic, max_abs, omega_mat,
    to_complex,
};
use crate::{Error, Result, Validity};

/// A Gaussian channel, shape-checked at construction.
///
/// Construction validates dimensions and the symmetry structure of `B`
/// (real part symmetric, imaginary part antisymmetric); complete positivity
/// is a separate tolerance-aware question answered by [`validate_channel`],
/// so invalid parameter sets can still be represented and diagnosed.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    in_modes: usize,
    out_modes: usize,
    a: DMatrix<f64>,
    b: DMatrix<Complex64>,
    v: DVector<f64>,
}

impl GaussianChannel {
    /// Builds a channel from raw parameters.
    ///
    /// # Errors
    ///
    /// Shape mismatch; `Re B` not symmetric or `Im B` not antisymmetric
    /// within `max(tol, 1e-12)`.
    pub fn new(
        a: DMatrix<f64>,
        b: DMatrix<Complex64>,
        v: DVector<f64>,
        tol: f64,
    ) -> Result<Self> {
        let (rows, cols) = a.shape();
        if rows == 0 || cols == 0 || rows % 2 != 0 || cols % 2 != 0 {
            return Err(Error::InvalidDimension(format!(
                "A must be 2Nx2M with N, M >= 1, got {rows}x{cols}"
            )));
        }
        if b.shape() != (cols, cols) {
            return Err(Error::InvalidDimension(format!(
                "B must be {cols}x{cols}, got {}x{}",
                b.nrows(),
                b.ncols()
            )));
        }
        if v.len() != cols {
            return Err(Error::InvalidDimension(format!(
                "v must have length {cols}, got {}",
                v.len()
            )));
        }
        let sym_tol = tol.max(1e-12);
        let b_re = b.map(|z| z.re);
        let b_im = b.map(|z| z.im);
        if !is_symmetric(&b_re, sym_tol) {
            return Err(Error::InvalidInput("Re B must be symmetric".into()));
        }
        if max_abs(&(&b_im + b_im.transpose())) > sym_tol {
            return Err(Error::InvalidInput("Im B must be antisymmetric".into()));
        }
        Ok(GaussianChannel {
            in_modes: rows / 2,
            out_modes: cols / 2,
            a,
            b,
            v,
        })
    }

    /// Builds a channel with a purely real `B`.
    ///
    /// # Errors
    ///
    /// See [`GaussianChannel::new`].
    pub fn from_real(a: DMatrix<f64>, b: DMatrix<f64>, v: DVector<f64>, tol: f64) -> Result<Self> {
        GaussianChannel::new(a, to_complex(&b), v, tol)
    }

    /// The identity channel on `n_modes` modes.
    pub fn identity(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidDimension("channel needs at least one mode".into()));
        }
        let dim = 2 * n_modes;
        Ok(GaussianChannel {
            in_modes: n_modes,
            out_modes: n_modes,
            a: DMatrix::identity(dim, dim),
            b: DMatrix::zeros(dim, dim),
            v: DVector::zeros(dim),
        })
    }

    /// The attenuation channel with transmissivity `eta ∈ [0, 1]`:
    /// `A = √η·I`, `B = (1-η)·I`, `v = 0` — a beam splitter of
    /// transmissivity `η` against a vacuum ancilla.
    ///
    /// # Errors
    ///
    /// `eta` outside `[0, 1]`.
    pub fn attenuation(n_modes: usize, eta: f64) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidDimension("channel needs at least one mode".into()));
        }
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidInput(format!(
                "transmissivity must lie in [0, 1], got {eta}"
            )));
        }
        let dim = 2 * n_modes;
        Ok(GaussianChannel {
            in_modes: n_modes,
            out_modes: n_modes,
            a: DMatrix::identity(dim, dim).scale(eta.sqrt()),
            b: DMatrix::from_diagonal_element(dim, dim, Complex64::new(1.0 - eta, 0.0)),
            v: DVector::zeros(dim),
        })
    }

    /// Number of input modes `N`.
    pub fn in_modes(&self) -> usize {
        self.in_modes
    }

    /// Number of output modes `M`.
    pub fn out_modes(&self) -> usize {
        self.out_modes
    }

    /// The `2N x 2M` matrix `A`.
    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// The complex `2M x 2M` matrix `B`.
    pub fn b(&self) -> &DMatrix<Complex64> {
        &self.b
    }

    /// The offset `v ∈ R^{2M}`.
    pub fn v(&self) -> &DVector<f64> {
        &self.v
    }

    /// Symmetric real part of `B` — the only part of `B` that enters the
    /// transform identity on real arguments.
    fn b_sym(&self) -> DMatrix<f64> {
        let re = self.b.map(|z| z.re);
        (&re + re.transpose()).scale(0.5)
    }
}

/// A unitary dilation prescription: couple the `N`-mode system to an
/// `L`-mode Gaussian ancilla (`None` for `L = 0`), act with the Gaussian
/// unitary of symplectic `s` and displacement `d` on all `N + L` modes, and
/// keep the first `kept_modes` output modes.
///
/// Conventions: the unitary acts on Weyl operators as
/// `U∗W(x)U = e^{i(Ωd)ᵀx} W(sx)`, so `s` maps measured-output phase-space
/// arguments back through the network and the kept modes pick up a
/// displacement of `-d̃` (the first `2·kept_modes` components of `d`).
#[derive(Debug, Clone)]
pub struct DilationSpec {
    s: DMatrix<f64>,
    d: DVector<f64>,
    ancilla: Option<GaussianState>,
    kept_modes: usize,
}

impl DilationSpec {
    /// Validates and stores a dilation prescription.
    ///
    /// # Errors
    ///
    /// `s` not symplectic (tested at `max(tol, 1e-8)`), shape mismatch, no
    /// system modes left (`L >= N + L`), or no kept modes.
    pub fn new(
        s: DMatrix<f64>,
        d: DVector<f64>,
        ancilla: Option<GaussianState>,
        kept_modes: usize,
        tol: f64,
    ) -> Result<Self> {
        let dim = check_even_square_f(&s)?;
        let total = dim / 2;
        let l = ancilla.as_ref().map_or(0, |a| a.n_modes());
        if l >= total {
            return Err(Error::InvalidDimension(format!(
                "ancilla has {l} modes but the coupling acts on {total}; no system modes left"
            )));
        }
        if d.len() != dim {
            return Err(Error::InvalidDimension(format!(
                "displacement must have length {dim}, got {}",
                d.len()
            )));
        }
        if kept_modes == 0 || kept_modes > total {
            return Err(Error::InvalidDimension(format!(
                "kept_modes must lie in 1..={total}, got {kept_modes}"
            )));
        }
        if !is_symplectic(&s, tol.max(1e-8))? {
            return Err(Error::InvalidInput("coupling matrix is not symplectic".into()));
        }
        Ok(DilationSpec {
            s,
            d,
            ancilla,
            kept_modes,
        })
    }

    /// The symplectic coupling on all `N + L` modes.
    pub fn s(&self) -> &DMatrix<f64> {
        &self.s
    }

    /// The displacement on all `N + L` modes.
    pub fn d(&self) -> &DVector<f64> {
        &self.d
    }

    /// The ancilla state (`None` means no ancilla).
    pub fn ancilla(&self) -> Option<&GaussianState> {
        self.ancilla.as_ref()
    }

    /// How many leading output modes are kept.
    pub fn kept_modes(&self) -> usize {
        self.kept_modes
    }

    /// Total number of modes `N + L`.
    pub fn total_modes(&self) -> usize {
        self.s.nrows() / 2
    }

    /// Number of system modes `N`.
    pub fn system_modes(&self) -> usize {
        self.total_modes() - self.ancilla.as_ref().map_or(0, |a| a.n_modes())
    }
}

/// Tests complete positivity `B + iΩ_M - iAᵀΩ_N A ⪰ 0` at `tol`.
pub fn validate_channel(ch: &GaussianChannel, tol: f64) -> Result<Validity> {
    let skew = ch.a.transpose() * omega_mat(ch.in_modes) * &ch.a;
    let test = &ch.b + (to_complex(&omega_mat(ch.out_modes)) - to_complex(&skew)).map(|z| z * Complex64::I);
    let min_eig = hermitian_min_eig(&test)?;
    Ok(Validity {
        ok: min_eig >= -tol,
        min_eig,
    })
}

/// Pushes a state through a channel.
///
/// Matching the Gaussian transform `ρ̂(y) = e^{-¼yᵀ(ΩᵀVΩ)y - i(Ωm)ᵀy}` at
/// `y = Ax` against the transform identity gives the closed form
///
/// ```text
/// V′ = Ω_M (AᵀΩ_NᵀVΩ_N A + B_s) Ω_Mᵀ,    m′ = Ω_Mᵀ(AᵀΩ_N m + v)
/// ```
///
/// with `B_s` the symmetric real part of `B`. Validity of the output is a
/// theorem when both inputs are valid; this function checks dimensions only.
///
/// # Errors
///
/// Mode-count mismatch.
pub fn apply_channel(ch: &GaussianChannel, state: &GaussianState) -> Result<GaussianState> {
    if state.n_modes() != ch.in_modes {
        return Err(Error::InvalidDimension(format!(
            "channel expects {} input modes, state has {}",
            ch.in_modes,
            state.n_modes()
        )));
    }
    let om_in = omega_mat(ch.in_modes);
    let om_out = omega_mat(ch.out_modes);
    let core = ch.a.transpose() * om_in.transpose() * state.v() * &om_in * &ch.a + ch.b_sym();
    let v_out = &om_out * core * om_out.transpose();
    let v_out = (&v_out + v_out.transpose()).scale(0.5);
    let m_out = om_out.transpose() * (ch.a.transpose() * &om_in * state.m() + &ch.v);
    Ok(GaussianState::from_parts_unchecked(m_out, v_out))
}

/// Composes two channels: `compose(outer, inner)` is “`inner` first, then
/// `outer`”.
///
/// Substituting the transform identity of `inner` into that of `outer`
/// yields parameters
///
/// ```text
/// A = A_inner A_outer,   B = A_outerᵀ B_inner A_outer + B_outer,
/// v = A_outerᵀ v_inner + v_outer,
/// ```
///
/// the contravariant composition on phase-space arguments.
///
/// # Errors
///
/// `outer` input modes must equal `inner` output modes.
pub fn compose(outer: &GaussianChannel, inner: &GaussianChannel) -> Result<GaussianChannel> {
    if outer.in_modes != inner.out_modes {
        return Err(Error::InvalidDimension(format!(
            "cannot compose: outer expects {} modes, inner produces {}",
            outer.in_modes, inner.out_modes
        )));
    }
    Ok(GaussianChannel {
        in_modes: inner.in_modes,
        out_modes: outer.out_modes,
        a: &inner.a * &outer.a,
        b: to_complex(&outer.a).transpose() * &inner.b * to_complex(&outer.a) + &outer.b,
        v: outer.a.transpose() * &inner.v + &outer.v,
    })
}

/// The Gaussian observable measured by homodyning the canonical
/// `Q`-quadrature of every output mode behind the channel: in 0-based
/// indices,
///
/// ```text
/// (A0)_{ij} = A_{i, 2j+1},   (B0)_{ij} = Re B_{2i+1, 2j+1},   (v0)_i = v_{2i+1}.
/// ```
///
/// Only the real part of `B` survives: the imaginary part is antisymmetric
/// and cancels in the outcome characteristic function. The result always
/// satisfies the observable positivity condition when the channel is
/// completely positive (measuring a POVM behind a channel is a POVM).
pub fn observable_from_channel(ch: &GaussianChannel) -> GaussianObservable {
    let n2 = 2 * ch.in_modes;
    let m = ch.out_modes;
    let a0 = DMatrix::from_fn(n2, m, |i, j| ch.a[(i, 2 * j + 1)]);
    let b0 = DMatrix::from_fn(m, m, |i, j| ch.b[(2 * i + 1, 2 * j + 1)].re);
    let b0 = (&b0 + b0.transpose()).scale(0.5);
    let v0 = DVector::from_fn(m, |i, _| ch.v[2 * i + 1]);
    GaussianObservable::from_parts_unchecked(a0, b0, v0)
}

/// The exact converse of [`observable_from_channel`]: builds a channel with
/// one output mode per outcome dimension whose `Q`-quadrature measurement
/// is `obs`, parameter for parameter.
///
/// The construction embeds `A0`, `B0`, `v0` at the odd (0-based) indices
/// and sets `B = B′ - iΩ_M`; the positivity test matrix then equals the
/// observable's positivity matrix embedded in the odd-odd block, so the
/// channel is valid exactly when the observable is.
///
/// # Errors
///
/// `obs` fails its positivity condition at `tol`.
pub fn channel_from_observable(obs: &GaussianObservable, tol: f64) -> Result<GaussianChannel> {
    let validity = validate_observable(obs, tol)?;
    if !validity.ok {
        return Err(Error::InvalidObservable {
            min_eig: validity.min_eig,
        });
    }
    let m = obs.outcome_dim();
    let n2 = 2 * obs.n_modes();
    let mut a = DMatrix::<f64>::zeros(n2, 2 * m);
    let mut b = to_complex(&omega_mat(m)).map(|z| -Complex64::I * z);
    let mut v = DVector::<f64>::zeros(2 * m);
    for j in 0..m {
        for i in 0..n2 {
            a[(i, 2 * j + 1)] = obs.a0()[(i, j)];
        }
        for i in 0..m {
            b[(2 * i + 1, 2 * j + 1)] += Complex64::new(obs.b0()[(i, j)], 0.0);
        }
        v[2 * j + 1] = obs.v0()[j];
    }
    Ok(GaussianChannel {
        in_modes: obs.n_modes(),
        out_modes: m,
        a,
        b,
        v,
    })
}

/// Synthesizes the channel of a unitary dilation: with the block split of
/// the coupling `s` into system rows (`s11`, first `2N`) and ancilla rows
/// (`s21`, last `2L`) of the first `2M` columns,
///
/// ```text
/// A = s11,   B = s21ᵀ Ω_Lᵀ V_anc Ω_L s21,   v = s21ᵀ Ω_L m_anc - Ω_M d̃,
/// ```
///
/// where `d̃` is the kept part of the displacement. With no ancilla the
/// noise term vanishes and `A` is the leading block of `s`.
///
/// The output always passes [`validate_channel`]: tracing a unitary
/// coupling against a valid Gaussian ancilla is completely positive.
///
/// # Errors
///
/// More kept modes than system-plus-ancilla modes provides (checked at
/// [`DilationSpec::new`]); otherwise none.
pub fn channel_from_dilation(spec: &DilationSpec) -> Result<GaussianChannel> {
    let n = spec.system_modes();
    let m = spec.kept_modes();
    let om_m = omega_mat(m);
    let a = spec.s.view((0, 0), (2 * n, 2 * m)).into_owned();
    let d_kept = spec.d.rows(0, 2 * m).into_owned();
    let mut v = -(&om_m * d_kept);
    let mut b_real = DMatrix::<f64>::zeros(2 * m, 2 * m);
    if let Some(anc) = &spec.ancilla {
        let l = anc.n_modes();
        let om_l = omega_mat(l);
        let s21 = spec.s.view((2 * n, 0), (2 * l, 2 * m)).into_owned();
        b_real = s21.transpose() * om_l.transpose() * anc.v() * &om_l * &s21;
        b_real = (&b_real + b_real.transpose()).scale(0.5);
        v += s21.transpose() * (&om_l * anc.m());
    }
    Ok(GaussianChannel {
        in_modes: n,
        out_modes: m,
        a,
        b: to_complex(&b_real),
        v,
    })
}
