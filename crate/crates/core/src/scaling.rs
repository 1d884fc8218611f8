//! Mode-scaling policies. DMD modes are only defined up to a per-mode
//! complex factor; these fix that factor.

use nalgebra::LU;

use crate::data::SnapshotPairs;
use crate::dmd::DmdDecomposition;
use crate::error::{DmdError, Result};
use crate::linalg::{c, least_squares, CMatrix, CVector, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingPolicy {
    UnitNorm,
    Biorthogonal,
    AmplitudeQr,
    AmplitudeGram,
}

impl ScalingPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            ScalingPolicy::UnitNorm => "unit-norm",
            ScalingPolicy::Biorthogonal => "biorthogonal",
            ScalingPolicy::AmplitudeQr => "amplitude-qr",
            ScalingPolicy::AmplitudeGram => "amplitude-gram",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeMethod {
    /// Householder QR of the mode matrix.
    Qr,
    /// Normal equations through `Y*Y`, without forming the modes. Squares the
    /// condition number of the mode matrix.
    Gram,
}

/// Which snapshot the amplitudes reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AmplitudeTarget {
    /// `Φ Λ d = y_0`.
    #[default]
    FirstOutput,
    /// `Φ d = x_0` (least squares; generally needs zero-eigenvalue modes to
    /// be exact).
    FirstInput,
}

/// Rescales every mode so that its reduced eigenvector `w` has unit norm;
/// projected modes then have unit norm too.
pub fn scale_unit_norm(dec: &DmdDecomposition) -> DmdDecomposition {
    let mut out = dec.clone();
    for j in 0..out.len() {
        let s = out.reduced_vectors.column(j).norm();
        if s > 0.0 {
            out.reduced_vectors.column_mut(j).unscale_mut(s);
            out.exact_modes.column_mut(j).unscale_mut(s);
            out.projected_modes.column_mut(j).unscale_mut(s);
            if let Some(d) = out.amplitudes.as_mut() {
                d[j] *= s;
            }
        }
    }
    out.scaling = Some(ScalingPolicy::UnitNorm);
    out
}

/// Relative gap below which two eigenvalues count as repeated.
pub const REPEATED_EIGENVALUE_TOL: f64 = 1e-9;

/// Unit-norm `w`, then adjoint vectors scaled so `z* w = 1`, which makes
/// `ψ_k* φ_k = 1` and `ψ_j* φ_k = 0` for distinct eigenvalues.
pub fn scale_biorthogonal(dec: &DmdDecomposition) -> Result<DmdDecomposition> {
    if dec.adjoint_vectors.is_none() {
        return Err(DmdError::MissingAdjoint);
    }
    let lmax = dec.eigenvalues.iter().map(|l| l.norm()).fold(0.0, f64::max);
    for j in 0..dec.len() {
        for k in (j + 1)..dec.len() {
            if (dec.eigenvalues[j] - dec.eigenvalues[k]).norm() <= REPEATED_EIGENVALUE_TOL * lmax {
                return Err(DmdError::RepeatedEigenvalues(j, k));
            }
        }
    }
    let mut out = scale_unit_norm(dec);
    let u = out.operator.svd.u.clone();
    let z = out.adjoint_vectors.as_mut().expect("checked above");
    for k in 0..z.ncols() {
        let s = z.column(k).dotc(&out.reduced_vectors.column(k));
        if s.norm() < f64::EPSILON {
            return Err(DmdError::Singular("adjoint normalization"));
        }
        let factor = c(1.0, 0.0) / s.conj();
        let mut col = z.column_mut(k);
        col *= factor;
    }
    out.adjoint_modes = Some(&u * &*z);
    out.scaling = Some(ScalingPolicy::Biorthogonal);
    Ok(out)
}

/// Solves for mode amplitudes `d` against the exact modes and stores them in
/// the returned decomposition, along with the residual of the solve.
///
/// The Gram route evaluates
/// `d = (W* Σ⁻¹ V* Y* Y V Σ⁻¹ W)⁻¹ W* Σ⁻¹ V* Y* y_0` with `W = U* Φ`.
pub fn scale_amplitudes(
    dec: &DmdDecomposition,
    pairs: &SnapshotPairs,
    method: AmplitudeMethod,
    target: AmplitudeTarget,
) -> Result<DmdDecomposition> {
    if !pairs.provenance().is_sequential() {
        return Err(DmdError::NotSequential(pairs.provenance().name()));
    }
    let phi = &dec.exact_modes;
    if pairs.state_dim() != phi.nrows() {
        return Err(DmdError::Dimension("pairs do not match the decomposition".into()));
    }
    let y0: CVector = pairs.y().column(0).into_owned();
    let x0: CVector = pairs.x().column(0).into_owned();
    let lambdas = &dec.eigenvalues;

    let d = match method {
        AmplitudeMethod::Qr => {
            let (sys, rhs) = match target {
                AmplitudeTarget::FirstOutput => (scale_columns(phi, lambdas), &y0),
                AmplitudeTarget::FirstInput => (phi.clone(), &x0),
            };
            least_squares(&sys, rhs)?.0
        }
        AmplitudeMethod::Gram => {
            let rhs = match target {
                AmplitudeTarget::FirstOutput => &y0,
                AmplitudeTarget::FirstInput => &x0,
            };
            let base = gram_solve(dec, pairs, rhs)?;
            match target {
                AmplitudeTarget::FirstOutput => base,
                AmplitudeTarget::FirstInput => {
                    CVector::from_iterator(base.len(), base.iter().zip(lambdas).map(|(b, l)| b * l))
                }
            }
        }
    };

    let residual = match target {
        AmplitudeTarget::FirstOutput => (scale_columns(phi, lambdas) * &d - &y0).norm(),
        AmplitudeTarget::FirstInput => (phi * &d - &x0).norm(),
    };
    let mut out = dec.clone();
    out.amplitudes = Some(d.iter().copied().collect());
    out.amplitude_residual = Some(residual);
    out.scaling = Some(match method {
        AmplitudeMethod::Qr => ScalingPolicy::AmplitudeQr,
        AmplitudeMethod::Gram => ScalingPolicy::AmplitudeGram,
    });
    Ok(out)
}

/// `(W* M W)⁻¹ W* Σ⁻¹ V* Y* rhs` with `M = Σ⁻¹ V* (Y*Y) V Σ⁻¹`.
fn gram_solve(dec: &DmdDecomposition, pairs: &SnapshotPairs, rhs: &CVector) -> Result<CVector> {
    let svd = &dec.operator.svd;
    let y = pairs.y();
    let w = svd.u.adjoint() * &dec.exact_modes;
    let sinv = svd.sigma_inv_diag();
    let proj = &sinv * svd.v.adjoint(); // Σ⁻¹ V*
    let gram_y = y.adjoint() * y;
    let m = &proj * gram_y * proj.adjoint();
    let lhs = w.adjoint() * m * &w;
    let b = w.adjoint() * (&proj * (y.adjoint() * rhs));
    LU::new(lhs).solve(&b).ok_or(DmdError::Singular("gram amplitude system"))
}

fn scale_columns(m: &CMatrix, factors: &[C64]) -> CMatrix {
    let mut out = m.clone();
    for (j, f) in factors.iter().enumerate() {
        let mut col = out.column_mut(j);
        col *= *f;
    }
    out
}

/// Applies a policy by name. Amplitude policies need the pairs the
/// decomposition came from.
pub fn apply_policy(
    dec: &DmdDecomposition,
    policy: ScalingPolicy,
    pairs: &SnapshotPairs,
    target: AmplitudeTarget,
) -> Result<DmdDecomposition> {
    match policy {
        ScalingPolicy::UnitNorm => Ok(scale_unit_norm(dec)),
        ScalingPolicy::Biorthogonal => scale_biorthogonal(dec),
        ScalingPolicy::AmplitudeQr => scale_amplitudes(dec, pairs, AmplitudeMethod::Qr, target),
        ScalingPolicy::AmplitudeGram => scale_amplitudes(dec, pairs, AmplitudeMethod::Gram, target),
    }
}
