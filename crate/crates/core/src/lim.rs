//! Linear inverse modeling in EOF coordinates.
//!
//! With EOFs taken from `X` alone and the mean removed, the lag-covariance
//! fit `G(τ) = E(x̂(t+τ) x̂(t)*) Λ⁻¹` reproduces the DMD reduced operator
//! `Ã` exactly. The fit below is computed purely from covariances so that
//! the comparison with `Ã` is between two independent routes.

use nalgebra::LU;

use crate::data::SnapshotPairs;
use crate::dmd::reduced_operator;
use crate::error::{DmdError, Result};
use crate::linalg::{c, reduced_svd, CMatrix, CVector, RankPolicy, ReducedSvd};

/// Relative size of the column mean of `X` above which the data count as
/// not mean-subtracted.
pub const MEAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct EofCoefficients {
    /// EOFs: left singular vectors of `X`.
    pub eofs: CMatrix,
    pub x_hat: CMatrix,
    pub y_hat: CMatrix,
    pub svd: ReducedSvd,
}

/// Fails unless the columns of `X` have (numerically) zero mean.
pub fn check_mean_removed(pairs: &SnapshotPairs) -> Result<()> {
    let x = pairs.x();
    let mean_norm = x.column_mean().norm();
    let data_norm = x.norm() / (x.ncols() as f64).sqrt();
    if mean_norm > MEAN_TOL * data_norm {
        return Err(DmdError::NotMeanSubtracted { mean_norm, data_norm });
    }
    Ok(())
}

/// EOFs from `X` and the coefficient matrices `X̂ = U* X`, `Ŷ = U* Y`.
/// `force` skips the mean check.
pub fn eof_coefficients(pairs: &SnapshotPairs, force: bool) -> Result<EofCoefficients> {
    if !force {
        check_mean_removed(pairs)?;
    }
    let svd = reduced_svd(pairs.x(), RankPolicy::Default)?;
    let x_hat = svd.u.adjoint() * pairs.x();
    let y_hat = svd.u.adjoint() * pairs.y();
    Ok(EofCoefficients { eofs: svd.u.clone(), x_hat, y_hat, svd })
}

#[derive(Debug, Clone)]
pub struct LimModel {
    pub eofs: CMatrix,
    pub x_hat: CMatrix,
    pub y_hat: CMatrix,
    /// `Λ = (1/m) X̂ X̂*`.
    pub lambda_cov: CMatrix,
    /// `(1/m) Ŷ X̂*`.
    pub lag_cov: CMatrix,
    /// `G(τ) = lag_cov · Λ⁻¹`.
    pub green: CMatrix,
    pub tau: Option<f64>,
}

/// `G(τ)` from the EOF coefficients, using uniform ensemble averages.
pub fn green_function(eof: &EofCoefficients) -> Result<(CMatrix, CMatrix, CMatrix)> {
    let m = eof.x_hat.ncols() as f64;
    let scale = c(1.0 / m, 0.0);
    let lambda_cov = &eof.x_hat * eof.x_hat.adjoint() * scale;
    let lag_cov = &eof.y_hat * eof.x_hat.adjoint() * scale;
    // G Λ = C_τ  ⇔  Λ* G* = C_τ*
    let g_adj = LU::new(lambda_cov.adjoint())
        .solve(&lag_cov.adjoint())
        .ok_or(DmdError::Singular("EOF covariance"))?;
    if g_adj.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(DmdError::Singular("EOF covariance"));
    }
    Ok((g_adj.adjoint(), lambda_cov, lag_cov))
}

pub fn fit_lim(pairs: &SnapshotPairs, force: bool) -> Result<LimModel> {
    let eof = eof_coefficients(pairs, force)?;
    let (green, lambda_cov, lag_cov) = green_function(&eof)?;
    Ok(LimModel {
        eofs: eof.eofs,
        x_hat: eof.x_hat,
        y_hat: eof.y_hat,
        lambda_cov,
        lag_cov,
        green,
        tau: pairs.dt(),
    })
}

#[derive(Debug, Clone)]
pub struct LimEquivalence {
    pub green: CMatrix,
    pub a_tilde: CMatrix,
    pub max_abs_diff: f64,
    pub a_tilde_norm: f64,
}

impl LimEquivalence {
    /// `max |G − Ã| ≤ 1e-10 ‖Ã‖_F`.
    pub fn holds(&self) -> bool {
        self.max_abs_diff <= 1e-10 * self.a_tilde_norm
    }
}

/// Compares the LIM Green's function against `Ã` from DMD on the same pairs.
pub fn lim_dmd_equivalence(pairs: &SnapshotPairs, force: bool) -> Result<LimEquivalence> {
    let model = fit_lim(pairs, force)?;
    let op = reduced_operator(pairs, RankPolicy::Default)?;
    let diff = &model.green - &op.a_tilde;
    let max_abs_diff = diff.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(LimEquivalence {
        a_tilde_norm: op.a_tilde.norm(),
        green: model.green,
        a_tilde: op.a_tilde,
        max_abs_diff,
    })
}

/// `G x̂(t)`, the expected EOF state one lag later.
pub fn most_probable_state(green: &CMatrix, x_hat: &CVector) -> Result<CVector> {
    if green.ncols() != x_hat.len() {
        return Err(DmdError::Dimension(format!(
            "G has {} columns, state has {} entries",
            green.ncols(),
            x_hat.len()
        )));
    }
    Ok(green * x_hat)
}
