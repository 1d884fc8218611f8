//! The four DMD algorithms plus linear-consistency analysis, adjoint modes,
//! Koopman-style reconstruction/propagation and spectrum extraction.
//!
//! All algorithms share the reduced operator `Ã = U* Y V Σ⁻¹` built from the
//! reduced SVD `X = U Σ V*`. They differ only in which basis the eigenvectors
//! of the (possibly augmented) reduced operator are lifted through:
//!
//! | algorithm    | mode                          |
//! |--------------|-------------------------------|
//! | `Projected`  | `φ̂ = U w`                     |
//! | `Exact`      | `φ = (1/λ) Y V Σ⁻¹ w`          |
//! | `Qr`         | `φ = Q v`, `Q` spans `[X Y]`   |
//! | `Sequential` | `φ = U w + (1/λ) q q* B w`     |

use std::f64::consts::PI;

use crate::data::{pairs_from_sequence, SnapshotPairs};
use crate::error::{DmdError, Result};
use crate::linalg::{
    c, condition_number, eig_dense, least_squares, orthonormal_basis, pseudoinverse_apply, reduced_svd, CMatrix,
    CVector, RankPolicy, ReducedSvd, C64,
};
use crate::scaling::ScalingPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Exact,
    Projected,
    Qr,
    Sequential,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Projected => "projected",
            Algorithm::Qr => "qr",
            Algorithm::Sequential => "sequential",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DmdOptions {
    pub rank: RankPolicy,
    /// Eigenvalues with `|λ| ≤ zero_tol` are treated as zero. Defaults to
    /// `r · ε · ‖Ã‖_F`.
    pub zero_tol: Option<f64>,
    pub include_zero_modes: bool,
    pub compute_adjoint: bool,
    /// Relative threshold on `‖p‖ / ‖z_m‖` below which the sequential
    /// algorithm takes `Q = U`.
    pub gs_tol: f64,
}

impl Default for DmdOptions {
    fn default() -> Self {
        Self {
            rank: RankPolicy::Default,
            zero_tol: None,
            include_zero_modes: false,
            compute_adjoint: true,
            gs_tol: 1e-10,
        }
    }
}

/// `Ã = U* B` with `B = Y V Σ⁻¹`.
#[derive(Debug, Clone)]
pub struct ReducedOperator {
    pub a_tilde: CMatrix,
    pub svd: ReducedSvd,
    pub b: CMatrix,
}

impl ReducedOperator {
    pub fn rank(&self) -> usize {
        self.svd.rank
    }

    /// The full operator `A = Y X⁺ = B U*`. Only sensible for small `n`.
    pub fn explicit_a(&self) -> CMatrix {
        &self.b * self.svd.u.adjoint()
    }
}

pub fn reduced_operator(pairs: &SnapshotPairs, rank: RankPolicy) -> Result<ReducedOperator> {
    let svd = reduced_svd(pairs.x(), rank)?;
    let mut b = pairs.y() * &svd.v;
    for (j, s) in svd.sigma.iter().enumerate() {
        b.column_mut(j).unscale_mut(*s);
    }
    let a_tilde = svd.u.adjoint() * &b;
    Ok(ReducedOperator { a_tilde, svd, b })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// The eigenvector matrix of the reduced operator is numerically
    /// singular, so the modes do not form a full set.
    DefectiveOperator { eigvec_condition: f64 },
}

#[derive(Debug, Clone)]
pub struct DmdDecomposition {
    pub eigenvalues: Vec<C64>,
    pub exact_modes: CMatrix,
    pub projected_modes: CMatrix,
    /// `ψ = U z` with `z* Ã = λ z*`.
    pub adjoint_modes: Option<CMatrix>,
    pub adjoint_vectors: Option<CMatrix>,
    pub amplitudes: Option<Vec<C64>>,
    pub amplitude_residual: Option<f64>,
    /// Eigenvectors `w` of `Ã`, with `U* φ = w`.
    pub reduced_vectors: CMatrix,
    pub algorithm: Algorithm,
    pub scaling: Option<ScalingPolicy>,
    pub operator: ReducedOperator,
    pub zero_tol: f64,
    pub warnings: Vec<Warning>,
}

impl DmdDecomposition {
    /// The modes this algorithm reports: projected modes for projected DMD,
    /// exact modes otherwise.
    pub fn modes(&self) -> &CMatrix {
        match self.algorithm {
            Algorithm::Projected => &self.projected_modes,
            _ => &self.exact_modes,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.operator.rank()
    }

    pub fn mode_norms(&self) -> Vec<f64> {
        self.modes().column_iter().map(|c| c.norm()).collect()
    }

    /// Applies a column permutation to every per-mode quantity.
    pub(crate) fn reorder(&mut self, order: &[usize]) {
        self.eigenvalues = order.iter().map(|&i| self.eigenvalues[i]).collect();
        self.exact_modes = self.exact_modes.select_columns(order);
        self.projected_modes = self.projected_modes.select_columns(order);
        self.reduced_vectors = self.reduced_vectors.select_columns(order);
        if let Some(a) = &self.adjoint_modes {
            self.adjoint_modes = Some(a.select_columns(order));
        }
        if let Some(z) = &self.adjoint_vectors {
            self.adjoint_vectors = Some(z.select_columns(order));
        }
        if let Some(d) = &self.amplitudes {
            self.amplitudes = Some(order.iter().map(|&i| d[i]).collect());
        }
    }

    /// Sorts modes by descending norm, then descending `|λ|`, then ascending
    /// `arg λ`, and keeps complex-conjugate pairs adjacent.
    pub fn sort_canonical(&mut self) {
        let norms = self.mode_norms();
        let key = |i: usize| {
            let l = self.eigenvalues[i];
            (-round_sig(norms[i]), -round_sig(l.norm()), (l.arg() * 1e9).round())
        };
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            let (ka, kb) = (key(a), key(b));
            ka.0.total_cmp(&kb.0)
                .then(ka.1.total_cmp(&kb.1))
                .then(ka.2.total_cmp(&kb.2))
                .then(a.cmp(&b))
        });
        pair_conjugates(&mut order, &self.eigenvalues);
        self.reorder(&order);
    }
}

fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let scale = 10f64.powi(8 - x.abs().log10().floor() as i32);
    (x * scale).round() / scale
}

fn pair_conjugates(order: &mut [usize], values: &[C64]) {
    let mut i = 0;
    while i < order.len() {
        let l = values[order[i]];
        let tol = 1e-8 * l.norm().max(1.0);
        if l.im.abs() > tol && i + 1 < order.len() {
            let target = l.conj();
            let partner = (i + 1..order.len())
                .filter(|&j| (values[order[j]] - target).norm() <= tol)
                .min_by(|&a, &b| {
                    (values[order[a]] - target).norm().total_cmp(&(values[order[b]] - target).norm())
                });
            if let Some(j) = partner {
                let moved = order[j];
                order.copy_within(i + 1..j, i + 2);
                order[i + 1] = moved;
                i += 2;
                continue;
            }
        }
        i += 1;
    }
}

fn default_zero_tol(m: &CMatrix) -> f64 {
    m.nrows() as f64 * f64::EPSILON * m.norm()
}

fn defect_warning(vectors: &CMatrix) -> Option<Warning> {
    let cond = condition_number(vectors).unwrap_or(f64::INFINITY);
    (cond > 1e8).then_some(Warning::DefectiveOperator { eigvec_condition: cond })
}

/// Builds exact and projected modes from eigenvectors of `Ã` itself
/// (algorithms 1, 2 and 4 share this).
fn lift_reduced(
    op: ReducedOperator,
    opts: &DmdOptions,
    algorithm: Algorithm,
    correction: Option<&CVector>,
) -> Result<DmdDecomposition> {
    let eig = eig_dense(&op.a_tilde, opts.compute_adjoint)?;
    let zero_tol = opts.zero_tol.unwrap_or_else(|| default_zero_tol(&op.a_tilde));
    let b_zero = default_zero_tol(&op.b).max(f64::MIN_POSITIVE);
    let u = &op.svd.u;

    let mut keep = Vec::new();
    for (k, l) in eig.values.iter().enumerate() {
        if l.norm() > zero_tol || opts.include_zero_modes {
            keep.push(k);
        }
    }
    let w = eig.vectors.select_columns(&keep);
    let projected = u * &w;
    let mut exact = CMatrix::zeros(u.nrows(), keep.len());
    for (j, &k) in keep.iter().enumerate() {
        let l = eig.values[k];
        let wk = w.column(j);
        let bw = &op.b * wk;
        let phi = if l.norm() > zero_tol {
            match (algorithm, correction) {
                (Algorithm::Sequential, Some(q)) => {
                    let coef = q.dotc(&bw) / l;
                    u * wk + q * coef
                }
                (Algorithm::Sequential, None) => u * wk,
                _ => bw / l,
            }
        } else if bw.norm() > b_zero {
            bw
        } else {
            u * wk
        };
        exact.set_column(j, &phi);
    }

    let (adjoint_modes, adjoint_vectors) = match &eig.left_vectors {
        Some(z) => {
            let z = z.select_columns(&keep);
            (Some(u * &z), Some(z))
        }
        None => (None, None),
    };

    let mut warnings = Vec::new();
    warnings.extend(defect_warning(&eig.vectors));

    let mut dec = DmdDecomposition {
        eigenvalues: keep.iter().map(|&k| eig.values[k]).collect(),
        exact_modes: exact,
        projected_modes: projected,
        adjoint_modes,
        adjoint_vectors,
        amplitudes: None,
        amplitude_residual: None,
        reduced_vectors: w,
        algorithm,
        scaling: None,
        operator: op,
        zero_tol,
        warnings,
    };
    dec.sort_canonical();
    Ok(dec)
}

/// Exact DMD: modes `φ = (1/λ) Y V Σ⁻¹ w` are eigenvectors of `A = Y X⁺`.
pub fn exact_dmd(pairs: &SnapshotPairs, opts: &DmdOptions) -> Result<DmdDecomposition> {
    let op = reduced_operator(pairs, opts.rank)?;
    lift_reduced(op, opts, Algorithm::Exact, None)
}

/// Projected DMD: modes `φ̂ = U w`, eigenvectors of `P_X A`.
pub fn projected_dmd(pairs: &SnapshotPairs, opts: &DmdOptions) -> Result<DmdDecomposition> {
    let op = reduced_operator(pairs, opts.rank)?;
    lift_reduced(op, opts, Algorithm::Projected, None)
}

/// Exact DMD through an orthonormal basis `Q` of `[X Y]`: eigenvectors `v`
/// of `Q* A Q` lift to `φ = Q v`.
pub fn exact_dmd_qr(pairs: &SnapshotPairs, opts: &DmdOptions) -> Result<DmdDecomposition> {
    let op = reduced_operator(pairs, opts.rank)?;
    let stacked = {
        let (n, m) = (pairs.state_dim(), pairs.len());
        let mut s = CMatrix::zeros(n, 2 * m);
        s.columns_mut(0, m).copy_from(pairs.x());
        s.columns_mut(m, m).copy_from(pairs.y());
        s
    };
    let q = orthonormal_basis(&stacked)?;
    // Q* A Q with A = B U*
    let a_q = (q.adjoint() * &op.b) * (op.svd.u.adjoint() * &q);
    let eig = eig_dense(&a_q, false)?;
    let zero_tol = opts.zero_tol.unwrap_or_else(|| default_zero_tol(&a_q));

    // rank(Q* A Q) ≤ r, so all but the r largest eigenvalues are zero in
    // exact arithmetic however large their round-off
    let mut by_size: Vec<usize> = (0..eig.values.len()).collect();
    by_size.sort_by(|&a, &b| eig.values[b].norm().total_cmp(&eig.values[a].norm()));
    let mut structural = vec![false; eig.values.len()];
    for &k in by_size.iter().skip(op.rank()) {
        structural[k] = true;
    }
    let keep: Vec<usize> = (0..eig.values.len())
        .filter(|&k| opts.include_zero_modes || (!structural[k] && eig.values[k].norm() > zero_tol))
        .collect();
    let mut exact = &q * eig.vectors.select_columns(&keep);
    crate::linalg::normalize_columns(&mut exact);
    let w = op.svd.u.adjoint() * &exact;
    let projected = &op.svd.u * &w;
    let eigenvalues: Vec<C64> = keep.iter().map(|&k| eig.values[k]).collect();

    let (adjoint_modes, adjoint_vectors) = if opts.compute_adjoint {
        let (z, _) = matched_left_vectors(&op, &eigenvalues)?;
        (Some(&op.svd.u * &z), Some(z))
    } else {
        (None, None)
    };
    let mut warnings = Vec::new();
    warnings.extend(defect_warning(&eig.vectors));

    let mut dec = DmdDecomposition {
        eigenvalues,
        exact_modes: exact,
        projected_modes: projected,
        adjoint_modes,
        adjoint_vectors,
        amplitudes: None,
        amplitude_residual: None,
        reduced_vectors: w,
        algorithm: Algorithm::Qr,
        scaling: None,
        operator: op,
        zero_tol,
        warnings,
    };
    dec.sort_canonical();
    Ok(dec)
}

/// Left eigenvectors of `Ã` matched one-to-one to `values` by nearest
/// eigenvalue. Returns the vectors and the worst match distance.
fn matched_left_vectors(op: &ReducedOperator, values: &[C64]) -> Result<(CMatrix, f64)> {
    let eig = eig_dense(&op.a_tilde, true)?;
    let left = eig.left_vectors.expect("requested left vectors");
    let mut used = vec![false; eig.values.len()];
    let mut z = CMatrix::zeros(op.rank(), values.len());
    let mut worst: f64 = 0.0;
    for (j, l) in values.iter().enumerate() {
        let best = (0..eig.values.len())
            .filter(|&k| !used[k])
            .min_by(|&a, &b| (eig.values[a] - l).norm().total_cmp(&(eig.values[b] - l).norm()));
        if let Some(k) = best {
            used[k] = true;
            worst = worst.max((eig.values[k] - l).norm());
            z.set_column(j, &left.column(k));
        }
    }
    Ok((z, worst))
}

/// Exact DMD of a sequential series using a single Gram–Schmidt step on the
/// last snapshot instead of a factorization of `[X Y]`.
pub fn exact_dmd_sequential(z: &CMatrix, opts: &DmdOptions) -> Result<DmdDecomposition> {
    let pairs = pairs_from_sequence(z)?;
    let op = reduced_operator(&pairs, opts.rank)?;
    let q = gram_schmidt_direction(&op.svd.u, &z.column(z.ncols() - 1).into_owned(), opts.gs_tol);
    lift_reduced(op, opts, Algorithm::Sequential, q.as_ref())
}

/// `q = p / ‖p‖` with `p = z − U U* z`, or `None` when `‖p‖ ≤ tol ‖z‖`.
pub fn gram_schmidt_direction(u: &CMatrix, z: &CVector, tol: f64) -> Option<CVector> {
    let znorm = z.norm();
    let mut p = z - u * (u.adjoint() * z);
    if p.norm() <= tol * znorm || p.norm() == 0.0 {
        return None;
    }
    // second pass restores orthogonality lost to cancellation
    p -= u * (u.adjoint() * &p);
    let pn = p.norm();
    if pn <= tol * znorm {
        return None;
    }
    Some(p / c(pn, 0.0))
}

/// Runs the requested algorithm. The sequential algorithm needs pairs whose
/// provenance is sequential so the snapshot list can be recovered.
pub fn decompose(pairs: &SnapshotPairs, algorithm: Algorithm, opts: &DmdOptions) -> Result<DmdDecomposition> {
    match algorithm {
        Algorithm::Exact => exact_dmd(pairs, opts),
        Algorithm::Projected => projected_dmd(pairs, opts),
        Algorithm::Qr => exact_dmd_qr(pairs, opts),
        Algorithm::Sequential => exact_dmd_sequential(&pairs.sequence()?, opts),
    }
}

#[derive(Debug, Clone)]
pub struct AdjointModes {
    pub eigenvalues: Vec<C64>,
    /// Columns `ψ = U z`, satisfying `ψ* A = λ ψ*`.
    pub modes: CMatrix,
}

pub fn adjoint_modes(op: &ReducedOperator) -> Result<AdjointModes> {
    let eig = eig_dense(&op.a_tilde, true)?;
    let z = eig.left_vectors.expect("requested left vectors");
    Ok(AdjointModes { eigenvalues: eig.values, modes: &op.svd.u * z })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub consistent: bool,
    /// `‖Y (I − X⁺X)‖_F / ‖Y‖_F`.
    pub defect: f64,
    /// `‖A X − Y‖_F / ‖Y‖_F`, computed through `A = B U*`.
    pub ax_residual: f64,
    pub tol: f64,
    /// A unit vector `a` with `X a ≈ 0` but `Y a ≠ 0`, when inconsistent.
    pub witness: Option<CVector>,
}

pub const DEFAULT_CONSISTENCY_TOL: f64 = 1e-10;

/// Checks whether the nullspace of `X` lies inside the nullspace of `Y`.
pub fn linear_consistency(pairs: &SnapshotPairs, tol: Option<f64>) -> Result<ConsistencyReport> {
    let tol = tol.unwrap_or(DEFAULT_CONSISTENCY_TOL);
    let y = pairs.y();
    let ynorm = y.norm();
    if ynorm == 0.0 {
        return Ok(ConsistencyReport { consistent: true, defect: 0.0, ax_residual: 0.0, tol, witness: None });
    }
    let op = match reduced_operator(pairs, RankPolicy::Default) {
        Ok(op) => op,
        Err(DmdError::RankZero) => {
            // N(X) is everything
            let witness = reduced_svd(y, RankPolicy::Default).ok().map(|s| s.v.column(0).into_owned());
            return Ok(ConsistencyReport { consistent: false, defect: 1.0, ax_residual: 1.0, tol, witness });
        }
        Err(e) => return Err(e),
    };
    let v = &op.svd.v;
    let complement = y - (y * v) * v.adjoint();
    let defect = complement.norm() / ynorm;
    let ax = op.explicit_a_times(pairs.x());
    let ax_residual = (ax - y).norm() / ynorm;
    let consistent = defect <= tol;
    let witness = if consistent {
        None
    } else {
        reduced_svd(&complement, RankPolicy::Default).ok().map(|s| s.v.column(0).into_owned())
    };
    Ok(ConsistencyReport { consistent, defect, ax_residual, tol, witness })
}

impl ReducedOperator {
    /// `A M = B (U* M)` without forming `A`.
    pub fn explicit_a_times(&self, m: &CMatrix) -> CMatrix {
        &self.b * (self.svd.u.adjoint() * m)
    }

    /// `X⁺ rhs`.
    pub fn pinv_x(&self, rhs: &CMatrix) -> Result<CMatrix> {
        pseudoinverse_apply(&self.svd, rhs)
    }
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub coefficients: CVector,
    /// `‖Σ c_j φ_j − x‖`.
    pub residual: f64,
}

/// Expands `x` in the decomposition's modes by least squares.
pub fn reconstruct(dec: &DmdDecomposition, x: &CVector) -> Result<Reconstruction> {
    if x.len() != dec.modes().nrows() {
        return Err(DmdError::Dimension(format!(
            "vector length {} vs state dimension {}",
            x.len(),
            dec.modes().nrows()
        )));
    }
    let (coefficients, residual) = least_squares(dec.modes(), x)?;
    Ok(Reconstruction { coefficients, residual })
}

/// `Σ_j λ_j^k c_j φ_j`.
pub fn propagate(dec: &DmdDecomposition, coefficients: &CVector, steps: u32) -> Result<CVector> {
    if coefficients.len() != dec.len() {
        return Err(DmdError::Dimension(format!(
            "{} coefficients for {} modes",
            coefficients.len(),
            dec.len()
        )));
    }
    let scaled = CVector::from_iterator(
        dec.len(),
        dec.eigenvalues
            .iter()
            .zip(coefficients.iter())
            .map(|(l, cj)| l.powu(steps) * cj),
    );
    Ok(dec.modes() * scaled)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub eigenvalue: C64,
    /// `arg λ / (2π dt)`, cycles per unit time.
    pub frequency: f64,
    /// `|λ|`.
    pub growth_rate_discrete: f64,
    /// `ln|λ| / dt`; `-∞` for `λ = 0`.
    pub growth_rate_continuous: f64,
    pub mode_norm: f64,
    /// `‖φ‖ · |λ|^m_weight`.
    pub weighted_norm: f64,
}

pub fn spectrum(dec: &DmdDecomposition, dt: f64, m_weight: i32) -> Result<Vec<SpectrumPoint>> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(DmdError::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let norms = dec.mode_norms();
    Ok(dec
        .eigenvalues
        .iter()
        .zip(norms)
        .map(|(&l, mode_norm)| spectrum_point(l, mode_norm, dt, m_weight))
        .collect())
}

pub fn spectrum_point(l: C64, mode_norm: f64, dt: f64, m_weight: i32) -> SpectrumPoint {
    let abs = l.norm();
    let frequency = if abs == 0.0 {
        0.0
    } else if l.im == 0.0 {
        if l.re > 0.0 {
            0.0
        } else {
            0.5 / dt
        }
    } else {
        l.arg() / (2.0 * PI * dt)
    };
    let growth_rate_continuous = if abs == 0.0 { f64::NEG_INFINITY } else { abs.ln() / dt };
    SpectrumPoint {
        eigenvalue: l,
        frequency,
        growth_rate_discrete: abs,
        growth_rate_continuous,
        mode_norm,
        weighted_norm: mode_norm * abs.powi(m_weight),
    }
}
