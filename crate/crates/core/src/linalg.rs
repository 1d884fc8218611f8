//! Dense complex matrix kernels: reduced SVD with a numerical-rank decision,
//! orthonormal bases, a small nonsymmetric eigensolver and pseudoinverse
//! application.
//!
//! Everything downstream works on complex matrices. Real data enter through
//! [`to_complex`].

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen, QR};
use num_complex::Complex64;

use crate::error::{DmdError, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Default relative tolerance for eigenpair residuals.
pub const DEFAULT_EIG_TOL: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|v| C64::new(v, 0.0))
}

pub fn ensure_finite(m: &CMatrix, what: &'static str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(DmdError::NonFinite(what))
    }
}

/// How the numerical rank of a matrix is decided from its singular values.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum RankPolicy {
    /// Keep σ_i > max(rows, cols) · ε · σ_1.
    #[default]
    Default,
    /// Keep σ_i > tol · σ_1.
    Relative(f64),
    /// Keep σ_i > tol.
    Absolute(f64),
    /// Keep exactly this many values; fails if it exceeds the default rank.
    Fixed(usize),
}

impl RankPolicy {
    fn threshold(&self, sigma1: f64, rows: usize, cols: usize) -> f64 {
        let default = rows.max(cols) as f64 * f64::EPSILON * sigma1;
        match *self {
            RankPolicy::Default | RankPolicy::Fixed(_) => default,
            RankPolicy::Relative(tol) => tol * sigma1,
            RankPolicy::Absolute(tol) => tol,
        }
    }
}

/// Truncated SVD `X ≈ U diag(σ) V*` keeping the numerical rank.
#[derive(Debug, Clone)]
pub struct ReducedSvd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
    pub rank: usize,
    pub truncation_tol: f64,
    /// Singular values dropped by the rank decision.
    pub discarded: Vec<f64>,
}

impl ReducedSvd {
    /// `U diag(σ) V*`.
    pub fn reconstruct(&self) -> CMatrix {
        let mut us = self.u.clone();
        for (j, s) in self.sigma.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * self.v.adjoint()
    }

    pub fn sigma_inv_diag(&self) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(
            self.rank,
            self.sigma.iter().map(|s| c(1.0 / s, 0.0)),
        ))
    }

    /// Frobenius-norm bound on `‖X − UΣV*‖` implied by the discarded values.
    pub fn truncation_error(&self) -> f64 {
        self.discarded.iter().fold(0.0, |acc, s| acc + s * s).sqrt()
    }
}

/// Thin SVD `(U, V*, σ)` of `x`, computed by faer.
fn thin_svd(x: &CMatrix) -> Result<(CMatrix, CMatrix, Vec<f64>)> {
    let (rows, cols) = x.shape();
    let a = faer::Mat::<C64>::from_fn(rows, cols, |i, j| x[(i, j)]);
    let svd = a.thin_svd().map_err(|_| DmdError::SvdFailure)?;
    let k = rows.min(cols);
    let (u, v, s) = (svd.U(), svd.V(), svd.S());
    let s = s.column_vector();
    let u = CMatrix::from_fn(rows, k, |i, j| u[(i, j)]);
    let vt = CMatrix::from_fn(k, cols, |i, j| v[(j, i)].conj());
    let sigma = (0..k).map(|j| s[j].re).collect();
    Ok((u, vt, sigma))
}

/// 2-norm condition number `σ_max / σ_min` (infinite if rank deficient).
pub fn condition_number(x: &CMatrix) -> Result<f64> {
    let (_, _, s) = thin_svd(x)?;
    let smax = s.iter().copied().fold(0.0, f64::max);
    let smin = s.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(if smin > 0.0 { smax / smin } else { f64::INFINITY })
}

/// Reduced SVD with rank decided by `policy`.
pub fn reduced_svd(x: &CMatrix, policy: RankPolicy) -> Result<ReducedSvd> {
    ensure_finite(x, "svd input")?;
    let (rows, cols) = x.shape();
    if rows == 0 || cols == 0 {
        return Err(DmdError::Dimension("empty matrix".into()));
    }
    if x.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return Err(DmdError::RankZero);
    }
    let (u_full, vt_full, values) = thin_svd(x)?;

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();

    let sigma1 = sorted[0];
    if sigma1 <= 0.0 {
        return Err(DmdError::RankZero);
    }
    let thr = policy.threshold(sigma1, rows, cols);
    let numerical = sorted.iter().take_while(|&&s| s > thr).count();
    let rank = match policy {
        RankPolicy::Fixed(r) => {
            if r > numerical {
                return Err(DmdError::OrderExceedsRank { requested: r, rank: numerical });
            }
            r
        }
        _ => numerical,
    };
    if rank == 0 {
        return Err(DmdError::RankZero);
    }

    let u = CMatrix::from_fn(rows, rank, |i, j| u_full[(i, order[j])]);
    let v = CMatrix::from_fn(cols, rank, |i, j| vt_full[(order[j], i)].conj());
    Ok(ReducedSvd {
        u,
        sigma: sorted[..rank].to_vec(),
        v,
        rank,
        truncation_tol: thr,
        discarded: sorted[rank..].to_vec(),
    })
}

/// Reduced SVD through the eigendecomposition of the `m × m` Gram matrix
/// `X*X` (method of snapshots). Cheaper when rows ≫ cols, but the
/// conditioning is squared: values with `σ_i² ≤ gram_tol · σ_1²` are dropped.
pub fn reduced_svd_snapshots(x: &CMatrix, gram_tol: Option<f64>) -> Result<ReducedSvd> {
    ensure_finite(x, "svd input")?;
    let (rows, cols) = x.shape();
    if rows == 0 || cols == 0 {
        return Err(DmdError::Dimension("empty matrix".into()));
    }
    let gram = x.adjoint() * x;
    let eig = SymmetricEigen::try_new(gram, f64::EPSILON, 0).ok_or(DmdError::EigenFailure)?;
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let mu_max = eig.eigenvalues[order[0]];
    if mu_max <= 0.0 {
        return Err(DmdError::RankZero);
    }
    let tol = gram_tol.unwrap_or(rows.max(cols) as f64 * f64::EPSILON);
    let thr = tol * mu_max;
    let rank = order.iter().take_while(|&&i| eig.eigenvalues[i] > thr).count();
    if rank == 0 {
        return Err(DmdError::RankZero);
    }
    let sigma: Vec<f64> = order[..rank].iter().map(|&i| eig.eigenvalues[i].sqrt()).collect();
    let v = CMatrix::from_fn(cols, rank, |i, j| eig.eigenvectors[(i, order[j])]);
    let mut u = x * &v;
    for (j, s) in sigma.iter().enumerate() {
        u.column_mut(j).unscale_mut(*s);
    }
    let discarded = order[rank..]
        .iter()
        .map(|&i| eig.eigenvalues[i].max(0.0).sqrt())
        .collect();
    Ok(ReducedSvd { u, sigma, v, rank, truncation_tol: thr.sqrt(), discarded })
}

/// Orthonormal basis for the column space of `cols`, one column per unit of
/// numerical rank.
pub fn orthonormal_basis(cols: &CMatrix) -> Result<CMatrix> {
    Ok(reduced_svd(cols, RankPolicy::Default)?.u)
}

/// `V Σ⁻¹ U* rhs`, the minimum-norm least-squares solution of `X · out = rhs`.
pub fn pseudoinverse_apply(svd: &ReducedSvd, rhs: &CMatrix) -> Result<CMatrix> {
    if rhs.nrows() != svd.u.nrows() {
        return Err(DmdError::Dimension(format!(
            "rhs has {} rows, factorization has {}",
            rhs.nrows(),
            svd.u.nrows()
        )));
    }
    let mut tmp = svd.u.adjoint() * rhs;
    for (i, s) in svd.sigma.iter().enumerate() {
        tmp.row_mut(i).unscale_mut(*s);
    }
    Ok(&svd.v * tmp)
}

/// Eigenvalues with unit-norm right (and optionally left) eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<C64>,
    pub vectors: CMatrix,
    /// Columns `z` with `z* M = λ z*`, index-aligned with `values`.
    pub left_vectors: Option<CMatrix>,
}

/// Eigendecomposition of a small dense matrix via complex Schur form and
/// triangular back-substitution.
pub fn eig_dense(m: &CMatrix, want_left: bool) -> Result<EigenPairs> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(DmdError::Dimension(format!("eigenproblem on {rows}x{cols} matrix")));
    }
    if rows == 0 {
        return Err(DmdError::Dimension("empty matrix".into()));
    }
    ensure_finite(m, "eigen input")?;
    let n = rows;
    if n == 1 {
        let one = CMatrix::from_element(1, 1, c(1.0, 0.0));
        return Ok(EigenPairs {
            values: vec![m[(0, 0)]],
            vectors: one.clone(),
            left_vectors: want_left.then_some(one),
        });
    }

    let schur = Schur::try_new(m.clone(), f64::EPSILON, 0).ok_or(DmdError::EigenFailure)?;
    let (q, t) = schur.unpack();
    let values: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();

    let tnorm = t.norm();
    let smin = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE);
    let guard = |d: C64| if d.norm() < smin { c(smin, 0.0) } else { d };

    let mut x = CMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = values[k];
        x[(k, k)] = c(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = c(0.0, 0.0);
            for j in (i + 1)..=k {
                s += t[(i, j)] * x[(j, k)];
            }
            x[(i, k)] = -s / guard(t[(i, i)] - lambda);
        }
    }
    let mut vectors = &q * x;
    normalize_columns(&mut vectors);

    let left_vectors = if want_left {
        // Row vectors u with u T = λ u, then z = Q u*.
        let mut urows = CMatrix::zeros(n, n);
        for k in 0..n {
            let lambda = values[k];
            urows[(k, k)] = c(1.0, 0.0);
            for j in (k + 1)..n {
                let mut s = c(0.0, 0.0);
                for i in k..j {
                    s += urows[(k, i)] * t[(i, j)];
                }
                urows[(k, j)] = s / guard(lambda - t[(j, j)]);
            }
        }
        let mut z = &q * urows.adjoint();
        normalize_columns(&mut z);
        Some(z)
    } else {
        None
    };

    Ok(EigenPairs { values, vectors, left_vectors })
}

pub fn normalize_columns(m: &mut CMatrix) {
    for mut col in m.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col.unscale_mut(norm);
        }
    }
}

/// Least-squares solution of `a · x = b` by Householder QR, falling back to
/// the SVD pseudoinverse when `a` is rank deficient. Returns the solution
/// and the residual norm `‖a x − b‖`.
pub fn least_squares(a: &CMatrix, b: &CVector) -> Result<(CVector, f64)> {
    let (rows, cols) = a.shape();
    if b.len() != rows {
        return Err(DmdError::Dimension(format!("rhs length {} vs {rows} rows", b.len())));
    }
    if cols == 0 {
        return Ok((CVector::zeros(0), b.norm()));
    }
    let solution = if rows >= cols {
        let qr = QR::new(a.clone());
        let r = qr.r();
        let diag_max = (0..cols).map(|i| r[(i, i)].norm()).fold(0.0, f64::max);
        let diag_min = (0..cols).map(|i| r[(i, i)].norm()).fold(f64::INFINITY, f64::min);
        if diag_max > 0.0 && diag_min > rows as f64 * f64::EPSILON * diag_max {
            let qtb = qr.q().adjoint() * b;
            r.solve_upper_triangular(&qtb).ok_or(DmdError::Singular("least squares"))?
        } else {
            svd_solve(a, b)?
        }
    } else {
        svd_solve(a, b)?
    };
    let residual = (a * &solution - b).norm();
    Ok((solution, residual))
}

fn svd_solve(a: &CMatrix, b: &CVector) -> Result<CVector> {
    match reduced_svd(a, RankPolicy::Default) {
        Ok(svd) => {
            let rhs = CMatrix::from_column_slice(b.len(), 1, b.as_slice());
            let sol = pseudoinverse_apply(&svd, &rhs)?;
            Ok(CVector::from_column_slice(sol.as_slice()))
        }
        Err(DmdError::RankZero) => Ok(CVector::zeros(a.ncols())),
        Err(e) => Err(e),
    }
}
