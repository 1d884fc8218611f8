//! Eigensystem realization from Markov parameters, and its link to DMD:
//! with `X = H` and `Y = H′`, the full-rank ERA pole matrix is similar to
//! the DMD reduced operator, `A_r = Σ^{-1/2} Ã Σ^{1/2}`.

use nalgebra::DMatrix;

use crate::data::SnapshotPairs;
use crate::dmd::{exact_dmd, DmdOptions};
use crate::error::{DmdError, Result};
use crate::linalg::{c, eig_dense, reduced_svd, to_complex, CMatrix, RankPolicy, ReducedSvd, C64};

/// Discrete-time state-space system `x⁺ = A x + B u`, `y = C x + D u`.
#[derive(Debug, Clone)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub d: DMatrix<f64>,
}

impl StateSpace {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>, d: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n || b.nrows() != n || c.ncols() != n || d.shape() != (c.nrows(), b.ncols()) {
            return Err(DmdError::Dimension("inconsistent state-space matrices".into()));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn inputs(&self) -> usize {
        self.b.ncols()
    }

    pub fn outputs(&self) -> usize {
        self.c.nrows()
    }

    /// `[C B, C A B, …, C A^{count-1} B]`.
    pub fn impulse_response(&self, count: usize) -> Vec<DMatrix<f64>> {
        let mut out = Vec::with_capacity(count);
        let mut ak_b = self.b.clone();
        for _ in 0..count {
            out.push(&self.c * &ak_b);
            ak_b = &self.a * ak_b;
        }
        out
    }
}

/// Markov parameters `C A^{kP} B` and their one-step shifts `C A^{kP+1} B`.
#[derive(Debug, Clone)]
pub struct MarkovSequence {
    params: Vec<DMatrix<f64>>,
    shifted: Vec<DMatrix<f64>>,
    inputs: usize,
    outputs: usize,
    stride: usize,
}

impl MarkovSequence {
    pub fn new(params: Vec<DMatrix<f64>>, shifted: Vec<DMatrix<f64>>, stride: usize) -> Result<Self> {
        if params.is_empty() || params.len() != shifted.len() {
            return Err(DmdError::Dimension(format!(
                "{} Markov parameters but {} shifted ones",
                params.len(),
                shifted.len()
            )));
        }
        if stride == 0 {
            return Err(DmdError::InvalidParameter("stride must be at least 1".into()));
        }
        let (outputs, inputs) = params[0].shape();
        if params.iter().chain(&shifted).any(|h| h.shape() != (outputs, inputs)) {
            return Err(DmdError::Dimension("Markov parameters have differing block shapes".into()));
        }
        Ok(Self { params, shifted, inputs, outputs, stride })
    }

    /// Samples `h_{kP}` and `h_{kP+1}` from a full impulse response
    /// `h_k = C A^k B`, using as many `k` as the response allows.
    pub fn from_impulse_response(h: &[DMatrix<f64>], stride: usize) -> Result<Self> {
        if stride == 0 {
            return Err(DmdError::InvalidParameter("stride must be at least 1".into()));
        }
        if h.len() < 2 {
            return Err(DmdError::TooFewSnapshots { needed: 2, got: h.len() });
        }
        let m = (h.len() - 2) / stride + 1;
        let params = (0..m).map(|k| h[k * stride].clone()).collect();
        let shifted = (0..m).map(|k| h[k * stride + 1].clone()).collect();
        Self::new(params, shifted, stride)
    }

    pub fn from_system(sys: &StateSpace, count: usize, stride: usize) -> Result<Self> {
        if count == 0 {
            return Err(DmdError::InvalidParameter("need at least one Markov parameter".into()));
        }
        let h = sys.impulse_response((count - 1) * stride + 2);
        Self::from_impulse_response(&h, stride)
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn params(&self) -> &[DMatrix<f64>] {
        &self.params
    }

    pub fn shifted(&self) -> &[DMatrix<f64>] {
        &self.shifted
    }
}

/// `(m_c, m_o)` with `m_o = ⌊(m−1)/2⌋`.
pub fn default_split(m: usize) -> (usize, usize) {
    let total = m.saturating_sub(1);
    let m_o = total / 2;
    (total - m_o, m_o)
}

/// Block Hankel matrices `H` and `H′` with block `(i, j)` equal to the
/// `(i + j)`-th Markov parameter.
#[derive(Debug, Clone)]
pub struct HankelPair {
    pub h: CMatrix,
    pub h_shifted: CMatrix,
    pub inputs: usize,
    pub outputs: usize,
    pub m_c: usize,
    pub m_o: usize,
}

impl HankelPair {
    /// Wraps existing Hankel matrices; block counts are inferred from the
    /// shapes.
    pub fn from_matrices(h: CMatrix, h_shifted: CMatrix, inputs: usize, outputs: usize) -> Result<Self> {
        if h.shape() != h_shifted.shape() {
            return Err(DmdError::Dimension("H and H' differ in shape".into()));
        }
        if inputs == 0 || outputs == 0 || !h.nrows().is_multiple_of(outputs) || !h.ncols().is_multiple_of(inputs) {
            return Err(DmdError::Dimension(format!(
                "{}x{} Hankel matrix is not built from {outputs}x{inputs} blocks",
                h.nrows(),
                h.ncols()
            )));
        }
        let m_o = h.nrows() / outputs - 1;
        let m_c = h.ncols() / inputs - 1;
        Ok(Self { h, h_shifted, inputs, outputs, m_c, m_o })
    }

    pub fn as_pairs(&self) -> Result<SnapshotPairs> {
        SnapshotPairs::new(self.h.clone(), self.h_shifted.clone())
    }
}

pub fn build_hankel(seq: &MarkovSequence, m_c: usize, m_o: usize) -> Result<HankelPair> {
    let m = seq.len();
    if m_c + m_o + 1 != m {
        return Err(DmdError::InvalidParameter(format!(
            "m_c + m_o must equal m - 1 = {} (got {m_c} + {m_o})",
            m.saturating_sub(1)
        )));
    }
    let (q, p) = (seq.outputs, seq.inputs);
    let rows = q * (m_o + 1);
    let cols = p * (m_c + 1);
    let fill = |blocks: &[DMatrix<f64>]| {
        let mut out = DMatrix::<f64>::zeros(rows, cols);
        for i in 0..=m_o {
            for j in 0..=m_c {
                out.view_mut((i * q, j * p), (q, p)).copy_from(&blocks[i + j]);
            }
        }
        to_complex(&out)
    };
    Ok(HankelPair {
        h: fill(&seq.params),
        h_shifted: fill(&seq.shifted),
        inputs: p,
        outputs: q,
        m_c,
        m_o,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EraOrder {
    /// `r = rank(H)`.
    Full,
    Order(usize),
}

/// Reduced realization `(A_r, B_r, C_r, D_r)` of order `r`.
#[derive(Debug, Clone)]
pub struct EraRealization {
    pub a_r: CMatrix,
    pub b_r: CMatrix,
    pub c_r: CMatrix,
    pub d_r: CMatrix,
    pub hankel: CMatrix,
    pub hankel_shifted: CMatrix,
    /// SVD of `H` truncated to order `r`.
    pub svd_of_h: ReducedSvd,
    pub m_c: usize,
    pub m_o: usize,
}

impl EraRealization {
    pub fn order(&self) -> usize {
        self.svd_of_h.rank
    }

    /// `Σ_r^{-1/2} U_r* H′ V_r Σ_r^{-1/2}` recomputed from the stored factors.
    pub fn a_r_from_factors(&self) -> CMatrix {
        let half = inv_sqrt_diag(&self.svd_of_h.sigma);
        &half * self.svd_of_h.u.adjoint() * &self.hankel_shifted * &self.svd_of_h.v * &half
    }

    /// `[C_r B_r, C_r A_r B_r, …]`.
    pub fn markov_parameters(&self, count: usize) -> Vec<CMatrix> {
        let mut out = Vec::with_capacity(count);
        let mut ak_b = self.b_r.clone();
        for _ in 0..count {
            out.push(&self.c_r * &ak_b);
            ak_b = &self.a_r * ak_b;
        }
        out
    }

    pub fn poles(&self) -> Result<Vec<C64>> {
        Ok(eig_dense(&self.a_r, false)?.values)
    }
}

fn inv_sqrt_diag(sigma: &[f64]) -> CMatrix {
    CMatrix::from_fn(sigma.len(), sigma.len(), |i, j| if i == j { c(sigma[i].powf(-0.5), 0.0) } else { c(0.0, 0.0) })
}

fn sqrt_diag(sigma: &[f64]) -> CMatrix {
    CMatrix::from_fn(sigma.len(), sigma.len(), |i, j| if i == j { c(sigma[i].sqrt(), 0.0) } else { c(0.0, 0.0) })
}

/// ERA of order `r`. `feedthrough` defaults to zero.
pub fn era_realize(
    pair: &HankelPair,
    order: EraOrder,
    feedthrough: Option<&DMatrix<f64>>,
) -> Result<EraRealization> {
    let full = reduced_svd(&pair.h, RankPolicy::Default)?;
    let svd = match order {
        EraOrder::Full => full,
        EraOrder::Order(0) => return Err(DmdError::InvalidParameter("order must be positive".into())),
        EraOrder::Order(r) if r > full.rank => {
            return Err(DmdError::OrderExceedsRank { requested: r, rank: full.rank })
        }
        EraOrder::Order(r) => truncate(&full, r),
    };
    let (p, q) = (pair.inputs, pair.outputs);
    let half_inv = inv_sqrt_diag(&svd.sigma);
    let half = sqrt_diag(&svd.sigma);
    let a_r = &half_inv * svd.u.adjoint() * &pair.h_shifted * &svd.v * &half_inv;
    let ctrl = &half * svd.v.adjoint(); // Σ^{1/2} V*
    let obs = &svd.u * &half; // U Σ^{1/2}
    let b_r = ctrl.columns(0, p).into_owned();
    let c_r = obs.rows(0, q).into_owned();
    let d_r = match feedthrough {
        Some(d) if d.shape() != (q, p) => {
            return Err(DmdError::Dimension(format!("feedthrough must be {q}x{p}")))
        }
        Some(d) => to_complex(d),
        None => CMatrix::zeros(q, p),
    };
    Ok(EraRealization {
        a_r,
        b_r,
        c_r,
        d_r,
        hankel: pair.h.clone(),
        hankel_shifted: pair.h_shifted.clone(),
        svd_of_h: svd,
        m_c: pair.m_c,
        m_o: pair.m_o,
    })
}

fn truncate(svd: &ReducedSvd, r: usize) -> ReducedSvd {
    let mut discarded = svd.sigma[r..].to_vec();
    discarded.extend_from_slice(&svd.discarded);
    ReducedSvd {
        u: svd.u.columns(0, r).into_owned(),
        sigma: svd.sigma[..r].to_vec(),
        v: svd.v.columns(0, r).into_owned(),
        rank: r,
        truncation_tol: svd.sigma[r - 1],
        discarded,
    }
}

#[derive(Debug, Clone)]
pub struct SimilarityReport {
    pub era_eigs: Vec<C64>,
    pub dmd_eigs: Vec<C64>,
    /// Largest `|λ_era − λ_dmd|` under a one-to-one nearest matching.
    pub max_mismatch: f64,
    /// Largest `‖Ã w − λ w‖ / (‖Ã‖_F ‖w‖)` with `w = Σ^{1/2} v`, `v` an
    /// eigenvector of `A_r`.
    pub vector_map_residual: f64,
}

/// Runs DMD on `(X, Y) = (H, H′)` and full-rank ERA on the same pair and
/// measures how far the similarity relation is from holding.
pub fn era_dmd_similarity(pair: &HankelPair) -> Result<SimilarityReport> {
    let opts = DmdOptions { include_zero_modes: true, compute_adjoint: false, ..DmdOptions::default() };
    let dmd = exact_dmd(&pair.as_pairs()?, &opts)?;
    let era = era_realize(pair, EraOrder::Full, None)?;
    let eig = eig_dense(&era.a_r, false)?;

    let max_mismatch = matched_distance(&eig.values, &dmd.eigenvalues);
    let a_tilde = &dmd.operator.a_tilde;
    let half = sqrt_diag(&era.svd_of_h.sigma);
    let anorm = a_tilde.norm();
    let mut vector_map_residual: f64 = 0.0;
    for (k, l) in eig.values.iter().enumerate() {
        let w = &half * eig.vectors.column(k);
        let res = (a_tilde * &w - &w * *l).norm() / (anorm * w.norm());
        vector_map_residual = vector_map_residual.max(res);
    }
    Ok(SimilarityReport { era_eigs: eig.values, dmd_eigs: dmd.eigenvalues, max_mismatch, vector_map_residual })
}

/// Greedy one-to-one nearest matching; infinite when the counts differ.
pub fn matched_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let best = (0..b.len())
            .filter(|&j| !used[j])
            .min_by(|&i, &j| (b[i] - x).norm().total_cmp(&(b[j] - x).norm()));
        if let Some(j) = best {
            used[j] = true;
            worst = worst.max((b[j] - x).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::test_util::rng;
    use rand::Rng;
    use std::f64::consts::PI;

    fn scalar_half() -> MarkovSequence {
        let sys = StateSpace::new(
            DMatrix::from_element(1, 1, 0.5),
            DMatrix::from_element(1, 1, 1.0),
            DMatrix::from_element(1, 1, 1.0),
            DMatrix::zeros(1, 1),
        )
        .unwrap();
        MarkovSequence::from_system(&sys, 3, 1).unwrap()
    }

    fn real(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
        to_complex(&DMatrix::from_row_slice(rows, cols, data))
    }

    #[test]
    fn hankel_of_scalar_half_system() {
        let pair = build_hankel(&scalar_half(), 1, 1).unwrap();
        assert_eq!(pair.h, real(2, 2, &[1.0, 0.5, 0.5, 0.25]));
        assert_eq!(pair.h_shifted, real(2, 2, &[0.5, 0.25, 0.25, 0.125]));
    }

    #[test]
    fn hankel_single_block_row_and_symmetry() {
        let seq = scalar_half();
        let pair = build_hankel(&seq, 2, 0).unwrap();
        assert_eq!(pair.h, real(1, 3, &[1.0, 0.5, 0.25]));
        assert!(build_hankel(&seq, 1, 0).is_err());

        let mut g = rng(1);
        let h: Vec<DMatrix<f64>> = (0..9).map(|_| DMatrix::from_element(1, 1, g.random::<f64>())).collect();
        let seq = MarkovSequence::from_impulse_response(&h, 1).unwrap();
        let (m_c, m_o) = default_split(seq.len());
        let pair = build_hankel(&seq, m_c, m_o).unwrap();
        let sq = pair.h.view((0, 0), (m_o + 1, m_o + 1)).into_owned();
        assert_eq!(sq, sq.transpose());
    }

    #[test]
    fn hankel_block_shape_and_stride() {
        let sys = StateSpace::new(
            DMatrix::from_row_slice(2, 2, &[0.9, 0.1, 0.0, 0.5]),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]),
            DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]),
            DMatrix::zeros(3, 2),
        )
        .unwrap();
        let seq = MarkovSequence::from_system(&sys, 5, 2).unwrap();
        let h = sys.impulse_response(20);
        assert_eq!(seq.params()[3], h[6]);
        assert_eq!(seq.shifted()[3], h[7]);
        let pair = build_hankel(&seq, 2, 2).unwrap();
        assert_eq!(pair.h.shape(), (9, 6));
        // block (1, 2) holds parameter 3
        let block = pair.h.view((3, 4), (3, 2)).into_owned();
        assert_eq!(block, to_complex(&h[6]));
    }

    #[test]
    fn hankel_is_linear() {
        let mut g = rng(2);
        let mk = |g: &mut rand_chacha::ChaCha8Rng| {
            let h: Vec<DMatrix<f64>> = (0..7).map(|_| DMatrix::from_fn(2, 1, |_, _| g.random::<f64>())).collect();
            h
        };
        let h1 = mk(&mut g);
        let h2 = mk(&mut g);
        let sum: Vec<DMatrix<f64>> = h1.iter().zip(&h2).map(|(a, b)| a + b).collect();
        let p = |h: &[DMatrix<f64>]| build_hankel(&MarkovSequence::from_impulse_response(h, 1).unwrap(), 3, 2).unwrap();
        let (a, b, s) = (p(&h1), p(&h2), p(&sum));
        assert!((&a.h + &b.h - &s.h).norm() < 1e-15);
        assert!((&a.h_shifted + &b.h_shifted - &s.h_shifted).norm() < 1e-15);
    }

    #[test]
    fn realize_scalar_half() {
        let pair = build_hankel(&scalar_half(), 1, 1).unwrap();
        let era = era_realize(&pair, EraOrder::Order(1), None).unwrap();
        assert!((era.a_r[(0, 0)] - c(0.5, 0.0)).norm() < 1e-14);
        for (k, h) in era.markov_parameters(4).iter().enumerate() {
            assert!((h[(0, 0)] - c(0.5f64.powi(k as i32), 0.0)).norm() < 1e-14);
        }
        assert!(matches!(
            era_realize(&pair, EraOrder::Order(2), None),
            Err(DmdError::OrderExceedsRank { requested: 2, rank: 1 })
        ));
        let d = DMatrix::from_element(1, 1, 0.7);
        let era = era_realize(&pair, EraOrder::Full, Some(&d)).unwrap();
        assert_eq!(era.d_r[(0, 0)], c(0.7, 0.0));
        assert!((era.a_r_from_factors() - &era.a_r).norm() < 1e-12);
    }

    #[test]
    fn realize_reproduces_low_order_markov_parameters() {
        let th = 0.4;
        let sys = StateSpace::new(
            DMatrix::from_row_slice(3, 3, &[0.9 * f64::cos(th), -0.9 * f64::sin(th), 0.0, 0.9 * f64::sin(th), 0.9 * f64::cos(th), 0.0, 0.0, 0.0, 0.6]),
            DMatrix::from_row_slice(3, 1, &[1.0, 0.5, 1.0]),
            DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, -1.0]),
            DMatrix::zeros(2, 1),
        )
        .unwrap();
        let seq = MarkovSequence::from_system(&sys, 9, 1).unwrap();
        let (m_c, m_o) = default_split(seq.len());
        let pair = build_hankel(&seq, m_c, m_o).unwrap();
        let era = era_realize(&pair, EraOrder::Full, None).unwrap();
        assert_eq!(era.order(), 3);
        let truth = sys.impulse_response(10);
        for (k, h) in era.markov_parameters(10).iter().enumerate() {
            let expected = to_complex(&truth[k]);
            assert!((h - &expected).norm() <= 1e-9 * expected.norm().max(1e-3));
        }
    }

    #[test]
    fn similarity_scalar_half() {
        let pair = build_hankel(&scalar_half(), 1, 1).unwrap();
        let rep = era_dmd_similarity(&pair).unwrap();
        assert_eq!(rep.era_eigs.len(), 1);
        assert!((rep.era_eigs[0] - c(0.5, 0.0)).norm() < 1e-14);
        assert!((rep.dmd_eigs[0] - c(0.5, 0.0)).norm() < 1e-14);
        assert!(rep.max_mismatch < 1e-14 && rep.vector_map_residual < 1e-14);
    }

    #[test]
    fn similarity_diagonal_system() {
        let sys = StateSpace::new(
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.9, -0.5, 0.3])),
            DMatrix::from_element(3, 1, 1.0),
            DMatrix::from_element(1, 3, 1.0),
            DMatrix::zeros(1, 1),
        )
        .unwrap();
        let seq = MarkovSequence::from_system(&sys, 9, 1).unwrap();
        let (m_c, m_o) = default_split(seq.len());
        let rep = era_dmd_similarity(&build_hankel(&seq, m_c, m_o).unwrap()).unwrap();
        assert!(rep.max_mismatch <= 1e-9);
        assert!(rep.vector_map_residual <= 1e-9);
        for target in [0.9, -0.5, 0.3] {
            assert!(rep.era_eigs.iter().any(|l| (l - c(target, 0.0)).norm() < 1e-9));
        }
    }

    #[test]
    fn delay_rows_recover_standing_wave_frequency() {
        // scalar output of the planar rotation: y_k = cos(kθ)
        let th = PI / 5.0;
        let h: Vec<DMatrix<f64>> = (0..12).map(|k| DMatrix::from_element(1, 1, (k as f64 * th).cos())).collect();
        let seq = MarkovSequence::from_impulse_response(&h, 1).unwrap();
        let single = build_hankel(&seq, seq.len() - 1, 0).unwrap();
        assert_eq!(reduced_svd(&single.h, RankPolicy::Default).unwrap().rank, 1);
        let stacked = build_hankel(&seq, seq.len() - 2, 1).unwrap();
        let dec = exact_dmd(&stacked.as_pairs().unwrap(), &DmdOptions::default()).unwrap();
        assert_eq!(dec.len(), 2);
        for target in [C64::from_polar(1.0, th), C64::from_polar(1.0, -th)] {
            assert!(dec.eigenvalues.iter().any(|l| (l - target).norm() < 1e-8));
        }
    }

    #[test]
    fn matching_distance() {
        let a = [c(1.0, 0.0), c(0.0, 1.0)];
        let b = [c(0.0, 1.0), c(1.0, 1e-3)];
        assert!((matched_distance(&a, &b) - 1e-3).abs() < 1e-15);
        assert_eq!(matched_distance(&a, &b[..1]), f64::INFINITY);
    }
}
