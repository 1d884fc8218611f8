//! Assembly of the paired data matrices `(X, Y)` from raw snapshots.
//!
//! Snapshot sequences are matrices with one snapshot per column, matching
//! the `X = [x_1 ⋯ x_m]` convention used everywhere else.

use nalgebra::DMatrix;

use crate::error::{DmdError, Result};
use crate::linalg::{c, ensure_finite, to_complex, CMatrix, CVector};

/// How a pair matrix was built. Only sequential-structured data can be
/// delay-embedded or fed to the sequential exact algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Sequential,
    Strided { stride: usize },
    Concatenated { runs: usize },
    Generic,
    DelayEmbedded { depth: usize },
}

impl Provenance {
    /// True when `Y` is `X` shifted by one column, i.e. the data are
    /// `[z_0 … z_{m-1}]`, `[z_1 … z_m]`.
    pub fn is_sequential(&self) -> bool {
        matches!(self, Provenance::Sequential | Provenance::DelayEmbedded { .. })
    }

    pub fn name(&self) -> String {
        match self {
            Provenance::Sequential => "sequential".into(),
            Provenance::Strided { stride } => format!("strided(P={stride})"),
            Provenance::Concatenated { runs } => format!("concatenated({runs} runs)"),
            Provenance::Generic => "generic".into(),
            Provenance::DelayEmbedded { depth } => format!("delay-embedded(d={depth})"),
        }
    }
}

/// Column-paired data matrices: column `k` of `y` is the image of column `k`
/// of `x`.
#[derive(Debug, Clone)]
pub struct SnapshotPairs {
    x: CMatrix,
    y: CMatrix,
    dt: Option<f64>,
    provenance: Provenance,
}

impl SnapshotPairs {
    /// Generic pairs from explicit `X` and `Y`.
    pub fn new(x: CMatrix, y: CMatrix) -> Result<Self> {
        Self::with_provenance(x, y, Provenance::Generic)
    }

    pub fn from_real(x: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<Self> {
        Self::new(to_complex(x), to_complex(y))
    }

    fn with_provenance(x: CMatrix, y: CMatrix, provenance: Provenance) -> Result<Self> {
        if x.shape() != y.shape() {
            return Err(DmdError::Dimension(format!(
                "X is {:?} but Y is {:?}",
                x.shape(),
                y.shape()
            )));
        }
        if x.nrows() == 0 || x.ncols() == 0 {
            return Err(DmdError::Dimension("empty data matrices".into()));
        }
        ensure_finite(&x, "X")?;
        ensure_finite(&y, "Y")?;
        Ok(Self { x, y, dt: None, provenance })
    }

    pub fn with_dt(mut self, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(DmdError::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        self.dt = Some(dt);
        Ok(self)
    }

    pub fn x(&self) -> &CMatrix {
        &self.x
    }

    pub fn y(&self) -> &CMatrix {
        &self.y
    }

    pub fn dt(&self) -> Option<f64> {
        self.dt
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn state_dim(&self) -> usize {
        self.x.nrows()
    }

    pub fn len(&self) -> usize {
        self.x.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.x.ncols() == 0
    }

    /// Recovers `[z_0 … z_m]` from sequential pairs.
    pub fn sequence(&self) -> Result<CMatrix> {
        if !self.provenance.is_sequential() {
            return Err(DmdError::NotSequential(self.provenance.name()));
        }
        let m = self.len();
        let mut z = self.x.clone().insert_column(m, c(0.0, 0.0));
        z.set_column(m, &self.y.column(m - 1));
        Ok(z)
    }
}

fn check_snapshots(z: &CMatrix, needed: usize) -> Result<()> {
    if z.ncols() < needed {
        return Err(DmdError::TooFewSnapshots { needed, got: z.ncols() });
    }
    if z.nrows() == 0 {
        return Err(DmdError::Dimension("snapshots have zero length".into()));
    }
    Ok(())
}

/// `X = [z_0 … z_{m-1}]`, `Y = [z_1 … z_m]`.
pub fn pairs_from_sequence(z: &CMatrix) -> Result<SnapshotPairs> {
    check_snapshots(z, 2)?;
    let m = z.ncols() - 1;
    SnapshotPairs::with_provenance(
        z.columns(0, m).into_owned(),
        z.columns(1, m).into_owned(),
        Provenance::Sequential,
    )
}

/// Pairs `(z_{kP}, z_{kP+1})` drawn from a finely sampled series, so each pair
/// spans one step of the dynamics while the pairs themselves are `P` steps
/// apart. With `count = None` every available pair is used.
pub fn pairs_from_strided(z: &CMatrix, stride: usize, count: Option<usize>) -> Result<SnapshotPairs> {
    if stride == 0 {
        return Err(DmdError::InvalidParameter("stride must be at least 1".into()));
    }
    check_snapshots(z, 2)?;
    let available = (z.ncols() - 2) / stride + 1;
    let m = match count {
        Some(0) => return Err(DmdError::InvalidParameter("pair count must be positive".into())),
        Some(m) if m > available => {
            return Err(DmdError::TooFewSnapshots { needed: (m - 1) * stride + 2, got: z.ncols() })
        }
        Some(m) => m,
        None => available,
    };
    let x = CMatrix::from_fn(z.nrows(), m, |i, k| z[(i, k * stride)]);
    let y = CMatrix::from_fn(z.nrows(), m, |i, k| z[(i, k * stride + 1)]);
    let provenance = if stride == 1 { Provenance::Sequential } else { Provenance::Strided { stride } };
    SnapshotPairs::with_provenance(x, y, provenance)
}

/// Several sequential runs sharing a state dimension.
#[derive(Debug, Clone)]
pub struct TrajectorySet {
    trajectories: Vec<CMatrix>,
}

impl TrajectorySet {
    pub fn new(trajectories: Vec<CMatrix>) -> Result<Self> {
        let first = trajectories
            .first()
            .ok_or_else(|| DmdError::InvalidParameter("no trajectories".into()))?;
        let n = first.nrows();
        for t in &trajectories {
            check_snapshots(t, 2)?;
            if t.nrows() != n {
                return Err(DmdError::Dimension(format!(
                    "trajectory state dimension {} differs from {n}",
                    t.nrows()
                )));
            }
        }
        Ok(Self { trajectories })
    }

    pub fn trajectories(&self) -> &[CMatrix] {
        &self.trajectories
    }

    pub fn state_dim(&self) -> usize {
        self.trajectories[0].nrows()
    }
}

/// Concatenates each run's sequential pairs column-wise.
pub fn pairs_from_trajectories(ts: &TrajectorySet) -> Result<SnapshotPairs> {
    let n = ts.state_dim();
    let total: usize = ts.trajectories.iter().map(|t| t.ncols() - 1).sum();
    let mut x = CMatrix::zeros(n, total);
    let mut y = CMatrix::zeros(n, total);
    let mut offset = 0;
    for t in &ts.trajectories {
        let m = t.ncols() - 1;
        x.columns_mut(offset, m).copy_from(&t.columns(0, m));
        y.columns_mut(offset, m).copy_from(&t.columns(1, m));
        offset += m;
    }
    let provenance = if ts.trajectories.len() == 1 {
        Provenance::Sequential
    } else {
        Provenance::Concatenated { runs: ts.trajectories.len() }
    };
    SnapshotPairs::with_provenance(x, y, provenance)
}

/// Stacks `d` consecutive snapshots into each state, `[z_k; z_{k+1}; …; z_{k+d-1}]`.
/// Trailing columns that cannot be completed are dropped.
pub fn delay_embed(pairs: &SnapshotPairs, depth: usize) -> Result<SnapshotPairs> {
    if depth == 0 {
        return Err(DmdError::InvalidParameter("delay depth must be at least 1".into()));
    }
    if depth == 1 {
        return Ok(pairs.clone());
    }
    let z = pairs.sequence()?;
    let n = z.nrows();
    let snapshots = z.ncols();
    if depth + 1 > snapshots {
        return Err(DmdError::TooFewSnapshots { needed: depth + 1, got: snapshots });
    }
    let count = snapshots - depth + 1;
    let embedded = CMatrix::from_fn(n * depth, count, |i, k| z[(i % n, k + i / n)]);
    let inner = match pairs.provenance {
        Provenance::DelayEmbedded { depth: d0 } => d0 * depth,
        _ => depth,
    };
    let mut out = pairs_from_sequence(&embedded)?;
    out.provenance = Provenance::DelayEmbedded { depth: inner };
    out.dt = pairs.dt;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanMode {
    /// Mean over the columns of `X` only.
    XMean,
    /// Mean over all columns of `X` and `Y`.
    Pooled,
}

/// Removes a column mean from both `X` and `Y`; returns the mean for
/// [`add_mean`].
pub fn subtract_mean(pairs: &SnapshotPairs, mode: MeanMode) -> (SnapshotPairs, CVector) {
    let n = pairs.state_dim();
    let m = pairs.len();
    let mean = match mode {
        MeanMode::XMean => pairs.x.column_mean(),
        MeanMode::Pooled => {
            let mut s = CVector::zeros(n);
            for j in 0..m {
                s += pairs.x.column(j);
                s += pairs.y.column(j);
            }
            s / c((2 * m) as f64, 0.0)
        }
    };
    let mut out = pairs.clone();
    for j in 0..m {
        let mut xc = out.x.column_mut(j);
        xc -= &mean;
        let mut yc = out.y.column_mut(j);
        yc -= &mean;
    }
    (out, mean)
}

pub fn add_mean(pairs: &SnapshotPairs, mean: &CVector) -> Result<SnapshotPairs> {
    if mean.len() != pairs.state_dim() {
        return Err(DmdError::Dimension("mean length differs from state dimension".into()));
    }
    let mut out = pairs.clone();
    for j in 0..pairs.len() {
        let mut xc = out.x.column_mut(j);
        xc += mean;
        let mut yc = out.y.column_mut(j);
        yc += mean;
    }
    Ok(out)
}

/// Reorders the pair columns; column `k` of the output is column `perm[k]`
/// of the input.
pub fn permute_columns(pairs: &SnapshotPairs, perm: &[usize]) -> Result<SnapshotPairs> {
    let m = pairs.len();
    let mut seen = vec![false; m];
    if perm.len() != m {
        return Err(DmdError::InvalidPermutation(m));
    }
    for &p in perm {
        if p >= m || seen[p] {
            return Err(DmdError::InvalidPermutation(m));
        }
        seen[p] = true;
    }
    let identity = perm.iter().enumerate().all(|(i, &p)| i == p);
    let x = pairs.x.select_columns(perm);
    let y = pairs.y.select_columns(perm);
    let provenance = if identity { pairs.provenance } else { Provenance::Generic };
    let mut out = SnapshotPairs::with_provenance(x, y, provenance)?;
    out.dt = pairs.dt;
    Ok(out)
}
