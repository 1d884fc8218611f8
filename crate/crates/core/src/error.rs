use thiserror::Error;

/// Errors produced by the decomposition library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DmdError {
    #[error("matrix has numerical rank zero")]
    RankZero,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("need at least {needed} snapshots, got {got}")]
    TooFewSnapshots { needed: usize, got: usize },

    #[error("invalid permutation of {0} columns")]
    InvalidPermutation(usize),

    #[error("operation requires sequential snapshot pairs (got {0})")]
    NotSequential(String),

    #[error("singular value decomposition did not converge")]
    SvdFailure,

    #[error("eigenvalue iteration did not converge")]
    EigenFailure,

    #[error("requested order {requested} exceeds numerical rank {rank}")]
    OrderExceedsRank { requested: usize, rank: usize },

    #[error("eigenvalues {0} and {1} are repeated; biorthogonal scaling is undefined")]
    RepeatedEigenvalues(usize, usize),

    #[error("adjoint modes were not computed")]
    MissingAdjoint,

    #[error("data are not mean-subtracted (column-mean norm {mean_norm:.3e} vs data norm {data_norm:.3e})")]
    NotMeanSubtracted { mean_norm: f64, data_norm: f64 },

    #[error("sampling interval {dt} violates Nyquist for frequency {freq} (need dt < {limit})")]
    Nyquist { freq: f64, dt: f64, limit: f64 },

    #[error("singular matrix in {0}")]
    Singular(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, DmdError>;
