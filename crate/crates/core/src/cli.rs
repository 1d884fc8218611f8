//! Command-line front end: `dmd`, `era`, `lim`, `gen` and `check`.
//!
//! Every run is deterministic: identical flags and inputs give
//! byte-identical output files.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use thiserror::Error;

use crate::data::{
    delay_embed, pairs_from_sequence, pairs_from_strided, pairs_from_trajectories, subtract_mean, MeanMode,
    SnapshotPairs, TrajectorySet,
};
use crate::dmd::{decompose, linear_consistency, spectrum, Algorithm, DmdDecomposition, DmdOptions, Warning};
use crate::era::{build_hankel, default_split, era_dmd_similarity, era_realize, EraOrder, MarkovSequence};
use crate::error::DmdError;
use crate::generators::{GeneratorSpec, TwoTimescale};
use crate::io::{
    format_f64, read_snapshot_csv, snapshot_csv_string, write_complex_csv, write_snapshot_csv, write_table,
    write_text, IoError,
};
use crate::lim::{fit_lim, lim_dmd_equivalence};
use crate::linalg::{to_complex, CMatrix, RankPolicy, C64};
use crate::scaling::{apply_policy, AmplitudeTarget, ScalingPolicy};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Conflict(String),
    #[error(transparent)]
    File(#[from] IoError),
    #[error(transparent)]
    Dmd(#[from] DmdError),
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Conflict(_) => "flag-conflict",
            CliError::File(IoError::Io { .. }) => "io",
            CliError::File(IoError::Parse { .. }) => "parse",
            CliError::Dmd(e) => match e {
                DmdError::NonFinite(_) => "parse",
                DmdError::Dimension(_) | DmdError::TooFewSnapshots { .. } => "dimension",
                DmdError::RankZero => "rank-zero",
                DmdError::SvdFailure | DmdError::EigenFailure | DmdError::Singular(_) => "numerical",
                _ => "precondition",
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.category() {
            "flag-conflict" => 3,
            "io" => 4,
            "parse" => 5,
            "dimension" => 6,
            "rank-zero" => 7,
            "precondition" => 8,
            _ => 9,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gdmd", version, about = "Dynamic mode decomposition on snapshot CSV files")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose snapshot data into eigenvalues and modes.
    Dmd(DmdArgs),
    /// Eigensystem realization from impulse-response samples.
    Era(EraArgs),
    /// Linear inverse model in EOF coordinates, compared against DMD.
    Lim(LimArgs),
    /// Write synthetic snapshot data.
    Gen(GenArgs),
    /// Report whether the snapshot pairs are linearly consistent.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Exact,
    Projected,
    Qr,
    Sequential,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Exact => Algorithm::Exact,
            AlgorithmArg::Projected => Algorithm::Projected,
            AlgorithmArg::Qr => Algorithm::Qr,
            AlgorithmArg::Sequential => Algorithm::Sequential,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pairing {
    /// One file; pairs (z_k, z_{k+1}).
    Sequential,
    /// One file; pairs (z_{kP}, z_{kP+1}) with P from --stride.
    Strided,
    /// Two files: X then Y.
    Paired,
    /// One file per trajectory; sequential pairs concatenated.
    MultiRun,
}

impl Pairing {
    fn name(&self) -> &'static str {
        match self {
            Pairing::Sequential => "sequential",
            Pairing::Strided => "strided",
            Pairing::Paired => "paired",
            Pairing::MultiRun => "multi-run",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeanArg {
    None,
    /// Subtract the column mean of X from X and Y.
    X,
    /// Subtract the mean over all columns of X and Y.
    Pooled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScalingArg {
    None,
    UnitNorm,
    Biorthogonal,
    AmplitudeQr,
    AmplitudeGram,
}

impl ScalingArg {
    fn policy(self) -> Option<ScalingPolicy> {
        match self {
            ScalingArg::None => None,
            ScalingArg::UnitNorm => Some(ScalingPolicy::UnitNorm),
            ScalingArg::Biorthogonal => Some(ScalingPolicy::Biorthogonal),
            ScalingArg::AmplitudeQr => Some(ScalingPolicy::AmplitudeQr),
            ScalingArg::AmplitudeGram => Some(ScalingPolicy::AmplitudeGram),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    /// Φ Λ d = y_0
    FirstOutput,
    /// Φ d = x_0
    FirstInput,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Snapshot CSV (one snapshot per column). Repeat for paired or multi-run input.
    #[arg(long = "input", short = 'i', required = true)]
    pub inputs: Vec<PathBuf>,
    /// Input files start with a header row.
    #[arg(long)]
    pub header: bool,
    #[arg(long, value_enum, default_value = "sequential")]
    pub pairing: Pairing,
    /// Stride P for --pairing strided.
    #[arg(long)]
    pub stride: Option<usize>,
    /// Delay-embedding depth (1 = no embedding).
    #[arg(long, default_value_t = 1)]
    pub delay: usize,
    #[arg(long, value_enum, default_value = "none")]
    pub mean: MeanArg,
    /// Sampling interval between X and Y columns.
    #[arg(long, default_value_t = 1.0)]
    pub dt: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RankArgs {
    /// Keep singular values above this fraction of σ₁ [default: max(n,m)·eps].
    #[arg(long)]
    pub rank_tol: Option<f64>,
    /// Keep singular values above this absolute value.
    #[arg(long)]
    pub rank_abs: Option<f64>,
    /// Keep exactly this many singular values.
    #[arg(long)]
    pub rank: Option<usize>,
}

impl RankArgs {
    fn policy(&self) -> Result<RankPolicy, CliError> {
        match (self.rank_tol, self.rank_abs, self.rank) {
            (None, None, None) => Ok(RankPolicy::Default),
            (Some(t), None, None) => Ok(RankPolicy::Relative(t)),
            (None, Some(t), None) => Ok(RankPolicy::Absolute(t)),
            (None, None, Some(r)) => Ok(RankPolicy::Fixed(r)),
            _ => Err(CliError::Conflict("--rank-tol, --rank-abs and --rank are mutually exclusive".into())),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DmdArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, default_value = "exact")]
    pub algorithm: AlgorithmArg,
    #[command(flatten)]
    pub rank: RankArgs,
    /// Eigenvalues with |λ| at or below this are zero [default: r·eps·‖Ã‖_F].
    #[arg(long)]
    pub zero_tol: Option<f64>,
    /// Keep modes with zero eigenvalue.
    #[arg(long)]
    pub include_zero_modes: bool,
    /// Gram–Schmidt threshold for the sequential algorithm, relative to ‖z_m‖.
    #[arg(long, default_value_t = 1e-10)]
    pub gs_tol: f64,
    #[arg(long, value_enum, default_value = "none")]
    pub scaling: ScalingArg,
    /// Snapshot reproduced by amplitude scaling.
    #[arg(long, value_enum, default_value = "first-output")]
    pub amplitude_target: TargetArg,
    /// Exponent m in the weighted mode norm ‖φ‖·|λ|^m.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub m_weight: i32,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Relative defect above which the data count as inconsistent.
    #[arg(long, default_value_t = crate::dmd::DEFAULT_CONSISTENCY_TOL)]
    pub tol: f64,
    /// Also write report.txt into this directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EraArgs {
    /// Impulse response CSV: column k holds h_k = C A^k B, stacked column-major.
    #[arg(long = "input", short = 'i')]
    pub input: PathBuf,
    #[arg(long)]
    pub header: bool,
    /// Number of inputs p.
    #[arg(long, default_value_t = 1)]
    pub inputs: usize,
    /// Number of outputs q.
    #[arg(long, default_value_t = 1)]
    pub outputs: usize,
    /// Use Markov parameters h_{kP} and h_{kP+1}.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Realization order: "full" or a positive integer.
    #[arg(long, default_value = "full")]
    pub order: String,
    /// Number of block rows minus one [default: ⌊(m−1)/2⌋].
    #[arg(long)]
    pub mo: Option<usize>,
    /// Also write hankel.csv and hankel_shifted.csv.
    #[arg(long)]
    pub emit_hankel: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct LimArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Skip the mean-subtraction check.
    #[arg(long)]
    pub force: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Ar1,
    StandingWave,
    PlanarRotation,
    RandomLinear,
    TwoTimescale,
    NoisyRotation,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    /// Number of transitions; the output has steps + 1 snapshots.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    /// Seed for ChaCha8 (ar1, random-linear, two-timescale, noisy-rotation).
    #[arg(long)]
    pub seed: Option<u64>,
    /// ar1: decay rate [default: 0.5].
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// ar1: noise variance [default: 10].
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// ar1: initial value [default: 0].
    #[arg(long, allow_negative_numbers = true)]
    pub z0: Option<f64>,
    /// standing-wave, planar-rotation, noisy-rotation: angle per step [default: π/4].
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// standing-wave, planar-rotation: spatial vector, comma separated [default: 1].
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub q: Option<Vec<f64>>,
    /// random-linear, two-timescale: state dimension [default: 4, 8].
    #[arg(long)]
    pub n: Option<usize>,
    /// random-linear: spectral radius bound [default: 0.95].
    #[arg(long)]
    pub bound: Option<f64>,
    /// two-timescale: fast frequency [default: 1.7].
    #[arg(long)]
    pub f_fast: Option<f64>,
    /// two-timescale: slow frequency [default: 0.3].
    #[arg(long)]
    pub f_slow: Option<f64>,
    /// two-timescale: fast decay rate [default: 0].
    #[arg(long)]
    pub decay_fast: Option<f64>,
    /// two-timescale: slow decay rate [default: 0].
    #[arg(long)]
    pub decay_slow: Option<f64>,
    /// two-timescale: sampling interval [default: 0.05].
    #[arg(long)]
    pub dt: Option<f64>,
    /// noisy-rotation: radius [default: 1].
    #[arg(long)]
    pub radius: Option<f64>,
    /// noisy-rotation: process-noise standard deviation [default: 0.1].
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Output file [default: standard output].
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl GenArgs {
    fn given(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let flags: [(&'static str, bool); 15] = [
            ("seed", self.seed.is_some()),
            ("lambda", self.lambda.is_some()),
            ("sigma2", self.sigma2.is_some()),
            ("z0", self.z0.is_some()),
            ("theta", self.theta.is_some()),
            ("q", self.q.is_some()),
            ("n", self.n.is_some()),
            ("bound", self.bound.is_some()),
            ("f-fast", self.f_fast.is_some()),
            ("f-slow", self.f_slow.is_some()),
            ("decay-fast", self.decay_fast.is_some()),
            ("decay-slow", self.decay_slow.is_some()),
            ("dt", self.dt.is_some()),
            ("radius", self.radius.is_some()),
            ("sigma", self.sigma.is_some()),
        ];
        for (name, set) in flags {
            if set {
                out.push(name);
            }
        }
        out
    }

    /// Builds the generator, refusing parameters that do not apply to the kind.
    pub fn spec(&self) -> Result<GeneratorSpec, CliError> {
        let allowed: &[&str] = match self.kind {
            GenKind::Ar1 => &["seed", "lambda", "sigma2", "z0"],
            GenKind::StandingWave | GenKind::PlanarRotation => &["theta", "q"],
            GenKind::RandomLinear => &["seed", "n", "bound"],
            GenKind::TwoTimescale => &["seed", "n", "f-fast", "f-slow", "decay-fast", "decay-slow", "dt"],
            GenKind::NoisyRotation => &["seed", "theta", "radius", "sigma"],
        };
        if let Some(bad) = self.given().into_iter().find(|f| !allowed.contains(f)) {
            return Err(CliError::Conflict(format!(
                "--{bad} does not apply to --kind {}",
                self.kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
            )));
        }
        let seed = self.seed.unwrap_or(0);
        let theta = self.theta.unwrap_or(std::f64::consts::FRAC_PI_4);
        let q = self.q.clone().unwrap_or_else(|| vec![1.0]);
        let steps = self.steps;
        Ok(match self.kind {
            GenKind::Ar1 => GeneratorSpec::Ar1 {
                lambda: self.lambda.unwrap_or(0.5),
                sigma2: self.sigma2.unwrap_or(10.0),
                steps,
                seed,
                z0: self.z0,
            },
            GenKind::StandingWave => GeneratorSpec::StandingWave { theta, q, steps },
            GenKind::PlanarRotation => GeneratorSpec::PlanarRotation { theta, q, steps },
            GenKind::RandomLinear => GeneratorSpec::RandomLinear {
                n: self.n.unwrap_or(4),
                steps,
                bound: self.bound.unwrap_or(0.95),
                seed,
            },
            GenKind::TwoTimescale => GeneratorSpec::TwoTimescale(TwoTimescale {
                f_fast: self.f_fast.unwrap_or(1.7),
                f_slow: self.f_slow.unwrap_or(0.3),
                decay_fast: self.decay_fast.unwrap_or(0.0),
                decay_slow: self.decay_slow.unwrap_or(0.0),
                n: self.n.unwrap_or(8),
                steps,
                dt: self.dt.unwrap_or(0.05),
                seed,
            }),
            GenKind::NoisyRotation => GeneratorSpec::NoisyRotation {
                theta,
                radius: self.radius.unwrap_or(1.0),
                sigma: self.sigma.unwrap_or(0.1),
                steps,
                seed,
            },
        })
    }
}

/// Parses arguments, runs the command, prints errors as
/// `error[<category>]: <message>` and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(&config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            e.exit_code()
        }
    }
}

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    match &config.command {
        Command::Dmd(a) => run_dmd(a),
        Command::Era(a) => run_era(a),
        Command::Lim(a) => run_lim(a),
        Command::Gen(a) => run_gen(a),
        Command::Check(a) => run_check(a),
    }
}

/// Reads the inputs and forms snapshot pairs as the flags describe:
/// pairing, then delay embedding, then mean removal.
pub fn load_pairs(data: &DataArgs) -> Result<SnapshotPairs, CliError> {
    let expected = match data.pairing {
        Pairing::Sequential | Pairing::Strided => Some(1),
        Pairing::Paired => Some(2),
        Pairing::MultiRun => None,
    };
    if let Some(k) = expected {
        if data.inputs.len() != k {
            return Err(CliError::Conflict(format!(
                "--pairing {} takes {k} --input file(s), got {}",
                data.pairing.name(),
                data.inputs.len()
            )));
        }
    }
    if data.stride.is_some() && data.pairing != Pairing::Strided {
        return Err(CliError::Conflict("--stride requires --pairing strided".into()));
    }
    let mut mats = Vec::with_capacity(data.inputs.len());
    for path in &data.inputs {
        mats.push(to_complex(&read_snapshot_csv(path, data.header)?));
    }
    let pairs = match data.pairing {
        Pairing::Sequential => pairs_from_sequence(&mats[0])?,
        Pairing::Strided => pairs_from_strided(&mats[0], data.stride.unwrap_or(1), None)?,
        Pairing::Paired => SnapshotPairs::new(mats[0].clone(), mats[1].clone())?,
        Pairing::MultiRun => pairs_from_trajectories(&TrajectorySet::new(mats)?)?,
    };
    let pairs = delay_embed(&pairs.with_dt(data.dt)?, data.delay)?;
    let pairs = match data.mean {
        MeanArg::None => pairs,
        MeanArg::X => subtract_mean(&pairs, MeanMode::XMean).0,
        MeanArg::Pooled => subtract_mean(&pairs, MeanMode::Pooled).0,
    };
    Ok(pairs)
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| IoError::Io { path: dir.to_path_buf(), message: e.to_string() })?;
    Ok(())
}

fn mean_name(m: MeanArg) -> &'static str {
    match m {
        MeanArg::None => "none",
        MeanArg::X => "x",
        MeanArg::Pooled => "pooled",
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(format_f64).unwrap_or_else(|| "none".into())
}

/// Runs the configured decomposition and scaling in memory.
pub fn dmd_decomposition(args: &DmdArgs, pairs: &SnapshotPairs) -> Result<DmdDecomposition, CliError> {
    if args.algorithm == AlgorithmArg::Sequential && args.data.pairing != Pairing::Sequential {
        return Err(CliError::Conflict("--algorithm sequential requires --pairing sequential".into()));
    }
    let opts = DmdOptions {
        rank: args.rank.policy()?,
        zero_tol: args.zero_tol,
        include_zero_modes: args.include_zero_modes,
        compute_adjoint: true,
        gs_tol: args.gs_tol,
    };
    let dec = decompose(pairs, args.algorithm.into(), &opts)?;
    let target = match args.amplitude_target {
        TargetArg::FirstOutput => AmplitudeTarget::FirstOutput,
        TargetArg::FirstInput => AmplitudeTarget::FirstInput,
    };
    Ok(match args.scaling.policy() {
        Some(p) => apply_policy(&dec, p, pairs, target)?,
        None => dec,
    })
}

fn run_dmd(args: &DmdArgs) -> Result<(), CliError> {
    // flag conflicts first, before any file is read
    args.rank.policy()?;
    if args.algorithm == AlgorithmArg::Sequential && args.data.pairing != Pairing::Sequential {
        return Err(CliError::Conflict("--algorithm sequential requires --pairing sequential".into()));
    }
    let pairs = load_pairs(&args.data)?;
    let dec = dmd_decomposition(args, &pairs)?;
    let consistency = linear_consistency(&pairs, None)?;
    ensure_dir(&args.out)?;

    let points = spectrum(&dec, args.data.dt, args.m_weight)?;
    let rows: Vec<Vec<Option<f64>>> = points
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let amp = dec.amplitudes.as_ref().map(|a| a[k]);
            vec![
                Some(p.eigenvalue.re),
                Some(p.eigenvalue.im),
                Some(p.growth_rate_discrete),
                Some(p.frequency),
                Some(p.growth_rate_continuous),
                Some(p.mode_norm),
                Some(p.weighted_norm),
                amp.map(|a| a.re),
                amp.map(|a| a.im),
            ]
        })
        .collect();
    write_table(&args.out.join("eigenvalues.csv"), &EIGENVALUE_COLUMNS, &rows)?;
    write_complex_csv(&args.out.join("modes.csv"), dec.modes())?;

    let svd = &dec.operator.svd;
    let mut r = String::new();
    let _ = writeln!(r, "command: dmd");
    let _ = writeln!(r, "algorithm: {}", dec.algorithm.name());
    let _ = writeln!(r, "pairing: {}", pairs.provenance().name());
    let _ = writeln!(r, "pairs: {}", pairs.len());
    let _ = writeln!(r, "state dimension: {}", pairs.state_dim());
    let _ = writeln!(r, "delay depth: {}", args.data.delay);
    let _ = writeln!(r, "mean: {}", mean_name(args.data.mean));
    let _ = writeln!(r, "dt: {}", format_f64(args.data.dt));
    let _ = writeln!(r, "rank: {}", dec.rank());
    let _ = writeln!(r, "rank threshold: {}", format_f64(svd.truncation_tol));
    let _ = writeln!(r, "largest singular value: {}", format_f64(svd.sigma[0]));
    let _ = writeln!(r, "truncation error: {}", format_f64(svd.truncation_error()));
    let _ = writeln!(r, "zero tolerance: {}", format_f64(dec.zero_tol));
    let _ = writeln!(r, "modes: {}", dec.len());
    let _ = writeln!(r, "consistency defect: {}", format_f64(consistency.defect));
    let _ = writeln!(r, "relative residual ||AX-Y||/||Y||: {}", format_f64(consistency.ax_residual));
    let _ = writeln!(r, "linearly consistent: {}", if consistency.consistent { "yes" } else { "no" });
    let _ = writeln!(r, "scaling: {}", dec.scaling.map(|s| s.name()).unwrap_or("none"));
    let _ = writeln!(r, "amplitude residual: {}", fmt_opt(dec.amplitude_residual));
    write_warnings(&mut r, &dec.warnings);
    write_text(&args.out.join("report.txt"), &r)?;
    Ok(())
}

/// Column names of `eigenvalues.csv`.
pub const EIGENVALUE_COLUMNS: [&str; 9] = [
    "re",
    "im",
    "abs",
    "frequency",
    "growth_rate",
    "mode_norm",
    "weighted_norm",
    "amplitude_re",
    "amplitude_im",
];

fn write_warnings(r: &mut String, warnings: &[Warning]) {
    if warnings.is_empty() {
        let _ = writeln!(r, "warnings: none");
    }
    for w in warnings {
        match w {
            Warning::DefectiveOperator { eigvec_condition } => {
                let _ = writeln!(
                    r,
                    "warning: reduced operator is nearly defective (eigenvector condition {})",
                    format_f64(*eigvec_condition)
                );
            }
        }
    }
}

fn run_check(args: &CheckArgs) -> Result<(), CliError> {
    let pairs = load_pairs(&args.data)?;
    let rep = linear_consistency(&pairs, Some(args.tol))?;
    let mut r = String::new();
    let _ = writeln!(r, "command: check");
    let _ = writeln!(r, "pairing: {}", pairs.provenance().name());
    let _ = writeln!(r, "pairs: {}", pairs.len());
    let _ = writeln!(r, "state dimension: {}", pairs.state_dim());
    let _ = writeln!(r, "delay depth: {}", args.data.delay);
    let _ = writeln!(r, "consistency defect: {}", format_f64(rep.defect));
    let _ = writeln!(r, "relative residual ||AX-Y||/||Y||: {}", format_f64(rep.ax_residual));
    let _ = writeln!(r, "tolerance: {}", format_f64(rep.tol));
    let _ = writeln!(r, "linearly consistent: {}", if rep.consistent { "yes" } else { "no" });
    if !rep.consistent {
        if pairs.provenance().is_sequential() {
            let _ = writeln!(
                r,
                "suggestion: no linear map takes X to Y; append time-shifted measurements with --delay {}",
                args.data.delay + 1
            );
        } else {
            let _ = writeln!(r, "suggestion: no linear map takes X to Y; add observables or more independent snapshots");
        }
    }
    print!("{r}");
    if let Some(dir) = &args.out {
        ensure_dir(dir)?;
        write_text(&dir.join("report.txt"), &r)?;
    }
    Ok(())
}

fn parse_order(s: &str) -> Result<EraOrder, CliError> {
    if s == "full" {
        return Ok(EraOrder::Full);
    }
    match s.parse::<usize>() {
        Ok(r) if r > 0 => Ok(EraOrder::Order(r)),
        _ => Err(CliError::Conflict(format!("--order must be \"full\" or a positive integer, got {s:?}"))),
    }
}

/// Sorts by descending modulus, then ascending argument.
pub fn sort_poles(poles: &mut [C64]) {
    poles.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(a.arg().total_cmp(&b.arg())));
}

fn real_part(m: &CMatrix) -> DMatrix<f64> {
    m.map(|v| v.re)
}

fn run_era(args: &EraArgs) -> Result<(), CliError> {
    let order = parse_order(&args.order)?;
    if args.inputs == 0 || args.outputs == 0 {
        return Err(CliError::Conflict("--inputs and --outputs must be positive".into()));
    }
    let raw = read_snapshot_csv(&args.input, args.header)?;
    let (q, p) = (args.outputs, args.inputs);
    if raw.nrows() != q * p {
        return Err(DmdError::Dimension(format!(
            "impulse response has {} rows, expected outputs·inputs = {}",
            raw.nrows(),
            q * p
        ))
        .into());
    }
    let h: Vec<DMatrix<f64>> = (0..raw.ncols())
        .map(|k| DMatrix::from_column_slice(q, p, raw.column(k).as_slice()))
        .collect();
    let seq = MarkovSequence::from_impulse_response(&h, args.stride)?;
    let (m_c, m_o) = match args.mo {
        None => default_split(seq.len()),
        Some(m_o) if m_o < seq.len() => (seq.len() - 1 - m_o, m_o),
        Some(m_o) => {
            return Err(DmdError::InvalidParameter(format!(
                "--mo {m_o} leaves no columns with {} Markov parameters",
                seq.len()
            ))
            .into())
        }
    };
    let pair = build_hankel(&seq, m_c, m_o)?;
    let real = era_realize(&pair, order, None)?;
    ensure_dir(&args.out)?;
    let mut poles = real.poles()?;
    sort_poles(&mut poles);
    let rows: Vec<Vec<Option<f64>>> = poles.iter().map(|l| vec![Some(l.re), Some(l.im), Some(l.norm())]).collect();
    write_table(&args.out.join("poles.csv"), &["re", "im", "abs"], &rows)?;
    write_complex_csv(&args.out.join("a_r.csv"), &real.a_r)?;
    write_complex_csv(&args.out.join("b_r.csv"), &real.b_r)?;
    write_complex_csv(&args.out.join("c_r.csv"), &real.c_r)?;
    if args.emit_hankel {
        write_snapshot_csv(&args.out.join("hankel.csv"), &real_part(&pair.h))?;
        write_snapshot_csv(&args.out.join("hankel_shifted.csv"), &real_part(&pair.h_shifted))?;
    }

    let mut r = String::new();
    let _ = writeln!(r, "command: era");
    let _ = writeln!(r, "inputs: {p}");
    let _ = writeln!(r, "outputs: {q}");
    let _ = writeln!(r, "stride: {}", args.stride);
    let _ = writeln!(r, "markov parameters: {}", seq.len());
    let _ = writeln!(r, "m_c: {m_c}");
    let _ = writeln!(r, "m_o: {m_o}");
    let _ = writeln!(r, "hankel shape: {}x{}", pair.h.nrows(), pair.h.ncols());
    let _ = writeln!(r, "order: {}", real.order());
    let sv: Vec<String> = real.svd_of_h.sigma.iter().map(|s| format_f64(*s)).collect();
    let _ = writeln!(r, "hankel singular values: {}", sv.join(" "));
    if order == EraOrder::Full {
        let sim = era_dmd_similarity(&pair)?;
        let _ = writeln!(r, "dmd eigenvalue mismatch: {}", format_f64(sim.max_mismatch));
        let _ = writeln!(r, "eigenvector map residual: {}", format_f64(sim.vector_map_residual));
    }
    write_text(&args.out.join("report.txt"), &r)?;
    Ok(())
}

fn run_lim(args: &LimArgs) -> Result<(), CliError> {
    let pairs = load_pairs(&args.data)?;
    let model = fit_lim(&pairs, args.force)?;
    let eq = lim_dmd_equivalence(&pairs, args.force)?;
    ensure_dir(&args.out)?;
    write_complex_csv(&args.out.join("green.csv"), &model.green)?;
    write_complex_csv(&args.out.join("eofs.csv"), &model.eofs)?;
    let mut r = String::new();
    let _ = writeln!(r, "command: lim");
    let _ = writeln!(r, "pairs: {}", pairs.len());
    let _ = writeln!(r, "state dimension: {}", pairs.state_dim());
    let _ = writeln!(r, "eofs: {}", model.eofs.ncols());
    let _ = writeln!(r, "lag: {}", fmt_opt(model.tau));
    let _ = writeln!(r, "max |G - A_tilde|: {}", format_f64(eq.max_abs_diff));
    let _ = writeln!(r, "||A_tilde||_F: {}", format_f64(eq.a_tilde_norm));
    let _ = writeln!(r, "equivalent: {}", if eq.holds() { "yes" } else { "no" });
    write_text(&args.out.join("report.txt"), &r)?;
    Ok(())
}

fn run_gen(args: &GenArgs) -> Result<(), CliError> {
    let z = args.spec()?.generate()?;
    match &args.output {
        Some(path) => write_snapshot_csv(path, &z)?,
        None => print!("{}", snapshot_csv_string(&z)),
    }
    Ok(())
}
