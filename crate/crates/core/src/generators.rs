//! Synthetic snapshot generators.
//!
//! All random draws come from `ChaCha8Rng::seed_from_u64(seed)` and standard
//! normal variates from `rand_distr::StandardNormal`, consumed in the order
//! documented on each generator. Output is a real `n × (steps + 1)` matrix,
//! one snapshot per column, where `steps` counts transitions.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{DmdError, Result};

pub type Snapshots = DMatrix<f64>;

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn check_steps(steps: usize) -> Result<()> {
    if steps < 1 {
        return Err(DmdError::InvalidParameter("need at least one transition (two snapshots)".into()));
    }
    Ok(())
}

fn check_q(q: &[f64]) -> Result<()> {
    if q.is_empty() || q.iter().all(|&v| v == 0.0) {
        return Err(DmdError::InvalidParameter("q must be a nonzero vector".into()));
    }
    if q.iter().any(|v| !v.is_finite()) {
        return Err(DmdError::NonFinite("q"));
    }
    Ok(())
}

/// Scalar AR(1) process `z_{k+1} = λ z_k + n_k`, `n_k ~ N(0, σ²)`.
///
/// One normal draw per transition. `z0` defaults to 0.
pub fn gen_ar1(lambda: f64, sigma2: f64, steps: usize, seed: u64, z0: Option<f64>) -> Result<Snapshots> {
    if !(sigma2 >= 0.0) {
        return Err(DmdError::InvalidParameter(format!("noise variance must be nonnegative, got {sigma2}")));
    }
    check_steps(steps)?;
    let sigma = sigma2.sqrt();
    let mut rng = seeded(seed);
    let mut z = Snapshots::zeros(1, steps + 1);
    z[(0, 0)] = z0.unwrap_or(0.0);
    for k in 0..steps {
        z[(0, k + 1)] = lambda * z[(0, k)] + sigma * normal(&mut rng);
    }
    Ok(z)
}

/// `z_k = cos(kθ) q`.
pub fn gen_standing_wave(theta: f64, q: &[f64], steps: usize) -> Result<Snapshots> {
    check_q(q)?;
    check_steps(steps)?;
    Ok(Snapshots::from_fn(q.len(), steps + 1, |i, k| (k as f64 * theta).cos() * q[i]))
}

/// Rotation system `u_{k+1} = cos θ u_k − sin θ v_k`, `v_{k+1} = sin θ u_k + cos θ v_k`
/// started from `(q, 0)`. Rows `0..n` hold `u`, rows `n..2n` hold `v`.
///
/// Evaluated in closed form so the `u` block matches [`gen_standing_wave`].
pub fn gen_planar_rotation(theta: f64, q: &[f64], steps: usize) -> Result<Snapshots> {
    check_q(q)?;
    check_steps(steps)?;
    let n = q.len();
    Ok(Snapshots::from_fn(2 * n, steps + 1, |i, k| {
        let a = k as f64 * theta;
        if i < n {
            a.cos() * q[i]
        } else {
            a.sin() * q[i - n]
        }
    }))
}

/// `z_{k+1} = M z_k`.
pub fn simulate_linear(m: &DMatrix<f64>, z0: &[f64], steps: usize) -> Result<Snapshots> {
    if !m.is_square() || m.nrows() != z0.len() {
        return Err(DmdError::Dimension(format!(
            "system is {}x{}, initial state has {} entries",
            m.nrows(),
            m.ncols(),
            z0.len()
        )));
    }
    let mut z = Snapshots::zeros(z0.len(), steps + 1);
    z.column_mut(0).copy_from_slice(z0);
    for k in 0..steps {
        let next = m * z.column(k);
        z.set_column(k + 1, &next);
    }
    Ok(z)
}

#[derive(Debug, Clone)]
pub struct RandomLinear {
    pub m: DMatrix<f64>,
    pub eigenvalues: Vec<Complex64>,
    pub snapshots: Snapshots,
}

/// Random real diagonalizable `M` with all `|λ| ≤ bound`, plus a trajectory.
///
/// Draw order: number of complex pairs (uniform in `0..=n/2`), then per
/// eigenvalue block a magnitude uniform in `[0.2, 1]·bound` and a phase
/// uniform in `(0, π)` for pairs or a sign for real eigenvalues, then the
/// entries of `V` column-major, then `z0`.
pub fn gen_random_linear(n: usize, steps: usize, bound: f64, seed: u64) -> Result<RandomLinear> {
    if n == 0 {
        return Err(DmdError::InvalidParameter("state dimension must be positive".into()));
    }
    if !(bound > 0.0) || !bound.is_finite() {
        return Err(DmdError::InvalidParameter(format!("spectral radius bound must be positive, got {bound}")));
    }
    check_steps(steps)?;
    let mut rng = seeded(seed);
    let pairs = rng.random_range(0..=n / 2);
    let mut block = DMatrix::<f64>::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut i = 0;
    for _ in 0..pairs {
        let r = bound * rng.random_range(0.2..=1.0);
        let phi = rng.random_range(0.05..PI - 0.05);
        let (a, b) = (r * phi.cos(), r * phi.sin());
        block[(i, i)] = a;
        block[(i, i + 1)] = -b;
        block[(i + 1, i)] = b;
        block[(i + 1, i + 1)] = a;
        eigenvalues.push(Complex64::new(a, b));
        eigenvalues.push(Complex64::new(a, -b));
        i += 2;
    }
    while i < n {
        let r = bound * rng.random_range(0.2..=1.0);
        let s = if rng.random::<bool>() { r } else { -r };
        block[(i, i)] = s;
        eigenvalues.push(Complex64::new(s, 0.0));
        i += 1;
    }
    let v = DMatrix::from_fn(n, n, |_, _| normal(&mut rng));
    let v_inv = v.clone().try_inverse().ok_or(DmdError::Singular("random eigenvector basis"))?;
    let m = &v * block * v_inv;
    let z0: Vec<f64> = (0..n).map(|_| normal(&mut rng)).collect();
    let snapshots = simulate_linear(&m, &z0, steps)?;
    Ok(RandomLinear { m, eigenvalues, snapshots })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoTimescale {
    /// Frequencies in cycles per unit time.
    pub f_fast: f64,
    pub f_slow: f64,
    /// Decay rates `δ ≥ 0`; each oscillation evolves as `e^{(−δ ± 2πif)t}`.
    pub decay_fast: f64,
    pub decay_slow: f64,
    pub n: usize,
    pub steps: usize,
    pub dt: f64,
    pub seed: u64,
}

impl TwoTimescale {
    /// Discrete eigenvalues `e^{(−δ ± 2πif)dt}` of the fast and slow pairs.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(4);
        for (f, d) in [(self.f_fast, self.decay_fast), (self.f_slow, self.decay_slow)] {
            for s in [1.0, -1.0] {
                out.push(Complex64::new(-d * self.dt, s * 2.0 * PI * f * self.dt).exp());
            }
        }
        out
    }
}

/// Sum of a fast and a slow decaying oscillation on random spatial vectors:
/// `z(t) = Σ e^{−δt}(cos(2πft) a + sin(2πft) b)`.
///
/// Draw order: `a_fast`, `b_fast`, `a_slow`, `b_slow`, each `n` normals.
/// Needs `n ≥ 4` so the four spatial vectors are generically independent.
pub fn gen_two_timescale(spec: &TwoTimescale) -> Result<Snapshots> {
    let TwoTimescale { f_fast, f_slow, decay_fast, decay_slow, n, steps, dt, seed } = *spec;
    if !(f_slow > 0.0 && f_fast > f_slow) {
        return Err(DmdError::InvalidParameter(format!(
            "need f_fast > f_slow > 0, got f_fast={f_fast}, f_slow={f_slow}"
        )));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(DmdError::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let limit = 0.5 / f_fast;
    if dt >= limit {
        return Err(DmdError::Nyquist { freq: f_fast, dt, limit });
    }
    if decay_fast < 0.0 || decay_slow < 0.0 {
        return Err(DmdError::InvalidParameter("decay rates must be nonnegative".into()));
    }
    if n < 4 {
        return Err(DmdError::InvalidParameter(format!("need state dimension at least 4, got {n}")));
    }
    check_steps(steps)?;
    let mut rng = seeded(seed);
    let mut vectors = Vec::with_capacity(4);
    for _ in 0..4 {
        vectors.push((0..n).map(|_| normal(&mut rng)).collect::<Vec<f64>>());
    }
    let parts = [(f_fast, decay_fast, 0), (f_slow, decay_slow, 2)];
    Ok(Snapshots::from_fn(n, steps + 1, |i, k| {
        let t = k as f64 * dt;
        parts
            .iter()
            .map(|&(f, d, j)| {
                let (s, co) = (2.0 * PI * f * t).sin_cos();
                (-d * t).exp() * (co * vectors[j][i] + s * vectors[j + 1][i])
            })
            .sum()
    }))
}

/// Planar oscillator `x_{k+1} = r R(θ) x_k + σ ξ_k` driven by process noise,
/// started from `(1, 0)`. Two normal draws per transition, `ξ_k = (ξ₁, ξ₂)`.
pub fn gen_noisy_rotation(theta: f64, radius: f64, sigma: f64, steps: usize, seed: u64) -> Result<Snapshots> {
    if !(sigma >= 0.0) {
        return Err(DmdError::InvalidParameter(format!("noise level must be nonnegative, got {sigma}")));
    }
    check_steps(steps)?;
    let (s, co) = theta.sin_cos();
    let mut rng = seeded(seed);
    let mut z = Snapshots::zeros(2, steps + 1);
    z[(0, 0)] = 1.0;
    for k in 0..steps {
        let (u, v) = (z[(0, k)], z[(1, k)]);
        z[(0, k + 1)] = radius * (co * u - s * v) + sigma * normal(&mut rng);
        z[(1, k + 1)] = radius * (s * u + co * v) + sigma * normal(&mut rng);
    }
    Ok(z)
}

/// A generator and its parameters, as selected on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Ar1 { lambda: f64, sigma2: f64, steps: usize, seed: u64, z0: Option<f64> },
    StandingWave { theta: f64, q: Vec<f64>, steps: usize },
    PlanarRotation { theta: f64, q: Vec<f64>, steps: usize },
    RandomLinear { n: usize, steps: usize, bound: f64, seed: u64 },
    TwoTimescale(TwoTimescale),
    NoisyRotation { theta: f64, radius: f64, sigma: f64, steps: usize, seed: u64 },
}

impl GeneratorSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            GeneratorSpec::Ar1 { .. } => "ar1",
            GeneratorSpec::StandingWave { .. } => "standing-wave",
            GeneratorSpec::PlanarRotation { .. } => "planar-rotation",
            GeneratorSpec::RandomLinear { .. } => "random-linear",
            GeneratorSpec::TwoTimescale(_) => "two-timescale",
            GeneratorSpec::NoisyRotation { .. } => "noisy-rotation",
        }
    }

    pub fn generate(&self) -> Result<Snapshots> {
        match self {
            GeneratorSpec::Ar1 { lambda, sigma2, steps, seed, z0 } => gen_ar1(*lambda, *sigma2, *steps, *seed, *z0),
            GeneratorSpec::StandingWave { theta, q, steps } => gen_standing_wave(*theta, q, *steps),
            GeneratorSpec::PlanarRotation { theta, q, steps } => gen_planar_rotation(*theta, q, *steps),
            GeneratorSpec::RandomLinear { n, steps, bound, seed } => {
                Ok(gen_random_linear(*n, *steps, *bound, *seed)?.snapshots)
            }
            GeneratorSpec::TwoTimescale(spec) => gen_two_timescale(spec),
            GeneratorSpec::NoisyRotation { theta, radius, sigma, steps, seed } => {
                gen_noisy_rotation(*theta, *radius, *sigma, *steps, *seed)
            }
        }
    }
}
