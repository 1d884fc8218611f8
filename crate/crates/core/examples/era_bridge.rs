//! ERA on the impulse response of a two-input, two-output system, compared
//! with DMD on the same Hankel pair.
use gdmd::era::{build_hankel, default_split, era_dmd_similarity, era_realize, EraOrder, MarkovSequence, StateSpace};
use nalgebra::{DMatrix, DVector};

fn main() -> gdmd::Result<()> {
    let n = 5;
    // poles 0.9e^{±0.4i}, 0.7e^{±2i}, -0.5, hidden behind a reflection
    let mut d = DMatrix::zeros(n, n);
    for (i, (r, t)) in [(0.9f64, 0.4f64), (0.7, 2.0)].into_iter().enumerate() {
        let k = 2 * i;
        d[(k, k)] = r * t.cos();
        d[(k, k + 1)] = -r * t.sin();
        d[(k + 1, k)] = r * t.sin();
        d[(k + 1, k + 1)] = r * t.cos();
    }
    d[(4, 4)] = -0.5;
    let v = DVector::from_vec(vec![1.0, -2.0, 0.5, 1.5, 1.0]);
    let h = DMatrix::identity(n, n) - &v * v.transpose() * (2.0 / v.norm_squared());
    let a = &h * d * &h;
    let b = DMatrix::from_fn(n, 2, |i, j| ((i + 2 * j) as f64).sin());
    let cm = DMatrix::from_fn(2, n, |i, j| ((3 * i + j) as f64).cos());
    let sys = StateSpace::new(a, b, cm, DMatrix::zeros(2, 2))?;

    let seq = MarkovSequence::from_system(&sys, 2 * n + 2, 1)?;
    let (m_c, m_o) = default_split(seq.len());
    let pair = build_hankel(&seq, m_c, m_o)?;
    println!("Hankel {}x{} (m_c {m_c}, m_o {m_o})", pair.h.nrows(), pair.h.ncols());

    let era = era_realize(&pair, EraOrder::Full, None)?;
    println!("order {}", era.order());
    println!("σ(H) = {:?}", era.svd_of_h.sigma.iter().map(|s| format!("{s:.2e}")).collect::<Vec<_>>());
    for p in era.poles()? {
        println!("  pole {:+.10} {:+.10}i", p.re, p.im);
    }

    let report = era_dmd_similarity(&pair)?;
    println!("max |λ_era − λ_dmd| = {:.2e}", report.max_mismatch);
    println!("vector map residual = {:.2e}", report.vector_map_residual);
    Ok(())
}
