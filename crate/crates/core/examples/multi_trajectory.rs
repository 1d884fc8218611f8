//! Concatenating several short noisy runs beats one run of the same length.
use gdmd::data::{pairs_from_trajectories, TrajectorySet};
use gdmd::dmd::{exact_dmd, DmdOptions};
use gdmd::era::matched_distance;
use gdmd::generators::gen_noisy_rotation;
use gdmd::linalg::{c, to_complex};

fn error_for(runs: usize, seed: u64) -> gdmd::Result<f64> {
    let (theta, radius) = (0.3, 0.98);
    let trajectories = (0..runs)
        .map(|j| gen_noisy_rotation(theta, radius, 0.1, 30, seed * 100 + j as u64).map(|z| to_complex(&z)))
        .collect::<gdmd::Result<Vec<_>>>()?;
    let pairs = pairs_from_trajectories(&TrajectorySet::new(trajectories)?)?;
    let dec = exact_dmd(&pairs, &DmdOptions::default())?;
    let truth = [c(radius * theta.cos(), radius * theta.sin()), c(radius * theta.cos(), -radius * theta.sin())];
    Ok(matched_distance(&dec.eigenvalues, &truth))
}

fn main() -> gdmd::Result<()> {
    for runs in [1, 2, 5, 10] {
        let errors = (0..50).map(|s| error_for(runs, s)).collect::<gdmd::Result<Vec<_>>>()?;
        let mean = errors.iter().sum::<f64>() / errors.len() as f64;
        println!("{runs:>2} runs: mean eigenvalue error {mean:.4}");
    }
    Ok(())
}
