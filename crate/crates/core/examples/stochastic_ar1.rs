//! DMD of a scalar AR(1) process recovers the regression coefficient.
use gdmd::data::pairs_from_sequence;
use gdmd::dmd::{exact_dmd, DmdOptions};
use gdmd::generators::gen_ar1;
use gdmd::linalg::to_complex;

fn main() -> gdmd::Result<()> {
    let lambda = 0.8;
    for steps in [100, 1_000, 10_000, 100_000] {
        let z = gen_ar1(lambda, 1.0, steps, 42, None)?;
        let dec = exact_dmd(&pairs_from_sequence(&to_complex(&z))?, &DmdOptions::default())?;
        let est = dec.eigenvalues[0].re;
        println!("steps {steps:>6}: λ̂ = {est:.5}  error {:.2e}", (est - lambda).abs());
    }
    Ok(())
}
