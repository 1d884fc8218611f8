//! Expand a state in the modes and march it forward.
use gdmd::data::pairs_from_sequence;
use gdmd::dmd::{exact_dmd, propagate, reconstruct, DmdOptions};
use gdmd::generators::gen_planar_rotation;
use gdmd::linalg::to_complex;

fn main() -> gdmd::Result<()> {
    let z = to_complex(&gen_planar_rotation(0.25, &[1.0, -0.5, 2.0], 30)?);
    let train = z.columns(0, 10).into_owned();
    let dec = exact_dmd(&pairs_from_sequence(&train)?, &DmdOptions::default())?;

    let start = reconstruct(&dec, &z.column(0).into_owned())?;
    println!("fit residual {:.2e}", start.residual);
    for k in [1u32, 10, 20, 29] {
        let predicted = propagate(&dec, &start.coefficients, k)?;
        let err = (&predicted - z.column(k as usize)).norm();
        println!("step {k:>2}: error {err:.2e}");
    }
    Ok(())
}
