//! A standing wave fails the consistency check; one delay fixes it.
use gdmd::data::{delay_embed, pairs_from_sequence};
use gdmd::dmd::{exact_dmd, linear_consistency, DmdOptions};
use gdmd::generators::gen_standing_wave;
use gdmd::linalg::to_complex;

fn main() -> gdmd::Result<()> {
    let theta = 0.6;
    let z = gen_standing_wave(theta, &[1.0, 0.5, -0.25, 2.0], 40)?;
    let pairs = pairs_from_sequence(&to_complex(&z))?;

    let report = linear_consistency(&pairs, None)?;
    println!("raw: consistent = {}, defect = {:.3e}", report.consistent, report.defect);
    let dec = exact_dmd(&pairs, &DmdOptions::default())?;
    println!("raw eigenvalues: {:?}", dec.eigenvalues);

    let embedded = delay_embed(&pairs, 2)?;
    let report = linear_consistency(&embedded, None)?;
    println!("delay 2: consistent = {}, defect = {:.3e}", report.consistent, report.defect);
    let dec = exact_dmd(&embedded, &DmdOptions::default())?;
    for l in &dec.eigenvalues {
        println!("  |λ| = {:.12}  arg = {:+.12} (θ = {theta})", l.norm(), l.arg());
    }
    Ok(())
}
