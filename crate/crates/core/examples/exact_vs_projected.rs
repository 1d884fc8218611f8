//! Exact and projected modes on a random linear system, plus the QR and
//! sequential variants.
use gdmd::data::pairs_from_sequence;
use gdmd::dmd::{decompose, Algorithm, DmdOptions};
use gdmd::generators::gen_random_linear;
use gdmd::linalg::to_complex;

fn main() -> gdmd::Result<()> {
    let sys = gen_random_linear(6, 12, 1.0, 8)?;
    let pairs = pairs_from_sequence(&to_complex(&sys.snapshots))?;
    let a = to_complex(&sys.m);

    for alg in [Algorithm::Exact, Algorithm::Projected, Algorithm::Qr, Algorithm::Sequential] {
        let dec = decompose(&pairs, alg, &DmdOptions::default())?;
        let worst = dec
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(k, l)| {
                let phi = dec.modes().column(k);
                (&a * phi - phi * *l).norm() / phi.norm()
            })
            .fold(0.0, f64::max);
        println!("{:<10} rank {}  max ‖Aφ − λφ‖/‖φ‖ = {worst:.2e}", alg.name(), dec.rank());
    }

    println!("true eigenvalues:");
    for l in &sys.eigenvalues {
        println!("  {:+.6} {:+.6}i", l.re, l.im);
    }
    Ok(())
}
