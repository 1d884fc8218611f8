//! Two oscillations with well separated time scales: sequential pairs and
//! pairs taken with a stride give the same continuous-time spectrum.
use gdmd::data::{pairs_from_sequence, pairs_from_strided};
use gdmd::dmd::{exact_dmd, spectrum, DmdOptions};
use gdmd::generators::{gen_two_timescale, TwoTimescale};
use gdmd::linalg::to_complex;

fn main() -> gdmd::Result<()> {
    let spec = TwoTimescale {
        f_fast: 1.7,
        f_slow: 0.3,
        decay_fast: 0.4,
        decay_slow: 0.05,
        n: 12,
        steps: 200,
        dt: 0.05,
        seed: 3,
    };
    let z = to_complex(&gen_two_timescale(&spec)?);

    let sequential = pairs_from_sequence(&z)?.with_dt(spec.dt)?;
    let strided = pairs_from_strided(&z, 5, None)?.with_dt(spec.dt)?;
    for (name, pairs) in [("sequential", sequential), ("stride 5", strided)] {
        let dec = exact_dmd(&pairs, &DmdOptions::default())?;
        println!("{name}: {} pairs", pairs.len());
        for p in spectrum(&dec, spec.dt, 0)? {
            println!("  f = {:+.8}  growth = {:+.8}", p.frequency, p.growth_rate_continuous);
        }
    }
    Ok(())
}
