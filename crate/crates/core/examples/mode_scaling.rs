//! The scaling policies side by side.
use gdmd::data::pairs_from_sequence;
use gdmd::dmd::{exact_dmd, DmdOptions};
use gdmd::generators::gen_random_linear;
use gdmd::linalg::to_complex;
use gdmd::scaling::{apply_policy, AmplitudeTarget, ScalingPolicy};

fn main() -> gdmd::Result<()> {
    let sys = gen_random_linear(4, 10, 1.0, 21)?;
    let pairs = pairs_from_sequence(&to_complex(&sys.snapshots))?;
    let opts = DmdOptions { compute_adjoint: true, ..DmdOptions::default() };
    let dec = exact_dmd(&pairs, &opts)?;

    for policy in [
        ScalingPolicy::UnitNorm,
        ScalingPolicy::Biorthogonal,
        ScalingPolicy::AmplitudeQr,
        ScalingPolicy::AmplitudeGram,
    ] {
        let scaled = apply_policy(&dec, policy, &pairs, AmplitudeTarget::FirstOutput)?;
        println!("{}:", policy.name());
        println!("  mode norms {:?}", scaled.mode_norms().iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>());
        if let Some(psi) = &scaled.adjoint_modes {
            let gram = psi.adjoint() * &scaled.exact_modes;
            let off = (gram - gdmd::linalg::CMatrix::identity(dec.len(), dec.len())).norm();
            println!("  ‖Ψ*Φ − I‖ = {off:.2e}");
        }
        if let (Some(d), Some(res)) = (&scaled.amplitudes, scaled.amplitude_residual) {
            println!("  |amplitudes| {:?}", d.iter().map(|a| format!("{:.4}", a.norm())).collect::<Vec<_>>());
            println!("  residual {res:.2e}");
        }
    }
    Ok(())
}
