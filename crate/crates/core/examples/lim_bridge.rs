//! A linear inverse model fitted in EOF coordinates has the reduced DMD
//! operator as its Green function.
use gdmd::data::{pairs_from_sequence, subtract_mean, MeanMode};
use gdmd::generators::gen_random_linear;
use gdmd::lim::{fit_lim, lim_dmd_equivalence, most_probable_state};
use gdmd::linalg::to_complex;

fn main() -> gdmd::Result<()> {
    let sys = gen_random_linear(8, 40, 0.95, 5)?;
    let raw = pairs_from_sequence(&to_complex(&sys.snapshots))?;
    let (pairs, mean) = subtract_mean(&raw, MeanMode::XMean);
    println!("removed mean of norm {:.3e}", mean.norm());

    let model = fit_lim(&pairs, false)?;
    println!("{} EOFs kept", model.eofs.ncols());

    let eq = lim_dmd_equivalence(&pairs, false)?;
    println!("max |G − Ã| = {:.2e} (‖Ã‖ = {:.3})  holds: {}", eq.max_abs_diff, eq.a_tilde_norm, eq.holds());

    let forecast = most_probable_state(&model.green, &model.x_hat.column(0).into_owned())?;
    let err = (&forecast - model.y_hat.column(0)).norm();
    println!("one-step forecast error in EOF space: {err:.2e}");
    Ok(())
}
