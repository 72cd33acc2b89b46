//! Scan I(T) over log-spaced heights and fit each decay model to the
//! same samples.
use bsy::integral::{fit_decay, i_scan};
use bsy::scan::DecayModel;
use bsy::zeros::find_zeros_up_to;
use bsy::{PrecisionConfig, Result};

fn main() -> Result<()> {
    let cfg = PrecisionConfig::default();
    let zeros = find_zeros_up_to(3100.0, &cfg)?;

    let ts: Vec<f64> = (0..40).map(|k| 30.0 * 100f64.powf(k as f64 / 39.0)).collect();
    let samples = i_scan(&ts, &zeros, &cfg)?;
    let flagged = samples.iter().filter(|s| s.flagged).count();
    println!("{} samples, {flagged} flagged near sign changes", samples.len());

    for model in [DecayModel::PurePower, DecayModel::LogTOverT2, DecayModel::SqrtLogT2] {
        let r = fit_decay(&samples, model)?;
        println!(
            "{:<14} params {:?}  rms {:.4}",
            model.name(),
            r.fitted_params,
            r.residual_rms
        );
    }
    Ok(())
}
