//! I(T) on a short ladder, the truncated weight identity, and the
//! zero-sum a hypothetical off-line zero would contribute.
use bsy::integral::{compute_i, weight_identity_check, zero_sum_term};
use bsy::zeros::{find_zeros_up_to, ZeroCandidate};
use bsy::{PrecisionConfig, Result};

fn main() -> Result<()> {
    let cfg = PrecisionConfig::default();
    let zeros = find_zeros_up_to(400.0, &cfg)?;

    for t in [10.0, 50.0, 100.0, 400.0] {
        let r = compute_i(t, &zeros, &cfg)?;
        println!(
            "I({t:>5}) = {:+.12e}  err {:.1e}  {} panels, {} zeros",
            r.value, r.abs_error_est, r.subintervals, r.singularities_handled
        );
    }

    let w = weight_identity_check(1000.0, &cfg)?;
    println!("weight identity truncated at 1000: {:+.12e}", w.value);

    let rho = ZeroCandidate::new(0.6, 1.0e4)?;
    println!("zero at 0.6+1e4 i would add {:.6e}", zero_sum_term(&rho));
    Ok(())
}
