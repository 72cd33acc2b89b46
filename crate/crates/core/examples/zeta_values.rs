//! ζ(s) off the line, Z(t) and θ(t) on it, and a continuous branch of log ζ.
use bsy::zeta::{hardy_z_value, log_zeta_branch, theta, zeta_em, ComplexPoint};
use bsy::{PrecisionConfig, Result};

fn main() -> Result<()> {
    let cfg = PrecisionConfig::default();

    for (sigma, t) in [(2.0, 0.0), (0.5, 14.0), (0.75, 100.0), (-0.5, 3.0)] {
        let z = zeta_em(ComplexPoint::new(sigma, t), &cfg)?;
        println!(
            "zeta({sigma}+{t}i) = {:.15} {:+.15}i  (bound {:.1e}, {} terms)",
            z.value.re, z.value.im, z.error_bound, z.terms
        );
    }

    for t in [14.134725141734693, 100.0, 1000.0, 1.0e5] {
        let z = hardy_z_value(t, &cfg)?;
        println!(
            "Z({t}) = {:+.12e}  via {:?}, theta = {:.12}",
            z.value,
            z.method,
            theta(t)
        );
    }

    let l = log_zeta_branch(0.6, 1000.0, &cfg)?;
    println!("log zeta(0.6+1000i) = {:.12} {:+.12}i", l.re, l.im);
    Ok(())
}
