//! S(t) and S1(t) on the line, with S1 computed both from the zeros and
//! from the Littlewood integral, plus the scan behind the Ω bound.
use bsy::argument::{omega_scan, s1_direct, s1_littlewood, s_of_t_with_zeros};
use bsy::zeros::find_zeros_up_to;
use bsy::{PrecisionConfig, Result};

fn main() -> Result<()> {
    let cfg = PrecisionConfig::default();
    let zeros = find_zeros_up_to(300.0, &cfg)?;

    for t in [50.0, 100.0, 200.0] {
        let s = s_of_t_with_zeros(t, &zeros, &cfg)?;
        let direct = s1_direct(t, &zeros, &cfg)?;
        let lw = s1_littlewood(t, &cfg)?;
        println!(
            "t = {t}: S = {s:+.6}, S1 = {direct:+.8}, Littlewood {lw:+.8}, offset {:+.4}",
            direct - lw
        );
    }

    let scan = omega_scan(100.0, 0.5, &zeros, &cfg)?;
    if let Some(e) = scan.extrema {
        println!("omega scan on [100, 200]: min {:+.6} max {:+.6}", e.min, e.max);
    }
    Ok(())
}
