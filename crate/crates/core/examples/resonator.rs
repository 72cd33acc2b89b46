//! Build both sign variants of the resonator with the toy override and
//! compare the resonance ratios.
use bsy::resonator::{build_resonator, lemma4_check, toy_params, SignVariant};
use bsy::Result;

fn main() -> Result<()> {
    let params = toy_params(1, 0.1);
    let plus = build_resonator(&params, SignVariant::Plus, 1 << 20)?;
    println!("plus table: {} entries over primes {:?}", plus.len(), plus.primes());
    for &(n, r) in plus.entries.iter().take(6) {
        println!("  r({n}) = {r:.6}");
    }

    let c = lemma4_check(&params, 1 << 20)?;
    println!(
        "ratio plus  {:+.10}  normalized {:+.6}",
        c.ratio_plus, c.normalized_plus
    );
    println!(
        "ratio minus {:+.10}  normalized {:+.6}",
        c.ratio_minus, c.normalized_minus
    );
    Ok(())
}
