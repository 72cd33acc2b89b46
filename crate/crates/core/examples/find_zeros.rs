//! Locate the zeros up to a height, check the count against N(T), and
//! round-trip the list through the text format.
use bsy::zeros::{count_zeros, find_zeros_up_to, import_zeros, verify_zero_list};
use bsy::{PrecisionConfig, Result};

fn main() -> Result<()> {
    let cfg = PrecisionConfig::default();
    let height = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200.0);

    let zeros = find_zeros_up_to(height, &cfg)?;
    println!(
        "{} zeros below {height}, N(T) = {}",
        zeros.len(),
        count_zeros(height, &cfg)?
    );
    for g in zeros.ordinates().iter().take(5) {
        println!("  {g:.15}");
    }

    let reread = import_zeros(&zeros.to_text())?;
    let checked = verify_zero_list(reread, &cfg)?;
    println!("reimported list verified: {}", checked.is_verified());
    Ok(())
}
