//! Mean square of a Dirichlet polynomial against its diagonal, and the
//! twisted log ζ moment off the line against the prime-power sum.
use bsy::dirichlet::{lemma3_compare, mean_square_exact, DirichletPolynomial, Lemma3Request};
use bsy::{PrecisionConfig, Result};

fn main() -> Result<()> {
    let cfg = PrecisionConfig::default();
    let poly = DirichletPolynomial::inverse_sqrt(20);

    for t in [1.0e2, 1.0e3, 1.0e4] {
        let ms = mean_square_exact(&poly, t)?;
        println!("T = {t:>6}: mean square / diagonal = {:.6}", ms / poly.sum_sq());
    }

    let req = Lemma3Request::new(0.8, 0.1, 200.0);
    let c = lemma3_compare(&poly, &req, None, &cfg)?;
    println!("alpha 0.8, T 200: lhs {:+.6e} rhs {:+.6e}", c.lhs_re, c.rhs_re);
    println!(
        "normalized gap {:.3e} (quadrature error {:.1e})",
        c.normalized_gap, c.lhs_error_est
    );
    Ok(())
}
