//! The kernel k(m, n) = Gamma(n+m+beta+1) / (Gamma(m+alpha+1) Gamma(n+beta-alpha+1))
//! and its two product rewritings, which the library cross-checks.
//!
//! Run with: cargo run --example kernel_identities

use hilbert_mu::{kernel, kernel_alt_forms, real_binomial, OperatorParams};

fn main() -> hilbert_mu::Result<()> {
    let params = OperatorParams::new(0.5, 1.0)?;

    println!("kernel entries at alpha = 0.5, beta = 1\n");
    println!(
        "{:>4} {:>4}  {:>20}  {:>20}  {:>20}",
        "m", "n", "direct", "m-product form", "n-product form"
    );
    for (m, n) in [(0, 0), (1, 2), (3, 2), (10, 7), (40, 25)] {
        let direct = kernel(m, n, &params)?;
        let (m_form, n_form) = kernel_alt_forms(m, n, &params)?;
        println!("{m:>4} {n:>4}  {direct:>20.12e}  {m_form:>20.12e}  {n_form:>20.12e}");
    }

    // at alpha = beta = 0 the kernel is the binomial coefficient C(n+m, m),
    // so the unweighted operator against a point mass at t is the matrix
    // of binomial probabilities
    let flat = OperatorParams::new(0.0, 0.0)?;
    println!("\nunweighted kernel vs binomial coefficients");
    for (m, n) in [(2, 2), (5, 3), (12, 9)] {
        let k = kernel(m, n, &flat)?;
        let b = real_binomial((n + m) as f64, m);
        println!("k({m}, {n}) = {k:.6}, C({}, {m}) = {b:.6}", n + m);
    }

    // admissibility is enforced up front: beta - alpha must stay above -1
    let rejected = OperatorParams::new(1.5, 0.4);
    println!("\nalpha = 1.5, beta = 0.4 is rejected: {:?}", rejected.err());
    Ok(())
}
