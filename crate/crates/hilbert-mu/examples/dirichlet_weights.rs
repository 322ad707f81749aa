//! The rising-factorial weights behind the operator are equivalent to
//! pure power weights, which ties the p = 2 theory to the familiar
//! Dirichlet-type scale of coefficient spaces.
//!
//! Run with: cargo run --example dirichlet_weights

use hilbert_mu::{dirichlet_norm, weight_equivalence_check, NormExponent, Weight, WeightedSequence};

fn main() -> hilbert_mu::Result<()> {
    // (n+1)_s / (n+1)^s stays pinched between Gamma(1+s) and 1-ish bands,
    // so rising-factorial weights and power weights define the same spaces
    println!("equivalence bands for (n+1)_s versus (n+1)^s over n <= 10000:\n");
    println!("{:>6}  {:>14}  {:>14}", "s", "min ratio", "max ratio");
    for s in [-0.5, 0.3, 0.5, 1.0, 2.0] {
        let (lo, hi) = weight_equivalence_check(s, 10_000)?;
        println!("{s:>6}  {lo:>14.10}  {hi:>14.10}");
    }

    // the lambda-indexed scale: lambda = 1 is the plain sum of squares,
    // lambda = 0 weights coefficient n by (n+1)
    let coeffs = [1.0, 0.5, 0.25, 0.125];
    println!("\nscale norms of {coeffs:?}:");
    for lambda in [0.0, 0.5, 1.0, 1.5] {
        let norm = dirichlet_norm(&coeffs, lambda)?;
        println!("  lambda = {lambda}: {norm:.12}");
    }

    // the same numbers through the general weighted-sequence machinery
    let by_hand = WeightedSequence::new(
        coeffs.to_vec(),
        Weight::Power { exponent: 1.0 },
        NormExponent::Finite(2.0),
    )?
    .norm();
    println!("\nlambda = 0 again via an explicit power weight: {by_hand:.12}");
    Ok(())
}
