//! When the constant diverges the operator is genuinely unbounded, and
//! the library can exhibit that: clipped quadrature grows without bound
//! as the clip shrinks, and near-extremal inputs drive the Rayleigh
//! ratio upward past any fixed threshold.
//!
//! Run with: cargo run --example divergence_probe

use hilbert_mu::{norm_report, Measure, NormExponent, OperatorParams, ReportConfig};

fn main() -> hilbert_mu::Result<()> {
    // beta = 1 under the Lebesgue measure at p = 2 sits outside the
    // boundedness region: the defining integral blows up at both ends
    let params = OperatorParams::new(0.0, 1.0)?;
    let flat = Measure::lebesgue();

    let classified = flat.c_constant(params.beta(), 2.0)?;
    println!("constant for beta = 1, p = 2, Lebesgue measure: {classified}\n");

    // the classification is analytic (an exponent comparison); clipped
    // quadrature makes the blow-up visible numerically
    println!("density integral clipped to [delta, 1 - delta]:");
    for delta in [1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
        let clipped = flat.clipped_density_integral(1.0, 1.0, delta, 1e-9)?;
        println!("  delta = {delta:.0e}: {clipped:>14.4}");
    }

    // the full report combines the classification with a growth probe:
    // rising certified ratios from ever-slower-decaying inputs
    let config = ReportConfig::default();
    let report = norm_report(&params, &flat, NormExponent::Finite(2.0), &config)?;
    println!("\ngrowth probe ratios (each a certified lower bound):");
    for sample in &report.lower_bounds {
        println!(
            "  window {:>9.1e}: ratio {:>10.4}",
            sample.epsilon, sample.ratio
        );
    }
    println!("\nverdict: {}", report.verdict);
    Ok(())
}
