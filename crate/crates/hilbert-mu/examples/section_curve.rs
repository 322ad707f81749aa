//! Finite sections under the weighted 2-norm: the section curve rises
//! monotonically and stays below the closed-form constant, approaching
//! it slowly from below.
//!
//! Run with: cargo run --example section_curve

use hilbert_mu::{two_norm_section, Measure, OperatorParams, Weight};

fn main() -> hilbert_mu::Result<()> {
    let params = OperatorParams::new(0.0, 0.0)?;
    let flat = Measure::lebesgue();
    let w_in = Weight::Input { params, p: 2.0 };
    let w_out = Weight::Output { params, p: 2.0 };
    let constant = std::f64::consts::PI;

    println!("weighted two-norms of N x N sections, Lebesgue measure, beta = 0\n");
    println!("{:>6}  {:>20}  {:>14}", "N", "section norm", "share of pi");
    let mut size = 1;
    while size <= 1024 {
        let value = two_norm_section(&params, &flat, (&w_in, &w_out), size)?;
        println!("{size:>6}  {value:>20.15}  {:>13.4}%", 100.0 * value / constant);
        size *= 2;
    }
    println!("\nthe limit is pi = {constant:.15}, but convergence is logarithmically");
    println!("slow; the curve is a certified lower envelope, not an estimator");

    // sections respect the measure: a point mass at 1/2 pushes the norm
    // toward its own constant, 1/(1 - 1/2) = 2
    let atom = Measure::single_atom(0.5, 1.0)?;
    let at_64 = two_norm_section(&params, &atom, (&w_in, &w_out), 64)?;
    println!("\natom (1/2, 1): 64 x 64 section norm {at_64:.12} (constant 2)");
    Ok(())
}
