//! Applying the operator to finite coefficient vectors: matrix entries
//! are kernel times measure moment, and for the Lebesgue measure the
//! image of the first basis vector is the harmonic ramp 1/(n+1).
//!
//! Run with: cargo run --example apply_basis

use hilbert_mu::{apply, build_section, Measure, OperatorParams};

fn main() -> hilbert_mu::Result<()> {
    let params = OperatorParams::new(0.0, 0.0)?;
    let flat = Measure::lebesgue();

    // image of e0: row n holds the moment integral of t^0 (1-t)^n
    let image = apply(&params, &flat, &[1.0], 7)?;
    println!("H e0 under the Lebesgue measure:");
    for (n, v) in image.iter().enumerate() {
        println!("  n = {n}: {v:.12}  (1/(n+1) = {:.12})", 1.0 / (n as f64 + 1.0));
    }

    // a general finite input is a weighted mix of basis images
    let a = [0.25, -1.0, 2.0];
    let mixed = apply(&params, &flat, &a, 5)?;
    println!("\nH a for a = {a:?}:");
    for (n, v) in mixed.iter().enumerate() {
        println!("  n = {n}: {v:.12}");
    }

    // the same numbers appear as rows of the finite section matrix
    let section = build_section(&params, &flat, 6, 3)?;
    println!("\nleading 6 x 3 section (entries 1/(n+m+1)):");
    for n in 0..6 {
        let row: Vec<String> = (0..3)
            .map(|m| format!("{:.6}", section.entry(n, m)))
            .collect();
        println!("  [{}]", row.join(", "));
    }

    // a point mass at t = 1/4 with weight 2 turns the first column into
    // the geometric sequence 2 (3/4)^n
    let atom = Measure::single_atom(0.25, 2.0)?;
    let image = apply(&params, &atom, &[1.0], 5)?;
    println!("\nH e0 under the atom (1/4, 2):");
    for (n, v) in image.iter().enumerate() {
        println!("  n = {n}: {v:.12}  (2 (3/4)^n = {:.12})", 2.0 * 0.75f64.powi(n as i32));
    }
    Ok(())
}
