//! The built-in identity suite: every analytic identity the numerics
//! rely on, re-verified on demand over dense grids.
//!
//! Run with: cargo run --example self_checks

use hilbert_mu::run_all;

fn main() {
    println!("running the full identity suite on default grids\n");
    let rows = run_all(None, None);
    println!(
        "{:<28} {:>8} {:>16} {:>10}",
        "check", "passed", "worst residual", "samples"
    );
    for row in &rows {
        println!(
            "{:<28} {:>8} {:>16.3e} {:>10}",
            row.name, row.passed, row.worst_residual, row.samples
        );
    }

    let failed = rows.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        println!("\nall {} checks passed", rows.len());
    } else {
        println!("\n{failed} checks FAILED");
        std::process::exit(3);
    }
}
