//! The sup-norm case is an equality, not just a bound: against the
//! rising-factorial input family, every weighted output row of an atom
//! measure reproduces the constant exactly.
//!
//! Run with: cargo run --example sup_norm_identity

use hilbert_mu::{
    apply_tail_bounded, inf_norm_check, Generator, Measure, OperatorParams, Weight,
    DEFAULT_ROW_BUDGET,
};

fn main() -> hilbert_mu::Result<()> {
    let params = OperatorParams::new(0.5, 1.0)?;
    let atom = Measure::single_atom(0.25, 2.0)?;

    let constant = atom
        .c_constant_inf(params.beta())?
        .value()
        .expect("atoms always give a finite sup-norm constant");
    println!("atom (1/4, 2) at alpha = 0.5, beta = 1");
    println!("closed-form constant: {constant:.15}\n");

    // certified rows of the image, multiplied by the output weight,
    // flatten onto the constant
    let rows = apply_tail_bounded(&params, &atom, Generator::ExtremalInf, 6, 1e-10)?;
    let weight = Weight::OutputSup { params };
    println!("{:>4}  {:>22}  {:>12}", "n", "weighted row midpoint", "rel err");
    for (n, row) in rows.iter().enumerate() {
        let weighted = weight.value(n as u64) * row.midpoint();
        println!(
            "{n:>4}  {weighted:>22.15}  {:>12.1e}",
            (weighted - constant).abs() / constant
        );
    }

    // the packaged check compares the certified supremum over the first
    // rows against the constant and returns both sides
    let (computed, reported) = inf_norm_check(&params, &atom, DEFAULT_ROW_BUDGET, 1e-10)?;
    println!(
        "\ninf_norm_check: computed [{:.15}, {:.15}]\n                constant {reported}",
        computed.lo, computed.hi
    );

    // densities must put enough mass away from t = 1 for the sup-norm
    // constant to exist; the check refuses early when they cannot
    let heavy = Measure::parse_spec(
        r#"{"atoms": [], "densities": [{"coef": 1.0, "a": 2.0, "b": 1.5}]}"#,
    )?;
    match inf_norm_check(&params, &heavy, DEFAULT_ROW_BUDGET, 1e-9) {
        Ok(_) => println!("\nunexpected: the heavy-tailed density passed"),
        Err(e) => println!("\nBeta(2, 1.5) at beta = 1 is rejected: {e}"),
    }
    Ok(())
}
