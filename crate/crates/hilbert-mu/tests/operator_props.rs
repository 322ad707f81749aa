//! The operator itself: section entries, matrix application, certified
//! infinite row sums, the weighted section two-norm, Rayleigh ratios and
//! the lower-bound sweep. Oracles: exact rationals for the unweighted
//! case, an independent dense multiply, high-truncation partial sums, and
//! reference values frozen from 30-digit summation.

use hilbert_mu::{
    apply, apply_tail_bounded, build_section, inf_norm_check, kernel, lower_bound_sweep,
    norm_report, output_norm_ceiling, output_norm_floor, rayleigh_ratio, two_norm_section, Error,
    Generator, Measure, NormExponent, OperatorParams, ReportConfig, SequenceInput, Verdict,
    Weight, DEFAULT_ROW_BUDGET,
};

const PI: f64 = std::f64::consts::PI;

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-300)
}

fn classical() -> (OperatorParams, Measure) {
    (OperatorParams::new(0.0, 0.0).unwrap(), Measure::lebesgue())
}

/// Exact binomial coefficient via the multiplicative u128 form.
fn binomial_oracle(n: u64, k: u64) -> f64 {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k.min(n - k) {
        num *= (n - i) as u128;
        den *= (i + 1) as u128;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    num as f64 / den as f64
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 { a } else { gcd(b, a % b) }
}

#[test]
fn classical_section_is_the_reciprocal_ramp() {
    let (params, measure) = classical();
    let section = build_section(&params, &measure, 12, 12).unwrap();
    for n in 0..12 {
        for m in 0..12 {
            let want = 1.0 / (m + n + 1) as f64;
            assert!(
                rel_err(section.entry(n, m), want) <= 1e-13,
                "entry({n},{m}) = {}",
                section.entry(n, m)
            );
        }
    }
}

#[test]
fn atom_section_entries_are_weighted_binomials() {
    let params = OperatorParams::new(0.0, 0.0).unwrap();
    let measure = Measure::single_atom(0.25, 2.0).unwrap();
    let section = build_section(&params, &measure, 10, 10).unwrap();
    for n in 0..10u64 {
        for m in 0..10u64 {
            let want = 2.0
                * binomial_oracle(n + m, m)
                * 0.25f64.powi(m as i32)
                * 0.75f64.powi(n as i32);
            assert!(
                rel_err(section.entry(n as usize, m as usize), want) <= 1e-12,
                "entry({n},{m})"
            );
        }
    }
}

#[test]
fn weighted_section_entries_factor_into_kernel_times_moment() {
    let params = OperatorParams::new(0.5, 1.0).unwrap();
    let measure = Measure::parse_spec(
        r#"{"atoms": [{"t": 0.5, "mass": 1.0}], "densities": [{"coef": 1.0, "a": 3.0, "b": 2.5}]}"#,
    )
    .unwrap();
    let section = build_section(&params, &measure, 8, 8).unwrap();
    for n in 0..8u64 {
        for m in 0..8u64 {
            let want = kernel(m, n, &params).unwrap() * measure.moment(m, n);
            assert!(
                rel_err(section.entry(n as usize, m as usize), want) <= 1e-12,
                "entry({n},{m})"
            );
        }
    }
    // the (0,0) entry of the flat measure is the kernel times B(1,1) = 1
    let flat = build_section(&params, &Measure::lebesgue(), 1, 1).unwrap();
    assert!(rel_err(flat.entry(0, 0), kernel(0, 0, &params).unwrap()) <= 1e-13);

    assert!(build_section(&params, &measure, 0, 3).is_err());
}

#[test]
fn entry_construction_overflows_loudly_not_silently() {
    // a huge atom mass with strongly weighted parameters pushes a
    // mid-range row value past the double-precision ceiling
    let params = OperatorParams::new(249.5, 250.0).unwrap();
    let measure = Measure::single_atom(0.5, 1e300).unwrap();
    match build_section(&params, &measure, 64, 1) {
        Err(Error::Overflow { what }) => {
            assert!(what.contains("(n, m) = ("), "message was {what:?}");
        }
        other => panic!("expected overflow, got {other:?}"),
    }
}

#[test]
fn apply_reproduces_the_basis_images() {
    let (params, measure) = classical();
    let out = apply(&params, &measure, &[1.0], 20).unwrap();
    for (n, &v) in out.iter().enumerate() {
        assert!(rel_err(v, 1.0 / (n as f64 + 1.0)) <= 1e-13, "n={n}: {v}");
    }

    let atom = Measure::single_atom(0.25, 2.0).unwrap();
    let out = apply(&params, &atom, &[1.0], 20).unwrap();
    for (n, &v) in out.iter().enumerate() {
        assert!(rel_err(v, 2.0 * 0.75f64.powi(n as i32)) <= 1e-13, "n={n}");
    }
}

#[test]
fn apply_matches_an_independent_dense_multiply() {
    let params = OperatorParams::new(0.5, 1.0).unwrap();
    let measure = Measure::parse_spec(
        r#"{"atoms": [{"t": 0.3, "mass": 0.5}], "densities": [{"coef": 1.5, "a": 2.0, "b": 3.0}]}"#,
    )
    .unwrap();
    // fixed coefficients; any finite values work, including negatives
    let a = [0.7, -1.3, 2.9, 0.0, 4.1, -0.2, 1.1, 0.6];
    let got = apply(&params, &measure, &a, 24).unwrap();
    for n in 0..=24u64 {
        let mut want = 0.0;
        for (m, &am) in a.iter().enumerate() {
            want += kernel(m as u64, n, &params).unwrap() * measure.moment(m as u64, n) * am;
        }
        assert!(
            rel_err(got[n as usize], want) <= 1e-12,
            "row {n}: {} vs {want}",
            got[n as usize]
        );
    }

    // the section route multiplies to the same vector
    let section = build_section(&params, &measure, 25, 8).unwrap();
    for n in 0..25 {
        let via_section: f64 = section
            .row(n)
            .iter()
            .zip(&a)
            .map(|(e, am)| e * am)
            .sum();
        assert!(rel_err(got[n], via_section) <= 1e-13, "row {n}");
    }

    assert!(apply(&params, &measure, &[], 4).is_err());
    assert!(apply(&params, &measure, &[f64::NAN], 4).is_err());
}

#[test]
fn unit_basis_rows_come_back_as_near_points() {
    let (params, measure) = classical();
    let rows = apply_tail_bounded(&params, &measure, Generator::UnitBasis { index: 0 }, 16, 1e-6)
        .unwrap();
    for (n, iv) in rows.iter().enumerate() {
        let want = 1.0 / (n as f64 + 1.0);
        assert!(iv.contains(want), "row {n}: [{}, {}]", iv.lo, iv.hi);
        assert!(iv.relative_width() <= 1e-11);
    }
}

#[test]
fn certified_rows_contain_frozen_reference_sums() {
    // high-precision reference values for row 0 against the decaying family
    // a_m = (m+1)^{-0.7} (unweighted parameters, three measure types); the
    // slowly converging density sum was frozen from a two-million-term
    // partial plus an integral bracket on the remainder
    let (params, flat) = classical();
    let generator = Generator::ExtremalLp { p: 2.0, epsilon: 0.2 };

    let zeta_1_7 = 2.0542887568377512393;
    let rows = apply_tail_bounded(&params, &flat, generator, 0, 1e-8).unwrap();
    assert!(
        rows[0].contains(zeta_1_7),
        "flat row 0 = [{}, {}]",
        rows[0].lo,
        rows[0].hi
    );

    let atom = Measure::single_atom(0.5, 1.0).unwrap();
    let rows = apply_tail_bounded(&params, &atom, generator, 0, 1e-8).unwrap();
    assert!(rows[0].contains(1.5075899432574740600));

    let beta_density = Measure::parse_spec(
        r#"{"atoms": [], "densities": [{"coef": 1.0, "a": 3.0, "b": 2.5}]}"#,
    )
    .unwrap();
    let rows = apply_tail_bounded(&params, &beta_density, generator, 0, 1e-8).unwrap();
    assert!(
        rows[0].contains(0.089674652884871575),
        "density row 0 = [{}, {}]",
        rows[0].lo,
        rows[0].hi
    );
}

#[test]
fn certified_rows_contain_high_truncation_partial_sums() {
    // a 2^18-term partial sum is consistent with every honest enclosure:
    // it never exceeds hi (terms are nonnegative), and lo never exceeds
    // the partial plus a bound on its discarded tail
    let params = OperatorParams::new(0.5, 1.0).unwrap();
    let generator = Generator::ExtremalLp { p: 2.0, epsilon: 0.2 };
    let atom = Measure::single_atom(0.5, 1.0).unwrap();
    let density = Measure::parse_spec(
        r#"{"atoms": [], "densities": [{"coef": 1.0, "a": 3.0, "b": 2.5}]}"#,
    )
    .unwrap();
    for measure in [&atom, &density] {
        let rows = apply_tail_bounded(&params, measure, generator, 50, 1e-9).unwrap();
        for &n in &[0u64, 5, 50] {
            let mut half = 0.0;
            let mut partial = 0.0;
            for m in 0..(1u64 << 18) {
                let term = kernel(m, n, &params).unwrap()
                    * measure.moment(m, n)
                    * generator.term(&params, m);
                partial += term;
                if m < (1u64 << 17) {
                    half += term;
                }
            }
            // terms here decay faster than m^{-2}, so the discarded tail is
            // smaller than the mass the last doubling added; the factor 2
            // covers the preasymptotic regime and the floor covers f64 noise
            let tail_allowance = 2.0 * (partial - half) + 1e-12 * partial;
            let iv = rows[n as usize];
            assert!(
                partial <= iv.hi * (1.0 + 1e-13),
                "row {n}: partial {partial} above hi {}",
                iv.hi
            );
            assert!(
                partial + tail_allowance >= iv.lo,
                "row {n}: partial {partial} + tail allowance {tail_allowance} below lo {}",
                iv.lo
            );
            assert!(iv.relative_width() <= 1e-9 * (1.0 + 1e-12));
        }
    }
}

#[test]
fn sup_norm_rows_of_an_atom_are_constant() {
    // against the sup-norm family, the atom (1/2, 1) makes every
    // unweighted output row equal exactly 2
    let (params, _) = classical();
    let atom = Measure::single_atom(0.5, 1.0).unwrap();
    let rows = apply_tail_bounded(&params, &atom, Generator::ExtremalInf, 30, 1e-10).unwrap();
    for (n, iv) in rows.iter().enumerate() {
        assert!(iv.contains(2.0), "row {n} = [{}, {}]", iv.lo, iv.hi);
        assert!(rel_err(iv.midpoint(), 2.0) <= 1e-10);
    }
}

#[test]
fn impossible_width_requests_exhaust_the_budget() {
    let (params, _) = classical();
    let atom = Measure::single_atom(0.5, 1.0).unwrap();
    // 1e-13 sits below the floating-point drift floor, so no truncation
    // point can certify it
    match apply_tail_bounded(&params, &atom, Generator::ExtremalInf, 0, 1e-13) {
        Err(Error::BudgetExhausted(msg)) => {
            assert!(msg.contains("row 0"), "message was {msg:?}");
        }
        other => panic!("expected budget exhaustion, got {other:?}"),
    }
    assert!(apply_tail_bounded(&params, &atom, Generator::ExtremalInf, 0, 0.0).is_err());
    assert_eq!(DEFAULT_ROW_BUDGET, 1_000_000);
}

#[test]
fn divergent_row_sums_are_rejected_up_front() {
    // a density with b ≤ β − T threshold makes the row series diverge;
    // the scan must refuse rather than wander
    let params = OperatorParams::new(0.0, 1.0).unwrap();
    let measure = Measure::parse_spec(
        r#"{"atoms": [], "densities": [{"coef": 1.0, "a": 1.0, "b": 1.0}]}"#,
    )
    .unwrap();
    match apply_tail_bounded(&params, &measure, Generator::ExtremalInf, 0, 1e-6) {
        Err(Error::Domain(msg)) => assert!(msg.contains("diverges"), "message was {msg:?}"),
        other => panic!("expected a divergence rejection, got {other:?}"),
    }
}

#[test]
fn section_two_norm_matches_dense_eigenvalues() {
    let (params, measure) = classical();
    let w_in = Weight::Input { params, p: 2.0 };
    let w_out = Weight::Output { params, p: 2.0 };

    let n1 = two_norm_section(&params, &measure, (&w_in, &w_out), 1).unwrap();
    assert!(rel_err(n1, 1.0) <= 1e-12, "N=1: {n1}");

    // frozen largest eigenvalues of the 2×2 and 5×5 reciprocal-ramp
    // matrices, from a 40-digit dense eigensolve
    let n2 = two_norm_section(&params, &measure, (&w_in, &w_out), 2).unwrap();
    assert!(rel_err(n2, 1.2675918792439982155) <= 1e-11, "N=2: {n2}");
    let n5 = two_norm_section(&params, &measure, (&w_in, &w_out), 5).unwrap();
    assert!(rel_err(n5, 1.5670506910982307955) <= 1e-10, "N=5: {n5}");
}

#[test]
fn section_two_norm_grows_toward_the_constant() {
    let (params, measure) = classical();
    let w_in = Weight::Input { params, p: 2.0 };
    let w_out = Weight::Output { params, p: 2.0 };
    let mut last = 0.0;
    let mut size = 1;
    while size <= 64 {
        let s = two_norm_section(&params, &measure, (&w_in, &w_out), size).unwrap();
        assert!(s >= last - 1e-12, "dropped at N={size}: {s} < {last}");
        assert!(s <= PI * (1.0 + 1e-9), "exceeded the constant at N={size}");
        last = s;
        size *= 2;
    }

    // mismatched weights are refused
    let wrong = Weight::Input { params, p: 3.0 };
    assert!(two_norm_section(&params, &measure, (&wrong, &w_out), 4).is_err());
    let other = OperatorParams::new(0.5, 1.0).unwrap();
    let foreign = Weight::Input { params: other, p: 2.0 };
    assert!(two_norm_section(&params, &measure, (&foreign, &w_out), 4).is_err());
}

#[test]
fn rayleigh_ratio_reproduces_the_geometric_closed_form() {
    // e₀ against the atom (1/2, 1): output 2^{−n}, input norm 1, so the
    // ratio is (Σ 4^{−n})^{1/2} = (4/3)^{1/2}
    let (params, _) = classical();
    let atom = Measure::single_atom(0.5, 1.0).unwrap();
    let frozen = 1.1547005383792515290;
    let ratio = rayleigh_ratio(
        &params,
        &atom,
        NormExponent::new(2.0).unwrap(),
        &SequenceInput::Coefficients(&[1.0]),
    )
    .unwrap();
    assert!(ratio <= frozen * (1.0 + 1e-12), "ratio {ratio} overstates");
    assert!(rel_err(ratio, frozen) <= 1e-9, "ratio {ratio}");

    // the generated unit-basis input takes the same path
    let generated = rayleigh_ratio(
        &params,
        &atom,
        NormExponent::new(2.0).unwrap(),
        &SequenceInput::Generated(Generator::UnitBasis { index: 0 }),
    )
    .unwrap();
    assert!(rel_err(generated, ratio) <= 1e-13);

    // guard rails: zero input, mismatched exponents
    assert!(rayleigh_ratio(
        &params,
        &atom,
        NormExponent::new(2.0).unwrap(),
        &SequenceInput::Coefficients(&[0.0, 0.0]),
    )
    .is_err());
    assert!(rayleigh_ratio(
        &params,
        &atom,
        NormExponent::new(3.0).unwrap(),
        &SequenceInput::Generated(Generator::ExtremalLp { p: 2.0, epsilon: 0.2 }),
    )
    .is_err());
    assert!(rayleigh_ratio(
        &params,
        &atom,
        NormExponent::new(2.0).unwrap(),
        &SequenceInput::Generated(Generator::ExtremalInf),
    )
    .is_err());
}

#[test]
fn output_norm_bounds_sandwich_the_geometric_case() {
    let (params, _) = classical();
    let atom = Measure::single_atom(0.5, 1.0).unwrap();
    let p = NormExponent::new(2.0).unwrap();
    let a = [1.0];
    let frozen = 1.1547005383792515290;
    let floor = output_norm_floor(&params, &atom, &a, p).unwrap();
    let ceiling = output_norm_ceiling(&params, &atom, &a, p).unwrap();
    assert!(floor <= ceiling * (1.0 + 1e-12));
    assert!(floor >= frozen * (1.0 - 1e-9), "floor {floor}");
    assert!(ceiling <= frozen * (1.0 + 1e-6), "ceiling {ceiling}");
    assert!(ceiling >= frozen * (1.0 - 1e-12));

    // zero input has zero norm on both sides
    assert_eq!(output_norm_floor(&params, &atom, &[0.0], p).unwrap(), 0.0);
    assert_eq!(output_norm_ceiling(&params, &atom, &[0.0], p).unwrap(), 0.0);
}

#[test]
fn genuinely_divergent_output_norms_refuse_a_ceiling() {
    // flat measure at p = 1: the image of e₀ is the harmonic sequence,
    // whose weighted 1-norm diverges; no summable tail rule can exist
    let (params, measure) = classical();
    let p = NormExponent::new(1.0).unwrap();
    match output_norm_ceiling(&params, &measure, &[1.0], p) {
        Err(Error::BudgetExhausted(msg)) => {
            assert!(msg.contains("diverge"), "message was {msg:?}")
        }
        other => panic!("expected a tail-rule failure, got {other:?}"),
    }
}

#[test]
fn lower_bound_sweep_rises_as_epsilon_falls() {
    let (params, measure) = classical();
    let samples = lower_bound_sweep(&params, &measure, 2.0, &[0.2, 0.1, 0.05], &[1024]).unwrap();
    assert_eq!(samples.len(), 3);
    // sorted ε descending, ratios strictly rising toward the constant
    for w in samples.windows(2) {
        assert!(w[0].epsilon > w[1].epsilon);
        assert!(
            w[1].ratio > w[0].ratio,
            "ratio did not rise: {} -> {}",
            w[0].ratio,
            w[1].ratio
        );
    }
    for s in &samples {
        assert!(s.ratio <= PI * (1.0 + 1e-9));
        assert!(s.ratio > 2.0, "unreasonably small ratio {}", s.ratio);
    }

    // schedule validation
    assert!(lower_bound_sweep(&params, &measure, 2.0, &[], &[100]).is_err());
    assert!(lower_bound_sweep(&params, &measure, 2.0, &[0.2], &[]).is_err());
    assert!(lower_bound_sweep(&params, &measure, 2.0, &[0.7], &[100]).is_err());
    assert!(lower_bound_sweep(&params, &measure, 2.0, &[0.2], &[0]).is_err());
}

#[test]
fn sup_norm_identity_holds_for_atoms() {
    // (1/2, 1) at unweighted parameters: both sides are exactly 2
    let (params, _) = classical();
    let atom = Measure::single_atom(0.5, 1.0).unwrap();
    let (computed, constant) = inf_norm_check(&params, &atom, DEFAULT_ROW_BUDGET, 1e-9).unwrap();
    assert!(computed.contains(2.0));
    assert!(rel_err(constant.value().unwrap(), 2.0) <= 1e-13);

    // (1/4, 2) with β = 1: constant 2·(3/4)^{−2} = 32/9
    let params2 = OperatorParams::new(0.0, 1.0).unwrap();
    let atom2 = Measure::single_atom(0.25, 2.0).unwrap();
    let (computed2, constant2) = inf_norm_check(&params2, &atom2, DEFAULT_ROW_BUDGET, 1e-9).unwrap();
    let want = 32.0 / 9.0;
    assert!(rel_err(constant2.value().unwrap(), want) <= 1e-13);
    assert!(rel_err(computed2.midpoint(), want) <= 1e-9);

    // weighted parameters agree to the same tolerance
    let params3 = OperatorParams::new(0.5, 1.0).unwrap();
    let (computed3, constant3) =
        inf_norm_check(&params3, &atom, DEFAULT_ROW_BUDGET, 1e-9).unwrap();
    assert!(rel_err(computed3.midpoint(), constant3.value().unwrap()) <= 1e-9);

    // a density that decays too slowly at t = 1 breaks the identity's
    // integral and is rejected up front
    let slow = Measure::parse_spec(
        r#"{"atoms": [], "densities": [{"coef": 1.0, "a": 2.0, "b": 1.5}]}"#,
    )
    .unwrap();
    assert!(matches!(
        inf_norm_check(&params2, &slow, DEFAULT_ROW_BUDGET, 1e-9),
        Err(Error::Domain(_))
    ));
}

#[test]
fn norm_report_assembles_verdicts() {
    let (params, measure) = classical();
    let config = ReportConfig::default();

    // bounded case: flat measure at p = 2
    let report = norm_report(&params, &measure, NormExponent::new(2.0).unwrap(), &config).unwrap();
    assert!(matches!(report.verdict, Verdict::BoundedWithNorm));
    assert!(rel_err(report.constant.value().unwrap(), PI) <= 1e-12);
    let curve = report.section_curve.as_ref().expect("p = 2 has a curve");
    assert!(!curve.is_empty());
    for w in curve.windows(2) {
        assert!(w[1].1 >= w[0].1 - 1e-12, "section curve dropped");
    }
    for s in &report.lower_bounds {
        assert!(s.ratio <= PI * (1.0 + 1e-9));
    }

    // atom case with a closed-form constant 2^{3/2}
    let params3 = OperatorParams::new(0.0, 0.5).unwrap();
    let atom = Measure::single_atom(0.5, 1.0).unwrap();
    let report3 = norm_report(&params3, &atom, NormExponent::new(3.0).unwrap(), &config).unwrap();
    assert!(matches!(report3.verdict, Verdict::BoundedWithNorm));
    assert!(rel_err(report3.constant.value().unwrap(), 2.8284271247461900976) <= 1e-12);
    assert!(report3.section_curve.is_none(), "no curve away from p = 2");

    // divergent case: β = 1 under the flat measure blows up, and the
    // clipped quadrature grows fast enough to call it
    let params_div = OperatorParams::new(0.0, 1.0).unwrap();
    let report_div =
        norm_report(&params_div, &measure, NormExponent::new(2.0).unwrap(), &config).unwrap();
    assert!(!report_div.constant.is_finite());
    assert!(
        matches!(report_div.verdict, Verdict::UnboundedDetected),
        "verdict was {}",
        report_div.verdict
    );

    // sup-norm case: identity holds, verdict bounded at the constant
    let report_inf = norm_report(&params, &atom, NormExponent::Infinity, &config).unwrap();
    assert!(matches!(report_inf.verdict, Verdict::BoundedWithNorm));
    assert!(rel_err(report_inf.constant.value().unwrap(), 2.0) <= 1e-12);
}
