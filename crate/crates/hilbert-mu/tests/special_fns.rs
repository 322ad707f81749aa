//! Gamma-family primitives against independently computed reference values
//! and structural identities (recurrences, cross-form agreement, domain
//! rejection). Reference numbers were produced with 40-digit arithmetic
//! and frozen here; they are not derived from the code under test.

use hilbert_mu::{
    kernel, kernel_alt_forms, log_beta, log_gamma, log_kernel, log_pochhammer_shifted,
    pochhammer_shifted, real_binomial, Error, OperatorParams,
};

/// ln Γ(x) reference table, 40-digit values rounded to f64.
const LOG_GAMMA_TABLE: &[(f64, f64)] = &[
    (0.001, 6.9071788853838536825),
    (0.1, 2.2527126517342059599),
    (0.5, 0.57236494292470008707),
    (0.9, 0.066376239734742971189),
    (1.0, 0.0),
    (1.4616321449683623, -0.1214862905358496081),
    (2.0, 0.0),
    (2.5, 0.28468287047291915963),
    (3.7, 1.4280723266653879219),
    (7.25, 7.0521854507385394449),
    (10.0, 12.801827480081469611),
    (11.5, 16.29200047656724132),
    (100.5, 361.43554046777762156),
    (10000.0, 82099.717496442377273),
    (1000000.0, 12815504.56914761166),
];

/// Exact binomial coefficient as f64 (arguments kept small enough that
/// the u128 value is exactly representable or within one ulp).
fn binomial_oracle(n: u64, k: u64) -> f64 {
    // multiplicative form avoids overflowing the intermediate factorials
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

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-300)
}

#[test]
fn log_gamma_matches_reference_table() {
    for &(x, want) in LOG_GAMMA_TABLE {
        let got = log_gamma(x).unwrap();
        // near ln Γ = 0 (x = 1, 2, and the interior minimum) compare
        // absolutely; elsewhere relatively
        let err = if want.abs() < 0.5 {
            (got - want).abs()
        } else {
            rel_err(got, want)
        };
        assert!(err <= 5e-14, "log_gamma({x}) = {got}, want {want}, err {err}");
    }
}

#[test]
fn log_gamma_rejects_nonpositive_arguments() {
    for bad in [0.0, -1.0, -0.5, f64::NEG_INFINITY, f64::NAN] {
        assert!(
            matches!(log_gamma(bad), Err(Error::Domain(_))),
            "log_gamma({bad}) should be a domain error"
        );
    }
}

#[test]
fn log_gamma_satisfies_recurrence() {
    // ln Γ(x+1) = ln Γ(x) + ln x over a mixed-scale grid
    for i in 1..200 {
        let x = 0.07 * i as f64;
        let lhs = log_gamma(x + 1.0).unwrap();
        let rhs = log_gamma(x).unwrap() + x.ln();
        assert!(
            (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0),
            "recurrence failed at x = {x}: {lhs} vs {rhs}"
        );
    }
}

#[test]
fn log_beta_matches_exact_rational_case() {
    // B(3,4) = 2!·3!/6! = 1/60
    let got = log_beta(3.0, 4.0).unwrap();
    let want = -4.0943445622221006848;
    assert!((got - want).abs() <= 1e-13, "log_beta(3,4) = {got}");
    // symmetry
    let swapped = log_beta(4.0, 3.0).unwrap();
    assert_eq!(got, swapped);
}

#[test]
fn pochhammer_matches_reference_and_recurrence() {
    // (3)_{1/2} = Γ(3.5)/Γ(3), 40-digit reference
    let got = pochhammer_shifted(2.0, 0.5).unwrap();
    assert!(rel_err(got, 1.6616754852239212756) <= 1e-13, "got {got}");

    // (γ+1)_{s+1} = (γ+1)_s · (γ+1+s)
    for &gamma in &[-0.7, 0.0, 0.5, 3.0, 10.0] {
        for &s in &[-0.2, 0.0, 0.5, 1.0, 2.5] {
            let lhs = pochhammer_shifted(gamma, s + 1.0).unwrap();
            let rhs = pochhammer_shifted(gamma, s).unwrap() * (gamma + 1.0 + s);
            assert!(
                rel_err(lhs, rhs) <= 1e-12,
                "pochhammer recurrence failed at gamma={gamma}, s={s}"
            );
        }
    }

    // unit shift is the identity: (γ+1)_0 = 1
    assert_eq!(pochhammer_shifted(1.3, 0.0).unwrap(), 1.0);
}

#[test]
fn pochhammer_rejects_out_of_domain_arguments() {
    // base at or below the pole
    assert!(matches!(
        log_pochhammer_shifted(-1.0, 0.5),
        Err(Error::Domain(_))
    ));
    // shifted argument at or below the pole
    assert!(matches!(
        log_pochhammer_shifted(0.5, -2.0),
        Err(Error::Domain(_))
    ));
}

#[test]
fn kernel_reduces_to_binomials_in_the_unweighted_case() {
    // at α = β = 0 the kernel is the central binomial pattern C(m+n, m)
    let params = OperatorParams::new(0.0, 0.0).unwrap();
    for m in 0..=30u64 {
        for n in 0..=30u64 {
            let got = kernel(m, n, &params).unwrap();
            let want = binomial_oracle(m + n, m);
            assert!(
                rel_err(got, want) <= 1e-12,
                "kernel({m},{n}) = {got}, binomial = {want}"
            );
        }
    }
}

#[test]
fn kernel_matches_frozen_values() {
    let params = OperatorParams::new(0.5, 1.0).unwrap();
    let lk = log_kernel(1, 1, &params);
    assert!(
        (lk - 1.2223937282822166815).abs() <= 1e-13,
        "log_kernel(1,1) = {lk}"
    );
    let k = kernel(3, 2, &params).unwrap();
    assert!(rel_err(k, 18.625675625840094152) <= 1e-13, "kernel(3,2) = {k}");
}

#[test]
fn kernel_alternate_forms_agree_across_configurations() {
    let configs = [(0.0, 0.0), (0.0, 1.0), (0.5, 1.0), (-0.3, 0.2)];
    for &(alpha, beta) in &configs {
        let params = OperatorParams::new(alpha, beta).unwrap();
        for m in (0..=200u64).step_by(7) {
            for n in (0..=200u64).step_by(9) {
                let k = kernel(m, n, &params).unwrap();
                let (m_form, n_form) = kernel_alt_forms(m, n, &params).unwrap();
                assert!(
                    rel_err(m_form, k) <= 1e-11 && rel_err(n_form, k) <= 1e-11,
                    "forms disagree at ({m},{n}) for ({alpha},{beta}): \
                     {k} vs {m_form} vs {n_form}"
                );
            }
        }
    }
}

#[test]
fn real_binomial_extends_the_integer_binomial() {
    for n in 0..=20u64 {
        for k in 0..=n {
            let got = real_binomial(n as f64, k);
            let want = binomial_oracle(n, k);
            assert!(
                rel_err(got, want) <= 1e-12,
                "real_binomial({n},{k}) = {got}, want {want}"
            );
        }
    }
    // negative upper argument alternates sign: C(-1, k) = (-1)^k
    for k in 0..=10u64 {
        let got = real_binomial(-1.0, k);
        let want = if k % 2 == 0 { 1.0 } else { -1.0 };
        assert!((got - want).abs() <= 1e-12, "C(-1,{k}) = {got}");
    }
}

#[test]
fn operator_params_enforce_admissibility() {
    assert!(OperatorParams::new(0.0, 0.0).is_ok());
    assert!(OperatorParams::new(-0.999, -0.5).is_ok());
    assert!(OperatorParams::new(2.0, 1.5).is_ok());

    // each inequality is strict
    assert!(matches!(OperatorParams::new(-1.0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(OperatorParams::new(0.0, -1.0), Err(Error::Domain(_))));
    // β − α must stay above −1 even when both parameters are admissible
    assert!(matches!(OperatorParams::new(1.5, 0.4), Err(Error::Domain(_))));
    assert!(matches!(
        OperatorParams::new(f64::NAN, 0.0),
        Err(Error::Domain(_))
    ));
}
