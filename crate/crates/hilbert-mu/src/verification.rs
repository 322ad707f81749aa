//! Self-contained identity and inequality checks over fixed grids.
//!
//! Every check exercises a relation the rest of the library leans on
//! (kernel product forms, generating-function row and column sums,
//! envelope inequalities, the classical limit constant) and reports the
//! worst residual it saw together with the grid point that produced it.
//! A tolerance override tightens or loosens every check uniformly, which
//! gives a quick way to confirm that failures are detected and reported
//! rather than swallowed.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::interval::{certified_power_series, certified_power_tail, Kahan};
use crate::measure::Measure;
use crate::operator::{rayleigh_ratio, two_norm_section, SequenceInput};
use crate::spaces::{NormExponent, Weight};
use crate::special::{
    kernel, kernel_alt_forms, log_gamma, log_kernel, log_pochhammer_shifted, pochhammer_shifted,
    OperatorParams,
};

/// Outcome of one named check: aggregate pass/fail over its whole grid,
/// the worst residual, and a human-readable tag of where it occurred.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub worst_residual: f64,
    pub worst_input: String,
    pub samples: u64,
}

struct Worst {
    residual: f64,
    input: String,
    samples: u64,
}

impl Worst {
    fn new() -> Self {
        Worst {
            residual: f64::NEG_INFINITY,
            input: String::new(),
            samples: 0,
        }
    }

    fn observe(&mut self, residual: f64, describe: impl FnOnce() -> String) {
        self.samples += 1;
        // NaN must be treated as worse than anything seen so far
        if !(residual <= self.residual) {
            self.residual = residual;
            self.input = describe();
        }
    }

    fn finish(self, name: &str, tol: f64) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            passed: self.residual <= tol,
            worst_residual: self.residual,
            worst_input: self.input,
            samples: self.samples,
        }
    }
}

fn standard_grid() -> Vec<OperatorParams> {
    [(0.0, 0.0), (0.0, 1.0), (0.5, 1.0), (-0.3, 0.2)]
        .iter()
        .map(|&(a, b)| OperatorParams::new(a, b).expect("the standard grid is admissible"))
        .collect()
}

/// Σ u_0 · Π ratio(i) of positive terms whose consecutive ratio tends
/// monotonically to `limit` < 1, stopped once a geometric bound on the
/// remainder falls below 1e-13 of the partial sum.
fn geometric_series_sum(u0: f64, limit: f64, ratio: impl Fn(u64) -> f64) -> Result<f64> {
    let mut term = u0;
    let mut acc = Kahan::new();
    let mut i = 0u64;
    loop {
        acc.add(term);
        term *= ratio(i);
        i += 1;
        let r_sup = ratio(i).max(limit);
        if r_sup < 1.0 && term / (1.0 - r_sup) <= 1e-13 * acc.value() {
            return Ok(acc.value());
        }
        if i > 200_000 {
            return Err(Error::BudgetExhausted(format!(
                "generating sum did not settle within {i} terms (limit ratio {limit})"
            )));
        }
    }
}

/// The kernel's direct Gamma-ratio evaluation must agree with both of its
/// binomial product forms on every admissible grid point.
fn check_kernel_forms(tol: f64) -> Result<CheckResult> {
    let mut w = Worst::new();
    for params in standard_grid() {
        for n in 0..=100u64 {
            for m in 0..=100u64 {
                let k = kernel(m, n, &params)?;
                let (m_form, n_form) = kernel_alt_forms(m, n, &params)?;
                let residual = ((m_form - k).abs().max((n_form - k).abs())) / k;
                w.observe(residual, || {
                    format!(
                        "alpha={}, beta={}, m={m}, n={n}",
                        params.alpha(),
                        params.beta()
                    )
                });
            }
        }
    }
    Ok(w.finish("kernel_forms", tol))
}

/// Row generating function: Σ_m kernel(m, n) t^m (m+1)_α equals
/// (1−t)^{−n−β−1} (n+β−α+1)_α for every t in (0, 1).
fn check_generating_row_sum(tol: f64) -> Result<CheckResult> {
    let mut w = Worst::new();
    for params in standard_grid() {
        let alpha = params.alpha();
        let beta = params.beta();
        for &n in &[0u64, 1, 5, 20] {
            let nf = n as f64;
            for i in 1..=19u32 {
                let t = f64::from(i) * 0.05;
                let u0 = (log_kernel(0, n, &params) + log_gamma(1.0 + alpha)?).exp();
                let sum = geometric_series_sum(u0, t, |m| {
                    t * (nf + m as f64 + beta + 1.0) / (m as f64 + 1.0)
                })?;
                let rhs = (-(nf + beta + 1.0) * (1.0 - t).ln()
                    + log_pochhammer_shifted(nf + beta - alpha, alpha)?)
                .exp();
                w.observe((sum - rhs).abs() / rhs, || {
                    format!("alpha={alpha}, beta={beta}, n={n}, t={t}")
                });
            }
        }
    }
    Ok(w.finish("generating_row_sum", tol))
}

/// Column generating function: Σ_n kernel(m, n) (1−t)^n (n+1)_{β−α}
/// equals t^{−m−β−1} (m+α+1)_{β−α} for every t in (0, 1).
fn check_generating_col_sum(tol: f64) -> Result<CheckResult> {
    let mut w = Worst::new();
    for params in standard_grid() {
        let alpha = params.alpha();
        let beta = params.beta();
        let ba = params.beta_minus_alpha();
        for &m in &[0u64, 1, 5, 20] {
            let mf = m as f64;
            for i in 1..=19u32 {
                let t = f64::from(i) * 0.05;
                let u0 = (log_kernel(m, 0, &params) + log_gamma(1.0 + ba)?).exp();
                let sum = geometric_series_sum(u0, 1.0 - t, |n| {
                    (1.0 - t) * (mf + n as f64 + beta + 1.0) / (n as f64 + 1.0)
                })?;
                let rhs = (-(mf + beta + 1.0) * t.ln()
                    + log_pochhammer_shifted(mf + alpha, ba)?)
                .exp();
                w.observe((sum - rhs).abs() / rhs, || {
                    format!("alpha={alpha}, beta={beta}, m={m}, t={t}")
                });
            }
        }
    }
    Ok(w.finish("generating_col_sum", tol))
}

/// Pointwise envelope: (1−t)/(1−t e^{−x}) ≥ e^{−t x/(1−t)} for t ∈ [0, 1),
/// x ≥ 0. The recorded residual is the (negated) worst slack, so a passing
/// run shows how close the two sides come without crossing.
fn check_exp_lower_bound(tol: f64) -> Result<CheckResult> {
    let mut w = Worst::new();
    for i in 0..=100u32 {
        let x = f64::from(i) * 0.5;
        for j in 0..100u32 {
            let t = f64::from(j) * 0.01;
            let lhs = (1.0 - t) / (1.0 - t * (-x).exp());
            let rhs = (-t * x / (1.0 - t)).exp();
            w.observe(rhs - lhs, || format!("t={t}, x={x}"));
        }
    }
    Ok(w.finish("exp_lower_bound", tol))
}

/// Power-function transform: y^{−z} Γ(z) = ∫_0^∞ e^{−yx} x^{z−1} dx,
/// evaluated by adaptive quadrature against the closed form.
fn check_power_laplace_identity(tol: f64) -> Result<CheckResult> {
    let mut w = Worst::new();
    let grid = [0.5, 1.0, 2.0, 2.5];
    for &y in &grid {
        for &z in &grid {
            let (value, _) = crate::quad::laplace_transform_integral(y, z, 1e-10, 1 << 22)?;
            let expected = (log_gamma(z)? - z * y.ln()).exp();
            w.observe((value - expected).abs() / expected, || {
                format!("y={y}, z={z}")
            });
        }
    }
    Ok(w.finish("power_laplace_identity", tol))
}

/// Elementary power bounds for the shifted factorial: (n+1)_s ≤ (n+s+1)^s
/// for s ≥ 0 and (n+1)_s ≤ (n+1)^{s+1}/(n+s+1) for s ∈ (−1, 0), both from
/// log-convexity of the Gamma function.
fn check_pochhammer_power_bounds(tol: f64) -> Result<CheckResult> {
    let mut w = Worst::new();
    for &s in &[-0.9, -0.5, 0.5, 2.0, 3.7] {
        for n in 0..=10_000u64 {
            let nf = n as f64;
            let value = pochhammer_shifted(nf, s)?;
            let bound = if s >= 0.0 {
                (nf + s + 1.0).powf(s)
            } else {
                (nf + 1.0).powf(s + 1.0) / (nf + s + 1.0)
            };
            w.observe((value - bound) / bound, || format!("n={n}, s={s}"));
        }
    }
    Ok(w.finish("pochhammer_power_bounds", tol))
}

/// Mass concentration of the power-decay series: for each retained
/// fraction 1−ρ and split index, some ε = 2^{−k} (k ≤ 40) pushes that
/// fraction of Σ (m+β+1)^{−1−pε} past the split, and every smaller ε keeps
/// it there. Returns the smallest threshold ε found across the grid.
pub(crate) fn check_tail_mass_lower(tol: f64) -> Result<(f64, CheckResult)> {
    let mut w = Worst::new();
    let mut threshold = f64::INFINITY;
    let mut exhausted: Option<String> = None;
    let mut cases = Vec::new();
    for &rho in &[0.1, 0.25, 0.4] {
        for &split in &[5u64, 20, 100] {
            cases.push((rho, split));
        }
    }
    for &(beta, p) in &[(0.0, 2.0), (1.0, 1.0)] {
        // The full series depends only on the decay exponent, so compute it
        // once per epsilon; each (rho, split) case then needs only a cheap
        // closed-form tail bracket.
        let mut found = vec![false; cases.len()];
        for k in 1..=40i32 {
            let eps = 2f64.powi(-k);
            let e = 1.0 + p * eps;
            let series = certified_power_series(e, beta + 1.0, 1e-9, 1 << 26)?;
            for (idx, &(rho, split)) in cases.iter().enumerate() {
                let tail = certified_power_tail(e, beta + 1.0, split)?;
                let margin = tail.lo / ((1.0 - rho) * series.hi) - 1.0;
                if found[idx] || margin >= 0.0 {
                    if !found[idx] {
                        threshold = threshold.min(eps);
                        found[idx] = true;
                    }
                    w.observe(-margin, || {
                        format!("beta={beta}, p={p}, rho={rho}, split={split}, epsilon=2^-{k}")
                    });
                }
            }
        }
        for (idx, &(rho, split)) in cases.iter().enumerate() {
            if !found[idx] && exhausted.is_none() {
                exhausted = Some(format!(
                    "no epsilon = 2^-k with k <= 40 keeps {} of the series mass past \
                     {split} for beta={beta}, p={p}",
                    1.0 - rho
                ));
            }
        }
    }
    let mut result = w.finish("tail_mass_lower", tol);
    if let Some(message) = exhausted {
        result.passed = false;
        result.worst_residual = f64::INFINITY;
        result.worst_input = message;
    }
    Ok((threshold, result))
}

/// The unweighted limit case: the defining constant at α = β = 0 with the
/// flat measure must reproduce π/sin(π/p), finite sections must stay below
/// the p = 2 constant, and small Rayleigh ratios must respect each bound.
fn check_classical_norm(tol: f64) -> Result<CheckResult> {
    let params = OperatorParams::new(0.0, 0.0)?;
    let measure = Measure::lebesgue();
    let mut w = Worst::new();
    let p_grid = [1.25, 1.5, 2.0, 3.0, 4.0];
    for &p in &p_grid {
        let constant = measure.c_constant(0.0, p)?.value().ok_or_else(|| {
            Error::Domain(format!("the flat-measure constant at p={p} must be finite"))
        })?;
        let closed = PI / (PI / p).sin();
        w.observe((constant - closed).abs() / closed, || {
            format!("constant at p={p}")
        });
    }
    let w_in = Weight::Input { params, p: 2.0 };
    let w_out = Weight::Output { params, p: 2.0 };
    for &size in &[16usize, 64] {
        let s = two_norm_section(&params, &measure, (&w_in, &w_out), size)?;
        w.observe(s / PI - 1.0, || format!("section two-norm at N={size}"));
    }
    let ones = [1.0_f64; 8];
    for &p in &p_grid {
        let closed = PI / (PI / p).sin();
        let ratio = rayleigh_ratio(
            &params,
            &measure,
            NormExponent::new(p)?,
            &SequenceInput::Coefficients(&ones),
        )?;
        w.observe(ratio / closed - 1.0, || format!("flat ratio at p={p}"));
    }
    Ok(w.finish("classical_norm", tol))
}

/// Runs every check (or those whose name contains `only`), each at its
/// default tolerance unless `tol_override` replaces them all.
pub fn run_all(tol_override: Option<f64>, only: Option<&str>) -> Vec<CheckResult> {
    type CheckFn = fn(f64) -> Result<CheckResult>;
    let registry: [(&str, f64, CheckFn); 8] = [
        ("kernel_forms", 1e-11, check_kernel_forms),
        ("generating_row_sum", 1e-8, check_generating_row_sum),
        ("generating_col_sum", 1e-8, check_generating_col_sum),
        ("exp_lower_bound", 1e-14, check_exp_lower_bound),
        ("power_laplace_identity", 1e-8, check_power_laplace_identity),
        ("pochhammer_power_bounds", 1e-12, check_pochhammer_power_bounds),
        ("tail_mass_lower", 1e-12, |tol| {
            check_tail_mass_lower(tol).map(|(_, result)| result)
        }),
        ("classical_norm", 1e-10, check_classical_norm),
    ];
    let mut out = Vec::new();
    for (name, default_tol, check) in registry {
        if let Some(filter) = only {
            if !name.contains(filter) {
                continue;
            }
        }
        let tol = tol_override.unwrap_or(default_tol);
        let row = match check(tol) {
            Ok(result) => result,
            Err(e) => CheckResult {
                name: name.to_string(),
                passed: false,
                worst_residual: f64::INFINITY,
                worst_input: format!("aborted: {e}"),
                samples: 0,
            },
        };
        out.push(row);
    }
    out
}
