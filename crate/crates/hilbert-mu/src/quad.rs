//! Adaptive quadrature with endpoint-singularity substitutions, plus a
//! certified Riemann bracket for Beta-shaped windows.
//!
//! Two accuracy regimes coexist here on purpose:
//! * [`power_endpoint_integral`] / [`laplace_transform_integral`] return a
//!   value with an error estimate from Simpson refinement, inflated 10x.
//!   They back the cross-check paths, where the closed form is the oracle.
//! * [`certified_beta_window`] returns a true enclosure built from monotone
//!   panel brackets, used where a one-sided bound must be trusted.

use crate::error::{Error, Result};
use crate::interval::{Interval, Kahan};

const MAX_DEPTH: u32 = 48;

/// Safety factor applied to Simpson's |S2 − S1|/15 error estimate.
const ERR_INFLATION: f64 = 10.0;

fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    s_whole: f64,
    tol: f64,
    depth: u32,
    evals: &mut u64,
    max_evals: u64,
) -> Result<(f64, f64)> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    *evals += 2;
    if *evals > max_evals {
        return Err(Error::QuadratureFailure(format!(
            "refinement budget of {max_evals} evaluations exhausted on [{a}, {b}]"
        )));
    }
    let flm = f(lm);
    let frm = f(rm);
    if !flm.is_finite() || !frm.is_finite() {
        return Err(Error::QuadratureFailure(format!(
            "integrand not finite near t = {lm} or t = {rm}"
        )));
    }
    let h = b - a;
    let s_left = h / 12.0 * (fa + 4.0 * flm + fm);
    let s_right = h / 12.0 * (fm + 4.0 * frm + fb);
    let s2 = s_left + s_right;
    let delta = s2 - s_whole;
    if delta.abs() <= 15.0 * tol || h <= 1e-14 * (a.abs() + b.abs() + 1.0) {
        return Ok((s2 + delta / 15.0, delta.abs() / 15.0));
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure(format!(
            "maximum refinement depth reached on [{a}, {b}]"
        )));
    }
    let (vl, el) = simpson_rec(f, a, m, fa, flm, fm, s_left, 0.5 * tol, depth - 1, evals, max_evals)?;
    let (vr, er) = simpson_rec(f, m, b, fm, frm, fb, s_right, 0.5 * tol, depth - 1, evals, max_evals)?;
    Ok((vl + vr, el + er))
}

/// Adaptive Simpson on [a, b] with an absolute tolerance.
///
/// Returns (value, error_bound); the bound is the accumulated Richardson
/// estimate inflated by a 10x safety factor.
pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_evals: u64,
) -> Result<(f64, f64)> {
    if a == b {
        return Ok((0.0, 0.0));
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    if !fa.is_finite() || !fm.is_finite() || !fb.is_finite() {
        return Err(Error::QuadratureFailure(format!(
            "integrand not finite at an initial node of [{a}, {b}]"
        )));
    }
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut evals = 3u64;
    let (v, e) = simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, MAX_DEPTH, &mut evals, max_evals)?;
    Ok((v, e * ERR_INFLATION))
}

/// Substitution exponent that regularizes t^{p} near t = 0: with t = s^κ the
/// transformed integrand carries s^{κ(p+1)−1}, and κ = ⌈2/(p+1)⌉ makes that
/// exponent at least 1. Only meaningful for p > −1; below that no power
/// substitution can tame the endpoint, and callers must keep away from it.
fn regularizing_kappa(p_exp: f64) -> f64 {
    if p_exp >= 0.0 {
        1.0
    } else {
        (2.0 / (p_exp + 1.0)).ceil().max(1.0)
    }
}

/// Integrate a positive integrand over panels that double in width away
/// from `lo`, each at a tolerance set relative to a crude midpoint scan.
///
/// Built for steep-but-smooth shapes like t^{p} with p ≤ −1 on a range
/// bounded away from 0: each panel spans a fixed dynamic range, so the
/// refinement effort is spread evenly instead of drowning at the steep end.
fn doubling_panel_integral<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    max_evals: u64,
) -> Result<(f64, f64)> {
    let mut breaks = vec![lo];
    let mut x = lo;
    while x < hi {
        x = (2.0 * x).min(hi);
        breaks.push(x);
    }
    // Per-panel relative control composes to total relative control for a
    // positive integrand; the 20x headroom absorbs the error inflation.
    let panel_rel = rel_tol / 20.0;
    let mut value = 0.0;
    let mut err = 0.0;
    for pair in breaks.windows(2) {
        let scale = (pair[1] - pair[0]) * f(0.5 * (pair[0] + pair[1])).abs();
        let (v, e) = adaptive_simpson(f, pair[0], pair[1], (panel_rel * scale).max(1e-300), max_evals)?;
        value += v;
        err += e;
    }
    Ok((value, err))
}

/// ∫_lo^hi t^{p_exp} (1−t)^{q_exp} dt over [lo, hi] ⊆ [0, 1], with
/// endpoint-singularity substitutions t = s^κ near 0 and 1−t = s^κ near 1.
///
/// Returns (value, inflated error bound). Touching an endpoint requires the
/// corresponding exponent to be integrable there (> −1); interior ranges
/// accept any exponents.
pub(crate) fn power_endpoint_integral(
    p_exp: f64,
    q_exp: f64,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    max_evals: u64,
) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
        return Err(Error::Domain(format!(
            "integration range [{lo}, {hi}] must sit inside [0, 1]"
        )));
    }
    if lo == hi {
        return Ok((0.0, 0.0));
    }
    if lo == 0.0 && p_exp <= -1.0 {
        return Err(Error::Domain(format!(
            "t^{p_exp} is not integrable at 0; classify divergence before quadrature"
        )));
    }
    if hi == 1.0 && q_exp <= -1.0 {
        return Err(Error::Domain(format!(
            "(1-t)^{q_exp} is not integrable at 1; classify divergence before quadrature"
        )));
    }

    let mid = if lo < 0.5 && hi > 0.5 { 0.5 } else { 0.5 * (lo + hi) };
    let mut pieces: Vec<(f64, f64, bool)> = Vec::new();
    if lo < mid && hi > mid {
        pieces.push((lo, mid, false));
        pieces.push((mid, hi, true));
    } else {
        // Entire range on one side of 1/2: regularize toward its nearest endpoint.
        pieces.push((lo, hi, lo >= 0.5));
    }

    // Two-phase tolerance: first pass assumes O(1) magnitude, then re-runs
    // against the observed value if the estimate was not tight enough.
    let mut abs_tol = rel_tol.max(1e-15);
    for _ in 0..4 {
        let mut value = 0.0;
        let mut err = 0.0;
        for &(x0, x1, from_one) in &pieces {
            let piece_tol = abs_tol * (x1 - x0).max(0.1);
            let (v, e) = if !from_one {
                if p_exp <= -1.0 {
                    // Non-integrable exponent on an interior range (x0 > 0 was
                    // checked above): steep but smooth, so panel it directly.
                    let g = |t: f64| t.powf(p_exp) * (1.0 - t).powf(q_exp);
                    doubling_panel_integral(&g, x0, x1, rel_tol, max_evals)?
                } else {
                    let kappa = regularizing_kappa(p_exp);
                    let s0 = x0.powf(1.0 / kappa);
                    let s1 = x1.powf(1.0 / kappa);
                    let g = |s: f64| {
                        let t = s.powf(kappa);
                        kappa * s.powf(kappa * (p_exp + 1.0) - 1.0) * (1.0 - t).powf(q_exp)
                    };
                    adaptive_simpson(&g, s0, s1, piece_tol, max_evals)?
                }
            } else if q_exp <= -1.0 {
                // Mirror of the steep case at the right edge, in s = 1 − t.
                let g = |s: f64| s.powf(q_exp) * (1.0 - s).powf(p_exp);
                doubling_panel_integral(&g, 1.0 - x1, 1.0 - x0, rel_tol, max_evals)?
            } else {
                let kappa = regularizing_kappa(q_exp);
                let s0 = (1.0 - x1).powf(1.0 / kappa);
                let s1 = (1.0 - x0).powf(1.0 / kappa);
                let g = |s: f64| {
                    let u = s.powf(kappa);
                    kappa * s.powf(kappa * (q_exp + 1.0) - 1.0) * (1.0 - u).powf(p_exp)
                };
                adaptive_simpson(&g, s0, s1, piece_tol, max_evals)?
            };
            value += v;
            err += e;
        }
        if err <= rel_tol * value.abs().max(f64::MIN_POSITIVE) || value == 0.0 {
            return Ok((value, err));
        }
        abs_tol = (rel_tol * value.abs() * 0.25).max(1e-300);
    }
    Err(Error::QuadratureFailure(format!(
        "could not reach relative tolerance {rel_tol} for exponents ({p_exp}, {q_exp}) on [{lo}, {hi}]"
    )))
}

/// ∫_0^∞ e^{−yx} x^{z−1} dx by substitution x = s^κ (κ regularizes the
/// origin for z < 2) and truncation where the exponential reaches e^{−745},
/// which is below the double-precision floor relative to the value Γ(z)y^{−z}.
pub(crate) fn laplace_transform_integral(
    y: f64,
    z: f64,
    rel_tol: f64,
    max_evals: u64,
) -> Result<(f64, f64)> {
    if !(y > 0.0) || !(z > 0.0) {
        return Err(Error::Domain(format!(
            "transform integral requires y, z > 0, got ({y}, {z})"
        )));
    }
    let kappa = if z < 2.0 { (2.0 / z).ceil() } else { 1.0 };
    let x_cut = 745.0 / y;
    let s_max = x_cut.powf(1.0 / kappa);
    let g = |s: f64| {
        let x = s.powf(kappa);
        kappa * s.powf(kappa * z - 1.0) * (-y * x).exp()
    };
    // The integrand is a single bump peaking at s_peak; when the truncation
    // point sits far beyond it, one Simpson panel over [0, s_max] samples
    // only the flat tails and accepts zero. Seed panels at the peak and
    // doubling outward so every panel has real mass on its boundary.
    let s_peak = ((kappa * z - 1.0) / (y * kappa)).powf(1.0 / kappa);
    let mut breaks = vec![0.0, s_peak.min(s_max)];
    while *breaks.last().expect("seeded") < s_max {
        let next = (2.0 * breaks.last().expect("seeded")).min(s_max);
        breaks.push(next);
    }
    // Scale-aware absolute tolerance from the exact magnitude Γ(z) y^{−z}.
    let scale = (crate::special::log_gamma_unchecked(z) - z * y.ln()).exp();
    let panel_tol = ((rel_tol * scale).max(1e-300)) / (breaks.len() - 1) as f64;
    let mut value = 0.0;
    let mut err = 0.0;
    for pair in breaks.windows(2) {
        let (v, e) = adaptive_simpson(&g, pair[0], pair[1], panel_tol, max_evals)?;
        value += v;
        err += e;
    }
    Ok((value, err))
}

/// Certified enclosure of ∫_lo^hi t^{A−1} (1−t)^{B−1} dt on a strict
/// interior window 0 < lo < hi < 1.
///
/// The integrand has at most one interior critical point (its log-derivative
/// has a linear numerator), so the range splits into monotone pieces; on
/// each piece lower/upper Riemann sums over a grid uniform in
/// ln(t/(1−t)) give a true bracket, refined by doubling the panel count.
pub(crate) fn certified_beta_window(
    a_exp: f64,
    b_exp: f64,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    max_panels: u64,
) -> Result<Interval> {
    if !(lo > 0.0 && hi < 1.0 && lo < hi) {
        return Err(Error::Domain(format!(
            "window [{lo}, {hi}] must be strictly interior to (0, 1)"
        )));
    }
    let g = |t: f64| t.powf(a_exp - 1.0) * (1.0 - t).powf(b_exp - 1.0);

    // g'(t) sign = sign of (A−1)(1−t) − (B−1)t, linear with root t*.
    let denom = a_exp + b_exp - 2.0;
    let mut cuts = vec![lo, hi];
    if denom != 0.0 {
        let t_star = (a_exp - 1.0) / denom;
        if t_star > lo && t_star < hi {
            cuts.insert(1, t_star);
        }
    }

    let logit = |t: f64| (t / (1.0 - t)).ln();
    let unlogit = |l: f64| 1.0 / (1.0 + (-l).exp());

    let mut total = Interval::point(0.0);
    for w in cuts.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let (l0, l1) = (logit(x0), logit(x1));
        let mut panels: u64 = 1024;
        loop {
            let mut lo_sum = Kahan::new();
            let mut hi_sum = Kahan::new();
            let mut t_prev = x0;
            let mut g_prev = g(t_prev);
            if !g_prev.is_finite() {
                return Err(Error::QuadratureFailure(format!(
                    "window integrand not finite at t = {t_prev}"
                )));
            }
            for i in 1..=panels {
                let t_next = if i == panels {
                    x1
                } else {
                    unlogit(l0 + (l1 - l0) * i as f64 / panels as f64)
                };
                let g_next = g(t_next);
                let dt = t_next - t_prev;
                lo_sum.add(g_prev.min(g_next) * dt);
                hi_sum.add(g_prev.max(g_next) * dt);
                t_prev = t_next;
                g_prev = g_next;
            }
            let bracket = Interval::new(
                lo_sum.value().min(hi_sum.value()),
                hi_sum.value().max(lo_sum.value()),
            )
            .inflate_relative(crate::interval::FLOAT_DRIFT_GUARD);
            if bracket.width() <= rel_tol * bracket.lo.max(f64::MIN_POSITIVE) {
                total = total.add(bracket);
                break;
            }
            if panels >= max_panels {
                return Err(Error::BudgetExhausted(format!(
                    "window integral on [{x0}, {x1}] still {:.3e} relative after {panels} panels",
                    bracket.relative_width()
                )));
            }
            panels *= 2;
        }
    }
    Ok(total)
}
