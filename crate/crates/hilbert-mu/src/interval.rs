//! Certified enclosures: a minimal interval carrier, compensated summation,
//! closed-form brackets for power-law series, and elementary two-sided
//! bounds for Gamma ratios.
//!
//! The enclosures produced here are mathematically rigorous up to IEEE
//! rounding of elementary expressions; every consumer widens results by a
//! 2e-12 relative guard, far above the accumulated ulp drift of the
//! expressions involved.

use crate::error::{Error, Result};

/// Relative guard applied to certified results to absorb floating-point
/// drift of the elementary formulas behind them.
pub const FLOAT_DRIFT_GUARD: f64 = 2e-12;

/// A closed interval [lo, hi] known to contain the exact value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "interval bounds out of order: [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// width / |hi|, the relative uncertainty for positive quantities.
    pub fn relative_width(&self) -> f64 {
        if self.hi == 0.0 {
            0.0
        } else {
            self.width() / self.hi.abs()
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Widen both ends by `rel` relative to their magnitude.
    pub fn inflate_relative(self, rel: f64) -> Self {
        Self {
            lo: self.lo - self.lo.abs() * rel,
            hi: self.hi + self.hi.abs() * rel,
        }
    }

    pub fn add(self, other: Self) -> Self {
        Self::new(self.lo + other.lo, self.hi + other.hi)
    }

    /// Scale by a nonnegative constant.
    pub fn scale(self, c: f64) -> Self {
        debug_assert!(c >= 0.0);
        Self::new(self.lo * c, self.hi * c)
    }

    /// x^e for an interval of nonnegative numbers (monotone in the base).
    pub fn powf_monotone(self, e: f64) -> Self {
        debug_assert!(self.lo >= 0.0);
        let a = self.lo.powf(e);
        let b = self.hi.powf(e);
        if a <= b {
            Self::new(a, b)
        } else {
            Self::new(b, a)
        }
    }
}

/// Neumaier-compensated accumulator: deterministic, error ≈ 1 ulp overall.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Certified Σ_{n=0}^{count−1} (n + c)^{−e}: a finite compensated sum,
/// widened by the drift guard.
pub fn certified_power_sum(e: f64, c: f64, count: u64) -> Interval {
    let mut acc = Kahan::new();
    for n in 0..count {
        acc.add((n as f64 + c).powf(-e));
    }
    Interval::point(acc.value()).inflate_relative(FLOAT_DRIFT_GUARD)
}

/// Certified Σ_{n=from}^{∞} (n + c)^{−e} for e > 1, c > 0, by integral
/// comparison of the decreasing summand:
/// ∫_{from}^{∞} ≤ Σ ≤ (from+c)^{−e} + ∫_{from}^{∞}.
pub fn certified_power_tail(e: f64, c: f64, from: u64) -> Result<Interval> {
    if !(e > 1.0) {
        return Err(Error::Domain(format!(
            "power tail requires exponent > 1, got {e}"
        )));
    }
    if !(c > 0.0) {
        return Err(Error::Domain(format!(
            "power tail requires a positive shift, got {c}"
        )));
    }
    let base = from as f64 + c;
    let integral = base.powf(1.0 - e) / (e - 1.0);
    Ok(Interval::new(integral, integral + base.powf(-e)).inflate_relative(FLOAT_DRIFT_GUARD))
}

/// Certified full series Σ_{n=0}^{∞} (n + c)^{−e}, prefix + tail bracket,
/// doubling the prefix until the enclosure is tighter than `rel_tol`.
pub fn certified_power_series(
    e: f64,
    c: f64,
    rel_tol: f64,
    max_terms: u64,
) -> Result<Interval> {
    if !(e > 1.0) {
        return Err(Error::Domain(format!(
            "power series requires exponent > 1, got {e}"
        )));
    }
    let mut acc = Kahan::new();
    let mut summed = 0u64;
    let mut target = 1024u64.min(max_terms);
    loop {
        while summed < target {
            acc.add((summed as f64 + c).powf(-e));
            summed += 1;
        }
        let prefix = Interval::point(acc.value()).inflate_relative(FLOAT_DRIFT_GUARD);
        let total = prefix.add(certified_power_tail(e, c, summed)?);
        if total.width() <= rel_tol * total.lo.max(f64::MIN_POSITIVE) {
            return Ok(total);
        }
        if summed >= max_terms {
            return Err(Error::BudgetExhausted(format!(
                "power series (exponent {e}) still {:.3e} relative after {summed} terms",
                total.relative_width()
            )));
        }
        target = (target * 2).min(max_terms);
    }
}

/// Certified ∫_0^{w0} w^{e0} (1−w)^{e1} dw for e0 > −1, any real e1,
/// w0 ∈ (0, 1), by the binomial series of (1−w)^{e1} integrated term by
/// term: Σ_k binom(e1, k) (−1)^k w0^{e0+k+1} / (e0+k+1).
///
/// Once k > e1 the remaining terms share one sign, and their magnitude
/// ratio is at most w0 · max(1, (k−e1)/(k+1)) < 1 from some k on (the
/// factor (j−e1)/(j+1) is increasing toward 1 when e1 > −1 and decreasing
/// toward 1 when e1 < −1), so the tail after the partial sum is bracketed
/// geometrically by the next term.
pub(crate) fn certified_incomplete_beta(
    e0: f64,
    e1: f64,
    w0: f64,
    rel_tol: f64,
    max_terms: u64,
) -> Result<Interval> {
    if !(e0 > -1.0) {
        return Err(Error::Domain(format!(
            "incomplete Beta integral needs the exponent at 0 to exceed -1, got {e0}"
        )));
    }
    if !(w0 > 0.0 && w0 < 1.0) {
        return Err(Error::Domain(format!(
            "upper limit must lie in (0, 1), got {w0}"
        )));
    }
    let log_w0 = w0.ln();
    // coef_k = binom(e1, k) (−1)^k = Π_{j<k} (j − e1)/(j + 1).
    let mut coef = 1.0_f64;
    let mut acc = Kahan::new();
    let mut k = 0u64;
    loop {
        let kf = k as f64;
        let term = coef * ((e0 + kf + 1.0) * log_w0).exp() / (e0 + kf + 1.0);
        // Past k > e1 the upcoming terms all share the sign of this term;
        // bound their sum geometrically and stop when negligible.
        if kf > e1 {
            let ratio_cap = w0 * ((kf - e1) / (kf + 1.0)).max(1.0);
            if ratio_cap < 1.0 {
                let bound = term / (1.0 - ratio_cap);
                let partial = acc.value();
                if bound.abs() <= rel_tol * partial.abs() || k >= max_terms {
                    let tail = Interval::new(bound.min(0.0), bound.max(0.0));
                    return Ok(Interval::point(partial)
                        .add(tail)
                        .inflate_relative(FLOAT_DRIFT_GUARD));
                }
            }
        }
        acc.add(term);
        coef *= (kf - e1) / (kf + 1.0);
        if coef == 0.0 {
            // e1 is a nonnegative integer: the series terminates exactly.
            return Ok(Interval::point(acc.value()).inflate_relative(FLOAT_DRIFT_GUARD));
        }
        k += 1;
    }
}
