//! Weighted sequence spaces: the operator's input/output weights for
//! finite p and for the sup norm, weighted ℓ^p norms, extremal test
//! sequences, and the coefficient norm of the Dirichlet-type spaces.

use crate::error::{Error, Result};
use crate::interval::{certified_power_series, Interval, Kahan};
use crate::special::{log_pochhammer_shifted, pochhammer_shifted, OperatorParams};

/// Norm exponent p ∈ [1, ∞]; infinity is a distinguished tag because the
/// sup norm differs structurally from every finite-p norm (and its natural
/// weights differ from the p → ∞ limit of the finite-p ones).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormExponent {
    Finite(f64),
    Infinity,
}

impl NormExponent {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p < 1.0 {
            return Err(Error::Domain(format!(
                "norm exponent must satisfy p >= 1 (or be \"inf\"), got {p}"
            )));
        }
        Ok(NormExponent::Finite(p))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, NormExponent::Infinity)
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            NormExponent::Finite(p) => Some(*p),
            NormExponent::Infinity => None,
        }
    }
}

impl std::str::FromStr for NormExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "inf" {
            return Ok(NormExponent::Infinity);
        }
        let p: f64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("norm exponent must be a number or \"inf\", got {s:?}")))?;
        NormExponent::new(p)
    }
}

impl std::fmt::Display for NormExponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormExponent::Finite(p) => write!(f, "{p}"),
            NormExponent::Infinity => write!(f, "inf"),
        }
    }
}

/// The weight families the operator's boundedness theory uses.
///
/// For finite p the operator maps ℓ^p(input weight) into ℓ^p(output
/// weight); for the sup norm it maps the `InputSup`-weighted bounded
/// sequences into the `OutputSup`-weighted ones. `Power` carries the
/// Dirichlet-type coefficient weight (n+1)^s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    /// w(m) = (m+1)_α^{−p} (m+1)_β.
    Input { params: OperatorParams, p: f64 },
    /// w(m) = (m+β−α+1)_α^{−p} (m+1)_β.
    Output { params: OperatorParams, p: f64 },
    /// w(m) = (m+1)_α^{−1}.
    InputSup { params: OperatorParams },
    /// w(m) = (m+β−α+1)_α^{−1}.
    OutputSup { params: OperatorParams },
    /// w(m) = 1.
    Unit,
    /// w(m) = (m+1)^exponent.
    Power { exponent: f64 },
}

impl Weight {
    /// Evaluate the weight at index m. Strictly positive for every
    /// variant; assembled in log domain so large indices cannot overflow
    /// intermediate Pochhammer factors.
    pub fn value(&self, m: u64) -> f64 {
        let mf = m as f64;
        match self {
            Weight::Input { params, p } => {
                let lp_alpha = log_pochhammer_shifted(mf, params.alpha())
                    .expect("admissible params keep arguments in domain");
                let lp_beta = log_pochhammer_shifted(mf, params.beta())
                    .expect("admissible params keep arguments in domain");
                (-p * lp_alpha + lp_beta).exp()
            }
            Weight::Output { params, p } => {
                let lp_alpha = log_pochhammer_shifted(mf + params.beta_minus_alpha(), params.alpha())
                    .expect("admissible params keep arguments in domain");
                let lp_beta = log_pochhammer_shifted(mf, params.beta())
                    .expect("admissible params keep arguments in domain");
                (-p * lp_alpha + lp_beta).exp()
            }
            Weight::InputSup { params } => {
                let lp = log_pochhammer_shifted(mf, params.alpha())
                    .expect("admissible params keep arguments in domain");
                (-lp).exp()
            }
            Weight::OutputSup { params } => {
                let lp = log_pochhammer_shifted(mf + params.beta_minus_alpha(), params.alpha())
                    .expect("admissible params keep arguments in domain");
                (-lp).exp()
            }
            Weight::Unit => 1.0,
            Weight::Power { exponent } => (mf + 1.0).powf(*exponent),
        }
    }
}

/// A finite coefficient vector together with the weight and norm exponent
/// that turn it into an element of a weighted sequence space.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSequence {
    values: Vec<f64>,
    weight: Weight,
    p: NormExponent,
}

impl WeightedSequence {
    pub fn new(values: Vec<f64>, weight: Weight, p: NormExponent) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("sequence must have length >= 1".into()));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "sequence value at index {bad} is not finite"
            )));
        }
        Ok(Self { values, weight, p })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn exponent(&self) -> NormExponent {
        self.p
    }

    /// The weighted norm: (Σ w(n)|a_n|^p)^{1/p} for finite p, and
    /// sup_n w(n)|a_n| for the infinity tag. Ascending compensated
    /// summation keeps results reproducible at the 1e-12 level.
    pub fn norm(&self) -> f64 {
        match self.p {
            NormExponent::Finite(p) => {
                let mut acc = Kahan::new();
                for (n, &a) in self.values.iter().enumerate() {
                    acc.add(self.weight.value(n as u64) * a.abs().powf(p));
                }
                acc.value().powf(1.0 / p)
            }
            NormExponent::Infinity => {
                let mut best = 0.0_f64;
                for (n, &a) in self.values.iter().enumerate() {
                    best = best.max(self.weight.value(n as u64) * a.abs());
                }
                best
            }
        }
    }
}

/// First M terms of the finite-p extremal sequence
/// a_m = (m+1)_α (m+1)_β^{−1/p} (m+β+1)^{−(1/p+ε)}.
///
/// Requires 0 < ε < (β+1)/p; outside that window the weighted norm either
/// diverges or the lower-bound argument degenerates.
pub fn extremal_sequence_lp(
    params: &OperatorParams,
    p: f64,
    epsilon: f64,
    len: usize,
) -> Result<Vec<f64>> {
    validate_extremal_window(params.beta(), p, epsilon)?;
    let mut out = Vec::with_capacity(len);
    for m in 0..len as u64 {
        out.push(extremal_lp_term(params, p, epsilon, m));
    }
    Ok(out)
}

/// A single term of the finite-p extremal sequence, in log domain.
pub(crate) fn extremal_lp_term(params: &OperatorParams, p: f64, epsilon: f64, m: u64) -> f64 {
    let mf = m as f64;
    let lp_alpha =
        log_pochhammer_shifted(mf, params.alpha()).expect("admissible params keep arguments in domain");
    let lp_beta =
        log_pochhammer_shifted(mf, params.beta()).expect("admissible params keep arguments in domain");
    let log_term = lp_alpha - lp_beta / p - (1.0 / p + epsilon) * (mf + params.beta() + 1.0).ln();
    log_term.exp()
}

pub(crate) fn validate_extremal_window(beta: f64, p: f64, epsilon: f64) -> Result<()> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::Domain(format!("p must satisfy p >= 1, got {p}")));
    }
    let upper = (beta + 1.0) / p;
    if !(epsilon > 0.0 && epsilon < upper) {
        return Err(Error::Domain(format!(
            "epsilon must lie in (0, (beta+1)/p) = (0, {upper}), got {epsilon}"
        )));
    }
    Ok(())
}

/// First M terms of the sup-norm extremal sequence a_m = (m+1)_α.
pub fn extremal_sequence_inf(params: &OperatorParams, len: usize) -> Vec<f64> {
    (0..len as u64)
        .map(|m| pochhammer_shifted(m as f64, params.alpha()).expect("m >= 0 and alpha > -1"))
        .collect()
}

/// The n-th term (n+β+1)^{−1−pε} of the power-decay comparison sequence;
/// the weighted p-th power of the extremal sequence telescopes to exactly
/// this value, which is what makes its tail mass analyzable.
pub fn power_decay_term(beta: f64, p: f64, epsilon: f64, n: u64) -> Result<f64> {
    validate_extremal_window(beta, p, epsilon)?;
    Ok((n as f64 + beta + 1.0).powf(-1.0 - p * epsilon))
}

/// Certified enclosure of the full (infinite) weighted norm of the
/// finite-p extremal sequence: its weighted p-th power telescopes to
/// Σ_{m≥0} (m+β+1)^{−1−pε}, summed here with a certified integral tail.
pub fn extremal_lp_norm(
    params: &OperatorParams,
    p: f64,
    epsilon: f64,
    rel_tol: f64,
) -> Result<Interval> {
    validate_extremal_window(params.beta(), p, epsilon)?;
    let series = certified_power_series(1.0 + p * epsilon, params.beta() + 1.0, rel_tol, 1 << 26)?;
    Ok(series.powf_monotone(1.0 / p))
}

/// The coefficient norm (Σ (n+1)^{1−λ} |a_n|²)^{1/2} of the
/// Dirichlet-type space scale: λ=1 is the Hardy-space norm, λ=0 the
/// classical Dirichlet norm.
pub fn dirichlet_norm(coeffs: &[f64], lambda: f64) -> Result<f64> {
    let seq = WeightedSequence::new(
        coeffs.to_vec(),
        Weight::Power {
            exponent: 1.0 - lambda,
        },
        NormExponent::Finite(2.0),
    )?;
    Ok(seq.norm())
}

/// Extremes of the ratio (n+1)_s / (n+1)^s over n ∈ [0, N]: numerical
/// witness that the shifted Pochhammer weight and the plain power weight
/// generate the same space (two-sided comparability).
pub fn weight_equivalence_check(s: f64, n_cap: u64) -> Result<(f64, f64)> {
    if !s.is_finite() || s <= -1.0 {
        return Err(Error::Domain(format!("s must be > -1, got {s}")));
    }
    if n_cap < 1 {
        return Err(Error::Domain("N must be >= 1".into()));
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for n in 0..=n_cap {
        let nf = n as f64;
        let log_ratio =
            log_pochhammer_shifted(nf, s).expect("s > -1 and n >= 0") - s * (nf + 1.0).ln();
        let ratio = log_ratio.exp();
        min = min.min(ratio);
        max = max.max(ratio);
    }
    Ok((min, max))
}

/// Named ways to produce input sequences without a coefficient file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    /// The finite-p extremal family; needs the target exponent and ε.
    ExtremalLp { p: f64, epsilon: f64 },
    /// The sup-norm extremal family (m+1)_α.
    ExtremalInf,
    /// The standard basis vector e_k.
    UnitBasis { index: u64 },
}

impl Generator {
    pub fn validate(&self, params: &OperatorParams) -> Result<()> {
        match self {
            Generator::ExtremalLp { p, epsilon } => {
                validate_extremal_window(params.beta(), *p, *epsilon)
            }
            Generator::ExtremalInf | Generator::UnitBasis { .. } => Ok(()),
        }
    }

    /// The m-th term of the generated sequence.
    pub fn term(&self, params: &OperatorParams, m: u64) -> f64 {
        match self {
            Generator::ExtremalLp { p, epsilon } => extremal_lp_term(params, *p, *epsilon, m),
            Generator::ExtremalInf => {
                pochhammer_shifted(m as f64, params.alpha()).expect("m >= 0 and alpha > -1")
            }
            Generator::UnitBasis { index } => {
                if m == *index {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}
