//! Positive finite Borel measures on (0, 1): interior atoms plus
//! Beta-family densities, with closed-form moments, the norm-constant
//! integrals, explicit divergence classification, and a JSON wire format.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, Kahan, FLOAT_DRIFT_GUARD};
use crate::quad::{certified_beta_window, power_endpoint_integral};
use crate::special::log_beta;

/// A point mass at an interior point of (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    pub t: f64,
    pub mass: f64,
}

/// An absolutely continuous component coef · t^{a−1} (1−t)^{b−1} dt.
///
/// Unnormalized: its total mass is coef · B(a, b). Lebesgue measure is
/// (coef, a, b) = (1, 1, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaComponent {
    pub coef: f64,
    pub a: f64,
    pub b: f64,
}

/// Which endpoint(s) of (0, 1) make an integral diverge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    AtZero,
    AtOne,
    Both,
}

impl std::fmt::Display for Endpoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Endpoint::AtZero => write!(f, "at_zero"),
            Endpoint::AtOne => write!(f, "at_one"),
            Endpoint::Both => write!(f, "both"),
        }
    }
}

/// Outcome of a possibly divergent integral: divergence is a value, not an
/// error, and it is classified analytically from exponents, never inferred
/// from quadrature behavior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegralResult {
    Finite(f64),
    Divergent(Endpoint),
}

impl IntegralResult {
    pub fn is_finite(&self) -> bool {
        matches!(self, IntegralResult::Finite(_))
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            IntegralResult::Finite(v) => Some(*v),
            IntegralResult::Divergent(_) => None,
        }
    }
}

impl std::fmt::Display for IntegralResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IntegralResult::Finite(v) => write!(f, "Finite {v}"),
            IntegralResult::Divergent(e) => write!(f, "Divergent {e}"),
        }
    }
}

/// A positive finite Borel measure on (0, 1): atoms plus Beta densities.
///
/// Always valid after construction; canonical component order (atoms by t,
/// densities by (a, b, coef)) is maintained internally so serialization is
/// deterministic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measure {
    atoms: Vec<Atom>,
    densities: Vec<BetaComponent>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureSchema {
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default)]
    densities: Vec<BetaComponent>,
}

impl Measure {
    /// Validate and canonicalize a component list into a measure.
    pub fn new(atoms: Vec<Atom>, densities: Vec<BetaComponent>) -> Result<Self> {
        if atoms.is_empty() && densities.is_empty() {
            return Err(Error::Validation {
                path: "measure".into(),
                message: "at least one atom or density component is required".into(),
            });
        }
        for (i, atom) in atoms.iter().enumerate() {
            if !atom.t.is_finite() || atom.t <= 0.0 || atom.t >= 1.0 {
                return Err(Error::Validation {
                    path: format!("atoms[{i}].t"),
                    message: format!("t must lie strictly inside (0, 1), got {}", atom.t),
                });
            }
            if !atom.mass.is_finite() || atom.mass <= 0.0 {
                return Err(Error::Validation {
                    path: format!("atoms[{i}].mass"),
                    message: format!("mass must be > 0, got {}", atom.mass),
                });
            }
        }
        for (i, d) in densities.iter().enumerate() {
            for (field, value) in [("coef", d.coef), ("a", d.a), ("b", d.b)] {
                if !value.is_finite() || value <= 0.0 {
                    return Err(Error::Validation {
                        path: format!("densities[{i}].{field}"),
                        message: format!("{field} must be > 0, got {value}"),
                    });
                }
            }
        }
        let mut atoms = atoms;
        let mut densities = densities;
        atoms.sort_by(|x, y| x.t.total_cmp(&y.t));
        densities.sort_by(|x, y| {
            x.a.total_cmp(&y.a)
                .then(x.b.total_cmp(&y.b))
                .then(x.coef.total_cmp(&y.coef))
        });
        Ok(Self { atoms, densities })
    }

    /// Lebesgue measure dt on (0, 1).
    pub fn lebesgue() -> Self {
        Self {
            atoms: Vec::new(),
            densities: vec![BetaComponent {
                coef: 1.0,
                a: 1.0,
                b: 1.0,
            }],
        }
    }

    /// A single point mass.
    pub fn single_atom(t: f64, mass: f64) -> Result<Self> {
        Self::new(vec![Atom { t, mass }], Vec::new())
    }

    /// Parse a measure from one of the CLI spellings: the alias
    /// `lebesgue`, the alias `atom:<t>:<mass>`, or inline JSON in the
    /// wire schema.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let trimmed = spec.trim();
        if trimmed == "lebesgue" {
            return Ok(Self::lebesgue());
        }
        if let Some(rest) = trimmed.strip_prefix("atom:") {
            let mut parts = rest.split(':');
            let t = parts
                .next()
                .ok_or_else(|| Error::Parse("atom alias needs atom:<t>:<mass>".into()))?;
            let mass = parts
                .next()
                .ok_or_else(|| Error::Parse("atom alias needs atom:<t>:<mass>".into()))?;
            if parts.next().is_some() {
                return Err(Error::Parse(format!(
                    "atom alias has too many fields: {trimmed}"
                )));
            }
            let t: f64 = t
                .parse()
                .map_err(|_| Error::Parse(format!("atom position is not a number: {t}")))?;
            let mass: f64 = mass
                .parse()
                .map_err(|_| Error::Parse(format!("atom mass is not a number: {mass}")))?;
            return Self::single_atom(t, mass);
        }
        if trimmed.starts_with('{') {
            return parse_measure(trimmed);
        }
        Err(Error::Parse(format!(
            "unrecognized measure spec {trimmed:?}; expected `lebesgue`, `atom:<t>:<mass>`, or inline JSON"
        )))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn densities(&self) -> &[BetaComponent] {
        &self.densities
    }

    /// Total mass Σ mass_i + Σ coef_j · B(a_j, b_j).
    pub fn total_mass(&self) -> f64 {
        let mut acc = Kahan::new();
        for atom in &self.atoms {
            acc.add(atom.mass);
        }
        for d in &self.densities {
            acc.add(d.coef * log_beta(d.a, d.b).expect("validated positive").exp());
        }
        acc.value()
    }

    /// The moment ∫ t^m (1−t)^n dμ(t): exact atom powers plus closed-form
    /// Beta values, each assembled in log domain.
    pub fn moment(&self, m: u64, n: u64) -> f64 {
        let mut acc = Kahan::new();
        let (mf, nf) = (m as f64, n as f64);
        for atom in &self.atoms {
            acc.add(atom.mass * (mf * atom.t.ln() + nf * (1.0 - atom.t).ln()).exp());
        }
        for d in &self.densities {
            let lb = log_beta(mf + d.a, nf + d.b).expect("validated positive");
            acc.add(d.coef * lb.exp());
        }
        acc.value()
    }

    /// ∫ t^{−u} (1−t)^{−v} dμ(t) with analytic divergence classification:
    /// a density contributes finitely iff a − u > 0 and b − v > 0 (the
    /// exact threshold a − u = 0 diverges); atoms always contribute.
    pub fn power_integral(&self, u: f64, v: f64) -> IntegralResult {
        let mut at_zero = false;
        let mut at_one = false;
        for d in &self.densities {
            if d.a - u <= 0.0 {
                at_zero = true;
            }
            if d.b - v <= 0.0 {
                at_one = true;
            }
        }
        match (at_zero, at_one) {
            (true, true) => return IntegralResult::Divergent(Endpoint::Both),
            (true, false) => return IntegralResult::Divergent(Endpoint::AtZero),
            (false, true) => return IntegralResult::Divergent(Endpoint::AtOne),
            (false, false) => {}
        }
        let mut acc = Kahan::new();
        for atom in &self.atoms {
            acc.add(atom.mass * (-u * atom.t.ln() - v * (1.0 - atom.t).ln()).exp());
        }
        for d in &self.densities {
            let lb = log_beta(d.a - u, d.b - v).expect("positivity checked above");
            acc.add(d.coef * lb.exp());
        }
        IntegralResult::Finite(acc.value())
    }

    /// The norm constant for finite p:
    /// ∫ (1−t)^{−(1−1/p)(β+1)} t^{−(β+1)/p} dμ(t).
    pub fn c_constant(&self, beta: f64, p: f64) -> Result<IntegralResult> {
        if !beta.is_finite() || beta <= -1.0 {
            return Err(Error::Domain(format!("beta must be > -1, got {beta}")));
        }
        if !p.is_finite() || p < 1.0 {
            return Err(Error::Domain(format!("p must satisfy p >= 1, got {p}")));
        }
        let u = (beta + 1.0) / p;
        let v = (1.0 - 1.0 / p) * (beta + 1.0);
        Ok(self.power_integral(u, v))
    }

    /// The sup-norm constant ∫ (1−t)^{−β−1} dμ(t).
    pub fn c_constant_inf(&self, beta: f64) -> Result<IntegralResult> {
        if !beta.is_finite() || beta <= -1.0 {
            return Err(Error::Domain(format!("beta must be > -1, got {beta}")));
        }
        Ok(self.power_integral(0.0, beta + 1.0))
    }

    /// Independent quadrature of the density part of ∫ t^{−u}(1−t)^{−v} dμ,
    /// with endpoint-singularity substitutions; cross-checks the closed-form
    /// path. Requires the integral to be classified Finite first.
    pub fn quad_check(&self, u: f64, v: f64, tol: f64) -> Result<f64> {
        if !self.power_integral(u, v).is_finite() {
            return Err(Error::Domain(
                "quadrature cross-check requires a finite integral; this one diverges".into(),
            ));
        }
        let mut acc = Kahan::new();
        for d in &self.densities {
            let (value, _err) =
                power_endpoint_integral(d.a - 1.0 - u, d.b - 1.0 - v, 0.0, 1.0, tol, 4_000_000)?;
            acc.add(d.coef * value);
        }
        Ok(acc.value())
    }

    /// Quadrature of the density part over the clipped range [δ, 1−δ];
    /// always finite, used to exhibit divergence growth as δ shrinks.
    pub fn clipped_density_integral(&self, u: f64, v: f64, delta: f64, tol: f64) -> Result<f64> {
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::Domain(format!(
                "clip width must lie in (0, 0.5), got {delta}"
            )));
        }
        let mut acc = Kahan::new();
        for d in &self.densities {
            let (value, _err) = power_endpoint_integral(
                d.a - 1.0 - u,
                d.b - 1.0 - v,
                delta,
                1.0 - delta,
                tol,
                4_000_000,
            )?;
            acc.add(d.coef * value);
        }
        Ok(acc.value())
    }

    /// Certified enclosure of ∫_{[lo, hi]} t^{x_t} (1−t)^{x_omt} dμ(t) over
    /// a strict interior window: atoms inside the window contribute exactly,
    /// densities through monotone-panel Riemann brackets.
    pub fn window_power_integral(
        &self,
        x_t: f64,
        x_omt: f64,
        lo: f64,
        hi: f64,
        rel_tol: f64,
    ) -> Result<Interval> {
        if !(lo > 0.0 && hi < 1.0 && lo < hi) {
            return Err(Error::Domain(format!(
                "window [{lo}, {hi}] must be strictly interior to (0, 1)"
            )));
        }
        let mut total = Interval::point(0.0);
        for atom in &self.atoms {
            if atom.t >= lo && atom.t <= hi {
                let value = atom.mass * (x_t * atom.t.ln() + x_omt * (1.0 - atom.t).ln()).exp();
                total = total.add(Interval::point(value).inflate_relative(FLOAT_DRIFT_GUARD));
            }
        }
        for d in &self.densities {
            let piece = certified_beta_window(d.a + x_t, d.b + x_omt, lo, hi, rel_tol, 1 << 24)?;
            total = total.add(piece.scale(d.coef).inflate_relative(FLOAT_DRIFT_GUARD));
        }
        Ok(total)
    }
}

/// Parse the JSON wire format (see the README for the schema), validating
/// every field and reporting the path of the first violation.
pub fn parse_measure(text: &str) -> Result<Measure> {
    let schema: MeasureSchema = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!(
            "measure JSON invalid at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    Measure::new(schema.atoms, schema.densities)
}

/// Serialize to the canonical wire form: atoms sorted by t, densities by
/// (a, b, coef), compact JSON.
pub fn serialize_measure(measure: &Measure) -> String {
    serde_json::to_string(measure).expect("measure serialization cannot fail")
}
