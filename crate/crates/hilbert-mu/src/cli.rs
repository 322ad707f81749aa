//! Command-line front end.
//!
//! Exit codes are part of the interface: 0 for success, 1 for usage or
//! computation errors, 2 when the requested constant is divergent, 3 when
//! a self-check fails. All CSV numbers are printed with `{:.16e}` so
//! repeated runs are byte-identical.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::measure::{serialize_measure, Measure};
use crate::operator::{
    apply, apply_tail_bounded, lower_bound_sweep, norm_report, two_norm_section, ReportConfig,
};
use crate::spaces::{Generator, NormExponent, Weight};
use crate::special::{kernel, kernel_alt_forms, OperatorParams};
use crate::verification::run_all;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DIVERGENT: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Parser)]
#[command(
    name = "hilbert-mu",
    version,
    about = "Weighted sequence-space operator induced by a measure on (0, 1)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the boundedness constant for the given beta and p.
    Constant(ConstantArgs),
    /// Print one kernel entry by its direct form and both product forms.
    Kernel(KernelArgs),
    /// Apply the operator to a finite sequence or a generated family.
    Apply(ApplyArgs),
    /// Full boundedness report: constant, lower bounds, sections, verdict.
    Report(ReportArgs),
    /// Run the library self-checks and print one CSV row per check.
    Verify(VerifyArgs),
    /// Sweep section two-norms and extremal lower bounds into CSV.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ParamArgs {
    /// Kernel shift alpha; admissibility needs alpha > -1 and beta - alpha > -1.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    /// Kernel shift beta; admissibility needs beta > -1.
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
}

impl ParamArgs {
    fn resolve(&self) -> Result<OperatorParams> {
        OperatorParams::new(self.alpha, self.beta)
    }
}

#[derive(Args)]
struct MeasureArgs {
    /// Measure: `lebesgue`, `atom:<t>:<mass>`, inline JSON, or a path to a JSON file.
    #[arg(long)]
    measure: Option<String>,
    /// Path to a JSON measure file.
    #[arg(long)]
    measure_file: Option<PathBuf>,
}

impl MeasureArgs {
    fn resolve(&self) -> Result<Measure> {
        match (&self.measure, &self.measure_file) {
            (Some(_), Some(_)) => Err(Error::Parse(
                "pass exactly one of --measure and --measure-file".into(),
            )),
            (None, None) => Err(Error::Parse(
                "a measure is required: pass --measure or --measure-file".into(),
            )),
            (Some(spec), None) => {
                let trimmed = spec.trim();
                if trimmed == "lebesgue"
                    || trimmed.starts_with("atom:")
                    || trimmed.starts_with('{')
                {
                    Measure::parse_spec(trimmed)
                } else {
                    read_measure_file(Path::new(trimmed))
                }
            }
            (None, Some(path)) => read_measure_file(path),
        }
    }
}

fn read_measure_file(path: &Path) -> Result<Measure> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::Parse(format!("cannot read measure file {}: {e}", path.display()))
    })?;
    crate::measure::parse_measure(&text)
}

#[derive(Args)]
struct ConstantArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Norm exponent: a number >= 1 or `inf`.
    #[arg(long)]
    p: NormExponent,
    #[command(flatten)]
    measure: MeasureArgs,
}

#[derive(Args)]
struct KernelArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Input (column) index.
    #[arg(long)]
    m: u64,
    /// Output (row) index.
    #[arg(long)]
    n: u64,
}

#[derive(Args)]
struct ApplyArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    measure: MeasureArgs,
    /// CSV file with one coefficient per line.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generated family: `extremal_lp`, `extremal_inf`, or `unit_basis:<k>`.
    #[arg(long)]
    generator: Option<String>,
    /// Norm exponent for `extremal_lp`.
    #[arg(long)]
    p: Option<NormExponent>,
    /// Decay offset for `extremal_lp` (0 < epsilon < (beta+1)/p).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Largest output index.
    #[arg(long, default_value_t = 31)]
    n_max: u64,
    /// Relative width target for certified output intervals.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    measure: MeasureArgs,
    /// Norm exponent: a number >= 1 or `inf`.
    #[arg(long)]
    p: NormExponent,
    /// Section sizes for the p = 2 two-norm curve.
    #[arg(long, value_delimiter = ',')]
    sections: Option<Vec<u64>>,
    /// Epsilon schedule for the extremal lower-bound sweep.
    #[arg(long, value_delimiter = ',')]
    epsilons: Option<Vec<f64>>,
    /// Truncation lengths for the extremal lower-bound sweep.
    #[arg(long, value_delimiter = ',')]
    truncations: Option<Vec<u64>>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only the checks whose name contains this substring.
    #[arg(long)]
    only: Option<String>,
    /// Tolerance override applied to every check.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    measure: MeasureArgs,
    /// Norm exponent (finite).
    #[arg(long)]
    p: NormExponent,
    /// Section sizes for the p = 2 two-norm curve.
    #[arg(long, value_delimiter = ',')]
    sections: Option<Vec<u64>>,
    /// Epsilon schedule for the extremal lower-bound sweep.
    #[arg(long, value_delimiter = ',')]
    epsilons: Option<Vec<f64>>,
    /// Truncation lengths for the extremal lower-bound sweep.
    #[arg(long, value_delimiter = ',')]
    truncations: Option<Vec<u64>>,
}

/// Parse arguments and run the selected command, returning the process
/// exit code. Help and version requests exit 0; malformed invocations
/// exit 1.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return EXIT_OK;
            }
            return EXIT_USAGE;
        }
    };
    let outcome = match cli.command {
        Command::Constant(args) => cmd_constant(args),
        Command::Kernel(args) => cmd_kernel(args),
        Command::Apply(args) => cmd_apply(args),
        Command::Report(args) => cmd_report(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Mirror a CSV payload into $HILBERT_MU_OUT_DIR/<name> when that
/// directory is configured.
fn mirror_csv(name: &str, content: &str) -> Result<()> {
    if let Some(dir) = std::env::var_os("HILBERT_MU_OUT_DIR") {
        let dir = PathBuf::from(dir);
        std::fs::create_dir_all(&dir)?;
        std::fs::write(dir.join(name), content)?;
    }
    Ok(())
}

fn cmd_constant(args: ConstantArgs) -> Result<i32> {
    let params = args.params.resolve()?;
    let measure = args.measure.resolve()?;
    let result = match args.p {
        NormExponent::Finite(p) => measure.c_constant(params.beta(), p)?,
        NormExponent::Infinity => measure.c_constant_inf(params.beta())?,
    };
    println!("{result}");
    Ok(if result.is_finite() {
        EXIT_OK
    } else {
        EXIT_DIVERGENT
    })
}

fn cmd_kernel(args: KernelArgs) -> Result<i32> {
    let params = args.params.resolve()?;
    let direct = kernel(args.m, args.n, &params)?;
    let (m_form, n_form) = kernel_alt_forms(args.m, args.n, &params)?;
    println!("direct {direct:.16e}");
    println!("m_form {m_form:.16e}");
    println!("n_form {n_form:.16e}");
    Ok(EXIT_OK)
}

fn read_sequence(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            Error::Parse(format!(
                "line {} of {} is not a number: {line:?}",
                i + 1,
                path.display()
            ))
        })?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::Parse(format!(
            "{} holds no coefficients",
            path.display()
        )));
    }
    Ok(out)
}

fn parse_generator(
    spec: &str,
    p: &Option<NormExponent>,
    epsilon: &Option<f64>,
) -> Result<Generator> {
    let s = spec.trim();
    if s == "extremal_lp" {
        let p = match p {
            Some(NormExponent::Finite(pv)) => *pv,
            Some(NormExponent::Infinity) => {
                return Err(Error::Parse(
                    "extremal_lp needs a finite --p; use extremal_inf for the sup norm".into(),
                ))
            }
            None => return Err(Error::Parse("extremal_lp needs --p".into())),
        };
        let epsilon = epsilon.ok_or_else(|| Error::Parse("extremal_lp needs --epsilon".into()))?;
        return Ok(Generator::ExtremalLp { p, epsilon });
    }
    if s == "extremal_inf" {
        return Ok(Generator::ExtremalInf);
    }
    if let Some(k) = s.strip_prefix("unit_basis:") {
        let index: u64 = k
            .parse()
            .map_err(|_| Error::Parse(format!("unit basis index is not an integer: {k:?}")))?;
        return Ok(Generator::UnitBasis { index });
    }
    Err(Error::Parse(format!(
        "unknown generator {s:?}; expected extremal_lp, extremal_inf, or unit_basis:<k>"
    )))
}

fn cmd_apply(args: ApplyArgs) -> Result<i32> {
    let params = args.params.resolve()?;
    let measure = args.measure.resolve()?;
    let csv = match (&args.input, &args.generator) {
        (Some(_), Some(_)) => {
            return Err(Error::Parse(
                "pass exactly one of --input and --generator".into(),
            ))
        }
        (None, None) => {
            return Err(Error::Parse(
                "an input is required: pass --input or --generator".into(),
            ))
        }
        (Some(path), None) => {
            let a = read_sequence(path)?;
            let out = apply(&params, &measure, &a, args.n_max)?;
            let mut csv = String::from("n,value\n");
            for (n, v) in out.iter().enumerate() {
                csv.push_str(&format!("{n},{v:.16e}\n"));
            }
            csv
        }
        (None, Some(spec)) => {
            let generator = parse_generator(spec, &args.p, &args.epsilon)?;
            let out = apply_tail_bounded(&params, &measure, generator, args.n_max, args.tol)?;
            let mut csv = String::from("n,lo,hi\n");
            for (n, iv) in out.iter().enumerate() {
                csv.push_str(&format!("{n},{:.16e},{:.16e}\n", iv.lo, iv.hi));
            }
            csv
        }
    };
    print!("{csv}");
    mirror_csv("apply.csv", &csv)?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let rows = run_all(args.tol, args.only.as_deref());
    if rows.is_empty() {
        return Err(Error::Parse(format!(
            "no check name contains {:?}",
            args.only.unwrap_or_default()
        )));
    }
    let mut csv = String::from("name,passed,worst_residual,samples\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{:.16e},{}\n",
            r.name, r.passed, r.worst_residual, r.samples
        ));
    }
    print!("{csv}");
    for r in rows.iter().filter(|r| !r.passed) {
        eprintln!("check {} failed at: {}", r.name, r.worst_input);
    }
    mirror_csv("verify.csv", &csv)?;
    Ok(if rows.iter().all(|r| r.passed) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn default_sections() -> Vec<u64> {
    ReportConfig::default().section_sizes
}

fn default_epsilons(beta: f64, p: f64) -> Vec<f64> {
    let cap = (beta + 1.0) / p;
    vec![0.3 * cap, 0.15 * cap, 0.06 * cap]
}

fn cmd_sweep(args: SweepArgs) -> Result<i32> {
    let params = args.params.resolve()?;
    let measure = args.measure.resolve()?;
    let p = match args.p {
        NormExponent::Finite(p) => p,
        NormExponent::Infinity => {
            return Err(Error::Domain(
                "sweep needs a finite norm exponent; use report for the sup norm".into(),
            ))
        }
    };
    let mut csv = String::from("kind,param,value\n");
    if p == 2.0 {
        let sections = args.sections.unwrap_or_else(default_sections);
        let w_in = Weight::Input { params, p };
        let w_out = Weight::Output { params, p };
        for &n in &sections {
            let v = two_norm_section(&params, &measure, (&w_in, &w_out), n as usize)?;
            csv.push_str(&format!("section,{n},{v:.16e}\n"));
        }
    }
    let epsilons = args
        .epsilons
        .unwrap_or_else(|| default_epsilons(params.beta(), p));
    let truncations = args.truncations.unwrap_or_else(|| vec![1024]);
    for sample in lower_bound_sweep(&params, &measure, p, &epsilons, &truncations)? {
        csv.push_str(&format!(
            "lower_bound,{:.16e},{:.16e}\n",
            sample.epsilon, sample.ratio
        ));
    }
    print!("{csv}");
    mirror_csv("sweep.csv", &csv)?;
    Ok(EXIT_OK)
}

fn cmd_report(args: ReportArgs) -> Result<i32> {
    let params = args.params.resolve()?;
    let measure = args.measure.resolve()?;
    let mut config = ReportConfig::default();
    if let Some(sections) = args.sections {
        config.section_sizes = sections;
    }
    if let Some(epsilons) = args.epsilons {
        config.epsilon_schedule = Some(epsilons);
    }
    if let Some(truncations) = args.truncations {
        config.truncation_schedule = truncations;
    }
    let report = norm_report(&params, &measure, args.p, &config)?;
    println!("operator: alpha={}, beta={}", params.alpha(), params.beta());
    println!("measure: {}", serialize_measure(&measure));
    println!("p: {}", args.p);
    println!("constant: {}", report.constant);
    println!("verdict: {}", report.verdict);
    let mut csv = String::from("kind,param,value\n");
    if let Some(curve) = &report.section_curve {
        for (n, v) in curve {
            csv.push_str(&format!("section,{n},{v:.16e}\n"));
        }
    }
    for sample in &report.lower_bounds {
        csv.push_str(&format!(
            "lower_bound,{:.16e},{:.16e}\n",
            sample.epsilon, sample.ratio
        ));
    }
    print!("{csv}");
    mirror_csv("report.csv", &csv)?;
    Ok(if report.constant.is_finite() {
        EXIT_OK
    } else {
        EXIT_DIVERGENT
    })
}
