//! Command-line front end. Exit codes: 0 ok, 1 verification failure,
//! 2 usage or validation error, 3 I/O error.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::circuit::{derive, regime_check, tau_to_seconds, CircuitParams};
use crate::error::{Error, Result};
use crate::experiments::{averaged_with_convergence, ground_point, sweep, Axis, SweepSpec, MIN_AVERAGE_GRID};
use crate::measures::EntanglementReport;
use crate::oracle::{HilbertOracle, ProductPreparation};
use crate::report::{coefficient_fields, density_fields, prep_scan_csv, report_fields, sweep_csv, sweep_json, to_text};
use crate::spectrum::{SqueezedSpectrum, DEFAULT_EPSILON_TAIL};
use crate::verify::{Verifier, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "squid-transfer", version, about = "Squeezed-field to charge-qubit entanglement transfer")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measures at a single (r, τ).
    Point(PointArgs),
    /// Measures over an (r, τ) grid.
    Sweep(SweepArgs),
    /// Qubit state averaged over all product preparations.
    Average(AverageArgs),
    /// E_NPT over the (α, β) preparation grid.
    PrepScan(PrepScanArgs),
    /// Derived circuit quantities and regime checks.
    Circuit(CircuitArgs),
    /// Run every end-to-end check.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Truncation threshold on the squeezed-state tail.
    #[arg(long, default_value_t = DEFAULT_EPSILON_TAIL)]
    pub epsilon_tail: f64,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PrepArgs {
    /// Polar angle of qubit 1 (0 is |−⟩).
    #[arg(long, default_value_t = 0.0, value_parser = parse_scalar)]
    pub alpha: f64,
    /// Polar angle of qubit 2.
    #[arg(long, default_value_t = 0.0, value_parser = parse_scalar)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0, value_parser = parse_scalar)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.0, value_parser = parse_scalar)]
    pub psi: f64,
}

impl PrepArgs {
    fn preparation(&self) -> Result<ProductPreparation> {
        ProductPreparation::new(self.alpha, self.beta, self.phi, self.psi)
    }
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, value_parser = parse_scalar)]
    pub r: f64,
    /// Dimensionless time Ωt; accepts a `pi` suffix, e.g. `1.5pi`.
    #[arg(long, value_parser = parse_scalar)]
    pub tau: f64,
    #[command(flatten)]
    pub prep: PrepArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// MIN:MAX:STEPS, inclusive.
    #[arg(long, default_value = "0:2:200", value_parser = parse_axis)]
    pub r_range: Axis,
    /// MIN:MAX:STEPS, inclusive.
    #[arg(long, default_value = "0:3pi:200", value_parser = parse_axis)]
    pub tau_range: Axis,
    #[command(flatten)]
    pub prep: PrepArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads; output does not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct AverageArgs {
    #[arg(long, value_parser = parse_scalar)]
    pub r: f64,
    #[arg(long, value_parser = parse_scalar)]
    pub tau: f64,
    /// Quadrature points per angle.
    #[arg(long, default_value_t = 64)]
    pub grid_n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PrepScanArgs {
    #[arg(long, value_parser = parse_scalar)]
    pub r: f64,
    #[arg(long, value_parser = parse_scalar)]
    pub tau: f64,
    /// Points per angle on [0, 2π], inclusive.
    #[arg(long, default_value_t = 33)]
    pub grid_n: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CircuitArgs {
    /// `key = value` circuit description; typical values when absent.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Operating temperature in kelvin.
    #[arg(long, default_value_t = 0.05)]
    pub temperature: f64,
    /// Convert this τ to seconds.
    #[arg(long, default_value = "1.5pi", value_parser = parse_scalar)]
    pub tau: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_EPSILON_TAIL)]
    pub epsilon_tail: f64,
}

/// A number, optionally followed by `pi` (`3pi`, `0.5pi`, `pi`).
pub fn parse_scalar(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let value = match s.strip_suffix("pi") {
        Some("") => PI,
        Some(head) => head.parse::<f64>().map_err(|e| format!("`{s}`: {e}"))? * PI,
        None => s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// `MIN:MAX:STEPS`.
pub fn parse_axis(s: &str) -> std::result::Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [min, max, steps] = parts.as_slice() else {
        return Err(format!("`{s}`: expected MIN:MAX:STEPS"));
    };
    let steps: usize = steps.trim().parse().map_err(|e| format!("`{s}`: steps: {e}"))?;
    Ok(Axis::new(parse_scalar(min)?, parse_scalar(max)?, steps))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn check_tail(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::Validation(format!("--epsilon-tail {eps} outside (0, 1)")))
    }
}

fn point(args: &PointArgs) -> Result<String> {
    check_tail(args.common.epsilon_tail)?;
    let prep = args.prep.preparation()?;
    let s = SqueezedSpectrum::build(args.r, args.common.epsilon_tail)?;
    if args.tau < 0.0 {
        return Err(Error::Domain(format!("tau must be >= 0, got {}", args.tau)));
    }
    let (coeffs, rho, method) = if prep.is_ground() {
        let (c, rho) = ground_point(&s, args.tau)?;
        (Some(c), rho, "closed_form")
    } else {
        (None, HilbertOracle::new(&s)?.evolve(&prep, args.tau)?, "oracle")
    };
    let report = EntanglementReport::of(&rho)?;
    let mut obj = Map::new();
    for (k, v) in [("r", args.r), ("tau", args.tau), ("alpha", prep.alpha), ("beta", prep.beta)] {
        obj.insert(k.into(), json!(v));
    }
    report_fields(&report, &mut obj);
    coefficient_fields(coeffs.as_ref(), &mut obj);
    obj.insert("method".into(), json!(method));
    obj.insert("n_max".into(), json!(s.n_max()));
    obj.insert("epsilon_tail".into(), json!(s.epsilon_tail()));
    obj.insert("code_version".into(), json!(crate::CODE_VERSION));
    Ok(to_text(&Value::Object(obj)))
}

fn run_sweep(args: &SweepArgs) -> Result<String> {
    let spec = SweepSpec {
        preparation: args.prep.preparation()?,
        epsilon_tail: args.common.epsilon_tail,
        ..SweepSpec::ground(args.r_range, args.tau_range)
    };
    let result = match args.threads {
        Some(0) => return Err(Error::Validation("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Validation(e.to_string()))?
            .install(|| sweep(&spec))?,
        None => sweep(&spec)?,
    };
    Ok(match args.format {
        Format::Csv => sweep_csv(&result),
        Format::Json => to_text(&sweep_json(&result)),
    })
}

fn average(args: &AverageArgs) -> Result<String> {
    if args.grid_n < MIN_AVERAGE_GRID {
        return Err(Error::Validation(format!("--grid-n must be at least {MIN_AVERAGE_GRID}, got {}", args.grid_n)));
    }
    let avg = averaged_with_convergence(args.r, args.tau, args.grid_n)?;
    let mut obj = Map::new();
    obj.insert("r".into(), json!(args.r));
    obj.insert("tau".into(), json!(args.tau));
    obj.insert("grid_n".into(), json!(args.grid_n));
    obj.insert("e_npt".into(), json!(avg.e_npt));
    obj.insert("convergence".into(), json!(avg.convergence));
    density_fields(&avg.rho, &mut obj);
    Ok(to_text(&Value::Object(obj)))
}

fn prep_scan(args: &PrepScanArgs) -> Result<String> {
    let rows = crate::experiments::preparation_scan(args.r, args.tau, args.grid_n, args.grid_n)?;
    Ok(match args.format {
        Format::Csv => prep_scan_csv(&rows),
        Format::Json => to_text(&json!(rows)),
    })
}

fn circuit(args: &CircuitArgs) -> Result<String> {
    let params = match &args.circuit {
        Some(path) => CircuitParams::load(path)?,
        None => CircuitParams::typical(),
    };
    if !(args.temperature.is_finite() && args.temperature >= 0.0) {
        return Err(Error::Domain(format!("temperature must be >= 0, got {}", args.temperature)));
    }
    let d = derive(&params)?;
    let mut obj = match serde_json::to_value(d).expect("derived params serialise") {
        Value::Object(m) => m,
        _ => unreachable!("struct serialises to an object"),
    };
    obj.insert("degeneracy_offset".into(), json!(params.degeneracy_offset()));
    obj.insert("temperature".into(), json!(args.temperature));
    obj.insert("tau".into(), json!(args.tau));
    obj.insert("t_seconds".into(), json!(tau_to_seconds(args.tau, &d)));
    let checks = regime_check(&d, args.temperature);
    obj.insert("regime_ok".into(), json!(checks.iter().all(|c| c.passed)));
    for c in checks {
        obj.insert(format!("{}_ratio", c.name), json!(c.ratio));
        obj.insert(format!("{}_threshold", c.name), json!(c.threshold));
        obj.insert(format!("{}_passed", c.name), json!(c.passed));
    }
    Ok(to_text(&Value::Object(obj)))
}

fn verify(args: &VerifyArgs) -> Result<(bool, String)> {
    check_tail(args.epsilon_tail)?;
    let cfg = VerifyConfig { epsilon_tail: args.epsilon_tail, ..VerifyConfig::default() };
    let outcomes = Verifier::new(cfg).run_all();
    let mut text = String::new();
    for o in &outcomes {
        text.push_str(&o.line());
        text.push('\n');
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    text.push_str(&format!("{passed}/{} checks passed\n", outcomes.len()));
    Ok((passed == outcomes.len(), text))
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Point(a) => point(a).and_then(|t| emit(a.common.out.as_deref(), &t)).map(|_| EXIT_OK),
        Command::Sweep(a) => run_sweep(a).and_then(|t| emit(a.common.out.as_deref(), &t)).map(|_| EXIT_OK),
        Command::Average(a) => average(a).and_then(|t| emit(a.out.as_deref(), &t)).map(|_| EXIT_OK),
        Command::PrepScan(a) => prep_scan(a).and_then(|t| emit(a.out.as_deref(), &t)).map(|_| EXIT_OK),
        Command::Circuit(a) => circuit(a).and_then(|t| emit(a.out.as_deref(), &t)).map(|_| EXIT_OK),
        Command::Verify(a) => verify(a).and_then(|(ok, t)| {
            emit(None, &t)?;
            Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
        }),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })
}

/// Parses `args` and runs; clap errors map to the usage exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_accept_pi_suffix() {
        assert_eq!(parse_scalar("pi").unwrap(), PI);
        assert_eq!(parse_scalar("1.5pi").unwrap(), 1.5 * PI);
        assert_eq!(parse_scalar("0.25").unwrap(), 0.25);
        assert!(parse_scalar("abc").is_err());
        assert!(parse_scalar("inf").is_err());
    }

    #[test]
    fn axes_parse() {
        let a = parse_axis("0:3pi:200").unwrap();
        assert_eq!((a.min, a.max, a.steps), (0.0, 3.0 * PI, 200));
        assert!(parse_axis("0:1").is_err());
        assert!(parse_axis("0:1:x").is_err());
    }
}
