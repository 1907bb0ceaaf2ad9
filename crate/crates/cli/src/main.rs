//! `rmx`: exact verification of fused R-matrices for quantum so(n) and sp(n).
//!
//! Exit codes: 0 when no check fails, 1 when a check fails, 2 on a usage
//! error, 3 when no admissible point can be found or the point degenerates.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rmx_core::arith::{Backend, EvalPoint, Field, PrimeField, RationalField, Series};
use rmx_core::formulas::{universal_params_for, EntryValue, FormulaCatalog};
use rmx_core::fusion::Normalization;
use rmx_core::report::{Verdict, VerificationReport};
use rmx_core::run::{self, FuseChecks, FuseOptions, RunError, SpectrumOptions};
use rmx_core::spectral::CompareSet;

#[derive(Debug, Parser)]
#[command(name = "rmx", version, about = "Exact checks of fused trigonometric R-matrices for so(n) and sp(n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Relations of the braid generator on the vector representation.
    VerifyRep {
        #[command(flatten)]
        common: Common,
        /// Number of sampled points.
        #[arg(long, default_value_t = 8)]
        points: usize,
    },
    /// Yang-Baxter equation, unitarity, idempotent and reduced-word checks for the fused operator.
    FuseCheck {
        #[command(flatten)]
        common: Common,
        /// Comma-separated subset of ybe,unitarity,idempotent,matsumoto.
        #[arg(long, default_value = "ybe,unitarity,idempotent,matsumoto")]
        checks: FuseChecks,
        /// Random probe vectors per check.
        #[arg(long, default_value_t = 5)]
        probes: usize,
        /// Spectral-parameter samples.
        #[arg(long, default_value_t = 3)]
        pairs: usize,
        /// Scalar normalization of the fused operator used by the unitarity check.
        #[arg(long, default_value_t = Normalization::Printed)]
        normalization: Normalization,
        /// Corrupt every selected check; the run must then fail.
        #[arg(long)]
        negative_control: bool,
    },
    /// Centralizer blocks of the fused space and the spectrum of the fused operator.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        points: usize,
        /// Comma-separated subset of table,prop1,prop2,universal.
        #[arg(long, default_value = "table,prop1,prop2,universal")]
        compare: CompareSet,
        /// Random points per universal-formula identity test.
        #[arg(long, default_value_t = 8)]
        trials: usize,
    },
    /// Evaluates a catalog formula at one point.
    Formula(FormulaArgs),
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    series: Series,
    #[arg(long)]
    n: u32,
    /// `prime:<p>`, `prime` for 2^61-1, or `rational`.
    #[arg(long, default_value = "prime")]
    field: Backend,
    #[arg(long, env = "RMX_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock time per check; the report is then no longer reproducible.
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, Args)]
struct FormulaArgs {
    #[arg(long)]
    name: String,
    #[arg(long)]
    series: Series,
    #[arg(long)]
    n: u32,
    /// `q`; must be a perfect square in the chosen field.
    #[arg(long, required_unless_present = "qh", allow_hyphen_values = true)]
    q: Option<String>,
    /// `q^{1/2}`; overrides `--q`.
    #[arg(long, allow_hyphen_values = true)]
    qh: Option<String>,
    /// `u`; must be a perfect square in the chosen field.
    #[arg(long, required_unless_present = "uh", allow_hyphen_values = true)]
    u: Option<String>,
    /// `u^{1/2}`; overrides `--u`.
    #[arg(long, allow_hyphen_values = true)]
    uh: Option<String>,
    #[arg(long, default_value = "rational")]
    field: Backend,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("rmx: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<u8, RunError> {
    match command {
        Command::VerifyRep { common, points } => {
            let report = match common.field {
                Backend::Prime { p } => {
                    run::verify_rep(&prime(p)?, common.series, common.n, points, common.seed, common.timings)?
                }
                Backend::Rational => {
                    run::verify_rep(&RationalField, common.series, common.n, points, common.seed, common.timings)?
                }
            };
            emit(&report, common.out.as_ref())
        }
        Command::FuseCheck { common, checks, probes, pairs, normalization, negative_control } => {
            let opts = FuseOptions { checks, probes, pairs, normalization, negative_control, timings: common.timings };
            let report = match common.field {
                Backend::Prime { p } => run::fuse_check(&prime(p)?, common.series, common.n, common.seed, &opts)?,
                Backend::Rational => run::fuse_check(&RationalField, common.series, common.n, common.seed, &opts)?,
            };
            emit(&report, common.out.as_ref())
        }
        Command::Spectrum { common, points, compare, trials } => {
            let Backend::Prime { p } = common.field else {
                return Err(RunError::Usage("spectrum needs a prime field".into()));
            };
            let opts = SpectrumOptions { points, compare, trials, timings: common.timings };
            let report = run::spectrum(&prime(p)?, common.series, common.n, common.seed, &opts)?;
            emit(&report, common.out.as_ref())
        }
        Command::Formula(args) => formula(&args),
    }
}

fn prime(p: u64) -> Result<PrimeField, RunError> {
    Ok(PrimeField::new(p)?)
}

fn emit(report: &VerificationReport, out: Option<&PathBuf>) -> Result<u8, RunError> {
    let text = report.to_json();
    match out {
        Some(path) => fs::write(path, text + "\n")
            .map_err(|e| RunError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    eprintln!(
        "{} checks: {} PASS, {} FAIL, {} DISCREPANCY, {} DERIVED",
        report.checks.len(),
        report.count(Verdict::Pass),
        report.count(Verdict::Fail),
        report.count(Verdict::Discrepancy),
        report.count(Verdict::Derived),
    );
    Ok(u8::from(report.has_failures()))
}

fn formula(args: &FormulaArgs) -> Result<u8, RunError> {
    run::validate_family(args.series, args.n)?;
    let entry = FormulaCatalog::standard().entry(&args.name)?;
    if let EntryValue::IntMatrix(rows) = &entry.value {
        println!("{}", serde_json::to_string(rows).expect("matrix serializes"));
        return Ok(0);
    }
    let value = match args.field {
        Backend::Rational => {
            let f = RationalField;
            let half = |full: &Option<String>, half: &Option<String>, name: &str| -> Result<_, RunError> {
                if let Some(h) = half {
                    return Ok(f.parse(h)?);
                }
                let x = f.parse(full.as_deref().unwrap_or_default())?;
                f.sqrt(&x).ok_or_else(|| {
                    RunError::Usage(format!("{name} = {} is not a rational square; pass --{name}h", f.render(&x)))
                })
            };
            evaluate(&f, args, half(&args.q, &args.qh, "q")?, half(&args.u, &args.uh, "u")?)?
        }
        Backend::Prime { p } => {
            let f = prime(p)?;
            let half = |full: &Option<String>, half: &Option<String>, name: &str| -> Result<_, RunError> {
                if let Some(h) = half {
                    return Ok(f.parse(h)?);
                }
                let x = f.parse(full.as_deref().unwrap_or_default())?;
                // the smaller of the two roots
                let r = f.sqrt(x).ok_or_else(|| RunError::Usage(format!("{name} is not a square mod {p}; pass --{name}h")))?;
                Ok(r.min(f.neg(&r)))
            };
            evaluate(&f, args, half(&args.q, &args.qh, "q")?, half(&args.u, &args.uh, "u")?)?
        }
    };
    println!("{value}");
    Ok(0)
}

fn evaluate<F: Field>(f: &F, args: &FormulaArgs, qh: F::Elem, uh: F::Elem) -> Result<String, RunError> {
    let point = EvalPoint::new(f.clone(), args.series, args.n, qh, uh)?;
    let entry = FormulaCatalog::standard().get(&args.name)?;
    let params = if entry.is_universal() { Some(universal_params_for(args.series, args.n)?) } else { None };
    let value = entry.eval(&point, params.as_ref())?;
    Ok(f.render(&value))
}
