//! Command-line front end over JSON files.
//!
//! Exit codes: 0 success, 1 negative membership verdict (`check` only),
//! 2 input error, 3 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::constructions::{
    embedded_witness, monomial_count, product_b_theta, rotation, shear_a_theta, zariski_density_witness, DensitySource,
};
use crate::error::Error;
use crate::functions::{expm, logm_principal, real_log_paired};
use crate::json::{parse_map, parse_matrix, to_json};
use crate::linalg::{determinant, eigenvalues, Matrix, Tolerances};
use crate::membership::{membership, SetKind};
use crate::preserver::{analyze, falsify_preservation, verify_theorem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "logpreserve", version, about = "Real logarithms of matrices and the linear maps that preserve them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SetArg {
    #[value(name = "K")]
    K,
    #[value(name = "Kstar")]
    KStar,
    #[value(name = "closure")]
    Closure,
}

impl From<SetArg> for SetKind {
    fn from(s: SetArg) -> Self {
        match s {
            SetArg::K => SetKind::K,
            SetArg::KStar => SetKind::KStar,
            SetArg::Closure => SetKind::Closure,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LogMode {
    Principal,
    Paired,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide membership of a matrix in K, K* or their closure.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "Kstar")]
        set: SetArg,
    },
    /// Real logarithm of a matrix.
    Logm {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "principal")]
        mode: LogMode,
    },
    /// Matrix exponential.
    Expm {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the standard form of a linear map or find a witness against it.
    AnalyzeMap {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Search for a matrix in the set whose image leaves it.
    Falsify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "Kstar")]
        set: SetArg,
        #[arg(long, default_value_t = crate::preserver::DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The shear and product gadgets at one angle.
    Gadgets {
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
    },
    /// Randomized check of both directions of the preserver characterization.
    VerifyTheorem {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Full-rank test of monomial evaluations on random elements of K.
    Density {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: usize,
        /// Defaults to twice the number of monomials.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A failed command: exit code and message for standard error.
#[derive(Debug)]
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ConvergenceFailure { .. }
            | Error::Overflow { .. }
            | Error::SingularMatrix { .. }
            | Error::InconsistentRankSequence { .. }
            | Error::SampleBudgetExceeded { .. }
            | Error::ToleranceFloor { .. }
            | Error::DegenerateRecovery
            | Error::NegativeAxisEigenvalue { .. }
            | Error::NotScalarImage { .. }
            | Error::NotAnEigenvalue { .. } => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        };
        Failure(code, e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))
}

fn write_matrix(path: &Path, m: &Matrix) -> Result<(), Failure> {
    fs::write(path, to_json(m) + "\n").map_err(|e| Failure(EXIT_INPUT, format!("cannot write {}: {e}", path.display())))
}

struct Output {
    body: String,
    code: i32,
}

fn ok<T: Serialize>(value: &T) -> Result<Output, Failure> {
    Ok(Output { body: to_json(value), code: EXIT_OK })
}

fn execute(command: Command, tol: &Tolerances) -> Result<Output, Failure> {
    match command {
        Command::Check { input, set } => {
            let a = parse_matrix(&read(&input)?)?;
            let set = SetKind::from(set);
            let v = membership(&a, set, tol)?;
            let code = if v.in_set { EXIT_OK } else { EXIT_VERDICT_FALSE };
            Ok(Output { body: to_json(&json!({ "set": set.to_string(), "in_set": v.in_set, "witness": v.witness })), code })
        }
        Command::Logm { input, out, mode } => {
            let a = parse_matrix(&read(&input)?)?;
            let r = match mode {
                LogMode::Principal => logm_principal(&a, tol)?,
                LogMode::Paired => real_log_paired(&a, tol)?,
            };
            match out {
                Some(path) => {
                    write_matrix(&path, &r.log_matrix)?;
                    ok(&json!({ "kind": r.kind, "roundtrip_residual": r.roundtrip_residual }))
                }
                None => ok(&r),
            }
        }
        Command::Expm { input, out } => {
            let x = parse_matrix(&read(&input)?)?;
            let a = expm(&x)?;
            match out {
                Some(path) => {
                    write_matrix(&path, &a)?;
                    ok(&json!({ "written": path.display().to_string() }))
                }
                None => ok(&a),
            }
        }
        Command::AnalyzeMap { input } => {
            let phi = parse_map(&read(&input)?)?;
            ok(&analyze(&phi, tol))
        }
        Command::Falsify { input, set, budget, seed } => {
            let phi = parse_map(&read(&input)?)?;
            let w = falsify_preservation(&phi, set.into(), budget, seed, tol)?;
            ok(&json!({ "found": w.is_some(), "witness": w }))
        }
        Command::Gadgets { theta } => gadgets(theta, tol),
        Command::VerifyTheorem { n, trials, seed } => {
            let report = verify_theorem(n, trials, seed, tol)?;
            ok(&json!({ "all_passed": report.all_passed(), "report": report }))
        }
        Command::Density { n, degree, samples, seed } => {
            if n == 0 {
                return Err(Error::InvalidArgument("n must be positive".into()).into());
            }
            let samples = samples.unwrap_or(2 * monomial_count(n * n, degree));
            let witness = zariski_density_witness(n, degree, samples, seed, DensitySource::K, tol)?;
            ok(&json!({
                "n": n,
                "degree": degree,
                "monomials": monomial_count(n * n, degree),
                "samples": samples,
                "witness": witness,
            }))
        }
    }
}

fn gadgets(theta: f64, tol: &Tolerances) -> Result<Output, Failure> {
    let a = shear_a_theta(theta)?;
    let b = product_b_theta(theta)?;
    let ev = eigenvalues(&b, tol)?;
    let hat = embedded_witness(theta, 4)?;
    let products: Vec<_> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&r| {
            let m = rotation(theta).scale(r).direct_sum(&Matrix::identity(2));
            membership(&(&hat * &m), SetKind::KStar, tol).map(|v| json!({ "r": r, "in_Kstar": v.in_set }))
        })
        .collect::<Result<_, _>>()?;
    ok(&json!({
        "theta": theta,
        "A_theta": a,
        "B_theta": b,
        "trace_B": b.trace(),
        "det_B": determinant(&b)?,
        "eigenvalues_B": ev.values,
        "A_theta_in_Kstar": membership(&a, SetKind::KStar, tol)?.in_set,
        "B_theta_in_Kstar": membership(&b, SetKind::KStar, tol)?.in_set,
        "embedded_in_Kstar": membership(&hat, SetKind::KStar, tol)?.in_set,
        "embedded_times_rotation": products,
    }))
}

/// Runs the command line `args` (program name first), writing the JSON
/// result to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    match execute(cli.command, &Tolerances::default()) {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.body);
            o.code
        }
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}
