//! `jblab`: analyse matrices, build convex decompositions into extreme
//! points and run the randomized verification suites.

mod report;
mod schema;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jblab::verify::{run_all, VerifyConfig};
use jblab::{
    alpha_q, dist_to_extremals, generalized_inverse, is_bp_quasi_invertible, lambda_decompose,
    lambda_value, m_q, mean_of_two_extremals, quadratic_conorm, range_tripotent, triple_spectrum,
    JbError, MatrixElement, Tolerances, DEFAULT_RANK_TOL, DEFAULT_TOL,
};
use serde::Serialize;

use report::{AnalysisReport, DecompositionReport, Settings, VerifyReport};
use schema::MatrixJson;

const EXIT_PRECONDITION: u8 = 1;
const EXIT_VERIFY_FAILED: u8 = 2;
const EXIT_IO: u8 = 3;

/// Witness radius for the reported `α_q`.
const ALPHA_EPSILON: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "jblab", version, about = "Quasi-invertibility, extreme points and the lambda-function for complex matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectral and geometric report for one matrix.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Include r(a) and a† in the report.
        #[arg(long)]
        emit_matrices: bool,
    },
    /// Write the matrix as λe + (1−λ)u with e, u extreme points.
    Decompose {
        #[command(flatten)]
        common: Common,
        /// Weight on e; defaults to the largest admissible one.
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
    },
    /// Run every property suite on random instances.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        max_rows: usize,
        #[arg(long, default_value_t = 7)]
        max_cols: usize,
        /// Replace every numeric threshold.
        #[arg(long, allow_negative_numbers = true)]
        tol: Option<f64>,
        #[command(flatten)]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    input: PathBuf,
    /// Residual tolerance [default: 1e-9, or JBLAB_TOL].
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL, allow_negative_numbers = true)]
    rank_tol: f64,
    #[command(flatten)]
    format: Format,
}

#[derive(Args, Debug, Clone, Copy)]
#[group(multiple = false)]
struct Format {
    /// JSON output (default).
    #[arg(long)]
    json: bool,
    /// Human-readable output.
    #[arg(long)]
    text: bool,
}

enum Failure {
    Precondition(String),
    Io(String),
}

impl From<JbError> for Failure {
    fn from(e: JbError) -> Self {
        Failure::Precondition(e.to_string())
    }
}

fn env_tol() -> Option<String> {
    std::env::var("JBLAB_TOL").ok()
}

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Failure::Precondition(format!("--{name} must be a positive finite number, got {v}")))
    }
}

/// `--tol` beats `JBLAB_TOL`, which beats the default.
fn resolve_tol(flag: Option<f64>) -> Result<(f64, &'static str), Failure> {
    if let Some(t) = flag {
        return Ok((positive("tol", t)?, "flag"));
    }
    match env_tol() {
        Some(raw) => {
            let t: f64 = raw
                .trim()
                .parse()
                .map_err(|_| Failure::Precondition(format!("JBLAB_TOL={raw:?} is not a number")))?;
            Ok((positive("tol", t)?, "env"))
        }
        None => Ok((DEFAULT_TOL, "default")),
    }
}

fn settings(common: &Common) -> Result<(Tolerances, Settings), Failure> {
    let (tol, tol_source) = resolve_tol(common.tol)?;
    let rank_tol = positive("rank-tol", common.rank_tol)?;
    Ok((
        Tolerances::new(tol, rank_tol),
        Settings { tol, rank_tol, jblab_tol_env: env_tol(), tol_source },
    ))
}

fn load(path: &Path) -> Result<MatrixElement, Failure> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let parsed: MatrixJson = serde_json::from_str(&raw)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    parsed
        .to_element()
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn render<T: Serialize>(value: &T, format: Format) -> String {
    let json = serde_json::to_value(value).expect("reports serialize");
    if format.text {
        report::json_to_text(&json)
    } else {
        let mut s = serde_json::to_string(&json).expect("reports serialize");
        s.push('\n');
        s
    }
}

fn analyze(common: &Common, emit_matrices: bool) -> Result<String, Failure> {
    let (tols, settings) = settings(common)?;
    let a = load(&common.input)?;
    let qi = is_bp_quasi_invertible(&a, tols);
    let matrices = |f: &dyn Fn() -> Option<MatrixElement>| {
        emit_matrices.then(|| f().as_ref().map(MatrixJson::from_element))
    };
    let report = AnalysisReport {
        shape: [a.shape().0, a.shape().1],
        operator_norm: a.norm(),
        triple_spectrum: triple_spectrum(&a, tols.rank_tol),
        numerical_rank: jblab::spectral::numerical_rank(&a, tols.rank_tol),
        bp_quasi_invertible: qi.is_bp_quasi_invertible,
        m_q: m_q(&a, tols.rank_tol),
        gamma_q: quadratic_conorm(&a, tols.rank_tol).into(),
        alpha_q: alpha_q(&a, ALPHA_EPSILON, tols).value,
        lambda_value: lambda_value(&a, tols).ok(),
        dist_to_extremals: dist_to_extremals(&a, tols).into(),
        range_tripotent: matrices(&|| range_tripotent(&a, tols).ok().map(|r| r.into_element())),
        generalized_inverse: matrices(&|| generalized_inverse(&a, tols.rank_tol).ok()),
        settings,
    };
    Ok(render(&report, common.format))
}

fn decompose(common: &Common, lambda: Option<f64>) -> Result<String, Failure> {
    let (tols, settings) = settings(common)?;
    let a = load(&common.input)?;
    let (method, cert) = match lambda {
        Some(l) => ("lambda", lambda_decompose(&a, l, tols)?),
        None => {
            let l = lambda_value(&a, tols)?;
            if m_q(&a, tols.rank_tol) > 0.0 {
                ("lambda", lambda_decompose(&a, l, tols)?)
            } else {
                ("mean", mean_of_two_extremals(&a, tols)?)
            }
        }
    };
    Ok(render(&DecompositionReport::new(method, &cert, settings), common.format))
}

fn verify(
    seed: u64,
    trials: usize,
    max_rows: usize,
    max_cols: usize,
    tol: Option<f64>,
    format: Format,
) -> Result<(String, bool), Failure> {
    if trials == 0 || max_rows == 0 || max_cols == 0 {
        return Err(Failure::Precondition(
            "--trials, --max-rows and --max-cols must be at least 1".into(),
        ));
    }
    let tol = match tol {
        Some(_) => Some(resolve_tol(tol)?.0),
        None if env_tol().is_some() => Some(resolve_tol(None)?.0),
        None => None,
    };
    let cfg = VerifyConfig { seed, trials: Some(trials), max_rows, max_cols, tol };
    let summary = run_all(&cfg);
    let report = VerifyReport::new(&summary, env_tol());
    let out = if format.text { report.to_text() } else { render(&report, format) };
    Ok((out, report.all_passed))
}

fn error_document(kind: &str, message: &str) -> String {
    let doc = serde_json::json!({ "error": { "kind": kind, "message": message } });
    let mut s = serde_json::to_string(&doc).expect("serializes");
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_PRECONDITION) } else { ExitCode::SUCCESS };
        }
    };
    let (result, text) = match &cli.command {
        Command::Analyze { common, emit_matrices } => {
            (analyze(common, *emit_matrices).map(|s| (s, true)), common.format.text)
        }
        Command::Decompose { common, lambda } => {
            (decompose(common, *lambda).map(|s| (s, true)), common.format.text)
        }
        Command::Verify { seed, trials, max_rows, max_cols, tol, format } => (
            verify(*seed, *trials, *max_rows, *max_cols, *tol, *format),
            format.text,
        ),
    };
    match result {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY_FAILED)
            }
        }
        Err(failure) => {
            let (kind, message, code) = match failure {
                Failure::Precondition(m) => ("precondition", m, EXIT_PRECONDITION),
                Failure::Io(m) => ("input", m, EXIT_IO),
            };
            eprintln!("error: {message}");
            if !text {
                print!("{}", error_document(kind, &message));
            }
            ExitCode::from(code)
        }
    }
}
