//! Serializable reports. Field names are the public output contract.

use jblab::verify::{SuiteReport, VerifySummary};
use jblab::{Conorm, DecompositionCertificate, DistanceResult};
use serde::{Serialize, Serializer};

use crate::schema::MatrixJson;

/// A number or the string `"inf"`.
#[derive(Debug, Clone, Copy)]
pub struct MaybeInf(pub f64);

impl Serialize for MaybeInf {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() && self.0 > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl From<Conorm> for MaybeInf {
    fn from(c: Conorm) -> Self {
        MaybeInf(c.value())
    }
}

#[derive(Debug, Serialize)]
pub struct Settings {
    pub tol: f64,
    pub rank_tol: f64,
    /// Value of `JBLAB_TOL` when it was set, whether or not it took effect.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jblab_tol_env: Option<String>,
    /// `"flag"`, `"env"` or `"default"`.
    pub tol_source: &'static str,
}

#[derive(Debug, Serialize)]
pub struct Distance {
    pub kind: &'static str,
    pub values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjectured: Option<f64>,
    pub theorem_tag: &'static str,
}

impl From<DistanceResult> for Distance {
    fn from(d: DistanceResult) -> Self {
        match d {
            DistanceResult::Exact { value, theorem } => Distance {
                kind: "exact",
                values: vec![value],
                conjectured: None,
                theorem_tag: theorem.as_str(),
            },
            DistanceResult::Interval { lower, upper, conjectured, theorem } => Distance {
                kind: "interval",
                values: vec![lower, upper],
                conjectured: Some(conjectured),
                theorem_tag: theorem.as_str(),
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub shape: [usize; 2],
    pub operator_norm: f64,
    pub triple_spectrum: Vec<f64>,
    pub numerical_rank: usize,
    pub bp_quasi_invertible: bool,
    pub m_q: f64,
    pub gamma_q: MaybeInf,
    pub alpha_q: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_value: Option<f64>,
    pub dist_to_extremals: Distance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range_tripotent: Option<Option<MatrixJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generalized_inverse: Option<Option<MatrixJson>>,
    pub settings: Settings,
}

#[derive(Debug, Serialize)]
pub struct DecompositionReport {
    /// `"lambda"` for an explicit or maximal weight, `"mean"` for the
    /// mean of two extreme points.
    pub method: &'static str,
    pub lambda: f64,
    pub e: MatrixJson,
    pub u: MatrixJson,
    pub reconstruction_residual: f64,
    pub tripotency_residuals: [f64; 2],
    pub e_complete: bool,
    pub u_complete: bool,
    pub valid: bool,
    pub settings: Settings,
}

impl DecompositionReport {
    pub fn new(method: &'static str, cert: &DecompositionCertificate, settings: Settings) -> Self {
        DecompositionReport {
            method,
            lambda: cert.lambda,
            e: MatrixJson::from_element(cert.e.element()),
            u: MatrixJson::from_element(cert.u.element()),
            reconstruction_residual: cert.reconstruction_residual,
            tripotency_residuals: [cert.tripotency_residuals.0, cert.tripotency_residuals.1],
            e_complete: cert.e.is_complete(),
            u_complete: cert.u.is_complete(),
            valid: cert.is_valid(),
            settings,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckJson {
    pub name: &'static str,
    pub threshold: Option<f64>,
    pub worst: f64,
    pub failures: usize,
}

#[derive(Debug, Serialize)]
pub struct FailureJson {
    pub trial: usize,
    pub seed: u64,
    pub check: &'static str,
    pub residual: f64,
}

#[derive(Debug, Serialize)]
pub struct SuiteJson {
    pub name: &'static str,
    pub statement: &'static str,
    pub trials: usize,
    pub passed: usize,
    pub ok: bool,
    pub checks: Vec<CheckJson>,
    pub first_failure: Option<FailureJson>,
}

impl From<&SuiteReport> for SuiteJson {
    fn from(r: &SuiteReport) -> Self {
        SuiteJson {
            name: r.suite.name(),
            statement: r.suite.statement(),
            trials: r.trials,
            passed: r.passed,
            ok: r.ok(),
            checks: r
                .checks
                .iter()
                .map(|c| CheckJson {
                    name: c.name,
                    threshold: c.threshold,
                    worst: c.worst,
                    failures: c.failures,
                })
                .collect(),
            first_failure: r.first_failure.as_ref().map(|f| FailureJson {
                trial: f.trial,
                seed: f.seed,
                check: f.check,
                residual: f.residual,
            }),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyConfigJson {
    pub seed: u64,
    pub trials: Option<usize>,
    pub max_rows: usize,
    pub max_cols: usize,
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jblab_tol_env: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfigJson,
    pub all_passed: bool,
    pub suites: Vec<SuiteJson>,
}

impl VerifyReport {
    pub fn new(summary: &VerifySummary, jblab_tol_env: Option<String>) -> Self {
        let c = summary.config;
        VerifyReport {
            config: VerifyConfigJson {
                seed: c.seed,
                trials: c.trials,
                max_rows: c.max_rows,
                max_cols: c.max_cols,
                tol: c.tol,
                jblab_tol_env,
            },
            all_passed: summary.all_passed(),
            suites: summary.suites.iter().map(SuiteJson::from).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            out.push_str(&format!(
                "{} {:<36} {}/{}",
                if s.ok { "PASS" } else { "FAIL" },
                s.name,
                s.passed,
                s.trials
            ));
            let worst: Vec<String> = s
                .checks
                .iter()
                .filter_map(|c| c.threshold.map(|t| format!("{} {:.1e} (<= {:.0e})", c.name, c.worst, t)))
                .collect();
            if !worst.is_empty() {
                out.push_str(&format!("  [{}]", worst.join("; ")));
            }
            out.push('\n');
            if let Some(f) = &s.first_failure {
                out.push_str(&format!(
                    "     {} failed: check {:?} residual {:e} at trial {} (seed {})\n",
                    s.statement, f.check, f.residual, f.trial, f.seed
                ));
            }
        }
        out.push_str(if self.all_passed { "all suites passed\n" } else { "verification FAILED\n" });
        out
    }
}

/// `key: value` lines from the JSON rendering, one per top-level field.
pub fn json_to_text(value: &serde_json::Value) -> String {
    let mut out = String::new();
    if let serde_json::Value::Object(map) = value {
        for (k, v) in map {
            out.push_str(&format!("{k}: {v}\n"));
        }
    }
    out
}
