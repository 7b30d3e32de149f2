use identities::{IdentityReport, Violation};
use plane_integrals::PlaneReport;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

/// Version of the report layout; bumped on any incompatible change.
pub const SCHEMA_VERSION: u32 = 1;

/// JSON Schema of [`ReportDocument`].
pub const REPORT_SCHEMA: &str = include_str!("../report-schema.json");

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    /// Evaluated, but the residual or error bar is above tolerance.
    Fail,
    /// Parameters rejected before evaluation.
    Invalid,
    /// The numerical evaluation did not reach its tolerance.
    NonConvergent,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Invalid => 2,
            Outcome::NonConvergent => 3,
        }
    }
}

/// One verified case, property check or sweep row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub label: String,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<IdentityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane: Option<PlaneReport>,
}

impl Record {
    pub fn new(label: impl Into<String>, outcome: Outcome) -> Self {
        Record {
            label: label.into(),
            outcome,
            seed: None,
            sweep_value: None,
            detail: None,
            violations: Vec::new(),
            identity: None,
            plane: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn evals(&self) -> u64 {
        self.identity.as_ref().map(|r| r.lhs.evals).or_else(|| self.plane.as_ref().map(|r| r.lhs.evals)).unwrap_or(0)
    }

    pub fn rel_residual(&self) -> Option<f64> {
        self.identity.as_ref().map(|r| r.rel_residual).or_else(|| self.plane.as_ref().map(|r| r.rel_residual))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub invalid: usize,
    pub nonconvergent: usize,
    /// Integrand evaluations over all records.
    pub evals: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub config: RunConfig,
    pub records: Vec<Record>,
    pub summary: Summary,
    /// Outcome of the first record that did not pass, or pass.
    pub verdict: Outcome,
    /// Only present when timings are requested, so that reports stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_s: Option<f64>,
}

impl ReportDocument {
    pub fn new(command: &str, config: RunConfig, records: Vec<Record>) -> Self {
        let mut summary = Summary { total: records.len(), ..Summary::default() };
        for r in &records {
            match r.outcome {
                Outcome::Pass => summary.passed += 1,
                Outcome::Fail => summary.failed += 1,
                Outcome::Invalid => summary.invalid += 1,
                Outcome::NonConvergent => summary.nonconvergent += 1,
            }
            summary.evals += r.evals();
        }
        let verdict = records.iter().map(|r| r.outcome).find(|o| *o != Outcome::Pass).unwrap_or(Outcome::Pass);
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            records,
            summary,
            verdict,
            wall_clock_s: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per record with the headline numbers.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "label", "seed", "sweep_value", "outcome", "exit_code", "lhs_re", "lhs_im", "lhs_err", "rhs_re", "rhs_im",
            "rel_residual", "evals", "detail",
        ])?;
        for r in &self.records {
            let (lhs, err, rhs) = match (&r.identity, &r.plane) {
                (Some(i), _) => (Some(i.lhs.value), Some(i.lhs.err), Some(i.rhs)),
                (None, Some(p)) => (Some(p.lhs.value), Some(p.lhs.err), Some(p.rhs)),
                _ => (None, None, None),
            };
            let num = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
            w.write_record([
                r.label.clone(),
                r.seed.map(|s| s.to_string()).unwrap_or_default(),
                num(r.sweep_value),
                serde_json::to_value(r.outcome).expect("outcome").as_str().unwrap_or_default().to_string(),
                r.outcome.exit_code().to_string(),
                num(lhs.map(|v| v.re)),
                num(lhs.map(|v| v.im)),
                num(err),
                num(rhs.map(|v| v.re)),
                num(rhs.map(|v| v.im)),
                num(r.rel_residual()),
                r.evals().to_string(),
                r.detail.clone().unwrap_or_else(|| {
                    r.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
                }),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}
