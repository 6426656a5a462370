//! Running the selected checks and assembling the report.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use fiducial::random::{derive_seed, GENERATOR};
use fiducial::{ModelDescriptor, TheoryModel, Tolerances};
use serde::Serialize;
use serde_json::{json, Value};

use crate::checks::{spec, CheckContext, CheckOutcome};
use crate::config::{CheckName, RunConfig};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: CheckName,
    pub anchor: String,
    pub status: Status,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    pub verdict: Status,
    pub seed: u64,
    pub generator: String,
    /// Seed each check actually used.
    pub seeds: BTreeMap<CheckName, u64>,
    pub samples: usize,
    pub tolerances: Tolerances,
    pub theories: Vec<ModelDescriptor>,
    pub checks: Vec<CheckRecord>,
    /// Wall-clock seconds per check. Left out of serialized reports unless
    /// asked for, so reruns compare byte for byte.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<BTreeMap<CheckName, f64>>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Status::Pass
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn record(&self, name: CheckName) -> Option<&CheckRecord> {
        self.checks.iter().find(|r| r.name == name)
    }

    pub fn without_timing(mut self) -> Self {
        self.timing = None;
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.checks {
            out.push_str(&format!(
                "{} {:<25} measured={:<12.4e} tolerance={:<10.1e} {}\n",
                r.status.label(),
                r.name.as_str(),
                r.measured,
                r.tolerance,
                r.detail
            ));
        }
        out.push_str(&format!(
            "{}: {} of {} checks passed (seed {})\n",
            self.verdict.label(),
            self.checks
                .iter()
                .filter(|r| r.status == Status::Pass)
                .count(),
            self.checks.len(),
            self.seed
        ));
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "status", "measured", "tolerance", "anchor"])
            .and_then(|_| {
                for r in &self.checks {
                    w.write_record([
                        r.name.as_str(),
                        r.status.label(),
                        &r.measured.to_string(),
                        &r.tolerance.to_string(),
                        &r.anchor,
                    ])?;
                }
                Ok(())
            })
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("UTF-8 fields"))
    }
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "non-string panic payload".into())
}

fn run_one(name: CheckName, config: &RunConfig, theories: &[TheoryModel]) -> (CheckRecord, f64) {
    let spec = spec(name);
    let tolerance = config
        .check_tolerances
        .get(&name)
        .copied()
        .unwrap_or(spec.tolerance);
    let ctx = CheckContext {
        theories,
        seed: derive_seed(config.seed, name.index()),
        samples: config.samples,
        tolerance,
        tolerances: config.tolerances,
    };
    let start = Instant::now();
    let outcome = match catch_unwind(AssertUnwindSafe(|| (spec.run)(&ctx))) {
        Ok(Ok(outcome)) => outcome,
        Ok(Err(e)) => crashed(format!("check returned an error: {e}")),
        Err(payload) => crashed(format!("check panicked: {}", panic_message(payload))),
    };
    let elapsed = start.elapsed().as_secs_f64();
    let status = if outcome.passed {
        Status::Pass
    } else {
        Status::Fail
    };
    let witness = match status {
        Status::Pass => None,
        Status::Fail => Some(
            outcome
                .witness
                .unwrap_or_else(|| json!({"detail": outcome.detail})),
        ),
    };
    let record = CheckRecord {
        name,
        anchor: spec.anchor.to_owned(),
        status,
        measured: outcome.measured,
        tolerance,
        detail: outcome.detail,
        witness,
    };
    (record, elapsed)
}

fn crashed(diagnostic: String) -> CheckOutcome {
    CheckOutcome {
        passed: false,
        measured: f64::NAN,
        detail: diagnostic.clone(),
        witness: Some(json!({"diagnostic": diagnostic})),
    }
}

/// Runs the selected checks concurrently; records come back sorted by name.
pub fn run_verify(config: &RunConfig) -> Result<VerificationReport> {
    let theories = config
        .theories
        .iter()
        .map(|d| TheoryModel::from_descriptor(d).map(|m| m.with_tolerances(config.tolerances)))
        .collect::<fiducial::Result<Vec<_>>>()?;
    let mut names = config.checks.clone();
    names.sort();
    names.dedup();

    let mut results: Vec<(CheckRecord, f64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = names
            .iter()
            .map(|&name| {
                let theories = &theories;
                scope.spawn(move || run_one(name, config, theories))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("checks catch their own panics"))
            .collect()
    });
    results.sort_by_key(|(r, _)| r.name);

    let verdict = if results.iter().all(|(r, _)| r.status == Status::Pass) {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(VerificationReport {
        tool: env!("CARGO_PKG_NAME").to_owned(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        verdict,
        seed: config.seed,
        generator: GENERATOR.to_owned(),
        seeds: names
            .iter()
            .map(|&n| (n, derive_seed(config.seed, n.index())))
            .collect(),
        samples: config.samples,
        tolerances: config.tolerances,
        theories: config.theories.clone(),
        timing: Some(results.iter().map(|(r, t)| (r.name, *t)).collect()),
        checks: results.into_iter().map(|(r, _)| r).collect(),
    })
}
