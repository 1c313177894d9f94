//! Verification reports shared by the verifiers, the CLI and the FFI layer.

use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Falsified,
    Error,
    /// Experiment run without an asserted expectation.
    Observed,
}

impl Verdict {
    /// CLI exit code: 0 verified/observed, 1 falsified, 2 error.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified | Verdict::Observed => 0,
            Verdict::Falsified => 1,
            Verdict::Error => 2,
        }
    }
}

/// One named sub-check of a report.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub claim: String,
    pub verdict: Verdict,
    pub sizes: Map<String, Value>,
    pub stages: Option<usize>,
    pub elapsed_ms: f64,
    pub seed: u64,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl VerificationReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Accumulates checks while a verifier runs.
pub(crate) struct ReportBuilder {
    claim: String,
    seed: u64,
    start: Instant,
    sizes: Map<String, Value>,
    stages: Option<usize>,
    checks: Vec<Check>,
    counterexample: Option<Value>,
    details: Option<Value>,
    observed: bool,
}

impl ReportBuilder {
    pub(crate) fn new(claim: &str, seed: u64) -> ReportBuilder {
        ReportBuilder {
            claim: claim.to_string(),
            seed,
            start: Instant::now(),
            sizes: Map::new(),
            stages: None,
            checks: Vec::new(),
            counterexample: None,
            details: None,
            observed: false,
        }
    }

    pub(crate) fn size(&mut self, key: &str, v: impl Into<Value>) {
        self.sizes.insert(key.to_string(), v.into());
    }

    pub(crate) fn stages(&mut self, n: usize) {
        self.stages = Some(n);
    }

    pub(crate) fn details(&mut self, v: Value) {
        self.details = Some(v);
    }

    pub(crate) fn observed(&mut self) {
        self.observed = true;
    }

    /// Records a check; the first failing check with a payload becomes the
    /// counterexample.
    pub(crate) fn check(&mut self, name: &str, passed: bool, detail: Option<String>) -> bool {
        if !passed && self.counterexample.is_none() {
            self.counterexample = Some(serde_json::json!({
                "check": name,
                "detail": detail.clone(),
            }));
        }
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
        passed
    }

    /// Like [`ReportBuilder::check`] with a structured counterexample.
    pub(crate) fn check_with(&mut self, name: &str, passed: bool, payload: impl FnOnce() -> Value) -> bool {
        if !passed && self.counterexample.is_none() {
            self.counterexample = Some(serde_json::json!({ "check": name, "witness": payload() }));
        }
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: None,
        });
        passed
    }

    pub(crate) fn error(mut self, msg: String) -> VerificationReport {
        self.checks.push(Check {
            name: "run".into(),
            passed: false,
            detail: Some(msg.clone()),
        });
        let mut r = self.finish();
        r.verdict = Verdict::Error;
        r.counterexample = Some(serde_json::json!({ "error": msg }));
        r
    }

    pub(crate) fn finish(self) -> VerificationReport {
        let ok = self.checks.iter().all(|c| c.passed);
        let verdict = if !ok {
            Verdict::Falsified
        } else if self.observed {
            Verdict::Observed
        } else {
            Verdict::Verified
        };
        VerificationReport {
            claim: self.claim,
            verdict,
            sizes: self.sizes,
            stages: self.stages,
            elapsed_ms: self.start.elapsed().as_secs_f64() * 1e3,
            seed: self.seed,
            checks: self.checks,
            counterexample: if ok { None } else { self.counterexample },
            details: self.details,
        }
    }
}
