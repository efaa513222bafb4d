use std::collections::BTreeMap;

use hilbert_colim::colimit::{EstimateStatus, LimitEstimate};
use hilbert_colim::linalg::Scalar;
use serde::Serialize;
use serde_json::{json, Value};

/// The outcome of one command. Field order and map ordering are fixed, so
/// equal inputs give byte-identical output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub outputs: BTreeMap<String, Value>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: Value,
    pub error: Option<f64>,
    pub status: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: Value, pass: bool) -> Self {
        Self {
            name: name.into(),
            value,
            error: None,
            status: "checked".into(),
            pass,
        }
    }

    pub fn real_estimate(name: impl Into<String>, est: &LimitEstimate<f64>) -> Self {
        Self::new(name, real(est.value), true)
            .with_error(est.error)
            .with_status(status_name(est.status))
    }

    pub fn complex_estimate(name: impl Into<String>, est: &LimitEstimate<Scalar>) -> Self {
        Self::new(name, complex(est.value), true)
            .with_error(est.error)
            .with_status(status_name(est.status))
    }

    pub fn with_error(mut self, error: f64) -> Self {
        self.error = Some(error);
        self
    }

    pub fn with_status(mut self, status: &str) -> Self {
        self.status = status.into();
        self
    }
}

pub fn status_name(s: EstimateStatus) -> &'static str {
    match s {
        EstimateStatus::ExactStabilized => "exact_stabilized",
        EstimateStatus::Certified => "certified",
        EstimateStatus::Heuristic => "heuristic",
    }
}

/// A real number; non-finite values become strings, since JSON has none.
pub fn real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn complex(z: Scalar) -> Value {
    json!([real(z.re), real(z.im)])
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            params: BTreeMap::new(),
            seed: None,
            checks: vec![],
            outputs: BTreeMap::new(),
            verdict: Verdict::Pass,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn output(&mut self, key: &str, value: Value) {
        self.outputs.insert(key.into(), value);
    }

    /// Sets the verdict from the checks.
    pub fn finish(mut self) -> Self {
        self.verdict = if self.checks.iter().all(|c| c.pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
