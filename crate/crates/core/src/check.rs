//! The uniform result of one named check.

use serde::Serialize;
use serde_json::Value;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
    CapExceeded,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
            Verdict::CapExceeded => "cap_exceeded",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comodule: Option<String>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub summary: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl CheckResult {
    fn new(name: &str, verdict: Verdict, summary: Value) -> Self {
        CheckResult {
            name: name.to_string(),
            comodule: None,
            verdict,
            reason: None,
            summary,
            counterexample: None,
            witnesses: None,
            millis: None,
        }
    }

    pub fn pass(name: &str, summary: Value) -> Self {
        Self::new(name, Verdict::Pass, summary)
    }

    pub fn fail(name: &str, summary: Value, counterexample: Value) -> Self {
        let mut c = Self::new(name, Verdict::Fail, summary);
        c.counterexample = Some(counterexample);
        c
    }

    /// Pass when `counterexample` is `None`.
    pub fn decide(name: &str, summary: Value, counterexample: Option<Value>) -> Self {
        match counterexample {
            None => Self::pass(name, summary),
            Some(c) => Self::fail(name, summary, c),
        }
    }

    pub fn skipped(name: &str, reason: impl Into<String>, summary: Value) -> Self {
        let mut c = Self::new(name, Verdict::Skipped, summary);
        c.reason = Some(reason.into());
        c
    }

    /// Cap overruns become `cap_exceeded`; anything else is a failure.
    pub fn from_error(name: &str, err: &Error) -> Self {
        let verdict = if err.is_cap_exceeded() {
            Verdict::CapExceeded
        } else {
            Verdict::Fail
        };
        let mut c = Self::new(name, verdict, Value::Null);
        c.reason = Some(err.to_string());
        c
    }

    pub fn with_witnesses(mut self, w: Value) -> Self {
        self.witnesses = Some(w);
        self
    }

    pub fn with_reason(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }
}
