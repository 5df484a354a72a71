//! Verification reports: named residuals against tolerances plus a free-form payload.

use serde::Serialize;
use serde_json::Value;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub label: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Residual {
    /// A NaN value never passes.
    pub fn passes(&self) -> bool {
        self.value <= self.tolerance
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub residuals: Vec<Residual>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub payload: Value,
}

impl Report {
    /// An informational report; becomes pass/fail once residuals or checks are added.
    pub fn info(command: impl Into<String>, payload: Value) -> Self {
        Report { command: command.into(), status: Status::Info, residuals: Vec::new(), error: None, payload }
    }

    pub fn failure(command: impl Into<String>, err: &Error) -> Self {
        Report {
            command: command.into(),
            status: Status::Fail,
            residuals: Vec::new(),
            error: Some(format!("{}: {err}", err.name())),
            payload: Value::Null,
        }
    }

    pub fn residual(mut self, label: impl Into<String>, value: f64, tolerance: f64) -> Self {
        self.residuals.push(Residual { label: label.into(), value, tolerance });
        self.status = if self.residuals.iter().all(Residual::passes) { Status::Pass } else { Status::Fail };
        self
    }

    /// Records a boolean check as a residual of 0 (holds) or 1 (fails) against tolerance 0.
    pub fn check(self, label: impl Into<String>, holds: bool) -> Self {
        self.residual(label, if holds { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
