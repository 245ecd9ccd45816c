//! Verification reports shared by every check.

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    pub detail: Value,
}

impl Report {
    pub fn new(check: impl Into<String>, passed: bool, detail: Value) -> Self {
        Report { check: check.into(), status: if passed { Status::Pass } else { Status::Fail }, detail }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> Value {
        json!({"check": self.check, "status": self.status, "detail": self.detail})
    }

    /// `check: pass` followed by the detail fields, one per line.
    pub fn to_text(&self) -> String {
        let status = if self.passed() { "pass" } else { "fail" };
        let mut out = format!("{}: {}\n", self.check, status);
        if let Value::Object(m) = &self.detail {
            for (k, v) in m {
                match v {
                    Value::String(s) => out.push_str(&format!("  {}: {}\n", k, s)),
                    other => out.push_str(&format!("  {}: {}\n", k, other)),
                }
            }
        } else if !self.detail.is_null() {
            out.push_str(&format!("  {}\n", self.detail));
        }
        out
    }
}
