//! The JSON report document.
//!
//! Field order is fixed by the struct definitions and nothing time- or
//! machine-dependent is recorded, so identical inputs give identical bytes.

use kolmo_core::CheckReport;
use serde::{Deserialize, Serialize};

/// Bumped whenever a field is added, removed or changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub detail: String,
}

impl From<CheckReport> for Case {
    fn from(r: CheckReport) -> Self {
        Case {
            name: r.name,
            passed: r.passed,
            witness: r.witness,
            detail: r.detail,
        }
    }
}

impl Case {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckReport::pass(name, detail).into()
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckReport::fail(name, witness, detail).into()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Versions {
    pub kolmo: String,
    pub schema: u32,
}

impl Default for Versions {
    fn default() -> Self {
        Versions {
            kolmo: env!("CARGO_PKG_VERSION").to_string(),
            schema: SCHEMA_VERSION,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub passed: bool,
    pub cases: Vec<Case>,
    /// `null` for exhaustive, unseeded runs.
    #[serde(default)]
    pub seed: Option<u64>,
    pub versions: Versions,
}

impl Report {
    pub fn new(suite: impl Into<String>, seed: Option<u64>) -> Self {
        Report {
            suite: suite.into(),
            passed: true,
            cases: Vec::new(),
            seed,
            versions: Versions::default(),
        }
    }

    pub fn push(&mut self, case: impl Into<Case>) {
        let case = case.into();
        self.passed &= case.passed;
        self.cases.push(case);
    }

    pub fn extend(&mut self, other: Report) {
        for c in other.cases {
            self.push(c);
        }
    }

    /// 0 if every case passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per case, for terminals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            out.push_str(&format!(
                "[{}] {}: {}\n",
                if c.passed { "pass" } else { "FAIL" },
                c.name,
                c.detail
            ));
            if let Some(w) = &c.witness {
                out.push_str(&format!("       witness: {w}\n"));
            }
        }
        out.push_str(&format!(
            "{}: {} ({} cases)\n",
            self.suite,
            if self.passed { "passed" } else { "FAILED" },
            self.cases.len()
        ));
        out
    }
}
