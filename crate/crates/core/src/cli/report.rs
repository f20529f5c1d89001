use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One checked identity. Exact cases leave `tolerance` empty.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Case {
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub lhs: String,
    pub rhs: String,
    pub tolerance: Option<f64>,
}

impl Case {
    /// An exact comparison of two printed forms.
    pub fn exact(name: impl Into<String>, detail: impl Into<String>, lhs: impl ToString, rhs: impl ToString) -> Self {
        let (lhs, rhs) = (lhs.to_string(), rhs.to_string());
        let status = if lhs == rhs { Status::Pass } else { Status::Fail };
        Case { name: name.into(), status, detail: detail.into(), lhs, rhs, tolerance: None }
    }

    /// A numeric residual compared against `tol`.
    pub fn numeric(name: impl Into<String>, detail: impl Into<String>, residual: f64, tol: f64) -> Self {
        let status = if residual <= tol { Status::Pass } else { Status::Fail };
        Case {
            name: name.into(),
            status,
            detail: detail.into(),
            lhs: format!("{residual:e}"),
            rhs: format!("<= {tol:e}"),
            tolerance: Some(tol),
        }
    }

    /// A yes/no structural check.
    pub fn check(name: impl Into<String>, detail: impl Into<String>, ok: bool) -> Self {
        Case {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
            lhs: ok.to_string(),
            rhs: "true".into(),
            tolerance: None,
        }
    }

    /// An evaluation that could not complete.
    pub fn error(name: impl Into<String>, err: impl ToString) -> Self {
        Case {
            name: name.into(),
            status: Status::Fail,
            detail: err.to_string(),
            lhs: String::new(),
            rhs: String::new(),
            tolerance: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Fails the case when a side condition does not hold.
    pub fn and(mut self, ok: bool) -> Case {
        if !ok {
            self.status = Status::Fail;
        }
        self
    }
}

/// The result of a suite run, with cases sorted by name.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub config: Value,
    pub cases: Vec<Case>,
}

impl Report {
    pub fn new(suite: &str, seed: u64, config: Value, mut cases: Vec<Case>) -> Self {
        cases.sort_by(|a, b| a.name.cmp(&b.name));
        Report { suite: suite.to_string(), seed, config, cases }
    }

    pub fn passed(&self) -> bool {
        self.cases.iter().all(Case::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "suite {} (seed {})", self.suite, self.seed);
        for c in &self.cases {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{tag} {}: {}", c.name, c.detail);
            if !c.passed() {
                let _ = writeln!(out, "     got:      {}", c.lhs);
                let _ = writeln!(out, "     expected: {}", c.rhs);
            }
        }
        let failed = self.failures().count();
        let _ = writeln!(out, "{} cases, {} passed, {} failed", self.cases.len(), self.cases.len() - failed, failed);
        out
    }
}
