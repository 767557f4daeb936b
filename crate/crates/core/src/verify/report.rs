use std::fmt::{self, Display};

use serde::Serialize;

use crate::multigraph::Multigraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub description: String,
    pub expected: String,
    pub actual: String,
    pub status: Status,
    /// MEL of the offending graph, on failures involving one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn new(description: impl Into<String>, expected: impl Display, actual: impl Display, ok: bool) -> Self {
        Check {
            description: description.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            witness: None,
        }
    }

    /// Compares two values for equality.
    pub fn equal<T: PartialEq + Display>(description: impl Into<String>, expected: T, actual: T) -> Self {
        let ok = expected == actual;
        Check::new(description, expected, actual, ok)
    }

    pub fn skipped(description: impl Into<String>, reason: impl Display) -> Self {
        Check {
            description: description.into(),
            expected: String::new(),
            actual: reason.to_string(),
            status: Status::Skipped,
            witness: None,
        }
    }

    /// Attaches `g` as witness when the check failed.
    pub fn with_witness(mut self, g: Option<&Multigraph>) -> Self {
        if self.status == Status::Fail {
            self.witness = g.map(Multigraph::to_mel);
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub parameters: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

#[derive(Serialize)]
struct Summary<'a> {
    suite: &'a str,
    parameters: &'a [(String, String)],
    overall: Status,
    passed: usize,
    failed: usize,
    skipped: usize,
}

impl VerificationReport {
    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// Pass iff no check failed.
    pub fn overall(&self) -> Status {
        if self.count(Status::Fail) > 0 {
            Status::Fail
        } else {
            Status::Pass
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// One JSON object per check, then a summary object, one per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&serde_json::to_string(c).expect("serialisable"));
            out.push('\n');
        }
        let summary = Summary {
            suite: &self.suite,
            parameters: &self.parameters,
            overall: self.overall(),
            passed: self.count(Status::Pass),
            failed: self.count(Status::Fail),
            skipped: self.count(Status::Skipped),
        };
        out.push_str(&serde_json::to_string(&summary).expect("serialisable"));
        out.push('\n');
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "suite {}", self.suite)?;
        for (k, v) in &self.parameters {
            write!(f, " {k}={v}")?;
        }
        writeln!(f)?;
        for c in &self.checks {
            match c.status {
                Status::Skipped => writeln!(f, "{} {}: {}", c.status.label(), c.description, c.actual)?,
                _ => {
                    writeln!(f, "{} {}: expected {}, actual {}", c.status.label(), c.description, c.expected, c.actual)?
                }
            }
            if let Some(w) = &c.witness {
                for line in w.lines() {
                    writeln!(f, "    {line}")?;
                }
            }
        }
        writeln!(
            f,
            "overall {} ({} passed, {} failed, {} skipped)",
            self.overall().label(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        )
    }
}
