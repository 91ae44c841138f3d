//! Pass/fail reporting for the verification suites.

use std::fmt;

/// One named check inside a verification run.
#[derive(Debug, Clone)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    /// Extra context shown on failure, empty when there is nothing to add.
    pub detail: String,
}

/// Outcome of a verification suite.
#[derive(Debug, Clone)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            label: label.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for check in &self.checks {
            let tag = if check.pass { "PASS" } else { "FAIL" };
            write!(f, "  [{}] {}", tag, check.label)?;
            if !check.pass && !check.detail.is_empty() {
                write!(f, ": {}", check.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
