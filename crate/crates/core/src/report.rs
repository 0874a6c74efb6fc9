//! Structured pass/fail reports returned by the validators.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report { subject: subject.into(), checks: Vec::new() }
    }

    /// Record a check. Returns `passed` so callers can short-circuit.
    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
        passed
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.check(name, true, "");
    }

    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.check(name, false, detail);
    }

    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.failures().next()
    }

    /// Append the checks of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = alloc::format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
    }

    /// Short reason for the first failed check, if any.
    pub fn reason(&self) -> Option<String> {
        self.first_failure().map(|c| {
            if c.detail.is_empty() {
                c.name.to_string()
            } else {
                alloc::format!("{}: {}", c.name, c.detail)
            }
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.is_ok() { "ok" } else { "FAILED" };
        writeln!(f, "{} [{verdict}]", self.subject)?;
        for c in &self.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "  {mark} {}", c.name)?;
            } else {
                writeln!(f, "  {mark} {} ({})", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_tracks_failures() {
        let mut r = Report::new("x");
        r.pass("a");
        assert!(r.is_ok());
        r.fail("b", "why");
        assert!(!r.is_ok());
        assert_eq!(r.reason().as_deref(), Some("b: why"));
    }
}
