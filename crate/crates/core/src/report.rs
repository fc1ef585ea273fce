//! Named numerical checks and their aggregation.

use serde::Serialize;

/// Outcome of one named check.
///
/// A measured check passes iff `max_error <= tolerance`. A skipped check has
/// `max_error = NaN` (serialized as `null`), `passed = false` and a reason;
/// it counts as neither a pass nor a failure.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub skipped_reason: Option<String>,
}

impl Check {
    pub fn measured(name: impl Into<String>, max_error: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            max_error,
            tolerance,
            // NaN errors fail
            passed: max_error <= tolerance,
            skipped_reason: None,
        }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            max_error: f64::NAN,
            tolerance: 0.0,
            passed: false,
            skipped_reason: Some(reason.into()),
        }
    }

    pub fn is_skipped(&self) -> bool {
        self.skipped_reason.is_some()
    }

    pub fn failed(&self) -> bool {
        !self.is_skipped() && !self.passed
    }
}

/// Reason attached to checks that have no content in a small dimension.
pub const DEGENERATE: &str = "skipped (degenerate dimension)";

#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.merge_check(check);
    }

    /// Record a measured value, merging with an existing check of the same
    /// name by keeping the larger error.
    pub fn record(&mut self, name: &str, error: f64, tolerance: f64) {
        self.merge_check(Check::measured(name, error, tolerance));
    }

    pub fn skip(&mut self, name: &str, reason: &str) {
        self.merge_check(Check::skipped(name, reason));
    }

    fn merge_check(&mut self, check: Check) {
        let Some(existing) = self.checks.iter_mut().find(|c| c.name == check.name) else {
            self.checks.push(check);
            return;
        };
        match (existing.is_skipped(), check.is_skipped()) {
            (_, true) => {}
            (true, false) => *existing = check,
            (false, false) => {
                let worse = check.max_error.is_nan()
                    || (!existing.max_error.is_nan() && check.max_error > existing.max_error);
                if worse {
                    existing.max_error = check.max_error;
                }
                existing.tolerance = existing.tolerance.min(check.tolerance);
                existing.passed = existing.max_error <= existing.tolerance;
            }
        }
    }

    pub fn extend(&mut self, other: VerificationReport) {
        for c in other.checks {
            self.merge_check(c);
        }
    }

    /// True when no measured check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !c.failed())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.failed())
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Max error of a named check; panics if absent. Handy in tests.
    pub fn error_of(&self, name: &str) -> f64 {
        self.get(name)
            .unwrap_or_else(|| panic!("no check named {name}"))
            .max_error
    }

    pub fn sort_by_name(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merging_keeps_worst_error() {
        let mut r = VerificationReport::new();
        r.record("a", 1e-12, 1e-9);
        r.record("a", 1e-6, 1e-9);
        r.record("a", 1e-15, 1e-9);
        assert_eq!(r.len(), 1);
        assert_eq!(r.error_of("a"), 1e-6);
        assert!(!r.passed());
    }

    #[test]
    fn skipped_checks_are_neutral() {
        let mut r = VerificationReport::new();
        r.skip("x", DEGENERATE);
        r.record("y", 0.0, 1e-9);
        assert!(r.passed());
        assert_eq!(r.failures().count(), 0);
        let x = r.get("x").unwrap();
        assert!(x.is_skipped() && !x.passed);
    }

    #[test]
    fn nan_error_fails() {
        let c = Check::measured("n", f64::NAN, 1.0);
        assert!(c.failed());
    }
}
