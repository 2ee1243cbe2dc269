//! Machine-readable verification outcomes.

use crate::C64;
use serde::Serialize;

/// One residual compared against its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Set for checks that require `residual ≥ tolerance`.
    pub lower_bound: bool,
}

impl Check {
    /// Re-evaluates the check against a new tolerance.
    pub fn with_tolerance(&self, tolerance: f64) -> Check {
        let r = self.residual;
        let passed = r.is_finite() && if self.lower_bound { r >= tolerance } else { r < tolerance };
        Check { tolerance, passed, ..self.clone() }
    }
}

/// A fixed complex constant and where it came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub name: String,
    pub re: f64,
    pub im: f64,
    pub provenance: String,
}

impl Calibration {
    pub fn new(name: impl Into<String>, value: C64, provenance: impl Into<String>) -> Self {
        Self { name: name.into(), re: value.re, im: value.im, provenance: provenance.into() }
    }

    pub fn value(&self) -> C64 {
        C64::new(self.re, self.im)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub name: String,
    pub checks: Vec<Check>,
    pub calibrations: Vec<Calibration>,
    pub notes: Vec<String>,
}

impl EmbeddingReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), ..Default::default() }
    }

    /// Records a check; NaN residuals fail.
    pub fn check(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) -> &mut Self {
        let passed = residual.is_finite() && residual < tolerance;
        self.checks.push(Check { name: name.into(), residual, tolerance, passed, lower_bound: false });
        self
    }

    /// Records a lower-bound check (`value ≥ threshold`).
    pub fn check_at_least(&mut self, name: impl Into<String>, value: f64, threshold: f64) -> &mut Self {
        let passed = value.is_finite() && value >= threshold;
        self.checks.push(Check { name: name.into(), residual: value, tolerance: threshold, passed, lower_bound: true });
        self
    }

    pub fn calibration(&mut self, c: Calibration) -> &mut Self {
        self.calibrations.push(c);
        self
    }

    pub fn note(&mut self, n: impl Into<String>) -> &mut Self {
        self.notes.push(n.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Appends the checks, calibrations and notes of another report.
    pub fn absorb(&mut self, other: EmbeddingReport) {
        self.checks.extend(other.checks);
        self.calibrations.extend(other.calibrations);
        self.notes.extend(other.notes);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_residual_fails() {
        let mut r = EmbeddingReport::new("x");
        r.check("a", 1e-15, 1e-12).check("b", f64::NAN, 1.0);
        assert!(r.get("a").unwrap().passed);
        assert!(!r.passed());
    }

    #[test]
    fn lower_bound_check() {
        let mut r = EmbeddingReport::new("x");
        r.check_at_least("ratio", 12.0, 4.0);
        assert!(r.passed());
    }
}
