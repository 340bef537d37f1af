use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    DocumentedDiscrepancy,
}

/// One check result: what was computed, what it was compared against and
/// under which tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub inputs: BTreeMap<String, f64>,
    pub observed: Vec<f64>,
    pub expected: Vec<f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub notes: String,
}

impl VerificationReport {
    /// Elementwise `|observed - expected| <= tolerance` comparison.
    pub fn compare(
        check_id: impl Into<String>,
        inputs: BTreeMap<String, f64>,
        observed: Vec<f64>,
        expected: Vec<f64>,
        tolerance: f64,
        notes: impl Into<String>,
    ) -> Self {
        let ok = observed.len() == expected.len()
            && observed.iter().zip(&expected).all(|(o, e)| (o - e).abs() <= tolerance);
        Self {
            check_id: check_id.into(),
            inputs,
            observed,
            expected,
            tolerance,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            notes: notes.into(),
        }
    }

    /// A record of two disagreeing forms, kept for reference and never
    /// counted as a failure.
    pub fn discrepancy(
        check_id: impl Into<String>,
        inputs: BTreeMap<String, f64>,
        observed: Vec<f64>,
        expected: Vec<f64>,
        notes: impl Into<String>,
    ) -> Self {
        Self {
            check_id: check_id.into(),
            inputs,
            observed,
            expected,
            tolerance: 0.0,
            verdict: Verdict::DocumentedDiscrepancy,
            notes: notes.into(),
        }
    }

    /// A check that could not be computed.
    pub fn failed(check_id: impl Into<String>, inputs: BTreeMap<String, f64>, notes: impl Into<String>) -> Self {
        Self {
            check_id: check_id.into(),
            inputs,
            observed: Vec::new(),
            expected: Vec::new(),
            tolerance: 0.0,
            verdict: Verdict::Fail,
            notes: notes.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn is_failure(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    /// Largest elementwise deviation.
    pub fn max_deviation(&self) -> f64 {
        self.observed
            .iter()
            .zip(&self.expected)
            .map(|(o, e)| (o - e).abs())
            .fold(0.0, f64::max)
    }
}

/// Builds an input map from `(name, value)` pairs.
pub fn inputs<const N: usize>(pairs: [(&str, f64); N]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}
