//! Outcome of a seeded inequality check.

use serde::{Deserialize, Serialize};

/// Result of checking an inequality `lhs >= rhs` over sampled pairs.
///
/// Margins are `lhs - rhs` divided by the normalisation stated by each
/// check, so a negative `worst_margin` below `-tolerance` means failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub samples: usize,
    pub worst_margin: f64,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    pub(crate) fn start(name: impl Into<String>, tolerance: f64) -> Self {
        Self { name: name.into(), passed: true, samples: 0, worst_margin: f64::INFINITY, tolerance, note: None }
    }

    pub(crate) fn record(&mut self, margin: f64) {
        self.samples += 1;
        if margin < self.worst_margin || margin.is_nan() {
            self.worst_margin = margin;
        }
        if !(margin >= -self.tolerance) {
            self.passed = false;
        }
    }

    pub(crate) fn failed_precondition(name: impl Into<String>, note: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: false,
            samples: 0,
            worst_margin: f64::NEG_INFINITY,
            tolerance: 0.0,
            note: Some(note.into()),
        }
    }

    pub(crate) fn finish(mut self) -> Self {
        if self.samples == 0 && self.worst_margin == f64::INFINITY {
            self.worst_margin = 0.0;
        }
        self
    }
}
