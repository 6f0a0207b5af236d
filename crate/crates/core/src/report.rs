//! Uniform check records: one JSON object per check with the fields
//! {check, instance, lhs, rhs, ratio, pass}.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub instance: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: Option<f64>,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(
        check: impl Into<String>,
        instance: impl Into<String>,
        lhs: f64,
        rhs: f64,
        pass: bool,
    ) -> Self {
        let ratio = if rhs != 0.0 && rhs.is_finite() {
            Some(lhs / rhs)
        } else {
            None
        };
        CheckReport {
            check: check.into(),
            instance: instance.into(),
            lhs,
            rhs,
            ratio,
            pass,
        }
    }
}

/// Counts over a batch of reports.
#[derive(Debug, Clone, Copy, Default)]
pub struct Summary {
    pub total: usize,
    pub failed: usize,
}

impl Summary {
    pub fn of(reports: &[CheckReport]) -> Self {
        Summary {
            total: reports.len(),
            failed: reports.iter().filter(|r| !r.pass).count(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}
