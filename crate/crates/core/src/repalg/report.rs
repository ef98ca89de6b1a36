//! Per-check verification results.

use serde::Serialize;
use serde_json::{json, Value};

use super::family::IsometryFamily;
use super::matrix::{OperatorMatrix, Scalar};
use crate::degree::Degree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norms: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub heuristic: bool,
}

impl CheckResult {
    pub fn new(id: impl Into<String>, status: CheckStatus) -> Self {
        CheckResult { id: id.into(), status, witness: None, norms: None, tolerance: None, heuristic: false }
    }

    pub fn pass(id: impl Into<String>) -> Self {
        Self::new(id, CheckStatus::Pass)
    }

    pub fn fail(id: impl Into<String>, witness: Value) -> Self {
        Self::new(id, CheckStatus::Fail).with_witness(witness)
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn with_norms(mut self, norms: Value, tolerance: f64) -> Self {
        self.norms = Some(norms);
        self.tolerance = Some(tolerance);
        self
    }

    pub fn heuristic(mut self) -> Self {
        self.heuristic = true;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Compares two matrices on the columns that are safe for `margin`; the
/// witness is the first differing entry in row-major order.
pub fn exact_check<T: Scalar>(
    id: impl Into<String>,
    fam: &IsometryFamily,
    left: &OperatorMatrix<T>,
    right: &OperatorMatrix<T>,
    margin: &Degree,
) -> CheckResult {
    let id = id.into();
    match left.first_mismatch(right, |c| fam.is_safe(c, margin)) {
        None => CheckResult::pass(id),
        Some(m) => {
            let (l, r) = (m.left.to_complex(), m.right.to_complex());
            CheckResult::fail(
                id,
                json!({
                    "vector": fam.label(m.col),
                    "row": fam.label(m.row),
                    "left": [l.re, l.im],
                    "right": [r.re, r.im],
                }),
            )
        }
    }
}

/// An ordered list of checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn extend(&mut self, checks: impl IntoIterator<Item = CheckResult>) {
        self.checks.extend(checks);
    }

    /// No non-heuristic check failed.
    pub fn hard_pass(&self) -> bool {
        !self.checks.iter().any(|c| !c.heuristic && c.status == CheckStatus::Fail)
    }

    pub fn any_inconclusive(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Inconclusive)
    }

    pub fn find(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn counts(&self) -> Value {
        let count = |s: CheckStatus| self.checks.iter().filter(|c| c.status == s).count();
        json!({
            "pass": count(CheckStatus::Pass),
            "fail": count(CheckStatus::Fail),
            "inconclusive": count(CheckStatus::Inconclusive),
            "not_applicable": count(CheckStatus::NotApplicable),
        })
    }
}
