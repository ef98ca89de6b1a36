//! The on-disk k-graph format: a JSON object with `rank`, `vertices`,
//! `edges` and `squares`. Unknown keys are rejected.

use serde::{Deserialize, Serialize};

use super::GraphError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Presentation {
    pub rank: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub squares: Vec<SquareSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub name: String,
    /// 1-based color.
    pub color: usize,
    pub range: String,
    pub source: String,
}

/// `top = [g, h]`, `bottom = [h', g']` records the factorization `g h = h' g'`
/// with `color(g) < color(h)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareSpec {
    pub top: [String; 2],
    pub bottom: [String; 2],
}

impl Presentation {
    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }
}
