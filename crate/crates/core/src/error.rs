use thiserror::Error;

use crate::model::Violation;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid input: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("series length mismatch: {what} has {got} values, expected {expected}")]
    LengthMismatch {
        what: String,
        got: usize,
        expected: usize,
    },
    #[error("invalid profile: {}", join(.0))]
    Profile(Vec<Violation>),
    #[error("empty chain")]
    EmptyChain,
    #[error("no branches to compose")]
    NoBranches,
    #[error("every branch is in backup mode")]
    AllBackup,
    #[error("cost denominator is zero")]
    ZeroCostDenominator,
    #[error("nonpositive cost {cost} in year {year}")]
    NonPositiveCost { year: i32, cost: f64 },
    #[error("at least 3 points are needed, got {0}")]
    TooFewPoints(usize),
    #[error("years must be strictly increasing")]
    UnorderedYears,
    #[error("epsilon must lie in (0, 1), got {0}")]
    BadEpsilon(f64),
    #[error("scale factor must be positive and finite")]
    BadScale,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("invalid document: {}", join(.0))]
    Invalid(Vec<Violation>),
}

impl ParseError {
    /// Field-level violations, one per offending path.
    pub fn violations(&self) -> Vec<Violation> {
        match self {
            ParseError::Json(e) => vec![Violation::new("", e.to_string())],
            ParseError::Schema { path, message } => vec![Violation::new(path.clone(), message.clone())],
            ParseError::Invalid(v) => v.clone(),
        }
    }
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
