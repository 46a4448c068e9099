//! Error and validation-report types shared across the crate.

use serde::Serialize;
use thiserror::Error;

/// A single pseudometric axiom violation, with the witnessing indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// dist(i, i) != 0
    NonzeroDiagonal { index: usize, value: f64 },
    /// dist(i, j) != dist(j, i)
    Asymmetric { i: usize, j: usize, dij: f64, dji: f64 },
    /// dist(i, k) > dist(i, j) + dist(j, k) beyond tolerance
    TriangleFailure {
        i: usize,
        j: usize,
        k: usize,
        direct: f64,
        via: f64,
    },
}

/// Outcome of checking a candidate distance table against the pseudometric
/// axioms. Empty iff the table is a valid pseudometric.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Structurally malformed input: non-square table, negative or non-finite
    /// entries, inconsistent coordinate dimensions, bad labels. Distinct from
    /// axiom violations, which are reported through [`ValidationReport`].
    #[error("malformed space: {0}")]
    Malformed(String),

    #[error("pseudometric axioms violated: {} violation(s), first: {:?}",
            report.violations.len(), report.violations.first())]
    InvalidSpace { report: ValidationReport },

    #[error("point index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("support size {support} exceeds the matching capacity {limit}")]
    CapacityExceeded { support: usize, limit: usize },

    #[error("combinatorial guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("ball precondition not met: norm {norm} is not below {bound}")]
    BallPrecondition { norm: f64, bound: f64 },

    #[error("sequence is not Cauchy at tolerance {tol}: terms {i} and {j} are at distance {dist}")]
    NotCauchy {
        i: usize,
        j: usize,
        dist: f64,
        tol: f64,
    },

    #[error("ambiguous separation, refusing a verdict: {0}")]
    Ambiguous(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("non-finite distance encountered: {0}")]
    NonFinite(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
