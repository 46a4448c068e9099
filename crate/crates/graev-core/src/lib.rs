//! Computable Graev extensions of pseudometrics to free Boolean groups.
//!
//! A pseudometric on a pointed ground set extends to an invariant pseudometric
//! on the free Boolean group over it; the extension is computable exactly as a
//! minimum-weight perfect matching of supports. This crate provides:
//!
//! - ground spaces (`space`, `metrics`): validated pseudometric tables and
//!   Euclidean point clouds, sequences of pseudometrics with closed-form
//!   tails, and their sup-combination;
//! - the group and metric layer (`group`, `norm`): supports under symmetric
//!   difference, the exact extension norm with optimal-matching witnesses,
//!   and an independent representation-enumeration oracle;
//! - neighborhood certificates (`neighborhood`): membership in the union of
//!   sumsets of unit-threshold word sets, with constructive dyadic witnesses
//!   for small balls;
//! - a completeness lab (`lab`): seeded Cauchy-sequence experiments with
//!   convergence, cancellation, and missing-limit verdicts;
//! - the acceptance suite (`suite`): seeded property batteries with a
//!   deterministic JSON report, also exposed through the `graev` CLI.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod group;
pub mod lab;
pub mod metrics;
pub mod neighborhood;
pub mod norm;
pub mod space;
pub mod suite;

pub use error::{Error, Result, ValidationReport, Violation};
pub use group::{GroupElement, Representation};
pub use metrics::{combine_sup, PseudometricSequence, TailRule};
pub use norm::{
    graev_dist, graev_norm, graev_norm_with_limit, oracle_norm, reduce_representation, Matching,
    NormResult, DEFAULT_MATCH_LIMIT,
};
pub use space::{GroundSpace, AXIOM_TOL, E_INDEX};
