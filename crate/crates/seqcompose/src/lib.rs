//! Synthetic web-service invocation logs and sequential-pattern mining of
//! service compositions.
//!
//! The crate has three halves that the CLI wires together:
//!
//! * [`workload`] builds seeded synthetic logs with known composition
//!   occurrences planted between noise invocations, plus a manifest that
//!   records exactly where each occurrence landed.
//! * [`miners`] finds frequent sequential patterns (level-wise candidate
//!   join, pattern growth, closed-pattern post-filter) and derives
//!   prefix-implies-suffix association rules; [`multilevel`] chains a
//!   service-level pass, log reduction and an operation-level pass into a
//!   composition recommender.
//! * [`eval`] scores mined rules against the planted compositions and runs
//!   threshold-grid benchmarks.

pub mod error;
pub mod eval;
pub mod log;
pub mod miners;
pub mod multilevel;
pub mod pattern;
pub mod workload;
pub mod types;

#[cfg(test)]
pub(crate) mod test_support;

pub use error::{Error, Result};
pub use eval::{EvalReport, GridCell, MatchCriteria};
pub use miners::{Algorithm, AssociationRule, FrequentSet, MiningParams, MiningStats};
pub use multilevel::{MultilevelParams, Recommendation, StageTrace, ThresholdBase};
pub use pattern::{HierarchyLevel, Pattern};
pub use types::{Invocation, LogRecord, ServiceId, Session};
