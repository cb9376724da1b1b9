//! Exact expected maximum of an urn random walk with anti-correlated steps.
//!
//! An urn holds δ white and δ/2 red marbles. Marbles are drawn without
//! replacement; red moves the walk up one, white down one. This crate
//! computes E[max_t μ_t] exactly (several enumeration strategies plus a
//! path-counting oracle), the same quantity for the i.i.d. walk with
//! p = 1/3, Monte Carlo estimates of both, and CSV tables and benchmarks.

pub mod cli;
pub mod combin;
pub mod enumeration;
pub mod error;
pub mod exact;
pub mod exec;
pub mod iid;
pub mod montecarlo;
pub mod reporting;
pub mod walk;

pub use enumeration::{
    enumerate, enumerate_combinations_iterative, enumerate_combinations_recursive,
    enumerate_exhaustive, enumerate_rank_range, expected_max_dp, EnumerationMethod,
    EnumerationReport, MethodKind,
};
pub use error::{Error, Result};
pub use exact::{ExactValue, Tally};
pub use exec::Execution;
pub use iid::{expected_max_iid, expected_max_iid_limit, IidWalkConfig};
pub use montecarlo::{sample_iid_walk, sample_urn_walk, SampleReport};
pub use walk::{max_prefix, sequence_count, Color, StepSequence, WalkConfig, WalkTrace};
