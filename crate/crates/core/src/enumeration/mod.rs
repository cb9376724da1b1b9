//! Exact E[max μ_t] for the urn walk.
//!
//! Three enumeration strategies are provided: every permutation of the
//! distinguishable marbles, one representative color sequence per
//! permutation group visited by recursive selection, and the same visit set
//! walked iteratively by lexicographic successor over a rank range. A lattice
//! path dynamic program serves as an independent oracle.

mod combos;
mod dp;
mod exhaustive;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::Result;
use crate::exact::{ExactValue, Tally};
use crate::exec::{Deadline, Execution};
use crate::walk::{sequence_count, WalkConfig};

pub use combos::{
    enumerate_combinations_iterative, enumerate_combinations_recursive, enumerate_rank_range,
    prune_lexicographic,
};
pub use dp::{expected_max_dp, max_distribution, DpReport, MaxDistribution};
pub use exhaustive::enumerate_exhaustive;

/// Largest δ the exhaustive method accepts unless overridden.
pub const DEFAULT_EXHAUSTIVE_CAP: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MethodKind {
    Exhaustive,
    CombinationsRecursive,
    CombinationsIterative,
}

impl MethodKind {
    pub fn name(&self) -> &'static str {
        match self {
            MethodKind::Exhaustive => "exhaustive",
            MethodKind::CombinationsRecursive => "combos",
            MethodKind::CombinationsIterative => "combos-iter",
        }
    }
}

impl FromStr for MethodKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(MethodKind::Exhaustive),
            "combos" | "recursive" => Ok(MethodKind::CombinationsRecursive),
            "combos-iter" | "iterative" => Ok(MethodKind::CombinationsIterative),
            other => Err(format!("unknown enumeration method `{other}`")),
        }
    }
}

/// An enumeration strategy plus its pruning switches. The exhaustive method
/// ignores both switches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EnumerationMethod {
    pub kind: MethodKind,
    pub prune_horizon: bool,
    pub prune_lexicographic: bool,
}

impl EnumerationMethod {
    pub fn new(kind: MethodKind, prune_horizon: bool, prune_lexicographic: bool) -> Self {
        let exhaustive = kind == MethodKind::Exhaustive;
        Self {
            kind,
            prune_horizon: prune_horizon && !exhaustive,
            prune_lexicographic: prune_lexicographic && !exhaustive,
        }
    }

    pub fn plain(kind: MethodKind) -> Self {
        Self::new(kind, false, false)
    }
}

impl fmt::Display for EnumerationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if self.prune_horizon {
            f.write_str("+horizon")?;
        }
        if self.prune_lexicographic {
            f.write_str("+lex")?;
        }
        Ok(())
    }
}

impl FromStr for EnumerationMethod {
    type Err = String;

    /// Parses `kind[+horizon][+lex]`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut parts = s.split('+');
        let kind: MethodKind = parts.next().unwrap_or_default().parse()?;
        let (mut horizon, mut lex) = (false, false);
        for flag in parts {
            match flag {
                "horizon" => horizon = true,
                "lex" => lex = true,
                other => return Err(format!("unknown pruning flag `{other}`")),
            }
        }
        Ok(Self::new(kind, horizon, lex))
    }
}

/// Additive instrumentation for a slice of the enumeration space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    /// Sum of running maxima over evaluated sequences.
    pub max_sum: u128,
    pub sequences_evaluated: u64,
    /// Sequences covered by lexicographic skips (all have maximum 0).
    pub sequences_skipped: u64,
    /// Pruned subtrees: lexicographic skips plus walks cut short.
    pub nodes_pruned: u64,
    /// Marble draws actually simulated.
    pub steps_evaluated: u64,
    /// Selection slots written while generating combinations.
    pub nodes_visited: u64,
}

impl Counters {
    pub fn merge(self, other: Self) -> Self {
        Self {
            max_sum: self.max_sum + other.max_sum,
            sequences_evaluated: self.sequences_evaluated + other.sequences_evaluated,
            sequences_skipped: self.sequences_skipped + other.sequences_skipped,
            nodes_pruned: self.nodes_pruned + other.nodes_pruned,
            steps_evaluated: self.steps_evaluated + other.steps_evaluated,
            nodes_visited: self.nodes_visited + other.nodes_visited,
        }
    }

    /// Sequences accounted for, evaluated or skipped.
    pub fn covered(&self) -> u64 {
        self.sequences_evaluated + self.sequences_skipped
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnumerationReport {
    pub method: EnumerationMethod,
    pub delta: u32,
    pub expected_max: ExactValue,
    #[serde(serialize_with = "serialize_display")]
    pub tally: Tally,
    /// Size of the enumeration space: n! for exhaustive, C(n, δ/2) otherwise.
    #[serde(serialize_with = "serialize_display")]
    pub space: BigUint,
    pub counters: Counters,
    pub workers: usize,
    #[serde(serialize_with = "serialize_duration_ms")]
    pub elapsed: Duration,
}

impl EnumerationReport {
    pub fn sequences_evaluated(&self) -> u64 {
        self.counters.sequences_evaluated
    }

    pub fn nodes_pruned(&self) -> u64 {
        self.counters.nodes_pruned
    }
}

fn serialize_display<T: fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn serialize_duration_ms<S: serde::Serializer>(
    d: &Duration,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub execution: Execution,
    pub deadline: Deadline,
    pub exhaustive_cap: u32,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            execution: Execution::Sequential,
            deadline: Deadline::none(),
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
        }
    }
}

impl Options {
    pub fn with_execution(execution: Execution) -> Self {
        Self {
            execution,
            ..Self::default()
        }
    }
}

/// Runs `method` on `cfg`.
pub fn enumerate(
    cfg: &WalkConfig,
    method: EnumerationMethod,
    opts: &Options,
) -> Result<EnumerationReport> {
    match method.kind {
        MethodKind::Exhaustive => exhaustive::run(cfg, opts),
        MethodKind::CombinationsRecursive => combos::run_recursive(cfg, method, opts),
        MethodKind::CombinationsIterative => combos::run_iterative(cfg, method, opts),
    }
}

/// Live state of a walk being evaluated, as seen by the horizon check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartialWalk {
    pub position: i32,
    pub reds_left: i32,
    pub running_max: i32,
}

/// True when the rest of the walk cannot raise the running maximum, so
/// evaluation may stop without changing the result.
pub fn prune_horizon(state: &PartialWalk) -> bool {
    crate::walk::should_stop(state.position, state.reds_left, state.running_max)
}

pub(crate) fn finish(
    cfg: &WalkConfig,
    method: EnumerationMethod,
    space: BigUint,
    counters: Counters,
    workers: usize,
    started: Instant,
) -> EnumerationReport {
    let tally = Tally::new(BigUint::from(counters.max_sum), space.clone());
    EnumerationReport {
        method,
        delta: cfg.delta(),
        expected_max: tally.value(),
        tally,
        space,
        counters,
        workers,
        elapsed: started.elapsed(),
    }
}

pub(crate) fn color_space(cfg: &WalkConfig) -> BigUint {
    sequence_count(cfg)
}
