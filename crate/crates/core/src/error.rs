use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("delta must be an even non-negative integer, got {0}")]
    OddDelta(u32),

    #[error("sequence has {reds} red and {whites} white marbles, expected {expected_reds} red and {expected_whites} white")]
    MalformedSequence {
        reds: u32,
        whites: u32,
        expected_reds: u32,
        expected_whites: u32,
    },

    #[error("urn of {marbles} marbles is too large for enumeration (limit {limit})")]
    TooLarge { marbles: u32, limit: u32 },

    #[error("exhaustive enumeration refused at delta={delta}: n! = {n}! permutations grows factorially (cap is delta={cap})")]
    ExhaustiveCap { delta: u32, n: u32, cap: u32 },

    #[error("rank range {start}..{end} is invalid for {total} combinations")]
    InvalidRange { start: u64, end: u64, total: u64 },

    #[error("probability {0} is outside the allowed range")]
    InvalidProbability(String),

    #[error("no finite expected maximum for p = {0} (requires p < 1/2)")]
    NoFiniteLimit(String),

    #[error("trials must be at least 1")]
    NoTrials,

    #[error("computation exceeded its time budget")]
    TimedOut,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
