//! The urn walk: δ white and δ/2 red marbles drawn without replacement,
//! red steps up and white steps down.

use crate::error::{Error, Result};
use crate::exact::{binomial_big, ExactValue};
use num_bigint::BigUint;

/// Longest sequence representable as a packed bit string.
pub const MAX_MARBLES: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Red,
    White,
}

/// Urn parameters. `delta` white marbles, `reds` red marbles, `n` in total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkConfig {
    delta: u32,
    reds: u32,
    n: u32,
    p: ExactValue,
    q: ExactValue,
}

impl WalkConfig {
    /// The standard urn: δ whites and δ/2 reds, so p = 1/3.
    pub fn new(delta: u32) -> Result<Self> {
        if !delta.is_multiple_of(2) {
            return Err(Error::OddDelta(delta));
        }
        Self::with_counts(delta, delta / 2)
    }

    /// An urn with an arbitrary red count. The walk ends at `reds - whites`.
    pub fn with_counts(whites: u32, reds: u32) -> Result<Self> {
        let n = whites + reds;
        let (p, q) = if n == 0 {
            (ExactValue::new(1, 3), ExactValue::new(2, 3))
        } else {
            (ExactValue::new(reds, n), ExactValue::new(whites, n))
        };
        Ok(Self {
            delta: whites,
            reds,
            n,
            p,
            q,
        })
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn whites(&self) -> u32 {
        self.delta
    }

    pub fn reds(&self) -> u32 {
        self.reds
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> &ExactValue {
        &self.p
    }

    pub fn q(&self) -> &ExactValue {
        &self.q
    }

    /// Position every walk ends at.
    pub fn final_position(&self) -> i64 {
        self.reds as i64 - self.delta as i64
    }

    pub(crate) fn check_enumerable(&self) -> Result<()> {
        if self.n > MAX_MARBLES {
            return Err(Error::TooLarge {
                marbles: self.n,
                limit: MAX_MARBLES,
            });
        }
        Ok(())
    }
}

/// Number of distinct color sequences, C(n, reds). Each is equally likely.
pub fn sequence_count(cfg: &WalkConfig) -> BigUint {
    binomial_big(cfg.n as u64, cfg.reds as u64)
}

/// One ordering of marble colors. Bit `t` set means the marble drawn at
/// step `t` is red.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StepSequence {
    bits: u64,
    len: u32,
}

impl StepSequence {
    pub fn from_colors(colors: &[Color]) -> Result<Self> {
        if colors.len() > MAX_MARBLES as usize {
            return Err(Error::TooLarge {
                marbles: colors.len() as u32,
                limit: MAX_MARBLES,
            });
        }
        let bits = colors
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == Color::Red)
            .fold(0u64, |acc, (t, _)| acc | 1 << t);
        Ok(Self {
            bits,
            len: colors.len() as u32,
        })
    }

    /// Builds a sequence from sorted red positions.
    pub fn from_red_positions(len: u32, positions: &[u32]) -> Result<Self> {
        if len > MAX_MARBLES {
            return Err(Error::TooLarge {
                marbles: len,
                limit: MAX_MARBLES,
            });
        }
        let mut bits = 0u64;
        for &p in positions {
            assert!(p < len, "red position {p} out of range");
            bits |= 1 << p;
        }
        Ok(Self { bits, len })
    }

    #[cfg(test)]
    pub(crate) fn from_bits(bits: u64, len: u32) -> Self {
        Self { bits, len }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn reds(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn whites(&self) -> u32 {
        self.len - self.reds()
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> + '_ {
        (0..self.len).map(|t| {
            if self.bits >> t & 1 == 1 {
                Color::Red
            } else {
                Color::White
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkTrace {
    /// μ_0 ..= μ_n, starting at 0.
    pub positions: Vec<i64>,
    pub max_position: i64,
}

impl WalkTrace {
    pub fn final_position(&self) -> i64 {
        *self.positions.last().expect("trace always holds μ_0")
    }

    pub fn min_position(&self) -> i64 {
        self.positions.iter().copied().min().unwrap_or(0)
    }
}

/// Walks `seq` under the urn rules and records its running maximum.
pub fn max_prefix(cfg: &WalkConfig, seq: &StepSequence) -> Result<WalkTrace> {
    if seq.reds() != cfg.reds() || seq.whites() != cfg.whites() {
        return Err(Error::MalformedSequence {
            reds: seq.reds(),
            whites: seq.whites(),
            expected_reds: cfg.reds(),
            expected_whites: cfg.whites(),
        });
    }
    let mut positions = Vec::with_capacity(seq.len() as usize + 1);
    let mut mu = 0i64;
    let mut max = 0i64;
    positions.push(mu);
    for color in seq.colors() {
        match color {
            Color::Red => {
                mu += 1;
                if mu > max {
                    max = mu;
                }
            }
            Color::White => mu -= 1,
        }
        positions.push(mu);
    }
    Ok(WalkTrace {
        positions,
        max_position: max,
    })
}

/// Outcome of evaluating one packed sequence step by step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct StepEval {
    pub max: u32,
    pub steps: u32,
    pub cut_short: bool,
}

/// Running maximum of a packed sequence, optionally stopping as soon as the
/// maximum can no longer grow (position plus reds left ≤ running max).
#[inline]
pub(crate) fn eval_packed(bits: u64, len: u32, reds: u32, horizon: bool) -> StepEval {
    let mut mu = 0i32;
    let mut max = 0i32;
    let mut reds_left = reds as i32;
    for t in 0..len {
        if bits >> t & 1 == 1 {
            mu += 1;
            reds_left -= 1;
            if mu > max {
                max = mu;
            }
        } else {
            mu -= 1;
        }
        if horizon && t + 1 < len && should_stop(mu, reds_left, max) {
            return StepEval {
                max: max as u32,
                steps: t + 1,
                cut_short: true,
            };
        }
    }
    StepEval {
        max: max as u32,
        steps: len,
        cut_short: false,
    }
}

/// True once the running maximum is out of reach: even if every remaining
/// red came next the walk could not exceed `running_max`.
#[inline]
pub fn should_stop(position: i32, reds_left: i32, running_max: i32) -> bool {
    position + reds_left <= running_max
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Color::{Red as R, White as W};

    fn trace(delta: u32, colors: &[Color]) -> WalkTrace {
        let cfg = WalkConfig::new(delta).unwrap();
        max_prefix(&cfg, &StepSequence::from_colors(colors).unwrap()).unwrap()
    }

    #[test]
    fn config_invariants() {
        let cfg = WalkConfig::new(6).unwrap();
        assert_eq!((cfg.reds(), cfg.n()), (3, 9));
        assert_eq!(cfg.p(), &ExactValue::new(1, 3));
        assert_eq!(cfg.q(), &ExactValue::new(2, 3));
        assert_eq!(WalkConfig::new(7), Err(Error::OddDelta(7)));
        let empty = WalkConfig::new(0).unwrap();
        assert_eq!(empty.n(), 0);
        assert_eq!(empty.final_position(), 0);
    }

    #[test]
    fn max_prefix_examples() {
        let t = trace(2, &[R, W, W]);
        assert_eq!((t.max_position, t.final_position()), (1, -1));
        assert_eq!(t.positions, vec![0, 1, 0, -1]);

        let t = trace(2, &[W, W, R]);
        assert_eq!((t.max_position, t.final_position()), (0, -1));

        let t = trace(4, &[R, R, W, W, W, W]);
        assert_eq!(t.positions, vec![0, 1, 2, 1, 0, -1, -2]);
        assert_eq!((t.max_position, t.final_position()), (2, -2));
    }

    #[test]
    fn malformed_sequence_rejected() {
        let cfg = WalkConfig::new(2).unwrap();
        let seq = StepSequence::from_colors(&[R, R, W]).unwrap();
        assert!(matches!(
            max_prefix(&cfg, &seq),
            Err(Error::MalformedSequence { reds: 2, .. })
        ));
        let short = StepSequence::from_colors(&[R, W]).unwrap();
        assert!(max_prefix(&cfg, &short).is_err());
    }

    #[test]
    fn sequence_counts() {
        let count = |d| sequence_count(&WalkConfig::new(d).unwrap());
        assert_eq!(count(2), BigUint::from(3u32));
        assert_eq!(count(4), BigUint::from(15u32));
        assert_eq!(count(6), BigUint::from(84u32));
        assert_eq!(count(0), BigUint::from(1u32));
    }

    #[test]
    fn stop_rule() {
        assert!(should_stop(-3, 2, 0));
        assert!(!should_stop(0, 1, 0));
    }

    fn arb_sequence() -> impl Strategy<Value = (u32, Vec<Color>)> {
        (0u32..=20).prop_flat_map(|half| {
            let delta = half * 2;
            let mut colors = vec![W; delta as usize];
            colors.extend(std::iter::repeat_n(R, half as usize));
            (Just(delta), Just(colors).prop_shuffle())
        })
    }

    proptest! {
        #[test]
        fn trace_invariants((delta, colors) in arb_sequence()) {
            let t = trace(delta, &colors);
            let half = delta as i64 / 2;
            prop_assert_eq!(t.positions[0], 0);
            prop_assert!(t.positions.windows(2).all(|w| (w[1] - w[0]).abs() == 1));
            prop_assert_eq!(t.max_position, *t.positions.iter().max().unwrap());
            prop_assert!((0..=half).contains(&t.max_position));
            prop_assert!(t.min_position() >= -(delta as i64));
            prop_assert_eq!(t.final_position(), -half);
        }

        #[test]
        fn packed_eval_agrees((delta, colors) in arb_sequence(), horizon: bool) {
            let seq = StepSequence::from_colors(&colors).unwrap();
            let t = trace(delta, &colors);
            let e = eval_packed(seq.bits(), seq.len(), delta / 2, horizon);
            prop_assert_eq!(e.max as i64, t.max_position);
            prop_assert!(e.steps <= seq.len());
            if !horizon {
                prop_assert_eq!(e.steps, seq.len());
            }
        }
    }
}
