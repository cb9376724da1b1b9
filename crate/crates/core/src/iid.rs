//! The with-replacement comparison walk ν_t: independent ±1 steps with a
//! fixed up-probability.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{ExactValue, Tally};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IidWalkConfig {
    steps: u32,
    p: ExactValue,
    q: ExactValue,
}

impl IidWalkConfig {
    /// `steps` independent steps, up with probability `p` (0 < p < 1).
    pub fn new(steps: u32, p: ExactValue) -> Result<Self> {
        if !p.numer().is_positive() || p.numer() >= p.denom() {
            return Err(Error::InvalidProbability(p.to_string()));
        }
        let q = ExactValue::from(ExactValue::one().as_ratio() - p.as_ratio());
        Ok(Self { steps, p, q })
    }

    /// Horizon 3δ/2 with p = 1/3, aligned with the urn walk of size δ.
    pub fn matching_urn(delta: u32) -> Self {
        Self::new(delta * 3 / 2, ExactValue::new(1, 3)).expect("1/3 is a valid probability")
    }

    pub fn steps(&self) -> u32 {
        self.steps
    }

    pub fn p(&self) -> &ExactValue {
        &self.p
    }

    pub fn q(&self) -> &ExactValue {
        &self.q
    }

    /// p as (a, b) with p = a/b in lowest terms.
    pub(crate) fn p_parts(&self) -> (BigUint, BigUint) {
        (
            self.p.numer().to_biguint().expect("p > 0"),
            self.p.denom().to_biguint().expect("denominator > 0"),
        )
    }

    pub(crate) fn p_parts_u64(&self) -> Option<(u64, u64)> {
        Some((self.p.numer().to_u64()?, self.p.denom().to_u64()?))
    }
}

/// Exact E[max_{t ≤ steps} ν_t] as an unreduced tally over b^steps.
///
/// Tracks the gap d = (running max) − (position). The maximum rises by one
/// exactly when an up-step is taken from d = 0, so
/// E[max] = Σ_t p · P(d_{t-1} = 0). Path weights are kept as integers:
/// an up-step weighs a, a down-step b − a.
pub fn expected_max_iid_tally(cfg: &IidWalkConfig) -> Tally {
    let (a, b) = cfg.p_parts();
    let down = &b - &a;
    let steps = cfg.steps as usize;
    // weight[d] over b^t
    let mut weight: Vec<BigUint> = vec![BigUint::one()];
    let mut numerator = BigUint::zero();
    let mut pow_b = vec![BigUint::one(); steps + 1];
    for t in 1..=steps {
        pow_b[t] = &pow_b[t - 1] * &b;
    }
    for t in 1..=steps {
        numerator += &weight[0] * &a * &pow_b[steps - t];
        let mut next = vec![BigUint::zero(); weight.len() + 1];
        for (d, w) in weight.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            // up
            let up = d.saturating_sub(1);
            next[up] += w * &a;
            // down
            next[d + 1] += w * &down;
        }
        weight = next;
    }
    Tally::new(numerator, pow_b[steps].clone())
}

pub fn expected_max_iid(cfg: &IidWalkConfig) -> ExactValue {
    expected_max_iid_tally(cfg).value()
}

/// Infinite-horizon expected maximum p / (q − p), from
/// P(max ≥ k) = (p/q)^k. Requires p < 1/2.
pub fn expected_max_iid_limit(p: &ExactValue) -> Result<ExactValue> {
    let half = ExactValue::new(1, 2);
    if !p.numer().is_positive() || p.numer() >= p.denom() {
        return Err(Error::InvalidProbability(p.to_string()));
    }
    if *p >= half {
        return Err(Error::NoFiniteLimit(p.to_string()));
    }
    let p = p.as_ratio();
    let q = num_rational::BigRational::one() - p;
    Ok(ExactValue::from(p / (q - p)))
}

/// Reference implementation over the full (height, running max) state,
/// kept for cross-checking the gap recursion.
pub fn expected_max_iid_full_state(cfg: &IidWalkConfig) -> ExactValue {
    use std::collections::BTreeMap;

    let p = cfg.p.as_ratio().clone();
    let q = cfg.q.as_ratio().clone();
    let mut states: BTreeMap<(i64, i64), num_rational::BigRational> = BTreeMap::new();
    states.insert((0, 0), num_rational::BigRational::one());
    for _ in 0..cfg.steps {
        let mut next: BTreeMap<(i64, i64), num_rational::BigRational> = BTreeMap::new();
        for ((h, m), pr) in states {
            *next.entry((h + 1, m.max(h + 1))).or_default() += &pr * &p;
            *next.entry((h - 1, m)).or_default() += &pr * &q;
        }
        states = next;
    }
    let total = states
        .into_iter()
        .fold(num_rational::BigRational::zero(), |acc, ((_, m), pr)| {
            acc + pr * BigInt::from(m)
        });
    ExactValue::from(total)
}
