//! Lattice path counting over (reds drawn, whites drawn, running max).

use num_bigint::BigUint;
use num_traits::Zero;

use crate::exact::{ExactValue, Tally};
use crate::walk::{sequence_count, WalkConfig};

/// Number of color sequences attaining each running maximum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxDistribution {
    /// `counts[m]` sequences have running maximum exactly `m`.
    pub counts: Vec<BigUint>,
    pub total: BigUint,
    /// Nonzero (cell, max) states touched.
    pub states: u64,
}

impl MaxDistribution {
    pub fn tally(&self) -> Tally {
        let weighted = self
            .counts
            .iter()
            .enumerate()
            .fold(BigUint::zero(), |acc, (m, c)| acc + c * m);
        Tally::new(weighted, self.total.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpReport {
    pub tally: Tally,
    pub value: ExactValue,
    pub states: u64,
}

pub fn max_distribution(cfg: &WalkConfig) -> MaxDistribution {
    let (reds, whites) = (cfg.reds() as usize, cfg.whites() as usize);
    let width = reds + 1;
    let empty_row = || vec![vec![BigUint::zero(); width]; whites + 1];
    // row[j][m]: paths with `i` reds and `j` whites drawn and running max m.
    let mut row = empty_row();
    row[0][0] = BigUint::from(1u32);
    let mut states = 0u64;

    for i in 0..=reds {
        // White draws stay within the row and keep the maximum.
        for j in 0..whites {
            let (head, tail) = row.split_at_mut(j + 1);
            for (dst, src) in tail[0].iter_mut().zip(&head[j]) {
                *dst += src;
            }
        }
        states += row.iter().flatten().filter(|c| !c.is_zero()).count() as u64;
        if i == reds {
            break;
        }
        // A red draw lands at height i + 1 - j.
        let mut next = empty_row();
        for (j, cell) in row.iter().enumerate() {
            let height = i as i64 + 1 - j as i64;
            for (m, count) in cell.iter().enumerate() {
                if !count.is_zero() {
                    next[j][height.max(m as i64) as usize] += count;
                }
            }
        }
        row = next;
    }
    MaxDistribution {
        counts: row.swap_remove(whites),
        total: sequence_count(cfg),
        states,
    }
}

/// E[max μ_t] by path counting.
pub fn expected_max_dp(cfg: &WalkConfig) -> DpReport {
    let dist = max_distribution(cfg);
    let tally = dist.tally();
    DpReport {
        value: tally.value(),
        tally,
        states: dist.states,
    }
}
