//! Lexicographic ranking of k-combinations of {0..n} via the combinatorial
//! number system.

use crate::walk::MAX_MARBLES;

const SIZE: usize = MAX_MARBLES as usize + 1;

/// Pascal's triangle up to n = 64. Every entry fits in u64.
pub struct Binomials {
    table: Box<[[u64; SIZE]; SIZE]>,
}

impl Binomials {
    pub fn new() -> Self {
        let mut table = Box::new([[0u64; SIZE]; SIZE]);
        for n in 0..SIZE {
            table[n][0] = 1;
            for k in 1..=n {
                table[n][k] = table[n - 1][k - 1] + if k < n { table[n - 1][k] } else { 0 };
            }
        }
        Self { table }
    }

    #[inline]
    pub fn get(&self, n: u32, k: u32) -> u64 {
        if k > n {
            0
        } else {
            self.table[n as usize][k as usize]
        }
    }
}

impl Default for Binomials {
    fn default() -> Self {
        Self::new()
    }
}

/// Lexicographic rank of a sorted combination of `n` items.
pub fn rank(binom: &Binomials, n: u32, combo: &[u32]) -> u64 {
    let k = combo.len() as u32;
    // Complement of the colex rank of the mirrored combination.
    let total = binom.get(n, k);
    let tail: u64 = combo
        .iter()
        .enumerate()
        .map(|(i, &c)| binom.get(n - 1 - c, k - i as u32))
        .sum();
    total - 1 - tail
}

/// Inverse of [`rank`].
pub fn unrank(binom: &Binomials, n: u32, k: u32, rank: u64) -> Vec<u32> {
    let total = binom.get(n, k);
    assert!(rank < total, "rank {rank} out of range for C({n},{k})");
    let mut rest = total - 1 - rank;
    let mut combo = Vec::with_capacity(k as usize);
    let mut x = n;
    for i in 0..k {
        let want = k - i;
        // Largest x with C(x, want) <= rest.
        x -= 1;
        while binom.get(x, want) > rest {
            x -= 1;
        }
        rest -= binom.get(x, want);
        combo.push(n - 1 - x);
    }
    combo
}

/// Advances `combo` to its lexicographic successor and returns the first
/// slot that changed; every later slot is rewritten too. Returns `None` (and
/// leaves `combo` untouched) at the last combination.
#[inline]
pub fn successor(n: u32, combo: &mut [u32]) -> Option<usize> {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - (k - i) as u32 {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return Some(i);
        }
    }
    None
}

/// Rewrites `combo[level..]` to the largest values they can take, giving the
/// last combination that shares `combo[..level]`.
pub fn last_with_prefix(n: u32, combo: &mut [u32], level: usize) {
    let k = combo.len();
    for (j, slot) in combo.iter_mut().enumerate().skip(level) {
        *slot = n - (k - j) as u32;
    }
}
