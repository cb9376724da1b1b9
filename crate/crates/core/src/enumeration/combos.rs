//! One representative color sequence per permutation group: the sorted red
//! positions, visited in lexicographic order.

use std::ops::Range;
use std::time::Instant;

use super::{color_space, finish, Counters, EnumerationMethod, EnumerationReport, MethodKind, Options};
use crate::combin::{last_with_prefix, rank, successor, unrank, Binomials};
use crate::error::{Error, Result};
use crate::exec::{split_range, Deadline};
use crate::walk::{eval_packed, WalkConfig};

const DEADLINE_POLL: u64 = 1 << 16;

/// Chunks per worker for partitioned iterative runs.
const CHUNKS_PER_WORKER: usize = 8;

pub fn enumerate_combinations_recursive(
    cfg: &WalkConfig,
    prune_horizon: bool,
    prune_lex: bool,
) -> Result<EnumerationReport> {
    let method = EnumerationMethod::new(MethodKind::CombinationsRecursive, prune_horizon, prune_lex);
    run_recursive(cfg, method, &Options::default())
}

pub fn enumerate_combinations_iterative(
    cfg: &WalkConfig,
    prune_horizon: bool,
    prune_lex: bool,
) -> Result<EnumerationReport> {
    let method = EnumerationMethod::new(MethodKind::CombinationsIterative, prune_horizon, prune_lex);
    run_iterative(cfg, method, &Options::default())
}

/// Level at which the prefix `combo[..=level]` already pins the running
/// maximum at 0 for this combination and every lexicographic successor up
/// to the end of the parent subtree.
///
/// Red j (0-based) at position c leaves the walk at 2j + 1 - c, so the
/// maximum stays at 0 while c > 2j. Later reds come no sooner than one slot
/// apart, hence once c ≥ reds + j no later red can lift the walk above 0.
#[inline]
fn lex_skip_level(combo: &[u32], reds: u32) -> Option<usize> {
    for (j, &c) in combo.iter().enumerate() {
        let j32 = j as u32;
        if c <= 2 * j32 {
            return None;
        }
        if c >= reds + j32 {
            return Some(j);
        }
    }
    None
}

/// Rank range of combinations, starting at `combo`, whose running maximum
/// is forced to 0 by `combo`'s prefix. `None` if `combo` is not in such a
/// block.
pub fn prune_lexicographic(
    cfg: &WalkConfig,
    binom: &Binomials,
    combo: &[u32],
) -> Option<Range<u64>> {
    let level = lex_skip_level(combo, cfg.reds())?;
    let mut last = combo.to_vec();
    last_with_prefix(cfg.n(), &mut last, level);
    Some(rank(binom, cfg.n(), combo)..rank(binom, cfg.n(), &last) + 1)
}

struct Recursion<'a> {
    n: u32,
    k: u32,
    binom: &'a Binomials,
    horizon: bool,
    lex: bool,
    deadline: Deadline,
    counters: Counters,
}

impl Recursion<'_> {
    fn evaluate(&mut self, bits: u64) -> Result<()> {
        let e = eval_packed(bits, self.n, self.k, self.horizon);
        let c = &mut self.counters;
        c.max_sum += e.max as u128;
        c.sequences_evaluated += 1;
        c.steps_evaluated += e.steps as u64;
        if e.cut_short {
            c.nodes_pruned += 1;
        }
        if c.sequences_evaluated.is_multiple_of(DEADLINE_POLL) {
            self.deadline.check()?;
        }
        Ok(())
    }

    /// Tries red slot `level` at `i`. Returns false if the rest of this
    /// level was skipped.
    fn place(&mut self, level: u32, i: u32, bits: u64, nonpositive: bool) -> Result<bool> {
        self.counters.nodes_visited += 1;
        let nonpositive = nonpositive && i > 2 * level;
        if self.lex && nonpositive && i >= self.k + level {
            let skipped = self.binom.get(self.n - i, self.k - level);
            self.counters.sequences_skipped += skipped;
            self.counters.nodes_pruned += 1;
            return Ok(false);
        }
        let bits = bits | 1 << i;
        if level + 1 == self.k {
            self.evaluate(bits)?;
        } else {
            self.select(level + 1, i + 1, bits, nonpositive)?;
        }
        Ok(true)
    }

    fn select(&mut self, level: u32, loop_start: u32, bits: u64, nonpositive: bool) -> Result<()> {
        for i in loop_start..=self.n - self.k + level {
            if !self.place(level, i, bits, nonpositive)? {
                break;
            }
        }
        Ok(())
    }
}

pub(super) fn run_recursive(
    cfg: &WalkConfig,
    method: EnumerationMethod,
    opts: &Options,
) -> Result<EnumerationReport> {
    cfg.check_enumerable()?;
    let started = Instant::now();
    let binom = Binomials::new();
    let (n, k) = (cfg.n(), cfg.reds());
    let fresh = || Recursion {
        n,
        k,
        binom: &binom,
        horizon: method.prune_horizon,
        lex: method.prune_lexicographic,
        deadline: opts.deadline,
        counters: Counters::default(),
    };

    let counters = if k == 0 {
        let mut r = fresh();
        r.evaluate(0)?;
        r.counters
    } else {
        // Top-level branches are independent; a level-0 skip at branch i
        // covers every later branch, which then contributes nothing.
        let first_skip = if method.prune_lexicographic { Some(k.max(1)) } else { None };
        let branches: Vec<u32> = (0..=n - k)
            .filter(|&i| first_skip.is_none_or(|s| i <= s))
            .collect();
        opts.execution.map_reduce(
            branches,
            Counters::default(),
            |i| {
                let mut r = fresh();
                r.place(0, i, 0, true)?;
                Ok(r.counters)
            },
            Counters::merge,
        )?
    };
    Ok(finish(cfg, method, color_space(cfg), counters, opts.execution.workers(), started))
}

pub(super) fn run_iterative(
    cfg: &WalkConfig,
    method: EnumerationMethod,
    opts: &Options,
) -> Result<EnumerationReport> {
    cfg.check_enumerable()?;
    let started = Instant::now();
    let binom = Binomials::new();
    let total = binom.get(cfg.n(), cfg.reds());
    let chunks = match opts.execution.workers() {
        1 => 1,
        w => w * CHUNKS_PER_WORKER,
    };
    let ranges = split_range(0, total, chunks);
    let counters = opts.execution.map_reduce(
        ranges,
        Counters::default(),
        |(lo, hi)| scan_range(cfg, &binom, lo..hi, method, &opts.deadline),
        Counters::merge,
    )?;
    Ok(finish(cfg, method, color_space(cfg), counters, opts.execution.workers(), started))
}

/// Processes exactly the combinations with lexicographic rank in `range`.
/// Partial results over any disjoint cover of [0, C(n, δ/2)) merge to the
/// full result.
pub fn enumerate_rank_range(
    cfg: &WalkConfig,
    range: Range<u64>,
    prune_horizon: bool,
    prune_lex: bool,
) -> Result<Counters> {
    cfg.check_enumerable()?;
    let binom = Binomials::new();
    let method = EnumerationMethod::new(MethodKind::CombinationsIterative, prune_horizon, prune_lex);
    scan_range(cfg, &binom, range, method, &Deadline::none())
}

fn scan_range(
    cfg: &WalkConfig,
    binom: &Binomials,
    range: Range<u64>,
    method: EnumerationMethod,
    deadline: &Deadline,
) -> Result<Counters> {
    let (n, k) = (cfg.n(), cfg.reds());
    let total = binom.get(n, k);
    if range.start > range.end || range.end > total {
        return Err(Error::InvalidRange {
            start: range.start,
            end: range.end,
            total,
        });
    }
    let mut c = Counters::default();
    if range.is_empty() {
        return Ok(c);
    }

    let mut combo = unrank(binom, n, k, range.start);
    c.nodes_visited += k as u64;
    let mut at = range.start;
    loop {
        if method.prune_lexicographic {
            if let Some(level) = lex_skip_level(&combo, k) {
                last_with_prefix(n, &mut combo, level);
                let block_end = rank(binom, n, &combo) + 1;
                let stop = block_end.min(range.end);
                c.sequences_skipped += stop - at;
                c.nodes_pruned += 1;
                at = stop;
                if at >= range.end {
                    break;
                }
                advance(n, k, &mut combo, method, &mut c);
                continue;
            }
        }

        let bits = combo.iter().fold(0u64, |acc, &p| acc | 1 << p);
        let e = eval_packed(bits, n, k, method.prune_horizon);
        c.max_sum += e.max as u128;
        c.sequences_evaluated += 1;
        c.steps_evaluated += e.steps as u64;
        if e.cut_short {
            c.nodes_pruned += 1;
        }
        if c.sequences_evaluated % DEADLINE_POLL == 0 {
            deadline.check()?;
        }

        at += 1;
        if at >= range.end {
            break;
        }
        advance(n, k, &mut combo, method, &mut c);
    }
    Ok(c)
}

/// Steps to the next combination and charges the slots written. A slot that
/// opens a skippable block is charged alone, since its suffix is never used.
#[inline]
fn advance(n: u32, k: u32, combo: &mut [u32], method: EnumerationMethod, c: &mut Counters) {
    let level = successor(n, combo).expect("caller stays below the range end");
    let opens_skip = method.prune_lexicographic && lex_skip_level(combo, k) == Some(level);
    c.nodes_visited += if opens_skip { 1 } else { (k as usize - level) as u64 };
}
