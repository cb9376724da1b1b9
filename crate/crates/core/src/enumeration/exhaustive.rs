use std::time::Instant;

use super::{finish, Counters, EnumerationMethod, EnumerationReport, MethodKind, Options};
use crate::error::{Error, Result};
use crate::exact::factorial_big;
use crate::walk::WalkConfig;

const DEADLINE_POLL: u64 = 1 << 20;

/// Averages the running maximum over all n! orderings of distinguishable
/// marbles, with the default safety cap.
pub fn enumerate_exhaustive(cfg: &WalkConfig) -> Result<EnumerationReport> {
    run(cfg, &Options::default())
}

pub(super) fn run(cfg: &WalkConfig, opts: &Options) -> Result<EnumerationReport> {
    if cfg.delta() > opts.exhaustive_cap {
        return Err(Error::ExhaustiveCap {
            delta: cfg.delta(),
            n: cfg.n(),
            cap: opts.exhaustive_cap,
        });
    }
    // n! must fit the u64 counters.
    if cfg.n() > 20 {
        return Err(Error::TooLarge {
            marbles: cfg.n(),
            limit: 20,
        });
    }
    let started = Instant::now();
    let n = cfg.n() as usize;
    // Marble i is red iff i < reds.
    let is_red: Vec<bool> = (0..n).map(|i| i < cfg.reds() as usize).collect();

    // One work item per ordered choice of the first two marbles.
    let lead = n.min(2);
    let mut items: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..lead {
        items = items
            .into_iter()
            .flat_map(|prefix| {
                (0..n)
                    .filter(|i| !prefix.contains(i))
                    .map(|i| {
                        let mut p = prefix.clone();
                        p.push(i);
                        p
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }

    let deadline = opts.deadline;
    let counters = opts.execution.map_reduce(
        items,
        Counters::default(),
        |prefix| {
            let lead_colors: Vec<bool> = prefix.iter().map(|&i| is_red[i]).collect();
            let mut rest: Vec<bool> = (0..n)
                .filter(|i| !prefix.contains(i))
                .map(|i| is_red[i])
                .collect();
            permute_all(&lead_colors, &mut rest, &deadline)
        },
        Counters::merge,
    )?;

    let method = EnumerationMethod::plain(MethodKind::Exhaustive);
    Ok(finish(
        cfg,
        method,
        factorial_big(n as u64),
        counters,
        opts.execution.workers(),
        started,
    ))
}

#[inline]
fn walk_max(lead: &[bool], rest: &[bool]) -> u32 {
    let mut mu = 0i32;
    let mut max = 0i32;
    for &red in lead.iter().chain(rest) {
        if red {
            mu += 1;
            if mu > max {
                max = mu;
            }
        } else {
            mu -= 1;
        }
    }
    max as u32
}

/// Visits every permutation of `rest` (Heap's algorithm, iterative form)
/// behind the fixed `lead` marbles.
fn permute_all(lead: &[bool], rest: &mut [bool], deadline: &crate::exec::Deadline) -> Result<Counters> {
    let len = (lead.len() + rest.len()) as u64;
    let m = rest.len();
    let mut sum: u128 = 0;
    let mut visited: u64 = 0;
    let mut c = vec![0usize; m];

    sum += walk_max(lead, rest) as u128;
    visited += 1;
    let mut i = 1;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                rest.swap(0, i);
            } else {
                rest.swap(c[i], i);
            }
            sum += walk_max(lead, rest) as u128;
            visited += 1;
            if visited.is_multiple_of(DEADLINE_POLL) {
                deadline.check()?;
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(Counters {
        max_sum: sum,
        sequences_evaluated: visited,
        steps_evaluated: visited * len,
        ..Counters::default()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactValue;
    use crate::exec::Execution;

    #[test]
    fn small_urns() {
        let r = enumerate_exhaustive(&WalkConfig::new(2).unwrap()).unwrap();
        assert_eq!(r.expected_max, ExactValue::new(1, 3));
        assert_eq!(r.sequences_evaluated(), 6);
        let r = enumerate_exhaustive(&WalkConfig::new(4).unwrap()).unwrap();
        assert_eq!(r.expected_max, ExactValue::new(7, 15));
        assert_eq!(r.sequences_evaluated(), 720);
    }

    #[test]
    fn empty_urn() {
        let r = enumerate_exhaustive(&WalkConfig::new(0).unwrap()).unwrap();
        assert_eq!(r.expected_max, ExactValue::zero());
        assert_eq!(r.sequences_evaluated(), 1);
    }

    #[test]
    fn cap_refuses() {
        let err = enumerate_exhaustive(&WalkConfig::new(10).unwrap()).unwrap_err();
        assert!(matches!(err, Error::ExhaustiveCap { delta: 10, cap: 8, .. }));
        assert!(err.to_string().contains("factorial"));
    }

    #[test]
    fn parallel_matches_sequential() {
        let cfg = WalkConfig::new(6).unwrap();
        let seq = run(&cfg, &Options::default()).unwrap();
        let par = run(&cfg, &Options::with_execution(Execution::with_workers(3))).unwrap();
        assert_eq!(seq.expected_max, par.expected_max);
        assert_eq!(seq.counters, par.counters);
        assert_eq!(seq.sequences_evaluated(), 362_880);
    }
}
