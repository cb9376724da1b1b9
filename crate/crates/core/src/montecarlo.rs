//! Seeded Monte Carlo estimates of E[max] for both walks.
//!
//! Trials are split into one batch per worker. Batch `w` draws from
//! ChaCha8 seeded with `seed` on stream `w`, and batch sums are integers,
//! so the merged estimate depends only on (seed, trials, workers, config).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{split_range, Execution};
use crate::iid::IidWalkConfig;
use crate::walk::WalkConfig;

pub const GENERATOR: &str = "ChaCha8Rng";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleReport {
    pub trials: u64,
    pub mean_max: f64,
    pub std_error: f64,
    pub seed: u64,
    pub workers: usize,
    pub generator: &'static str,
}

impl SampleReport {
    /// Distance from `target` in standard errors.
    pub fn z_score(&self, target: f64) -> f64 {
        if self.std_error == 0.0 {
            if self.mean_max == target {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean_max - target).abs() / self.std_error
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    count: u64,
    sum: u128,
    sum_sq: u128,
}

impl Moments {
    fn push(&mut self, x: u64) {
        self.count += 1;
        self.sum += x as u128;
        self.sum_sq += (x as u128) * (x as u128);
    }

    fn merge(self, o: Self) -> Self {
        Self {
            count: self.count + o.count,
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
        }
    }

    fn report(&self, seed: u64, workers: usize) -> SampleReport {
        let n = self.count as f64;
        let mean = self.sum as f64 / n;
        // Sample variance from integer moments: (Σx² − (Σx)²/n) / (n − 1).
        let std_error = if self.count > 1 {
            let centered = self.sum_sq as f64 - (self.sum as f64) * (self.sum as f64) / n;
            (centered.max(0.0) / (n - 1.0)).sqrt() / n.sqrt()
        } else {
            0.0
        };
        SampleReport {
            trials: self.count,
            mean_max: mean,
            std_error,
            seed,
            workers,
            generator: GENERATOR,
        }
    }
}

fn run_batches<F>(trials: u64, seed: u64, exec: Execution, one_walk: F) -> Result<SampleReport>
where
    F: Fn(&mut ChaCha8Rng) -> u64 + Sync + Send,
{
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let workers = exec.workers();
    let batches: Vec<(u64, u64)> = split_range(0, trials, workers)
        .into_iter()
        .enumerate()
        .map(|(w, (lo, hi))| (w as u64, hi - lo))
        .collect();
    let moments = exec.map_reduce(
        batches,
        Moments::default(),
        |(stream, count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            let mut m = Moments::default();
            for _ in 0..count {
                m.push(one_walk(&mut rng));
            }
            Ok(m)
        },
        Moments::merge,
    )?;
    Ok(moments.report(seed, workers))
}

/// Draws marbles without replacement: red with probability
/// reds-left / marbles-left.
pub fn sample_urn_walk(
    cfg: &WalkConfig,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<SampleReport> {
    let (reds, n) = (cfg.reds() as u64, cfg.n() as u64);
    let end = cfg.final_position();
    run_batches(trials, seed, exec, |rng| {
        let (mut reds_left, mut left) = (reds, n);
        let (mut mu, mut max) = (0i64, 0i64);
        while left > 0 {
            if rng.random_range(0..left) < reds_left {
                reds_left -= 1;
                mu += 1;
                max = max.max(mu);
            } else {
                mu -= 1;
            }
            left -= 1;
        }
        assert_eq!(mu, end, "urn walk must end at reds - whites");
        max as u64
    })
}

/// Independent ±1 steps, up with probability a/b.
pub fn sample_iid_walk(
    cfg: &IidWalkConfig,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<SampleReport> {
    let (a, b) = cfg
        .p_parts_u64()
        .ok_or_else(|| Error::InvalidProbability(cfg.p().to_string()))?;
    let steps = cfg.steps();
    run_batches(trials, seed, exec, |rng| {
        let (mut mu, mut max) = (0i64, 0i64);
        for _ in 0..steps {
            if rng.random_range(0..b) < a {
                mu += 1;
                max = max.max(mu);
            } else {
                mu -= 1;
            }
        }
        max as u64
    })
}
