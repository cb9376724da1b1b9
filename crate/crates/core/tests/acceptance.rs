//! Acceptance criteria. Each test prints one PASS/FAIL line.

use std::process::Command;
use std::thread::available_parallelism;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Signed;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use urnwalk::enumeration::{enumerate, Counters, Options, DEFAULT_EXHAUSTIVE_CAP};
use urnwalk::exact::factorial_big;
use urnwalk::reporting::build_figure_series;
use urnwalk::{
    enumerate_combinations_iterative, enumerate_exhaustive, enumerate_rank_range, expected_max_dp,
    expected_max_iid, expected_max_iid_limit, sample_urn_walk, EnumerationMethod, ExactValue,
    Execution, IidWalkConfig, MethodKind, WalkConfig,
};

/// Urn-walk decimals, δ = 2, 4, ..., 22.
const URN_DECIMALS: [&str; 11] = [
    "0.333333", "0.466666", "0.547619", "0.604040", "0.646354", "0.679595", "0.706570", "0.728995",
    "0.747990", "0.764323", "0.778541",
];

/// With-replacement decimals at horizon 3δ/2, δ = 2, 4, ..., 18.
const IID_DECIMALS: [&str; 9] = [
    "0.555556", "0.718793", "0.813748", "0.868691", "0.906453", "0.931139", "0.94919", "0.961671",
    "0.971107",
];

fn verdict(id: u32, title: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("[PASS] criterion {id:>2}: {title}");
    } else {
        println!("[FAIL] criterion {id:>2}: {title}");
        for f in failures {
            println!("         {f}");
        }
        panic!("criterion {id} failed: {}", failures.join("; "));
    }
}

fn cfg(delta: u32) -> WalkConfig {
    WalkConfig::new(delta).unwrap()
}

fn decimal(s: &str) -> ExactValue {
    let (int, frac) = s.split_once('.').unwrap();
    ExactValue::new(
        format!("{int}{frac}").parse::<i64>().unwrap(),
        10i64.pow(frac.len() as u32),
    )
}

/// |value - target| <= tol, compared exactly.
fn within(value: &ExactValue, target: &ExactValue, tol: &ExactValue) -> bool {
    (value.as_ratio() - target.as_ratio()).abs() <= *tol.as_ratio()
}

fn half_ulp() -> ExactValue {
    ExactValue::new(5, 10_000_000)
}

fn workers() -> Execution {
    Execution::with_workers(available_parallelism().map_or(1, |n| n.get()))
}

#[test]
fn criterion_01_exact_urn_fractions() {
    let mut failures = Vec::new();
    let expected = [(2, ExactValue::new(1, 3)), (4, ExactValue::new(7, 15)), (6, ExactValue::new(46, 84))];

    // Exhaustive oracle confirms each value first.
    for (delta, want) in &expected {
        let oracle = enumerate_exhaustive(&cfg(*delta)).unwrap().expected_max;
        if &oracle != want {
            failures.push(format!("exhaustive oracle δ={delta}: {oracle} != {want}"));
        }
    }

    let started = Instant::now();
    let printed: Vec<String> = expected
        .iter()
        .map(|(delta, _)| {
            let out = Command::new(env!("CARGO_BIN_EXE_urnwalk"))
                .args(["compute", "--model", "urn", "--delta", &delta.to_string(), "--format", "json"])
                .output()
                .unwrap();
            assert!(out.status.success());
            let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
            v["exact"].as_str().unwrap().to_string()
        })
        .collect();
    let elapsed = started.elapsed();

    for ((delta, want), got) in expected.iter().zip(&printed) {
        let (a, b) = got.split_once('/').unwrap_or((got, "1"));
        let value = ExactValue::new(a.parse::<i64>().unwrap(), b.parse::<i64>().unwrap());
        if &value != want {
            failures.push(format!("δ={delta}: compute printed {got}, want {want}"));
        }
    }
    if printed != ["1/3", "7/15", "46/84"] {
        failures.push(format!("printed fractions {printed:?}"));
    }
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("took {elapsed:?} (limit 1 s)"));
    }
    verdict(1, "compute --model urn yields 1/3, 7/15, 46/84 exactly", &failures);
}

#[test]
fn criterion_02_urn_decimal_series() {
    let mut failures = Vec::new();
    let tol = half_ulp();

    let started = Instant::now();
    let dp: Vec<ExactValue> = (1..=11).map(|i| expected_max_dp(&cfg(2 * i)).value).collect();
    let dp_time = started.elapsed();

    for (i, (value, paper)) in dp.iter().zip(URN_DECIMALS).enumerate() {
        let delta = 2 * (i + 1);
        let target = decimal(paper);
        if !within(value, &target, &tol) {
            let gap = (value.as_ratio() - target.as_ratio()).abs();
            failures.push(format!(
                "dp δ={delta}: {value} = {} vs {paper}, |diff| = {:.3e} > 5e-7",
                value.to_decimal(9),
                ExactValue::from(gap).to_f64()
            ));
        }
    }
    if dp_time >= Duration::from_secs(10) {
        failures.push(format!("dp took {dp_time:?} (limit 10 s)"));
    }

    let started = Instant::now();
    let opts = Options::with_execution(workers());
    for delta in (2..=16).step_by(2) {
        let m = EnumerationMethod::new(MethodKind::CombinationsIterative, true, true);
        let r = enumerate(&cfg(delta), m, &opts).unwrap();
        let idx = (delta / 2 - 1) as usize;
        if r.expected_max != dp[idx] {
            failures.push(format!("iterative δ={delta}: {} != dp {}", r.expected_max, dp[idx]));
        }
        if !within(&r.expected_max, &decimal(URN_DECIMALS[idx]), &tol) {
            failures.push(format!("iterative δ={delta}: off table by more than 5e-7"));
        }
    }
    let iter_time = started.elapsed();
    if iter_time >= Duration::from_secs(300) {
        failures.push(format!("iterative took {iter_time:?} (limit 5 min)"));
    }
    verdict(2, "urn decimals δ=2..22 match the table to ±5e-7", &failures);
}

#[test]
fn criterion_03_iid_fractions_and_decimals() {
    let mut failures = Vec::new();
    let started = Instant::now();
    let exact = [(2, 15, 27), (4, 524, 729), (6, 16017, 19683)];
    for (delta, a, b) in exact {
        let tally = urnwalk::iid::expected_max_iid_tally(&IidWalkConfig::matching_urn(delta));
        if tally.to_string() != format!("{a}/{b}") || tally.value() != ExactValue::new(a, b) {
            failures.push(format!("δ={delta}: {tally}, want {a}/{b}"));
        }
    }
    for (i, paper) in IID_DECIMALS.iter().enumerate() {
        let delta = 2 * (i as u32 + 1);
        let v = expected_max_iid(&IidWalkConfig::matching_urn(delta));
        if !within(&v, &decimal(paper), &half_ulp()) {
            failures.push(format!("δ={delta}: {} vs {paper}", v.to_decimal(9)));
        }
    }
    let elapsed = started.elapsed();
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("took {elapsed:?} (limit 1 s)"));
    }
    verdict(3, "with-replacement fractions and decimals", &failures);
}

#[test]
fn criterion_04_limit_identity() {
    let mut failures = Vec::new();
    let started = Instant::now();
    let third = ExactValue::new(1, 3);
    let limit = expected_max_iid_limit(&third).unwrap();
    if limit != ExactValue::one() {
        failures.push(format!("limit(1/3) = {limit}"));
    }
    let far = expected_max_iid(&IidWalkConfig::new(600, third).unwrap());
    if !within(&far, &ExactValue::one(), &ExactValue::new(1, 1_000_000)) {
        failures.push(format!("horizon 600: {}", far.to_decimal(12)));
    }
    let elapsed = started.elapsed();
    if elapsed >= Duration::from_secs(5) {
        failures.push(format!("took {elapsed:?} (limit 5 s)"));
    }
    verdict(4, "limit(1/3) = 1 and horizon-600 value within 1e-6 of 1", &failures);
}

#[test]
fn criterion_05_oracle_equivalence() {
    let mut failures = Vec::new();
    let opts = Options {
        execution: workers(),
        ..Options::default()
    };
    for delta in (2..=8).step_by(2) {
        let c = cfg(delta);
        let started = Instant::now();
        let exhaustive = enumerate(&c, EnumerationMethod::plain(MethodKind::Exhaustive), &opts).unwrap();
        let exhaustive_time = started.elapsed();
        let recursive = enumerate(&c, EnumerationMethod::plain(MethodKind::CombinationsRecursive), &opts).unwrap();
        let iterative = enumerate(&c, EnumerationMethod::plain(MethodKind::CombinationsIterative), &opts).unwrap();
        let dp = expected_max_dp(&c).value;
        let values = [&exhaustive.expected_max, &recursive.expected_max, &iterative.expected_max, &dp];
        if values.iter().any(|v| *v != &dp) {
            failures.push(format!("δ={delta}: {values:?}"));
        }
        let limit = if delta == 8 { 1800 } else { 60 };
        if exhaustive_time >= Duration::from_secs(limit) {
            failures.push(format!("exhaustive δ={delta} took {exhaustive_time:?}"));
        }
        println!("         δ={delta}: {dp} (exhaustive {exhaustive_time:.2?})");
    }
    assert_eq!(DEFAULT_EXHAUSTIVE_CAP, 8);
    verdict(5, "exhaustive, recursive, iterative and dp agree for δ ≤ 8", &failures);
}

#[test]
fn criterion_06_pruning_soundness() {
    let mut failures = Vec::new();
    for delta in (2..=14).step_by(2) {
        let c = cfg(delta);
        for kind in [MethodKind::CombinationsRecursive, MethodKind::CombinationsIterative] {
            let run = |h, l| enumerate(&c, EnumerationMethod::new(kind, h, l), &Options::default()).unwrap();
            let base = run(false, false);
            for (h, l) in [(true, false), (false, true), (true, true)] {
                let r = run(h, l);
                let tag = format!("{} δ={delta}", r.method);
                if r.expected_max != base.expected_max {
                    failures.push(format!("{tag}: {} != {}", r.expected_max, base.expected_max));
                }
                let no_horizon = run(false, l);
                if h && r.counters.steps_evaluated >= no_horizon.counters.steps_evaluated {
                    failures.push(format!("{tag}: steps not reduced"));
                }
                let no_lex = run(h, false);
                if l && delta >= 4 && r.sequences_evaluated() >= no_lex.sequences_evaluated() {
                    failures.push(format!("{tag}: sequences not reduced"));
                }
                if delta >= 4 && r.nodes_pruned() == 0 {
                    failures.push(format!("{tag}: nothing pruned"));
                }
                let space: u64 = (&r.space).try_into().unwrap();
                if r.counters.covered() != space {
                    failures.push(format!("{tag}: covered {} of {space}", r.counters.covered()));
                }
            }
        }
    }
    verdict(6, "pruning never changes results and strictly reduces work", &failures);
}

#[test]
fn criterion_07_convergence_properties() {
    let mut failures = Vec::new();
    let started = Instant::now();
    let series = build_figure_series(60).unwrap();
    let one = ExactValue::one();
    for pair in series.points.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if b.urn <= a.urn {
            failures.push(format!("urn not increasing at δ={}", b.delta));
        }
        if b.delta > 8 {
            let gap_a = a.iid.as_ratio() - a.urn.as_ratio();
            let gap_b = b.iid.as_ratio() - b.urn.as_ratio();
            if gap_b >= gap_a {
                failures.push(format!("gap not decreasing at δ={}", b.delta));
            }
        }
    }
    for p in &series.points {
        if p.urn >= one {
            failures.push(format!("urn ≥ 1 at δ={}", p.delta));
        }
        if p.urn > p.iid {
            failures.push(format!("urn above iid at δ={}", p.delta));
        }
    }
    let elapsed = started.elapsed();
    if elapsed >= Duration::from_secs(60) {
        failures.push(format!("took {elapsed:?} (limit 60 s)"));
    }
    verdict(7, "urn series increasing and < 1, gap shrinking for 8 ≤ δ ≤ 60", &failures);
}

#[test]
fn criterion_08_partition_determinism() {
    let mut failures = Vec::new();
    let c = cfg(12);
    let total: u64 = (&urnwalk::sequence_count(&c)).try_into().unwrap();
    let whole = enumerate_combinations_iterative(&c, false, false).unwrap().expected_max;
    let mut rng = ChaCha8Rng::seed_from_u64(2005);
    for parts in [1usize, 3, 7] {
        let mut cuts: Vec<u64> = (1..parts).map(|_| rng.random_range(1..total)).collect();
        cuts.extend([0, total]);
        cuts.sort_unstable();
        cuts.dedup();
        for (h, l) in [(false, false), (true, true)] {
            let merged = cuts
                .windows(2)
                .rev()
                .map(|w| enumerate_rank_range(&c, w[0]..w[1], h, l).unwrap())
                .fold(Counters::default(), Counters::merge);
            let value = ExactValue::new(merged.max_sum as u64, total);
            if value != whole || merged.covered() != total {
                failures.push(format!("{parts} parts {cuts:?} h={h} l={l}: {value}"));
            }
        }
    }
    verdict(8, "δ=12 iterative split into 1, 3, 7 ranges gives one fraction", &failures);
}

#[test]
fn criterion_09_monte_carlo() {
    let mut failures = Vec::new();
    let c = cfg(10);
    let exec = workers();
    let a = sample_urn_walk(&c, 1_000_000, 20_250_101, exec).unwrap();
    let b = sample_urn_walk(&c, 1_000_000, 20_250_101, exec).unwrap();
    let z = a.z_score(0.646354);
    println!("         mean {:.6} ± {:.6} (z = {z:.2})", a.mean_max, a.std_error);
    if z >= 3.0 {
        failures.push(format!("mean {} is {z:.2} standard errors away", a.mean_max));
    }
    let (ja, jb) = (serde_json::to_vec(&a).unwrap(), serde_json::to_vec(&b).unwrap());
    if ja != jb {
        failures.push("reports differ between runs".into());
    }

    let run_cli = || {
        Command::new(env!("CARGO_BIN_EXE_urnwalk"))
            .args(["sample", "--delta", "10", "--trials", "200000", "--seed", "7", "--workers", "3", "--format", "json"])
            .output()
            .unwrap()
            .stdout
    };
    if run_cli() != run_cli() {
        failures.push("CLI sample output differs between runs".into());
    }
    verdict(9, "10^6 urn trials at δ=10 within 3 SE; seeded reports reproducible", &failures);
}

#[test]
fn criterion_10_grouping_factor() {
    let mut failures = Vec::new();
    for delta in [2u64, 4, 6] {
        let c = cfg(delta as u32);
        let ex = enumerate_exhaustive(&c).unwrap().sequences_evaluated();
        let co = enumerate_combinations_iterative(&c, false, false).unwrap().sequences_evaluated();
        let factor = factorial_big(delta) * factorial_big(delta / 2);
        if BigUint::from(ex) != BigUint::from(co) * &factor || !ex.is_multiple_of(co) {
            failures.push(format!("δ={delta}: {ex}/{co} != {factor}"));
        }
    }
    verdict(10, "n!/C(n, δ/2) = δ!·(δ/2)! for δ=2,4,6", &failures);
}
