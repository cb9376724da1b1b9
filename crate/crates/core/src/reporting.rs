//! Table, figure and benchmark series, written as CSV.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::enumeration::{
    enumerate, expected_max_dp, EnumerationMethod, MethodKind, Options, DEFAULT_EXHAUSTIVE_CAP,
};
use crate::error::{Error, Result};
use crate::exact::{ExactValue, Tally};
use crate::exec::{Deadline, Execution};
use crate::iid::{expected_max_iid, expected_max_iid_limit, expected_max_iid_tally, IidWalkConfig};
use crate::walk::WalkConfig;

pub const CSV_HEADER: [&str; 10] = [
    "delta",
    "whites",
    "reds",
    "model",
    "method",
    "exact",
    "decimal",
    "runtime_ms",
    "sequences_evaluated",
    "nodes_pruned",
];

pub const FIGURE_HEADER: [&str; 4] = ["delta", "urn", "iid", "limit"];

pub const DEFAULT_PRECISION: usize = 6;

/// How the urn value of a row is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum UrnMethod {
    Dp,
    Enumerate(EnumerationMethod),
}

impl fmt::Display for UrnMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UrnMethod::Dp => f.write_str("dp"),
            UrnMethod::Enumerate(m) => m.fmt(f),
        }
    }
}

impl FromStr for UrnMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "dp" {
            Ok(UrnMethod::Dp)
        } else {
            s.parse().map(UrnMethod::Enumerate)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Done {
        tally: Tally,
        elapsed: Duration,
        sequences_evaluated: Option<u64>,
        nodes_pruned: Option<u64>,
    },
    Infeasible(String),
    TimedOut,
}

impl Outcome {
    pub fn tally(&self) -> Option<&Tally> {
        match self {
            Outcome::Done { tally, .. } => Some(tally),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<ExactValue> {
        self.tally().map(Tally::value)
    }

    pub fn is_failure(&self) -> bool {
        !matches!(self, Outcome::Done { .. })
    }

    fn from_error(err: Error) -> Self {
        match err {
            Error::TimedOut => Outcome::TimedOut,
            other => Outcome::Infeasible(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRow {
    pub delta: u32,
    pub whites: u32,
    pub reds: u32,
    pub method: UrnMethod,
    pub urn: Outcome,
    pub iid: Outcome,
}

impl SeriesRow {
    pub fn urn_exact(&self) -> Option<ExactValue> {
        self.urn.value()
    }

    pub fn iid_exact(&self) -> Option<ExactValue> {
        self.iid.value()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub execution: Execution,
    pub exhaustive_cap: u32,
    /// Per-cell wall-clock budget.
    pub timeout: Option<Duration>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            execution: Execution::Sequential,
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
            timeout: None,
        }
    }
}

impl RunOptions {
    fn enum_options(&self) -> Options {
        Options {
            execution: self.execution,
            deadline: self.timeout.map(Deadline::after).unwrap_or_default(),
            exhaustive_cap: self.exhaustive_cap,
        }
    }
}

fn check_delta_max(delta_max: u32) -> Result<()> {
    if !delta_max.is_multiple_of(2) {
        Err(Error::OddDelta(delta_max))
    } else {
        Ok(())
    }
}

fn urn_cell(cfg: &WalkConfig, method: UrnMethod, opts: &RunOptions) -> Outcome {
    let started = Instant::now();
    match method {
        UrnMethod::Dp => Outcome::Done {
            tally: expected_max_dp(cfg).tally,
            elapsed: started.elapsed(),
            sequences_evaluated: None,
            nodes_pruned: None,
        },
        UrnMethod::Enumerate(m) => match enumerate(cfg, m, &opts.enum_options()) {
            Ok(r) => Outcome::Done {
                sequences_evaluated: Some(r.sequences_evaluated()),
                nodes_pruned: Some(r.nodes_pruned()),
                tally: r.tally,
                elapsed: r.elapsed,
            },
            Err(e) => Outcome::from_error(e),
        },
    }
}

fn iid_cell(delta: u32) -> Outcome {
    let started = Instant::now();
    let tally = expected_max_iid_tally(&IidWalkConfig::matching_urn(delta));
    Outcome::Done {
        tally,
        elapsed: started.elapsed(),
        sequences_evaluated: None,
        nodes_pruned: None,
    }
}

/// One row per (even δ in [2, delta_max], method).
pub fn build_table(delta_max: u32, methods: &[UrnMethod], opts: &RunOptions) -> Result<Vec<SeriesRow>> {
    check_delta_max(delta_max)?;
    let mut rows = Vec::new();
    for delta in (2..=delta_max).step_by(2) {
        let cfg = WalkConfig::new(delta)?;
        let iid = iid_cell(delta);
        for &method in methods {
            rows.push(SeriesRow {
                delta,
                whites: cfg.whites(),
                reds: cfg.reds(),
                method,
                urn: urn_cell(&cfg, method, opts),
                iid: iid.clone(),
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
struct CsvRecord {
    delta: u32,
    whites: u32,
    reds: u32,
    model: &'static str,
    method: String,
    exact: String,
    decimal: String,
    runtime_ms: String,
    sequences_evaluated: String,
    nodes_pruned: String,
}

fn record(row_delta: u32, whites: u32, reds: u32, model: &'static str, method: String, out: &Outcome, precision: usize) -> CsvRecord {
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    let (exact, decimal, runtime_ms, seqs, pruned) = match out {
        Outcome::Done {
            tally,
            elapsed,
            sequences_evaluated,
            nodes_pruned,
        } => (
            tally.to_string(),
            tally.value().to_decimal(precision),
            format!("{:.3}", elapsed.as_secs_f64() * 1e3),
            opt(*sequences_evaluated),
            opt(*nodes_pruned),
        ),
        Outcome::Infeasible(_) => ("infeasible".into(), String::new(), String::new(), String::new(), String::new()),
        Outcome::TimedOut => ("timed-out".into(), String::new(), String::new(), String::new(), String::new()),
    };
    CsvRecord {
        delta: row_delta,
        whites,
        reds,
        model,
        method,
        exact,
        decimal,
        runtime_ms,
        sequences_evaluated: seqs,
        nodes_pruned: pruned,
    }
}

/// Writes the table: for each δ, one urn record per method then one iid
/// record.
pub fn write_table_csv<W: Write>(rows: &[SeriesRow], precision: usize, out: W) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    let mut i = 0;
    while i < rows.len() {
        let delta = rows[i].delta;
        let group: Vec<&SeriesRow> = rows[i..].iter().take_while(|r| r.delta == delta).collect();
        for r in &group {
            w.serialize(record(r.delta, r.whites, r.reds, "urn", r.method.to_string(), &r.urn, precision))?;
        }
        let first = group[0];
        w.serialize(record(first.delta, first.whites, first.reds, "iid", "dp".into(), &first.iid, precision))?;
        i += group.len();
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigurePoint {
    pub delta: u32,
    pub urn: ExactValue,
    pub iid: ExactValue,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigureSeries {
    pub points: Vec<FigurePoint>,
    /// Infinite-horizon i.i.d. limit, the reference line.
    pub limit: ExactValue,
}

/// E[max μ] and E[max ν] at horizon 3δ/2 for every even δ in [2, delta_max].
pub fn build_figure_series(delta_max: u32) -> Result<FigureSeries> {
    check_delta_max(delta_max)?;
    let points = (2..=delta_max)
        .step_by(2)
        .map(|delta| {
            let cfg = WalkConfig::new(delta)?;
            Ok(FigurePoint {
                delta,
                urn: expected_max_dp(&cfg).value,
                iid: expected_max_iid(&IidWalkConfig::matching_urn(delta)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FigureSeries {
        points,
        limit: expected_max_iid_limit(&ExactValue::new(1, 3))?,
    })
}

pub fn write_figure_csv<W: Write>(series: &FigureSeries, precision: usize, out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FIGURE_HEADER)?;
    let limit = series.limit.to_decimal(precision);
    for p in &series.points {
        w.write_record([
            p.delta.to_string(),
            p.urn.to_decimal(precision),
            p.iid.to_decimal(precision),
            limit.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CellStatus {
    Done,
    Infeasible(String),
    TimedOut,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub method: UrnMethod,
    pub delta: u32,
    pub elapsed: Duration,
    pub sequences_evaluated: u64,
    pub nodes_pruned: u64,
    pub steps_evaluated: u64,
    pub nodes_visited: u64,
    /// DP states touched, for the dp method.
    pub dp_states: u64,
    pub value: Option<Tally>,
    pub status: CellStatus,
}

/// Every (horizon, lexicographic) pruning combination.
pub const FULL_FLAG_MATRIX: [(bool, bool); 4] = [(false, false), (true, false), (false, true), (true, true)];

/// Expands kinds × flags into distinct methods; exhaustive appears once.
pub fn method_matrix(kinds: &[MethodKind], flags: &[(bool, bool)]) -> Vec<EnumerationMethod> {
    let mut out: Vec<EnumerationMethod> = Vec::new();
    for &kind in kinds {
        for &(h, l) in flags {
            let m = EnumerationMethod::new(kind, h, l);
            if !out.contains(&m) {
                out.push(m);
            }
        }
    }
    out
}

/// Times each (method, δ) cell. Output is sorted by δ, then method order.
pub fn run_benchmark(deltas: &[u32], methods: &[UrnMethod], opts: &RunOptions) -> Result<Vec<BenchRecord>> {
    let mut deltas = deltas.to_vec();
    deltas.sort_unstable();
    deltas.dedup();
    let mut out = Vec::new();
    for &delta in &deltas {
        let cfg = WalkConfig::new(delta)?;
        for &method in methods {
            let started = Instant::now();
            let rec = match method {
                UrnMethod::Dp => {
                    let r = expected_max_dp(&cfg);
                    BenchRecord {
                        method,
                        delta,
                        elapsed: started.elapsed(),
                        sequences_evaluated: 0,
                        nodes_pruned: 0,
                        steps_evaluated: 0,
                        nodes_visited: 0,
                        dp_states: r.states,
                        value: Some(r.tally),
                        status: CellStatus::Done,
                    }
                }
                UrnMethod::Enumerate(m) => match enumerate(&cfg, m, &opts.enum_options()) {
                    Ok(r) => BenchRecord {
                        method,
                        delta,
                        elapsed: r.elapsed,
                        sequences_evaluated: r.counters.sequences_evaluated,
                        nodes_pruned: r.counters.nodes_pruned,
                        steps_evaluated: r.counters.steps_evaluated,
                        nodes_visited: r.counters.nodes_visited,
                        dp_states: 0,
                        value: Some(r.tally),
                        status: CellStatus::Done,
                    },
                    Err(e) => BenchRecord {
                        method,
                        delta,
                        elapsed: started.elapsed(),
                        sequences_evaluated: 0,
                        nodes_pruned: 0,
                        steps_evaluated: 0,
                        nodes_visited: 0,
                        dp_states: 0,
                        value: None,
                        status: match e {
                            Error::TimedOut => CellStatus::TimedOut,
                            other => CellStatus::Infeasible(other.to_string()),
                        },
                    },
                },
            };
            out.push(rec);
        }
    }
    Ok(out)
}

pub fn write_bench_csv<W: Write>(records: &[BenchRecord], precision: usize, out: W) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        let outcome = match (&r.status, &r.value) {
            (CellStatus::Done, Some(tally)) => Outcome::Done {
                tally: tally.clone(),
                elapsed: r.elapsed,
                sequences_evaluated: matches!(r.method, UrnMethod::Enumerate(_)).then_some(r.sequences_evaluated),
                nodes_pruned: matches!(r.method, UrnMethod::Enumerate(_)).then_some(r.nodes_pruned),
            },
            (CellStatus::TimedOut, _) => Outcome::TimedOut,
            (CellStatus::Infeasible(why), _) => Outcome::Infeasible(why.clone()),
            (CellStatus::Done, None) => Outcome::Infeasible("no value".into()),
        };
        w.serialize(record(r.delta, r.delta, r.delta / 2, "urn", r.method.to_string(), &outcome, precision))?;
    }
    w.flush()?;
    Ok(())
}
