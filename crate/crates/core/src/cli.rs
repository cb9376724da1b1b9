//! Command-line interface.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use crate::enumeration::{enumerate, expected_max_dp, EnumerationMethod, MethodKind, Options, DEFAULT_EXHAUSTIVE_CAP};
use crate::exact::{ExactValue, Tally};
use crate::exec::Execution;
use crate::iid::{expected_max_iid_limit, expected_max_iid_tally, IidWalkConfig};
use crate::montecarlo::{sample_iid_walk, sample_urn_walk, SampleReport};
use crate::reporting::{
    build_figure_series, build_table, method_matrix, run_benchmark, write_bench_csv, write_figure_csv,
    write_table_csv, CellStatus, RunOptions, UrnMethod, DEFAULT_PRECISION, FULL_FLAG_MATRIX,
};
use crate::walk::WalkConfig;

#[derive(Debug, Parser)]
#[command(name = "urnwalk", version, about = "Exact expected maximum of urn and i.i.d. random walks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute one expected maximum
    Compute(ComputeArgs),
    /// Write the per-δ table of both models as CSV
    Table(TableArgs),
    /// Write the convergence series (delta, urn, iid, limit) as CSV
    Figure(FigureArgs),
    /// Time enumeration methods across δ and pruning flags
    Bench(BenchArgs),
    /// Monte Carlo estimate
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Urn,
    Iid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Worker threads; 1 runs sequentially
    #[arg(long, default_value_t = 1)]
    pub workers: usize,

    /// Digits after the decimal point
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    pub precision: usize,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long, value_enum, default_value_t = Model::Urn)]
    pub model: Model,

    /// White marbles; the urn also holds δ/2 reds
    #[arg(long)]
    pub delta: u32,

    /// dp, exhaustive, combos or combos-iter (urn model only)
    #[arg(long, default_value = "dp")]
    pub method: String,

    #[arg(long)]
    pub prune_horizon: bool,

    #[arg(long)]
    pub prune_lex: bool,

    /// Up-probability for the i.i.d. walk, e.g. 1/3
    #[arg(long)]
    pub p: Option<String>,

    /// Infinite-horizon value for the i.i.d. walk
    #[arg(long)]
    pub limit: bool,

    /// Largest δ the exhaustive method accepts
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    pub exhaustive_cap: u32,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub delta_max: u32,

    /// Comma-separated urn methods, each `kind[+horizon][+lex]` or `dp`
    #[arg(long, value_delimiter = ',', default_value = "dp")]
    pub methods: Vec<String>,

    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    pub exhaustive_cap: u32,

    /// Per-cell time budget in seconds
    #[arg(long)]
    pub timeout_secs: Option<f64>,

    /// Exit nonzero if any cell is infeasible or timed out
    #[arg(long)]
    pub strict: bool,

    #[arg(short, long)]
    pub output: Option<PathBuf>,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(long)]
    pub delta_max: u32,

    #[arg(short, long)]
    pub output: Option<PathBuf>,

    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    pub precision: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FlagSet {
    /// All four on/off combinations
    All,
    None,
    Horizon,
    Lex,
    Both,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 2)]
    pub delta_min: u32,

    #[arg(long)]
    pub delta_max: u32,

    /// Comma-separated method kinds: exhaustive, combos, combos-iter, dp
    #[arg(long, value_delimiter = ',', default_value = "combos,combos-iter")]
    pub methods: Vec<String>,

    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub flags: Vec<FlagSet>,

    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    pub exhaustive_cap: u32,

    /// Per-cell time budget in seconds
    #[arg(long, default_value_t = 60.0)]
    pub timeout_secs: f64,

    #[arg(long)]
    pub strict: bool,

    #[arg(short, long)]
    pub output: Option<PathBuf>,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum, default_value_t = Model::Urn)]
    pub model: Model,

    #[arg(long)]
    pub delta: u32,

    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long)]
    pub p: Option<String>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(flatten)]
    pub common: Common,
}

/// Parses `a/b` or a plain decimal such as `0.25` into an exact value.
pub fn parse_probability(s: &str) -> anyhow::Result<ExactValue> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().with_context(|| format!("bad numerator in `{s}`"))?;
        let b: BigInt = b.trim().parse().with_context(|| format!("bad denominator in `{s}`"))?;
        if b == BigInt::from(0) {
            bail!("zero denominator in `{s}`");
        }
        return Ok(ExactValue::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int}{frac}")
        .parse()
        .with_context(|| format!("`{s}` is not a probability"))?;
    Ok(ExactValue::new(digits, BigInt::from(10u32).pow(frac.len() as u32)))
}

fn open_output(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn parse_urn_method(s: &str, horizon: bool, lex: bool) -> anyhow::Result<UrnMethod> {
    let method: UrnMethod = s.parse().map_err(anyhow::Error::msg)?;
    Ok(match method {
        UrnMethod::Dp if horizon || lex => bail!("pruning flags apply only to combination methods"),
        UrnMethod::Dp => UrnMethod::Dp,
        UrnMethod::Enumerate(m) => {
            if m.kind == MethodKind::Exhaustive && (horizon || lex) {
                bail!("pruning flags apply only to combination methods");
            }
            UrnMethod::Enumerate(EnumerationMethod::new(
                m.kind,
                m.prune_horizon || horizon,
                m.prune_lexicographic || lex,
            ))
        }
    })
}

fn iid_config(steps: u32, p: &Option<String>) -> anyhow::Result<IidWalkConfig> {
    let p = match p {
        Some(s) => parse_probability(s)?,
        None => ExactValue::new(1, 3),
    };
    Ok(IidWalkConfig::new(steps, p)?)
}

fn print_value(
    out: &mut dyn Write,
    format: Format,
    precision: usize,
    fields: serde_json::Value,
    tally: &Tally,
) -> anyhow::Result<()> {
    let value = tally.value();
    let decimal = value.to_decimal(precision);
    match format {
        Format::Text => {
            if value.is_integer() {
                writeln!(out, "{value}")?;
            } else {
                writeln!(out, "{tally} ≈ {decimal}")?;
            }
        }
        Format::Json => {
            let mut obj = fields;
            obj["exact"] = json!(tally.to_string());
            obj["reduced"] = json!(value.to_string());
            obj["decimal"] = json!(decimal);
            writeln!(out, "{}", serde_json::to_string(&obj)?)?;
        }
        Format::Csv => {
            writeln!(out, "model,delta,method,exact,decimal")?;
            writeln!(
                out,
                "{},{},{},{},{}",
                fields["model"].as_str().unwrap_or(""),
                fields["delta"],
                fields["method"].as_str().unwrap_or(""),
                tally,
                decimal
            )?;
        }
    }
    Ok(())
}

fn compute(args: &ComputeArgs, out: &mut dyn Write) -> anyhow::Result<ExitCode> {
    let exec = Execution::with_workers(args.common.workers);
    match args.model {
        Model::Urn => {
            if args.p.is_some() || args.limit {
                bail!("--p and --limit apply only to --model iid");
            }
            let method = parse_urn_method(&args.method, args.prune_horizon, args.prune_lex)?;
            let cfg = WalkConfig::new(args.delta)?;
            let mut fields = json!({
                "model": "urn",
                "delta": cfg.delta(),
                "n": cfg.n(),
                "method": method.to_string(),
                "workers": exec.workers(),
            });
            let tally = match method {
                UrnMethod::Dp => expected_max_dp(&cfg).tally,
                UrnMethod::Enumerate(m) => {
                    let opts = Options {
                        execution: exec,
                        exhaustive_cap: args.exhaustive_cap,
                        ..Options::default()
                    };
                    let report = enumerate(&cfg, m, &opts)?;
                    fields["sequences_evaluated"] = json!(report.counters.sequences_evaluated);
                    fields["nodes_pruned"] = json!(report.counters.nodes_pruned);
                    fields["elapsed_ms"] = json!(report.elapsed.as_secs_f64() * 1e3);
                    report.tally
                }
            };
            print_value(out, args.format, args.common.precision, fields, &tally)?;
        }
        Model::Iid => {
            if args.method != "dp" || args.prune_horizon || args.prune_lex {
                bail!("the iid model is computed by dp only; enumeration methods and pruning apply to --model urn");
            }
            if !args.delta.is_multiple_of(2) {
                bail!(crate::Error::OddDelta(args.delta));
            }
            let cfg = iid_config(args.delta * 3 / 2, &args.p)?;
            let fields = json!({
                "model": "iid",
                "delta": args.delta,
                "steps": if args.limit { json!("infinite") } else { json!(cfg.steps()) },
                "p": cfg.p().to_string(),
                "method": "dp",
            });
            let tally = if args.limit {
                let v = expected_max_iid_limit(cfg.p())?;
                let numer = v.numer().to_biguint().context("limit is nonnegative")?;
                let denom = v.denom().to_biguint().context("positive denominator")?;
                Tally::new(numer, denom)
            } else {
                expected_max_iid_tally(&cfg)
            };
            print_value(out, args.format, args.common.precision, fields, &tally)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn timeout(secs: Option<f64>) -> anyhow::Result<Option<Duration>> {
    secs.map(|s| Duration::try_from_secs_f64(s).context("invalid timeout"))
        .transpose()
}

fn table(args: &TableArgs) -> anyhow::Result<ExitCode> {
    let methods = args
        .methods
        .iter()
        .map(|m| parse_urn_method(m, false, false))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let opts = RunOptions {
        execution: Execution::with_workers(args.common.workers),
        exhaustive_cap: args.exhaustive_cap,
        timeout: timeout(args.timeout_secs)?,
    };
    let rows = build_table(args.delta_max, &methods, &opts)?;
    write_table_csv(&rows, args.common.precision, open_output(&args.output)?)?;
    let failed: Vec<_> = rows.iter().filter(|r| r.urn.is_failure()).collect();
    for r in &failed {
        eprintln!("delta={} method={}: {:?}", r.delta, r.method, r.urn);
    }
    Ok(if args.strict && !failed.is_empty() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn figure(args: &FigureArgs) -> anyhow::Result<ExitCode> {
    let series = build_figure_series(args.delta_max)?;
    write_figure_csv(&series, args.precision, open_output(&args.output)?)?;
    Ok(ExitCode::SUCCESS)
}

fn bench(args: &BenchArgs) -> anyhow::Result<ExitCode> {
    if args.delta_min > args.delta_max {
        bail!("--delta-min exceeds --delta-max");
    }
    let mut flags: Vec<(bool, bool)> = Vec::new();
    for f in &args.flags {
        let set: &[(bool, bool)] = match f {
            FlagSet::All => &FULL_FLAG_MATRIX,
            FlagSet::None => &[(false, false)],
            FlagSet::Horizon => &[(true, false)],
            FlagSet::Lex => &[(false, true)],
            FlagSet::Both => &[(true, true)],
        };
        flags.extend_from_slice(set);
    }
    let mut kinds = Vec::new();
    let mut with_dp = false;
    for m in &args.methods {
        if m == "dp" {
            with_dp = true;
        } else {
            kinds.push(m.parse::<MethodKind>().map_err(anyhow::Error::msg)?);
        }
    }
    let mut methods: Vec<UrnMethod> = method_matrix(&kinds, &flags)
        .into_iter()
        .map(UrnMethod::Enumerate)
        .collect();
    if with_dp {
        methods.push(UrnMethod::Dp);
    }
    let first = args.delta_min + args.delta_min % 2;
    let deltas: Vec<u32> = (first..=args.delta_max).step_by(2).collect();
    let opts = RunOptions {
        execution: Execution::with_workers(args.common.workers),
        exhaustive_cap: args.exhaustive_cap,
        timeout: timeout(Some(args.timeout_secs))?,
    };
    let records = run_benchmark(&deltas, &methods, &opts)?;
    write_bench_csv(&records, args.common.precision, open_output(&args.output)?)?;
    let failed = records.iter().filter(|r| r.status != CellStatus::Done).count();
    Ok(if args.strict && failed > 0 {
        eprintln!("{failed} benchmark cell(s) did not complete");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn sample(args: &SampleArgs, out: &mut dyn Write) -> anyhow::Result<ExitCode> {
    let exec = Execution::with_workers(args.common.workers);
    let report: SampleReport = match args.model {
        Model::Urn => {
            if args.p.is_some() {
                bail!("--p applies only to --model iid");
            }
            sample_urn_walk(&WalkConfig::new(args.delta)?, args.trials, args.seed, exec)?
        }
        Model::Iid => {
            if !args.delta.is_multiple_of(2) {
                bail!(crate::Error::OddDelta(args.delta));
            }
            let cfg = iid_config(args.delta * 3 / 2, &args.p)?;
            sample_iid_walk(&cfg, args.trials, args.seed, exec)?
        }
    };
    let prec = args.common.precision;
    match args.format {
        Format::Text => writeln!(
            out,
            "{:.prec$} ± {:.prec$} (trials={}, seed={}, workers={}, generator={})",
            report.mean_max, report.std_error, report.trials, report.seed, report.workers, report.generator
        )?,
        Format::Json => writeln!(out, "{}", serde_json::to_string(&report)?)?,
        Format::Csv => {
            writeln!(out, "trials,mean_max,std_error,seed,workers,generator")?;
            writeln!(
                out,
                "{},{:.prec$},{:.prec$},{},{},{}",
                report.trials, report.mean_max, report.std_error, report.seed, report.workers, report.generator
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    let stdout = io::stdout();
    match &cli.command {
        Command::Compute(a) => compute(a, &mut stdout.lock()),
        Command::Table(a) => table(a),
        Command::Figure(a) => figure(a),
        Command::Bench(a) => bench(a),
        Command::Sample(a) => sample(a, &mut stdout.lock()),
    }
}
