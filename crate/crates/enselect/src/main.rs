//! Thin command-line front end over the library: instance generation,
//! exact optima, single selection runs, committee audits, and sweeps.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use enselect::error::{Error, Result};
use enselect::harness::{
    self, AuditKind, Bucketing, DataFormat, GeneratorSpec, Method, Objective, RunConfig,
};
use enselect::ordinal::RivalAuditMode;

#[derive(Parser)]
#[command(
    name = "enselect",
    version,
    about = "Committee selection from sampled task feedback"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Materialize a synthetic instance to CSV.
    Gen(GenArgs),
    /// Print the exact optimum of an instance (held-out oracle reference).
    Opt(OptArgs),
    /// Run one selection method and print its report row.
    Select(SelectArgs),
    /// Audit a committee's min-rival winning value.
    Audit(AuditArgs),
    /// Run a parameter sweep from a config file.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Instance kind: bernoulli | planted-gap | cyclic | bitblock | nonsubmodular4.
    #[arg(long)]
    kind: String,
    /// Candidate count (bernoulli with --bias, planted-gap, bitblock with --bias).
    #[arg(long)]
    m: Option<usize>,
    /// Tasks or rankings to materialize (cyclic takes its count from --m).
    #[arg(long)]
    tasks: Option<usize>,
    /// Shared bias applied to all candidates.
    #[arg(long)]
    bias: Option<f64>,
    /// Comma-separated per-candidate biases.
    #[arg(long)]
    biases: Option<String>,
    /// Starred near-optimal candidate (planted-gap).
    #[arg(long)]
    star: Option<usize>,
    /// Comma-separated gaps for the non-starred candidates (planted-gap).
    #[arg(long)]
    gaps: Option<String>,
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OptArgs {
    /// Instance CSV.
    #[arg(long)]
    data: PathBuf,
    /// Objective: coverage | theta.
    #[arg(long)]
    objective: String,
    /// Committee size.
    #[arg(long)]
    k: usize,
    /// Data format: binary | ranks | scores.
    #[arg(long)]
    format: Option<String>,
    /// Enumeration cap.
    #[arg(long, default_value_t = 10_000_000)]
    cap: u128,
}

#[derive(Args)]
struct SelectArgs {
    /// Instance CSV.
    #[arg(long)]
    data: PathBuf,
    /// Method name (see README for the list).
    #[arg(long)]
    method: String,
    /// Committee size.
    #[arg(long)]
    k: usize,
    /// Data format: binary | ranks | scores.
    #[arg(long)]
    format: Option<String>,
    /// Accuracy parameter (gamma for ptas).
    #[arg(long, default_value_t = 0.35)]
    epsilon: f64,
    /// Confidence parameter.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Run seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Query budget (uniform_greedy, ucb_greedy).
    #[arg(long)]
    budget: Option<u64>,
    /// Sampled committees (sampled_erm).
    #[arg(long)]
    samples: Option<u64>,
    /// Round override (minimax).
    #[arg(long)]
    rounds: Option<u64>,
    /// Train fraction of the split.
    #[arg(long, default_value_t = 0.5)]
    split: f64,
    /// Split permutation seed.
    #[arg(long, default_value_t = 0)]
    split_seed: u64,
    /// Rival audit mode for minimax: full | sampled.
    #[arg(long, default_value = "full")]
    rival_audit: String,
    /// Record wall time in the emitted row.
    #[arg(long, default_value_t = true)]
    wall_time: bool,
    /// Append the row to this report CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    /// Ranking instance CSV.
    #[arg(long)]
    data: PathBuf,
    /// Comma-separated committee member ids.
    #[arg(long)]
    committee: String,
    /// Audit kind: fixed | gap.
    #[arg(long, default_value = "fixed")]
    kind: String,
    /// Data format: ranks | scores.
    #[arg(long)]
    format: Option<String>,
    /// Target additive accuracy.
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Confidence parameter.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Run seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep config file (key = value lines; see README).
    #[arg(long)]
    config: PathBuf,
    /// Per-run report CSV (appended).
    #[arg(long)]
    out: PathBuf,
    /// Aggregate CSV path (defaults to <out>.agg.csv).
    #[arg(long)]
    agg_out: Option<PathBuf>,
    /// Query bucketing: decade | half.
    #[arg(long, default_value = "decade")]
    buckets: String,
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad number {v:?}")))
        })
        .collect()
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad integer {v:?}")))
        })
        .collect()
}

fn infer_format(explicit: Option<&str>, fallback: DataFormat) -> Result<DataFormat> {
    match explicit {
        Some(s) => DataFormat::parse(s),
        None => Ok(fallback),
    }
}

fn gen_biases(args: &GenArgs) -> Result<Vec<f64>> {
    match (&args.biases, args.bias, args.m) {
        (Some(list), _, _) => parse_f64_list(list),
        (None, Some(b), Some(m)) => Ok(vec![b; m]),
        _ => Err(Error::Config(
            "provide --biases, or --bias together with --m".into(),
        )),
    }
}

fn run_gen(args: GenArgs) -> Result<()> {
    let tasks =
        |d: Option<usize>| d.ok_or_else(|| Error::Config("generative kinds need --tasks".into()));
    let spec = match args.kind.as_str() {
        "bernoulli" => GeneratorSpec::Bernoulli {
            biases: gen_biases(&args)?,
            tasks: tasks(args.tasks)?,
            seed: args.seed,
        },
        "planted-gap" => {
            let m = args
                .m
                .ok_or_else(|| Error::Config("planted-gap needs --m".into()))?;
            let star = args
                .star
                .ok_or_else(|| Error::Config("planted-gap needs --star".into()))?;
            let gaps = parse_f64_list(
                args.gaps
                    .as_deref()
                    .ok_or_else(|| Error::Config("planted-gap needs --gaps".into()))?,
            )?;
            GeneratorSpec::PlantedGap {
                m,
                star,
                gaps,
                tasks: tasks(args.tasks)?,
                seed: args.seed,
            }
        }
        "cyclic" => GeneratorSpec::Cyclic {
            n: args
                .m
                .ok_or_else(|| Error::Config("cyclic needs --m".into()))?,
        },
        "bitblock" => GeneratorSpec::BitBlock {
            biases: gen_biases(&args)?,
            tasks: tasks(args.tasks)?,
            seed: args.seed,
        },
        "nonsubmodular4" => GeneratorSpec::Nonsubmodular4,
        other => return Err(Error::Config(format!("unknown generator kind {other:?}"))),
    };
    harness::cmd_gen(&spec, &args.out)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn run_opt(args: OptArgs) -> Result<()> {
    let objective = Objective::parse(&args.objective)?;
    let fallback = match objective {
        Objective::Coverage => DataFormat::Binary,
        Objective::Theta => DataFormat::Ranks,
    };
    let format = infer_format(args.format.as_deref(), fallback)?;
    let (_, line) = harness::cmd_opt(&args.data, format, objective, args.k, args.cap)?;
    println!("{line}");
    Ok(())
}

fn run_select(args: SelectArgs) -> Result<()> {
    let method = Method::parse(&args.method)?;
    let fallback = if method.is_ordinal() {
        DataFormat::Ranks
    } else {
        DataFormat::Binary
    };
    let mut config = RunConfig::new(
        &args.data,
        infer_format(args.format.as_deref(), fallback)?,
        method,
        args.k,
    );
    config.epsilon = args.epsilon;
    config.delta = args.delta;
    config.seed = args.seed;
    config.budget = args.budget;
    config.samples = args.samples;
    config.rounds = args.rounds;
    config.split_fraction = args.split;
    config.split_seed = args.split_seed;
    config.rival_audit = match args.rival_audit.as_str() {
        "full" => RivalAuditMode::FullInfo,
        "sampled" => RivalAuditMode::Sampled,
        other => return Err(Error::Config(format!("unknown rival audit mode {other:?}"))),
    };
    config.record_wall_time = args.wall_time;
    let row = harness::run_select(&config)?;
    println!("{}", enselect::harness::ReportRow::header());
    println!("{}", row.to_csv_line());
    if let Some(out) = args.out {
        harness::append_rows(&out, std::slice::from_ref(&row))?;
    }
    Ok(())
}

fn run_audit(args: AuditArgs) -> Result<()> {
    let format = infer_format(args.format.as_deref(), DataFormat::Ranks)?;
    let members = parse_usize_list(&args.committee)?;
    let kind = AuditKind::parse(&args.kind)?;
    let (report, ledger) = harness::cmd_audit(
        &args.data,
        format,
        &members,
        kind,
        args.epsilon,
        args.delta,
        args.seed,
    )?;
    println!(
        "theta_hat={:.6} interval=[{:.6},{:.6}] rounds={} q_cand={} q_eval={} draws={}",
        report.theta_hat,
        report.interval.0,
        report.interval.1,
        report.stopped_at,
        ledger.q_cand,
        ledger.q_eval,
        ledger.draws
    );
    for (rival, count) in &report.per_rival_counts {
        println!("rival {rival}: {count} comparisons");
    }
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<()> {
    let config = harness::parse_sweep_config(&args.config)?;
    let bucketing = Bucketing::parse(&args.buckets)?;
    let rows = harness::cmd_sweep(&config, &args.out, args.agg_out.as_deref(), bucketing)?;
    println!("wrote {} rows to {}", rows.len(), args.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Opt(args) => run_opt(args),
        Command::Select(args) => run_select(args),
        Command::Audit(args) => run_audit(args),
        Command::Sweep(args) => run_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
