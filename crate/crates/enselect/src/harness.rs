//! Run configuration, report emission, and the sweep harness.
//!
//! A run loads a CSV instance, splits it into train and test tasks, runs
//! one selection method against sampled feedback from the train split, and
//! reports the query ledger plus exact train and test values as one CSV
//! row. Sweeps expand parameter grids into independent runs, execute them
//! concurrently, and append rows in a deterministic order, so a sweep
//! rerun with the same config and master seed is byte-identical. A
//! companion aggregation buckets rows by query decade and emits mean and
//! normal-approximation 95% confidence intervals over seeds.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::audit::{audit_theta_fixed, gap_adaptive_audit, AuditReport};
use crate::binary::{self, SelectionResult, DEFAULT_ENUM_CAP};
use crate::error::{Error, Result};
use crate::exact;
use crate::instances;
use crate::oracle::FeedbackSource;
use crate::ordinal::{self, MinimaxConfig, RivalAuditMode, WofgConfig};
use crate::types::{BinaryOutcomeMatrix, Committee, QueryLedger, RankingProfile, RivalWeights};

/// On-disk layout of an instance file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    /// Candidate-by-task 0/1 matrix.
    Binary,
    /// Ranking-by-candidate competition ranks with optional weights.
    Ranks,
    /// Candidate-by-task scores, converted to competition ranks.
    Scores,
}

impl DataFormat {
    /// Parses a format name.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "binary" => Ok(Self::Binary),
            "ranks" => Ok(Self::Ranks),
            "scores" => Ok(Self::Scores),
            other => Err(Error::Config(format!("unknown data format {other:?}"))),
        }
    }
}

/// Exact objective to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Fraction of tasks solved by at least one member.
    Coverage,
    /// Minimum win rate against any outside rival.
    Theta,
}

impl Objective {
    /// Parses an objective name.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "coverage" => Ok(Self::Coverage),
            "theta" => Ok(Self::Theta),
            other => Err(Error::Config(format!("unknown objective {other:?}"))),
        }
    }
}

/// A loaded instance.
#[derive(Debug, Clone)]
pub enum Dataset {
    /// Binary outcomes.
    Binary(BinaryOutcomeMatrix),
    /// Rankings.
    Ranking(RankingProfile),
}

impl Dataset {
    /// Loads a file in the given format.
    pub fn load(path: &Path, format: DataFormat) -> Result<Self> {
        match format {
            DataFormat::Binary => Ok(Dataset::Binary(instances::load_binary_csv(path)?)),
            DataFormat::Ranks => Ok(Dataset::Ranking(instances::load_ranks_csv(path)?)),
            DataFormat::Scores => Ok(Dataset::Ranking(instances::load_scores_csv(path)?)),
        }
    }

    /// Candidate count.
    pub fn m(&self) -> usize {
        match self {
            Dataset::Binary(mat) => mat.m(),
            Dataset::Ranking(p) => p.m(),
        }
    }

    /// Task count.
    pub fn n(&self) -> usize {
        match self {
            Dataset::Binary(mat) => mat.n(),
            Dataset::Ranking(p) => p.n(),
        }
    }

    /// Candidate labels when present.
    pub fn candidate_labels(&self) -> Option<&[String]> {
        match self {
            Dataset::Binary(mat) => mat.candidate_labels(),
            Dataset::Ranking(p) => p.candidate_labels(),
        }
    }
}

/// Selection method names accepted by `select` and `sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Exhaustive-elicitation empirical risk minimization.
    ErmExhaustive,
    /// Fully elicited empirical greedy.
    GreedyFull,
    /// Failure-conditioned adaptive greedy.
    AdaptiveFailGreedy,
    /// Highest solo train accuracy.
    TopK,
    /// Best of N uniformly sampled committees.
    SampledErm,
    /// Budget-split greedy with uniform per-step sampling.
    UniformGreedy,
    /// Budget-split greedy with a UCB bandit per step.
    UcbGreedy,
    /// Ordinal ERM over recovered rankings.
    OrdinalErm,
    /// Weighted ordinal failure-conditioned greedy at uniform rival weights.
    Wofg,
    /// Minimax wrapper around the weighted ordinal oracle.
    Minimax,
    /// Lowest mean rank.
    BordaTopK,
    /// Enumeration-based approximation of the min-rival objective.
    Ptas,
}

impl Method {
    /// Parses a method name.
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "erm_exhaustive" => Self::ErmExhaustive,
            "greedy_full" => Self::GreedyFull,
            "adaptive_fail_greedy" => Self::AdaptiveFailGreedy,
            "top_k" => Self::TopK,
            "sampled_erm" => Self::SampledErm,
            "uniform_greedy" => Self::UniformGreedy,
            "ucb_greedy" => Self::UcbGreedy,
            "ordinal_erm" => Self::OrdinalErm,
            "wofg" => Self::Wofg,
            "minimax" => Self::Minimax,
            "borda_top_k" => Self::BordaTopK,
            "ptas" => Self::Ptas,
            other => return Err(Error::Config(format!("unknown method {other:?}"))),
        })
    }

    /// Stable name used in report rows.
    pub fn name(&self) -> &'static str {
        match self {
            Self::ErmExhaustive => "erm_exhaustive",
            Self::GreedyFull => "greedy_full",
            Self::AdaptiveFailGreedy => "adaptive_fail_greedy",
            Self::TopK => "top_k",
            Self::SampledErm => "sampled_erm",
            Self::UniformGreedy => "uniform_greedy",
            Self::UcbGreedy => "ucb_greedy",
            Self::OrdinalErm => "ordinal_erm",
            Self::Wofg => "wofg",
            Self::Minimax => "minimax",
            Self::BordaTopK => "borda_top_k",
            Self::Ptas => "ptas",
        }
    }

    /// True for methods that consume pairwise feedback.
    pub fn is_ordinal(&self) -> bool {
        matches!(
            self,
            Self::OrdinalErm | Self::Wofg | Self::Minimax | Self::BordaTopK | Self::Ptas
        )
    }

    fn uses_epsilon(&self) -> bool {
        matches!(
            self,
            Self::ErmExhaustive
                | Self::GreedyFull
                | Self::AdaptiveFailGreedy
                | Self::OrdinalErm
                | Self::Wofg
                | Self::Minimax
                | Self::Ptas
        )
    }

    fn uses_budget(&self) -> bool {
        matches!(self, Self::UniformGreedy | Self::UcbGreedy)
    }

    fn uses_samples(&self) -> bool {
        matches!(self, Self::SampledErm)
    }

    fn uses_rounds(&self) -> bool {
        matches!(self, Self::Minimax)
    }
}

/// One fully validated run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Instance file.
    pub data_path: PathBuf,
    /// Instance layout.
    pub format: DataFormat,
    /// Method to run.
    pub method: Method,
    /// Target committee size.
    pub k: usize,
    /// Accuracy parameter (gamma for the enumeration scheme).
    pub epsilon: f64,
    /// Confidence parameter.
    pub delta: f64,
    /// RNG seed for the run.
    pub seed: u64,
    /// Query budget for budgeted baselines.
    pub budget: Option<u64>,
    /// Sample count for sampled ERM.
    pub samples: Option<u64>,
    /// Round override for the minimax wrapper (formula default when none).
    pub rounds: Option<u64>,
    /// Train fraction of the task split.
    pub split_fraction: f64,
    /// Seed of the split permutation.
    pub split_seed: u64,
    /// Rival audit mode for the minimax wrapper.
    pub rival_audit: RivalAuditMode,
    /// Committee enumeration cap.
    pub enum_cap: u128,
    /// Record wall-clock time in the row (off keeps reports reproducible).
    pub record_wall_time: bool,
    /// Seed label written to the report row (sweeps show the per-cell seed
    /// index rather than the derived stream seed).
    pub seed_label: Option<u64>,
}

impl RunConfig {
    /// A config with the documented defaults (`delta = 0.1`, 50/50 split).
    pub fn new(
        data_path: impl Into<PathBuf>,
        format: DataFormat,
        method: Method,
        k: usize,
    ) -> Self {
        Self {
            data_path: data_path.into(),
            format,
            method,
            k,
            epsilon: 0.35,
            delta: 0.1,
            seed: 0,
            budget: None,
            samples: None,
            rounds: None,
            split_fraction: 0.5,
            split_seed: 0,
            rival_audit: RivalAuditMode::FullInfo,
            enum_cap: DEFAULT_ENUM_CAP,
            record_wall_time: false,
            seed_label: None,
        }
    }
}

/// One completed run, as written to report CSVs.
#[derive(Debug, Clone)]
pub struct ReportRow {
    /// Method name.
    pub method: String,
    /// Target committee size.
    pub k: usize,
    /// Accuracy parameter used.
    pub epsilon: f64,
    /// Confidence parameter used.
    pub delta: f64,
    /// Run seed.
    pub seed: u64,
    /// Candidate-evaluation queries.
    pub q_cand: u64,
    /// Committee-evaluation queries.
    pub q_eval: u64,
    /// Ranking-recovery comparisons.
    pub q_rank: u64,
    /// Unconditional task draws.
    pub draws: u64,
    /// Exact value on the train split (NaN for failed runs).
    pub value_train: f64,
    /// Exact value on the test split (NaN for failed runs).
    pub value_test: f64,
    /// Milliseconds, zero unless wall-time recording was requested.
    pub wall_time_ms: u64,
}

impl ReportRow {
    /// CSV header shared by all report files.
    pub fn header() -> &'static str {
        "method,k,epsilon,delta,seed,q_cand,q_eval,q_rank,draws,value_train,value_test,wall_time_ms"
    }

    /// One CSV line, stable across reruns.
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{:.6},{:.6},{}",
            self.method,
            self.k,
            self.epsilon,
            self.delta,
            self.seed,
            self.q_cand,
            self.q_eval,
            self.q_rank,
            self.draws,
            self.value_train,
            self.value_test,
            self.wall_time_ms
        )
    }

    /// Total oracle calls.
    pub fn total_queries(&self) -> u64 {
        self.q_cand + self.q_eval + self.q_rank
    }
}

/// What a run produced before evaluation.
enum RunOutput {
    Single(Committee, QueryLedger),
    Lottery(ordinal::Lottery, QueryLedger),
}

/// Executes one run: load, split, select, evaluate on both splits.
pub fn run_select(config: &RunConfig) -> Result<ReportRow> {
    let dataset = Dataset::load(&config.data_path, config.format)?;
    run_select_on(&dataset, config)
}

/// Same as [`run_select`] with the instance already in memory.
pub fn run_select_on(dataset: &Dataset, config: &RunConfig) -> Result<ReportRow> {
    let start = std::time::Instant::now();
    let n = dataset.n();
    let split = instances::train_test_split(n, config.split_fraction, config.split_seed, None)?;
    let (output, value_train, value_test) = match (dataset, config.method.is_ordinal()) {
        (Dataset::Binary(matrix), false) => {
            let train = matrix.restrict_tasks(&split.train)?;
            let test = matrix.restrict_tasks(&split.test)?;
            let output = run_binary_method(&train, config)?;
            let committee = match &output {
                RunOutput::Single(c, _) => c,
                RunOutput::Lottery(..) => unreachable!("binary methods return committees"),
            };
            let vt = train.coverage(committee);
            let vh = test.coverage(committee);
            (output, vt, vh)
        }
        (Dataset::Ranking(profile), true) => {
            let train = profile.restrict_tasks(&split.train)?;
            let test = profile.restrict_tasks(&split.test)?;
            let output = run_ordinal_method(&train, config)?;
            let (vt, vh) = match &output {
                RunOutput::Single(c, _) => (
                    ordinal::theta(&train, c)?.value,
                    ordinal::theta(&test, c)?.value,
                ),
                RunOutput::Lottery(l, _) => (l.value(&train), l.value(&test)),
            };
            (output, vt, vh)
        }
        (Dataset::Binary(_), true) => {
            return Err(Error::SourceMismatch(format!(
                "method {} needs pairwise data",
                config.method.name()
            )))
        }
        (Dataset::Ranking(_), false) => {
            return Err(Error::SourceMismatch(format!(
                "method {} needs binary data",
                config.method.name()
            )))
        }
    };
    let ledger = match &output {
        RunOutput::Single(_, l) | RunOutput::Lottery(_, l) => *l,
    };
    Ok(ReportRow {
        method: config.method.name().to_string(),
        k: config.k,
        epsilon: config.epsilon,
        delta: config.delta,
        seed: config.seed_label.unwrap_or(config.seed),
        q_cand: ledger.q_cand,
        q_eval: ledger.q_eval,
        q_rank: ledger.q_rank,
        draws: ledger.draws,
        value_train,
        value_test,
        wall_time_ms: if config.record_wall_time {
            start.elapsed().as_millis() as u64
        } else {
            0
        },
    })
}

fn need_budget(config: &RunConfig) -> Result<u64> {
    config.budget.ok_or_else(|| {
        Error::Config(format!(
            "method {} needs a query budget",
            config.method.name()
        ))
    })
}

fn run_binary_method(train: &BinaryOutcomeMatrix, config: &RunConfig) -> Result<RunOutput> {
    let m = train.m();
    let k = config.k;
    let from_result = |r: SelectionResult| RunOutput::Single(r.committee, r.ledger);
    let mut source = FeedbackSource::from_matrix(train.clone(), config.seed);
    let result = match config.method {
        Method::ErmExhaustive => from_result(binary::erm_exhaustive(
            &mut source,
            m,
            k,
            config.epsilon,
            config.delta,
            config.enum_cap,
        )?),
        Method::GreedyFull => from_result(binary::greedy_full_elicitation(
            &mut source,
            m,
            k,
            config.epsilon,
            config.delta,
        )?),
        Method::AdaptiveFailGreedy => from_result(binary::adaptive_fail_greedy(
            &mut source,
            m,
            k,
            config.epsilon,
            config.delta,
            &binary::AfgConfig::default(),
        )?),
        Method::TopK => from_result(binary::top_k_baseline(train, k)?),
        Method::SampledErm => from_result(binary::sampled_erm_baseline(
            train,
            k,
            config.samples.unwrap_or(1000),
            config.seed,
        )?),
        Method::UniformGreedy => from_result(binary::uniform_greedy_baseline(
            &mut source,
            m,
            k,
            need_budget(config)?,
        )?),
        Method::UcbGreedy => from_result(binary::ucb_greedy_baseline(
            &mut source,
            m,
            k,
            need_budget(config)?,
            binary::DEFAULT_DRAW_CAP,
        )?),
        other => {
            return Err(Error::Config(format!(
                "{} is not a binary method",
                other.name()
            )))
        }
    };
    Ok(result)
}

fn run_ordinal_method(train: &RankingProfile, config: &RunConfig) -> Result<RunOutput> {
    let m = train.m();
    let k = config.k;
    let mut source = FeedbackSource::from_profile(train.clone(), config.seed);
    Ok(match config.method {
        Method::OrdinalErm => {
            let r = ordinal::ordinal_erm(
                &mut source,
                m,
                k,
                config.epsilon,
                config.delta,
                config.enum_cap,
            )?;
            RunOutput::Single(r.committee, r.ledger)
        }
        Method::Wofg => {
            let r = ordinal::weighted_ordinal_fail_greedy(
                &mut source,
                m,
                k,
                &RivalWeights::uniform(m),
                config.epsilon,
                config.delta,
                None,
                &WofgConfig::default(),
            )?;
            RunOutput::Single(r.committee, r.ledger)
        }
        Method::Minimax => {
            let cfg = MinimaxConfig {
                rival_audit: config.rival_audit,
                rounds_override: config.rounds,
                ..MinimaxConfig::default()
            };
            let out =
                ordinal::minimax_wrapper(&mut source, m, k, config.epsilon, config.delta, &cfg)?;
            RunOutput::Lottery(out.lottery, out.ledger)
        }
        Method::BordaTopK => {
            let r = ordinal::borda_top_k(train, k)?;
            RunOutput::Single(r.committee, r.ledger)
        }
        Method::Ptas => {
            let committee = ordinal::ptas_theta(train, k, config.epsilon, config.enum_cap)?;
            let mut ledger = QueryLedger::new();
            // full-ranking elicitation cost, as for the mean-rank baseline
            ledger.q_rank = ordinal::log2_factorial_ceil(m) * train.n() as u64;
            RunOutput::Single(committee, ledger)
        }
        other => {
            return Err(Error::Config(format!(
                "{} is not an ordinal method",
                other.name()
            )))
        }
    })
}

/// Exact optimum of a loaded instance; the held-out oracle reference.
pub fn cmd_opt(
    path: &Path,
    format: DataFormat,
    objective: Objective,
    k: usize,
    cap: u128,
) -> Result<(exact::OptResult, String)> {
    let dataset = Dataset::load(path, format)?;
    let opt = match (&dataset, objective) {
        (Dataset::Binary(mat), Objective::Coverage) => exact::opt_coverage_bruteforce(mat, k, cap)?,
        (Dataset::Ranking(p), Objective::Theta) => exact::opt_theta_bruteforce(p, k, cap)?,
        (Dataset::Binary(_), Objective::Theta) => {
            return Err(Error::SourceMismatch("theta needs ranking data".into()))
        }
        (Dataset::Ranking(_), Objective::Coverage) => {
            return Err(Error::SourceMismatch("coverage needs binary data".into()))
        }
    };
    let witness = format_committee(&opt.witness, dataset.candidate_labels());
    let line = format!("{:.6} {witness}", opt.value);
    Ok((opt, line))
}

/// Formats a committee with candidate labels when available.
pub fn format_committee(s: &Committee, labels: Option<&[String]>) -> String {
    let parts: Vec<String> = s
        .members()
        .iter()
        .map(|&c| match labels {
            Some(ls) => ls[c].clone(),
            None => c.to_string(),
        })
        .collect();
    format!("{{{}}}", parts.join(","))
}

/// Which audit `cmd_audit` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditKind {
    /// Non-adaptive fixed-size audit.
    Fixed,
    /// Gap-adaptive successive elimination over rivals.
    GapAdaptive,
}

impl AuditKind {
    /// Parses an audit kind name.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(Self::Fixed),
            "gap" | "gap_adaptive" => Ok(Self::GapAdaptive),
            other => Err(Error::Config(format!("unknown audit kind {other:?}"))),
        }
    }
}

/// Audits a committee on a ranking instance and returns the report.
pub fn cmd_audit(
    path: &Path,
    format: DataFormat,
    members: &[usize],
    kind: AuditKind,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<(AuditReport, QueryLedger)> {
    let dataset = Dataset::load(path, format)?;
    let profile = match dataset {
        Dataset::Ranking(p) => p,
        Dataset::Binary(_) => return Err(Error::SourceMismatch("audits need ranking data".into())),
    };
    let committee = Committee::exact(members.to_vec())?;
    let mut source = FeedbackSource::from_profile(profile, seed);
    let mut ledger = QueryLedger::new();
    let report = match kind {
        AuditKind::Fixed => {
            audit_theta_fixed(&mut source, &committee, epsilon, delta, &mut ledger)?
        }
        AuditKind::GapAdaptive => {
            gap_adaptive_audit(&mut source, &committee, epsilon, delta, &mut ledger)?
        }
    };
    Ok((report, ledger))
}

/// Materializes an instance to CSV for reproducible downstream runs.
#[derive(Debug, Clone)]
pub enum GeneratorSpec {
    /// Independent per-candidate Bernoulli outcomes.
    Bernoulli {
        /// Per-candidate solve probabilities.
        biases: Vec<f64>,
        /// Tasks to materialize.
        tasks: usize,
        /// Seed.
        seed: u64,
    },
    /// One near-optimal arm with prescribed rescue-rate gaps.
    PlantedGap {
        /// Candidate count.
        m: usize,
        /// The near-optimal candidate.
        star: usize,
        /// Gaps of the remaining candidates, ascending id order.
        gaps: Vec<f64>,
        /// Tasks to materialize.
        tasks: usize,
        /// Seed.
        seed: u64,
    },
    /// Uniform cyclic ranking profile.
    Cyclic {
        /// Candidate (and ranking) count.
        n: usize,
    },
    /// Winners-block ranking law.
    BitBlock {
        /// Per-candidate block biases.
        biases: Vec<f64>,
        /// Rankings to materialize.
        tasks: usize,
        /// Seed.
        seed: u64,
    },
    /// The fixed 4-candidate diminishing-returns counterexample.
    Nonsubmodular4,
}

/// Writes the generated instance to `out`. Binary kinds produce matrix
/// CSVs, ranking kinds produce rank-profile CSVs.
pub fn cmd_gen(spec: &GeneratorSpec, out: &Path) -> Result<()> {
    match spec {
        GeneratorSpec::Bernoulli {
            biases,
            tasks,
            seed,
        } => {
            let mut source = instances::gen_bernoulli_product(biases.clone(), *seed)?;
            instances::save_binary_csv(&source.materialize_matrix(*tasks)?, out)
        }
        GeneratorSpec::PlantedGap {
            m,
            star,
            gaps,
            tasks,
            seed,
        } => {
            let mut source = instances::gen_planted_gap(*m, *star, gaps, *seed)?;
            instances::save_binary_csv(&source.materialize_matrix(*tasks)?, out)
        }
        GeneratorSpec::Cyclic { n } => {
            instances::save_ranks_csv(&instances::gen_cyclic_profile(*n)?, out)
        }
        GeneratorSpec::BitBlock {
            biases,
            tasks,
            seed,
        } => {
            let mut source = instances::gen_bitblock_ranking(biases.clone(), *seed)?;
            instances::save_ranks_csv(&source.materialize_profile(*tasks)?, out)
        }
        GeneratorSpec::Nonsubmodular4 => {
            instances::save_ranks_csv(&instances::nonsubmodular4(), out)
        }
    }
}

/// Parameter grids for a sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Instance file.
    pub data_path: PathBuf,
    /// Instance layout.
    pub format: DataFormat,
    /// Methods to run.
    pub methods: Vec<Method>,
    /// Committee sizes.
    pub ks: Vec<usize>,
    /// Accuracy grid (used by methods that take one).
    pub epsilons: Vec<f64>,
    /// Budget grid for budgeted baselines.
    pub budgets: Vec<u64>,
    /// Sample-count grid for sampled ERM.
    pub sample_counts: Vec<u64>,
    /// Round grid for the minimax wrapper (`0` = formula default).
    pub rounds: Vec<u64>,
    /// Seeds per cell.
    pub seeds: u64,
    /// Master seed: every run's stream derives from it and the run index.
    pub master_seed: u64,
    /// Confidence parameter.
    pub delta: f64,
    /// Train fraction.
    pub split_fraction: f64,
    /// Split permutation seed.
    pub split_seed: u64,
    /// Rival audit mode for minimax cells.
    pub rival_audit: RivalAuditMode,
    /// Record wall time per row (off keeps sweep outputs reproducible).
    pub record_wall_time: bool,
}

impl SweepConfig {
    /// A sweep with the documented defaults and singleton grids.
    pub fn new(data_path: impl Into<PathBuf>, format: DataFormat) -> Self {
        Self {
            data_path: data_path.into(),
            format,
            methods: vec![Method::AdaptiveFailGreedy],
            ks: vec![3],
            epsilons: vec![0.35],
            budgets: vec![100_000],
            sample_counts: vec![1000],
            rounds: vec![0],
            seeds: 5,
            master_seed: 0,
            delta: 0.1,
            split_fraction: 0.5,
            split_seed: 0,
            rival_audit: RivalAuditMode::FullInfo,
            record_wall_time: false,
        }
    }

    fn cells(&self) -> Vec<RunConfig> {
        let mut cells = Vec::new();
        for &method in &self.methods {
            for &k in &self.ks {
                for (ei, &epsilon) in self.epsilons.iter().enumerate() {
                    if !method.uses_epsilon() && ei > 0 {
                        continue;
                    }
                    for (bi, &budget) in self.budgets.iter().enumerate() {
                        if !method.uses_budget() && bi > 0 {
                            continue;
                        }
                        for (si, &samples) in self.sample_counts.iter().enumerate() {
                            if !method.uses_samples() && si > 0 {
                                continue;
                            }
                            for (ri, &rounds) in self.rounds.iter().enumerate() {
                                if !method.uses_rounds() && ri > 0 {
                                    continue;
                                }
                                for seed_idx in 0..self.seeds {
                                    let mut cfg = RunConfig::new(
                                        self.data_path.clone(),
                                        self.format,
                                        method,
                                        k,
                                    );
                                    cfg.epsilon = epsilon;
                                    cfg.delta = self.delta;
                                    cfg.budget = Some(budget);
                                    cfg.samples = Some(samples);
                                    cfg.rounds = if rounds == 0 { None } else { Some(rounds) };
                                    cfg.split_fraction = self.split_fraction;
                                    cfg.split_seed = self.split_seed;
                                    cfg.rival_audit = self.rival_audit;
                                    cfg.record_wall_time = self.record_wall_time;
                                    cfg.seed = mix_seed(self.master_seed, cells.len() as u64);
                                    cfg.seed_label = Some(seed_idx);
                                    cells.push(cfg);
                                }
                            }
                        }
                    }
                }
            }
        }
        cells
    }
}

/// Deterministic seed derivation from a master seed and run index.
pub fn mix_seed(master: u64, index: u64) -> u64 {
    let mut x = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Query-bucket granularity for aggregation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bucketing {
    /// Snap `log10 Q` to the nearest integer.
    Decade,
    /// Snap `log10 Q` to the nearest half.
    HalfDecade,
}

impl Bucketing {
    /// Parses a bucketing name.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "decade" => Ok(Self::Decade),
            "half" | "half_decade" => Ok(Self::HalfDecade),
            other => Err(Error::Config(format!("unknown bucketing {other:?}"))),
        }
    }

    fn snap(&self, q: u64) -> f64 {
        let log = (q.max(1) as f64).log10();
        match self {
            Bucketing::Decade => log.round(),
            Bucketing::HalfDecade => (log * 2.0).round() / 2.0,
        }
    }
}

/// Runs every cell of the sweep concurrently, appends one row per run to
/// `out_csv` in deterministic order (failed runs keep their slot with NaN
/// values), and writes the bucketed aggregate beside it.
pub fn cmd_sweep(
    config: &SweepConfig,
    out_csv: &Path,
    agg_csv: Option<&Path>,
    bucketing: Bucketing,
) -> Result<Vec<ReportRow>> {
    let dataset = Dataset::load(&config.data_path, config.format)?;
    let cells = config.cells();
    let rows: Vec<ReportRow> = cells
        .par_iter()
        .map(|cfg| match run_select_on(&dataset, cfg) {
            Ok(row) => row,
            Err(_) => ReportRow {
                method: cfg.method.name().to_string(),
                k: cfg.k,
                epsilon: cfg.epsilon,
                delta: cfg.delta,
                seed: cfg.seed_label.unwrap_or(cfg.seed),
                q_cand: 0,
                q_eval: 0,
                q_rank: 0,
                draws: 0,
                value_train: f64::NAN,
                value_test: f64::NAN,
                wall_time_ms: 0,
            },
        })
        .collect();
    append_rows(out_csv, &rows)?;
    let agg_path = agg_csv
        .map(Path::to_path_buf)
        .unwrap_or_else(|| default_agg_path(out_csv));
    std::fs::write(&agg_path, aggregate_csv(&rows, bucketing))?;
    Ok(rows)
}

fn default_agg_path(out_csv: &Path) -> PathBuf {
    let mut name = out_csv
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    name.push_str(".agg.csv");
    out_csv.with_file_name(name)
}

/// Appends rows to a report CSV, writing the header only when the file is
/// new or empty.
pub fn append_rows(path: &Path, rows: &[ReportRow]) -> Result<()> {
    let existing = std::fs::read_to_string(path).unwrap_or_default();
    let mut out = String::new();
    if existing.trim().is_empty() {
        out.push_str(ReportRow::header());
        out.push('\n');
    }
    for row in rows {
        out.push_str(&row.to_csv_line());
        out.push('\n');
    }
    use std::io::Write;
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

/// Q-bucketed mean and 95% normal-approximation confidence interval of the
/// test value, grouped by method, committee size, and query bucket.
pub fn aggregate_csv(rows: &[ReportRow], bucketing: Bucketing) -> String {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<(String, usize, i64), Vec<f64>> = BTreeMap::new();
    for row in rows {
        if row.value_test.is_nan() {
            continue;
        }
        let bucket = bucketing.snap(row.total_queries());
        groups
            .entry((row.method.clone(), row.k, (bucket * 10.0).round() as i64))
            .or_default()
            .push(row.value_test);
    }
    let mut out = String::from("method,k,log10_q_bucket,runs,mean_value_test,ci95\n");
    for ((method, k, bucket10), values) in groups {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let ci = 1.96 * (var / n).sqrt();
        writeln!(
            out,
            "{},{},{:.1},{},{:.6},{:.6}",
            method,
            k,
            bucket10 as f64 / 10.0,
            values.len(),
            mean,
            ci
        )
        .unwrap();
    }
    out
}

/// Parses a `key = value` config file with `#` comments into sweep config.
/// Unknown keys are rejected.
pub fn parse_sweep_config(path: &Path) -> Result<SweepConfig> {
    let text = std::fs::read_to_string(path)?;
    let mut data_path: Option<PathBuf> = None;
    let mut format: Option<DataFormat> = None;
    let mut config = SweepConfig::new("", DataFormat::Binary);
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| Error::Config(format!("line {}: bad {what}: {value}", lineno + 1));
        match key {
            "data" => data_path = Some(PathBuf::from(value)),
            "format" => format = Some(DataFormat::parse(value)?),
            "methods" | "method" => {
                config.methods = split_list(value)
                    .iter()
                    .map(|s| Method::parse(s))
                    .collect::<Result<_>>()?;
            }
            "ks" | "k" => {
                config.ks = split_list(value)
                    .iter()
                    .map(|s| s.parse().map_err(|_| bad("k")))
                    .collect::<Result<_>>()?;
            }
            "epsilons" | "epsilon" => {
                config.epsilons = split_list(value)
                    .iter()
                    .map(|s| s.parse().map_err(|_| bad("epsilon")))
                    .collect::<Result<_>>()?;
            }
            "budgets" | "budget" => {
                config.budgets = split_list(value)
                    .iter()
                    .map(|s| s.parse().map_err(|_| bad("budget")))
                    .collect::<Result<_>>()?;
            }
            "sample_counts" | "samples" => {
                config.sample_counts = split_list(value)
                    .iter()
                    .map(|s| s.parse().map_err(|_| bad("samples")))
                    .collect::<Result<_>>()?;
            }
            "rounds" => {
                config.rounds = split_list(value)
                    .iter()
                    .map(|s| s.parse().map_err(|_| bad("rounds")))
                    .collect::<Result<_>>()?;
            }
            "seeds" => config.seeds = value.parse().map_err(|_| bad("seeds"))?,
            "master_seed" => config.master_seed = value.parse().map_err(|_| bad("master_seed"))?,
            "delta" => config.delta = value.parse().map_err(|_| bad("delta"))?,
            "split_fraction" => {
                config.split_fraction = value.parse().map_err(|_| bad("split_fraction"))?
            }
            "split_seed" => config.split_seed = value.parse().map_err(|_| bad("split_seed"))?,
            "rival_audit" => {
                config.rival_audit = match value {
                    "full" => RivalAuditMode::FullInfo,
                    "sampled" => RivalAuditMode::Sampled,
                    _ => return Err(bad("rival_audit (full or sampled)")),
                }
            }
            "record_wall_time" => {
                config.record_wall_time = value.parse().map_err(|_| bad("record_wall_time"))?
            }
            other => return Err(Error::Config(format!("unknown config key {other:?}"))),
        }
    }
    config.data_path =
        data_path.ok_or_else(|| Error::Config("config is missing: data = <path>".into()))?;
    config.format =
        format.ok_or_else(|| Error::Config("config is missing: format = ...".into()))?;
    Ok(config)
}

fn split_list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}
