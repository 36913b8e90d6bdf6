//! Query-efficient selection of small expert committees from sampled task
//! feedback.
//!
//! A pool of `m` candidate experts is evaluated on tasks drawn i.i.d. from
//! an unknown distribution. Feedback is either binary (a candidate solves a
//! task or not) or pairwise (which of two candidates ranks higher on a
//! task), and every revealed outcome costs one query. The goal is a
//! committee of `k` experts whose best member performs well on future
//! tasks, found with as few queries as possible.
//!
//! Two objectives are supported:
//!
//! - **coverage**: the probability that at least one member solves a task;
//!   maximized by exhaustive ERM, empirical greedy, and a
//!   failure-conditioned adaptive greedy whose candidate queries are spent
//!   only on tasks the current committee misses
//!   ([`binary::adaptive_fail_greedy`]);
//! - **min-rival winning value**: the probability, minimized over outside
//!   rivals, that the committee's best member outranks the rival. The
//!   objective is monotone but not submodular, so the crate optimizes a
//!   submodular rival-weighted relaxation ([`ordinal`]) with a
//!   failure-conditioned greedy oracle and converts back via committee
//!   audits ([`audit`]) or a multiplicative-weights minimax wrapper
//!   ([`ordinal::minimax_wrapper`]).
//!
//! Every oracle call is accounted in a [`types::QueryLedger`] split into
//! candidate-evaluation, committee-evaluation, and ranking-recovery costs.
//! Exact brute-force references live in [`exact`], synthetic instance
//! generators and CSV interchange in [`instances`], and a sweep harness
//! with reproducible CSV reports in [`harness`].
//!
//! See the `examples/` directory for one runnable walkthrough per major
//! capability; the `enselect` binary exposes the same flows as `gen`,
//! `opt`, `select`, `audit`, and `sweep` subcommands.

pub mod audit;
pub mod binary;
pub mod bounds;
pub mod error;
pub mod exact;
pub mod harness;
pub mod instances;
pub mod oracle;
pub mod ordinal;
pub mod types;

pub use error::{Error, Result};
pub use oracle::{FeedbackSource, TaskHandle};
pub use types::{
    BinaryOutcomeMatrix, CandidateId, Committee, QueryCost, QueryLedger, RankingProfile,
    RivalWeights,
};
