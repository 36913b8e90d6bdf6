//! Domain types shared by every algorithm: candidates, committees, outcome
//! matrices, ranking profiles, rival weights, and the query ledger.
//!
//! All types here are immutable after construction and safe to share across
//! concurrent runs. The [`QueryLedger`] is the one mutable piece and is owned
//! by a single run.

use crate::error::{Error, Result};

/// Index of a candidate expert in `[0, m)`.
pub type CandidateId = usize;

/// A committee: a set of distinct candidates plus a target-size contract.
///
/// Members are kept sorted ascending, so two committees with the same member
/// set compare equal and lexicographic tie-breaking is just `Ord` on the
/// member vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Committee {
    members: Vec<CandidateId>,
    target_size: usize,
}

impl Committee {
    /// Builds a committee from members (any order, must be distinct) and a
    /// target size with `|members| <= target_size`.
    pub fn new(members: impl Into<Vec<CandidateId>>, target_size: usize) -> Result<Self> {
        let mut members = members.into();
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParam(
                "committee has duplicate members".into(),
            ));
        }
        if members.len() > target_size {
            return Err(Error::InvalidParam(format!(
                "committee has {} members but target size {}",
                members.len(),
                target_size
            )));
        }
        Ok(Self {
            members,
            target_size,
        })
    }

    /// Committee of exactly the given members, target size equal to its length.
    pub fn exact(members: impl Into<Vec<CandidateId>>) -> Result<Self> {
        let members = members.into();
        let size = members.len();
        Self::new(members, size)
    }

    /// The empty committee with target size `k`.
    pub fn empty(target_size: usize) -> Self {
        Self {
            members: Vec::new(),
            target_size,
        }
    }

    /// Sorted member slice.
    pub fn members(&self) -> &[CandidateId] {
        &self.members
    }

    /// Number of members currently in the committee.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// True when the committee has no members.
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The size-`k` contract this committee is being built toward.
    pub fn target_size(&self) -> usize {
        self.target_size
    }

    /// Membership test (binary search over the sorted members).
    pub fn contains(&self, c: CandidateId) -> bool {
        self.members.binary_search(&c).is_ok()
    }

    /// True when the committee is a proper subset of an `m`-candidate pool.
    pub fn is_proper(&self, m: usize) -> bool {
        self.members.len() < m
    }

    /// Returns a committee of exactly `k` members containing all current
    /// members, filled deterministically with the lowest-index unused
    /// candidate ids.
    pub fn pad_to_size(&self, k: usize, m: usize) -> Result<Committee> {
        if k > m {
            return Err(Error::InvalidParam(format!(
                "cannot pad to {k} members out of {m}"
            )));
        }
        if self.members.len() > k {
            return Err(Error::InvalidParam(format!(
                "committee already has {} members, cannot pad to {k}",
                self.members.len()
            )));
        }
        let mut members = self.members.clone();
        let mut next = 0;
        while members.len() < k {
            if !self.contains(next) {
                members.push(next);
            }
            next += 1;
        }
        Committee::new(members, k)
    }

    /// Candidates of `[0, m)` not in the committee, ascending.
    pub fn outside(&self, m: usize) -> Vec<CandidateId> {
        (0..m).filter(|&c| !self.contains(c)).collect()
    }

    /// Adds one member, growing the target size if it was already met.
    pub fn with_member(&self, c: CandidateId) -> Result<Committee> {
        let mut members = self.members.clone();
        members.push(c);
        let target = self.target_size.max(members.len());
        Committee::new(members, target)
    }
}

impl std::fmt::Display for Committee {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// Which counter an oracle call is charged to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryCost {
    /// Evaluating a possible addition to the committee.
    Candidate,
    /// Testing the current committee on a task.
    Committee,
    /// Comparisons spent recovering full rankings.
    Ranking,
}

/// Per-run counters splitting candidate-evaluation, committee-evaluation,
/// and ranking-recovery query costs, plus unconditional task draws.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryLedger {
    /// Candidate-evaluation oracle calls.
    pub q_cand: u64,
    /// Committee-evaluation oracle calls.
    pub q_eval: u64,
    /// Comparisons spent recovering full rankings.
    pub q_rank: u64,
    /// Unconditional task samples.
    pub draws: u64,
}

impl QueryLedger {
    /// Fresh all-zero ledger.
    pub fn new() -> Self {
        Self::default()
    }

    /// Charges one oracle call to the given class.
    pub fn charge(&mut self, cost: QueryCost) {
        match cost {
            QueryCost::Candidate => self.q_cand += 1,
            QueryCost::Committee => self.q_eval += 1,
            QueryCost::Ranking => self.q_rank += 1,
        }
    }

    /// Total oracle calls across the three classes (draws excluded).
    pub fn total_queries(&self) -> u64 {
        self.q_cand + self.q_eval + self.q_rank
    }

    /// Adds another ledger's counters into this one.
    pub fn absorb(&mut self, other: &QueryLedger) {
        self.q_cand += other.q_cand;
        self.q_eval += other.q_eval;
        self.q_rank += other.q_rank;
        self.draws += other.draws;
    }
}

/// An m-by-n 0/1 outcome matrix: `get(c, t)` is 1 when candidate `c` solves
/// task `t`. Ground truth for binary feedback.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryOutcomeMatrix {
    m: usize,
    n: usize,
    bits: Vec<u8>,
    candidate_labels: Option<Vec<String>>,
    task_labels: Option<Vec<String>>,
}

impl BinaryOutcomeMatrix {
    /// Builds a matrix from candidate-major rows of 0/1 cells.
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::InvalidParam("matrix has no candidates".into()));
        }
        let n = rows[0].len();
        if n == 0 {
            return Err(Error::InvalidParam("matrix has no tasks".into()));
        }
        let mut bits = Vec::with_capacity(m * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::InvalidParam("ragged matrix rows".into()));
            }
            for &b in row {
                if b > 1 {
                    return Err(Error::InvalidParam(format!("matrix cell {b} is not a bit")));
                }
                bits.push(b);
            }
        }
        Ok(Self {
            m,
            n,
            bits,
            candidate_labels: None,
            task_labels: None,
        })
    }

    /// Attaches candidate and task labels. Labels must be unique per axis.
    pub fn with_labels(
        mut self,
        candidate_labels: Vec<String>,
        task_labels: Vec<String>,
    ) -> Result<Self> {
        check_unique(&candidate_labels, self.m, "candidate")?;
        check_unique(&task_labels, self.n, "task")?;
        self.candidate_labels = Some(candidate_labels);
        self.task_labels = Some(task_labels);
        Ok(self)
    }

    /// Candidate count.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Task count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Outcome bit for candidate `c` on task `t`.
    pub fn get(&self, c: CandidateId, t: usize) -> bool {
        self.bits[c * self.n + t] == 1
    }

    /// Candidate labels when present.
    pub fn candidate_labels(&self) -> Option<&[String]> {
        self.candidate_labels.as_deref()
    }

    /// Task labels when present.
    pub fn task_labels(&self) -> Option<&[String]> {
        self.task_labels.as_deref()
    }

    /// True when some member of `s` solves task `t`; the empty committee
    /// solves nothing.
    pub fn covered(&self, t: usize, s: &Committee) -> bool {
        s.members().iter().any(|&c| self.get(c, t))
    }

    /// Fraction of tasks solved by at least one member.
    pub fn coverage(&self, s: &Committee) -> f64 {
        let hits = (0..self.n).filter(|&t| self.covered(t, s)).count();
        hits as f64 / self.n as f64
    }

    /// Coverage restricted to the given task indices.
    pub fn coverage_on(&self, s: &Committee, tasks: &[usize]) -> f64 {
        if tasks.is_empty() {
            return 0.0;
        }
        let hits = tasks.iter().filter(|&&t| self.covered(t, s)).count();
        hits as f64 / tasks.len() as f64
    }

    /// Fraction of tasks solved by candidate `c` alone.
    pub fn solo_accuracy(&self, c: CandidateId) -> f64 {
        let hits = (0..self.n).filter(|&t| self.get(c, t)).count();
        hits as f64 / self.n as f64
    }

    /// New matrix keeping only the given task columns, in the given order.
    pub fn restrict_tasks(&self, tasks: &[usize]) -> Result<BinaryOutcomeMatrix> {
        if tasks.is_empty() {
            return Err(Error::InvalidParam("restriction to zero tasks".into()));
        }
        let rows = (0..self.m)
            .map(|c| tasks.iter().map(|&t| self.bits[c * self.n + t]).collect())
            .collect();
        let mut out = BinaryOutcomeMatrix::new(rows)?;
        out.candidate_labels = self.candidate_labels.clone();
        out.task_labels = self
            .task_labels
            .as_ref()
            .map(|ls| tasks.iter().map(|&t| ls[t].clone()).collect());
        Ok(out)
    }
}

fn check_unique(labels: &[String], expect: usize, what: &str) -> Result<()> {
    if labels.len() != expect {
        return Err(Error::InvalidParam(format!(
            "{what} label count {} does not match {expect}",
            labels.len()
        )));
    }
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::InvalidParam(format!("duplicate {what} label {l:?}")));
        }
    }
    Ok(())
}

/// Sentinel best rank of the empty committee: one past the worst real rank.
pub fn empty_committee_rank(m: usize) -> u32 {
    m as u32 + 1
}

/// A profile of `n` rankings over `m` candidates with per-ranking weights.
///
/// Ranks are 1-based competition ranks: `rank(c) = 1 + #{c': rank(c') < rank(c)}`,
/// so ties share a rank and strict rankings are exactly the rows where all
/// ranks are distinct. Ground truth for pairwise feedback.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingProfile {
    m: usize,
    n: usize,
    ranks: Vec<u32>,
    weights: Vec<f64>,
    strict: bool,
    candidate_labels: Option<Vec<String>>,
    task_labels: Option<Vec<String>>,
}

impl RankingProfile {
    /// Builds a profile from ranking-major rows of competition ranks and
    /// optional weights (uniform when `None`; must sum to 1 within 1e-12).
    pub fn new(rows: Vec<Vec<u32>>, weights: Option<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidParam("profile has no rankings".into()));
        }
        let m = rows[0].len();
        if m == 0 {
            return Err(Error::InvalidParam("profile has no candidates".into()));
        }
        let mut strict = true;
        let mut ranks = Vec::with_capacity(n * m);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidParam("ragged profile rows".into()));
            }
            if !valid_competition_ranks(row) {
                return Err(Error::InvalidParam(format!(
                    "ranking {i} is not a valid competition-rank row"
                )));
            }
            if !is_permutation_row(row) {
                strict = false;
            }
            ranks.extend_from_slice(row);
        }
        let weights = match weights {
            Some(w) => {
                if w.len() != n {
                    return Err(Error::InvalidParam(
                        "weight count does not match rankings".into(),
                    ));
                }
                if w.iter().any(|&x| x < 0.0 || !x.is_finite()) {
                    return Err(Error::InvalidParam("weights must be nonnegative".into()));
                }
                let total: f64 = w.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidParam(format!(
                        "weights sum to {total}, expected 1"
                    )));
                }
                w
            }
            None => vec![1.0 / n as f64; n],
        };
        Ok(Self {
            m,
            n,
            ranks,
            weights,
            strict,
            candidate_labels: None,
            task_labels: None,
        })
    }

    /// Builds a strict profile from orderings listed best-first.
    pub fn from_orders(orders: Vec<Vec<CandidateId>>, weights: Option<Vec<f64>>) -> Result<Self> {
        let m = orders.first().map(|o| o.len()).unwrap_or(0);
        let mut rows = Vec::with_capacity(orders.len());
        for order in &orders {
            let mut row = vec![0u32; m];
            if order.len() != m {
                return Err(Error::InvalidParam("ragged orderings".into()));
            }
            for (pos, &c) in order.iter().enumerate() {
                if c >= m || row[c] != 0 {
                    return Err(Error::InvalidParam("ordering is not a permutation".into()));
                }
                row[c] = pos as u32 + 1;
            }
            rows.push(row);
        }
        Self::new(rows, weights)
    }

    /// Attaches candidate and task labels. Labels must be unique per axis.
    pub fn with_labels(
        mut self,
        candidate_labels: Vec<String>,
        task_labels: Vec<String>,
    ) -> Result<Self> {
        check_unique(&candidate_labels, self.m, "candidate")?;
        check_unique(&task_labels, self.n, "task")?;
        self.candidate_labels = Some(candidate_labels);
        self.task_labels = Some(task_labels);
        Ok(self)
    }

    /// Candidate count.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Ranking count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// True when every row is a strict permutation.
    pub fn strict(&self) -> bool {
        self.strict
    }

    /// Per-ranking weights, summing to 1.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Candidate labels when present.
    pub fn candidate_labels(&self) -> Option<&[String]> {
        self.candidate_labels.as_deref()
    }

    /// Task labels when present.
    pub fn task_labels(&self) -> Option<&[String]> {
        self.task_labels.as_deref()
    }

    /// Competition rank of candidate `c` in ranking `t` (1 is best).
    pub fn rank(&self, t: usize, c: CandidateId) -> u32 {
        self.ranks[t * self.m + c]
    }

    /// Rank row of ranking `t`.
    pub fn rank_row(&self, t: usize) -> &[u32] {
        &self.ranks[t * self.m..(t + 1) * self.m]
    }

    /// Best (minimum) rank over the committee's members in ranking `t`;
    /// the empty committee gets rank `m + 1`.
    pub fn best_rank(&self, t: usize, s: &Committee) -> u32 {
        best_rank_in_row(self.rank_row(t), s)
    }

    /// True when some member of `s` is ranked at least as highly as `x` in
    /// ranking `t` (the prefix-cover predicate; ties are weak wins).
    pub fn covers(&self, t: usize, s: &Committee, x: CandidateId) -> bool {
        self.best_rank(t, s) <= self.rank(t, x)
    }

    /// New profile keeping only the given rankings, re-normalizing weights.
    pub fn restrict_tasks(&self, tasks: &[usize]) -> Result<RankingProfile> {
        if tasks.is_empty() {
            return Err(Error::InvalidParam("restriction to zero rankings".into()));
        }
        let rows: Vec<Vec<u32>> = tasks.iter().map(|&t| self.rank_row(t).to_vec()).collect();
        let raw: Vec<f64> = tasks.iter().map(|&t| self.weights[t]).collect();
        let total: f64 = raw.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidParam(
                "restriction has zero total weight".into(),
            ));
        }
        let weights = raw.iter().map(|w| w / total).collect();
        let mut out = RankingProfile::new(rows, Some(weights))?;
        out.candidate_labels = self.candidate_labels.clone();
        out.task_labels = self
            .task_labels
            .as_ref()
            .map(|ls| tasks.iter().map(|&t| ls[t].clone()).collect());
        Ok(out)
    }
}

/// Best rank of a committee within one rank row, `m + 1` for the empty one.
pub fn best_rank_in_row(row: &[u32], s: &Committee) -> u32 {
    s.members()
        .iter()
        .map(|&c| row[c])
        .min()
        .unwrap_or(row.len() as u32 + 1)
}

/// Checks the competition-rank consistency of one row: rank value `r` may
/// appear only when exactly `r - 1` candidates have strictly smaller rank.
pub fn valid_competition_ranks(row: &[u32]) -> bool {
    let mut sorted: Vec<u32> = row.to_vec();
    sorted.sort_unstable();
    if sorted.first() != Some(&1) {
        return false;
    }
    for i in 1..sorted.len() {
        if sorted[i] != sorted[i - 1] && sorted[i] != i as u32 + 1 {
            return false;
        }
    }
    true
}

fn is_permutation_row(row: &[u32]) -> bool {
    let mut sorted: Vec<u32> = row.to_vec();
    sorted.sort_unstable();
    sorted.iter().enumerate().all(|(i, &r)| r == i as u32 + 1)
}

/// A probability distribution over candidates used as rival weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RivalWeights {
    probs: Vec<f64>,
}

impl RivalWeights {
    /// Validates that entries are nonnegative and sum to 1 within 1e-12.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParam(
                "rival weights over zero candidates".into(),
            ));
        }
        if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidParam(
                "rival weights must be nonnegative".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParam(format!(
                "rival weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { probs })
    }

    /// Uniform distribution over `m` candidates.
    pub fn uniform(m: usize) -> Self {
        Self {
            probs: vec![1.0 / m as f64; m],
        }
    }

    /// Point mass on candidate `x`.
    pub fn point_mass(m: usize, x: CandidateId) -> Result<Self> {
        if x >= m {
            return Err(Error::InvalidParam(format!(
                "point mass on {x} out of range {m}"
            )));
        }
        let mut probs = vec![0.0; m];
        probs[x] = 1.0;
        Ok(Self { probs })
    }

    /// Number of candidates.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    /// True when the distribution is over zero candidates (never constructed).
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Probability of candidate `x`.
    pub fn prob(&self, x: CandidateId) -> f64 {
        self.probs[x]
    }

    /// The underlying probability vector.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Samples a candidate by inverse transform from a uniform in `[0, 1)`.
    pub fn sample_with(&self, u: f64) -> CandidateId {
        let mut acc = 0.0;
        for (c, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return c;
            }
        }
        self.probs.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pad_fills_lowest_unused_ids() {
        let s = Committee::exact(vec![2]).unwrap();
        let padded = s.pad_to_size(3, 5).unwrap();
        assert_eq!(padded.members(), &[0, 1, 2]);

        let s = Committee::exact(vec![0, 1, 2]).unwrap();
        assert_eq!(s.pad_to_size(3, 3).unwrap().members(), &[0, 1, 2]);

        let s = Committee::exact(vec![4]).unwrap();
        assert_eq!(s.pad_to_size(2, 5).unwrap().members(), &[0, 4]);
    }

    #[test]
    fn pad_is_idempotent_and_preserves_members() {
        let s = Committee::exact(vec![1, 3]).unwrap();
        let once = s.pad_to_size(4, 6).unwrap();
        let twice = once.pad_to_size(4, 6).unwrap();
        assert_eq!(once, twice);
        assert!(s.members().iter().all(|&c| once.contains(c)));
    }

    #[test]
    fn pad_rejects_impossible_targets() {
        let s = Committee::exact(vec![0]).unwrap();
        assert!(s.pad_to_size(4, 3).is_err());
        assert!(Committee::exact(vec![1, 1]).is_err());
    }

    #[test]
    fn best_rank_reads_min_and_empty_convention() {
        // a>b>c>d as ranks for candidates a..d = 0..4
        let profile = RankingProfile::from_orders(vec![vec![0, 1, 2, 3]], None).unwrap();
        let s = Committee::exact(vec![2, 3]).unwrap();
        assert_eq!(profile.best_rank(0, &s), 3);
        assert_eq!(profile.best_rank(0, &Committee::empty(0)), 5);
    }

    #[test]
    fn best_rank_on_weak_row() {
        let profile = RankingProfile::new(vec![vec![1, 1, 3, 3]], None).unwrap();
        assert!(!profile.strict());
        let s = Committee::exact(vec![2]).unwrap();
        assert_eq!(profile.best_rank(0, &s), 3);
    }

    #[test]
    fn best_rank_monotone_under_supersets() {
        // exhaustive over all committees for a small weak profile
        let profile = RankingProfile::new(vec![vec![1, 2, 2, 4], vec![1, 1, 1, 4]], None).unwrap();
        let m = profile.m();
        for t in 0..profile.n() {
            for small in 0u32..(1 << m) {
                for big in 0u32..(1 << m) {
                    if small & big != small {
                        continue;
                    }
                    let to_committee = |mask: u32| {
                        Committee::exact((0..m).filter(|&c| mask >> c & 1 == 1).collect::<Vec<_>>())
                            .unwrap()
                    };
                    let s = to_committee(small);
                    let t_set = to_committee(big);
                    assert!(profile.best_rank(t, &t_set) <= profile.best_rank(t, &s));
                }
            }
        }
    }

    #[test]
    fn competition_rank_validity() {
        // every strict permutation is valid
        assert!(valid_competition_ranks(&[2, 1, 4, 3]));
        // ties share a rank, next rank skips
        assert!(valid_competition_ranks(&[1, 1, 3, 3]));
        assert!(valid_competition_ranks(&[1, 1, 1, 1]));
        // skipped then reused rank is invalid
        assert!(!valid_competition_ranks(&[1, 1, 2, 3]));
        assert!(!valid_competition_ranks(&[2, 2, 3, 4]));
        assert!(!valid_competition_ranks(&[1, 3, 3, 3]));
    }

    #[test]
    fn ledger_counts_are_monotone() {
        let mut ledger = QueryLedger::new();
        ledger.charge(QueryCost::Candidate);
        ledger.charge(QueryCost::Committee);
        ledger.charge(QueryCost::Ranking);
        ledger.draws += 1;
        assert_eq!(ledger.q_cand, 1);
        assert_eq!(ledger.q_eval, 1);
        assert_eq!(ledger.q_rank, 1);
        assert_eq!(ledger.total_queries(), 3);
    }

    #[test]
    fn rival_weights_validate() {
        assert!(RivalWeights::new(vec![0.5, 0.5]).is_ok());
        assert!(RivalWeights::new(vec![0.5, 0.4]).is_err());
        assert!(RivalWeights::new(vec![1.1, -0.1]).is_err());
        let w = RivalWeights::point_mass(3, 1).unwrap();
        assert_eq!(w.sample_with(0.99), 1);
    }

    #[test]
    fn weights_must_sum_to_one() {
        let rows = vec![vec![1, 2], vec![2, 1]];
        assert!(RankingProfile::new(rows.clone(), Some(vec![0.5, 0.6])).is_err());
        let p = RankingProfile::new(rows, Some(vec![2.0 / 3.0, 1.0 / 3.0])).unwrap();
        assert!((p.weights()[0] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn matrix_coverage_and_restrict() {
        let mat = BinaryOutcomeMatrix::new(vec![vec![1, 0, 1], vec![0, 1, 0]]).unwrap();
        let s = Committee::exact(vec![0]).unwrap();
        assert!((mat.coverage(&s) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(mat.coverage(&Committee::empty(2)), 0.0);
        let sub = mat.restrict_tasks(&[1]).unwrap();
        assert_eq!(sub.n(), 1);
        assert!(!sub.get(0, 0));
        assert!(sub.get(1, 0));
    }
}
