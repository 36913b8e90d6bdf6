//! Auditing the min-rival winning value of proposed committees and
//! committee families under pairwise queries.
//!
//! The fixed audit draws a non-adaptive number of rankings. The
//! gap-adaptive audit races outside rivals with anytime confidence bounds,
//! so rivals far above the minimum stop being queried early. Family
//! learning keeps one persistent gap-adaptive audit per committee and
//! refines them in phases of geometrically shrinking width.

use crate::bounds;
use crate::error::{Error, Result};
use crate::oracle::FeedbackSource;
use crate::ordinal;
use crate::types::{CandidateId, Committee, QueryCost, QueryLedger, RankingProfile};

/// Result of one audit.
#[derive(Debug, Clone)]
pub struct AuditReport {
    /// Point estimate of the committee's min-rival winning value.
    pub theta_hat: f64,
    /// Confidence interval around it.
    pub interval: (f64, f64),
    /// Comparisons spent per outside rival.
    pub per_rival_counts: Vec<(CandidateId, u64)>,
    /// Rounds (sampled rankings) consumed.
    pub stopped_at: u64,
}

/// Non-adaptive audit: draws a fixed number of rankings, finds the
/// committee's best member on each (`|S| - 1` comparisons), and compares it
/// against every outside rival (`m - |S|` comparisons), for exactly
/// `T (m - 1)` comparisons total. The estimate is within `epsilon` of the
/// true value with probability at least `1 - delta`.
pub fn audit_theta_fixed(
    source: &mut FeedbackSource,
    s: &Committee,
    epsilon: f64,
    delta: f64,
    ledger: &mut QueryLedger,
) -> Result<AuditReport> {
    let m = source.m();
    if !source.is_strict_pairwise() {
        return Err(Error::SourceMismatch(
            "audits need a strict pairwise source".into(),
        ));
    }
    let t = bounds::audit_fixed_t(m, s.len(), epsilon, delta)?;
    let rivals = s.outside(m);
    let mut wins = vec![0u64; rivals.len()];
    for _ in 0..t {
        let handle = source.sample_task(ledger)?;
        let top = source.top_of_committee(&handle, s, ledger)?;
        for (i, &x) in rivals.iter().enumerate() {
            if source.query_pairwise(&handle, top, x, QueryCost::Candidate, ledger)? {
                wins[i] += 1;
            }
        }
    }
    let theta_hat = wins
        .iter()
        .map(|&w| w as f64 / t as f64)
        .fold(f64::INFINITY, f64::min);
    Ok(AuditReport {
        theta_hat,
        interval: (theta_hat - epsilon, theta_hat + epsilon),
        per_rival_counts: rivals.into_iter().map(|x| (x, t)).collect(),
        stopped_at: t,
    })
}

/// Empirical maximization over an explicit finite family: recovers enough
/// full rankings to estimate every member's value uniformly, then returns
/// the empirical argmax, lowest committee on ties.
pub fn audit_family_erm(
    source: &mut FeedbackSource,
    family: &[Committee],
    epsilon: f64,
    delta: f64,
    ledger: &mut QueryLedger,
) -> Result<Committee> {
    let m = source.m();
    check_family(family, m)?;
    if !source.is_strict_pairwise() {
        return Err(Error::SourceMismatch(
            "audits need a strict pairwise source".into(),
        ));
    }
    let n_family: u64 = family.iter().map(|s| (m - s.len()) as u64).sum();
    let t = bounds::audit_family_t(n_family, epsilon, delta)?;
    let mut rows = Vec::with_capacity(t as usize);
    for _ in 0..t {
        let handle = source.sample_task(ledger)?;
        let order = source.recover_ranking(&handle, ledger)?;
        let mut row = vec![0u32; m];
        for (pos, &c) in order.iter().enumerate() {
            row[c] = pos as u32 + 1;
        }
        rows.push(row);
    }
    let empirical = RankingProfile::new(rows, None)?;
    let mut best: Option<(f64, &Committee)> = None;
    for s in family {
        let value = ordinal::theta(&empirical, s)?.value;
        let better = match &best {
            None => true,
            Some((v, b)) => value > *v || (value == *v && s < b),
        };
        if better {
            best = Some((value, s));
        }
    }
    Ok(best.expect("family is nonempty").1.clone())
}

/// Persistent gap-adaptive audit of one committee.
///
/// Each round samples a fresh ranking, finds the committee's best member,
/// and compares it against the still-active rivals. A rival whose lower
/// confidence bound rises above the smallest active upper bound cannot
/// attain the minimum and is eliminated, so its comparisons stop. Pausing
/// and resuming yields the same transcript as an uninterrupted run on the
/// same source stream.
#[derive(Debug, Clone)]
pub struct GapAdaptiveAudit {
    committee: Committee,
    rivals: Vec<CandidateId>,
    active: Vec<bool>,
    wins: Vec<u64>,
    comparisons: Vec<u64>,
    rounds: u64,
    delta: f64,
}

impl GapAdaptiveAudit {
    /// Sets up the audit for a nonempty proper committee.
    pub fn new(committee: Committee, m: usize, delta: f64) -> Result<Self> {
        if committee.is_empty() || !committee.is_proper(m) {
            return Err(Error::InvalidParam(
                "audited committee must be nonempty and proper".into(),
            ));
        }
        bounds::check_unit_open("delta", delta)?;
        let rivals = committee.outside(m);
        let n = rivals.len();
        Ok(Self {
            committee,
            rivals,
            active: vec![true; n],
            wins: vec![0; n],
            comparisons: vec![0; n],
            rounds: 0,
            delta,
        })
    }

    /// One audit round against the given source.
    pub fn step(&mut self, source: &mut FeedbackSource, ledger: &mut QueryLedger) -> Result<()> {
        let handle = source.sample_task(ledger)?;
        let top = source.top_of_committee(&handle, &self.committee, ledger)?;
        self.rounds += 1;
        for i in 0..self.rivals.len() {
            if !self.active[i] {
                continue;
            }
            self.comparisons[i] += 1;
            if source.query_pairwise(&handle, top, self.rivals[i], QueryCost::Candidate, ledger)? {
                self.wins[i] += 1;
            }
        }
        let rad = self.radius()?;
        let upper = self.min_active_mean() + rad;
        for i in 0..self.rivals.len() {
            if self.active[i] {
                let mean = self.wins[i] as f64 / self.rounds as f64;
                if mean - rad > upper {
                    self.active[i] = false;
                }
            }
        }
        Ok(())
    }

    fn radius(&self) -> Result<f64> {
        bounds::audit_radius(self.rounds, self.rivals.len(), self.delta)
    }

    fn min_active_mean(&self) -> f64 {
        (0..self.rivals.len())
            .filter(|&i| self.active[i])
            .map(|i| self.wins[i] as f64 / self.rounds as f64)
            .fold(f64::INFINITY, f64::min)
    }

    /// Anytime confidence bounds on the committee's value; infinite before
    /// the first round.
    pub fn confidence_bounds(&self) -> (f64, f64) {
        if self.rounds == 0 {
            return (f64::NEG_INFINITY, f64::INFINITY);
        }
        let rad = self.radius().expect("rounds >= 1");
        let mean = self.min_active_mean();
        (mean - rad, mean + rad)
    }

    /// Current interval width.
    pub fn width(&self) -> f64 {
        let (lo, hi) = self.confidence_bounds();
        hi - lo
    }

    /// Advances rounds until the interval width is at most `target`.
    pub fn refine_to_width(
        &mut self,
        source: &mut FeedbackSource,
        target: f64,
        ledger: &mut QueryLedger,
    ) -> Result<()> {
        while self.width() > target {
            self.step(source, ledger)?;
        }
        Ok(())
    }

    /// Snapshot report with the interval midpoint as the estimate.
    pub fn report(&self) -> AuditReport {
        let (lo, hi) = self.confidence_bounds();
        AuditReport {
            theta_hat: (lo + hi) / 2.0,
            interval: (lo, hi),
            per_rival_counts: self
                .rivals
                .iter()
                .copied()
                .zip(self.comparisons.iter().copied())
                .collect(),
            stopped_at: self.rounds,
        }
    }
}

/// Runs a gap-adaptive audit until the confidence interval has width at
/// most `2 epsilon` and returns the midpoint report.
pub fn gap_adaptive_audit(
    source: &mut FeedbackSource,
    s: &Committee,
    epsilon: f64,
    delta: f64,
    ledger: &mut QueryLedger,
) -> Result<AuditReport> {
    if !source.is_strict_pairwise() {
        return Err(Error::SourceMismatch(
            "audits need a strict pairwise source".into(),
        ));
    }
    bounds::check_positive_accuracy("epsilon", epsilon)?;
    let mut audit = GapAdaptiveAudit::new(s.clone(), source.m(), delta)?;
    audit.refine_to_width(source, 2.0 * epsilon, ledger)?;
    Ok(audit.report())
}

/// Configuration for [`active_family_learning`].
#[derive(Debug, Clone, Copy)]
pub struct FamilyConfig {
    /// Phase width multiplier: phase `j` refines active audits to width
    /// `racing_width_constant * 2^-j`.
    pub racing_width_constant: f64,
    /// Seed for the per-committee audit streams.
    pub seed: u64,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        Self {
            racing_width_constant: 0.25,
            seed: 0,
        }
    }
}

/// Outcome of family learning, with per-committee ledgers exposing the
/// gap-dependent query split.
#[derive(Debug, Clone)]
pub struct FamilyOutcome {
    /// The selected committee.
    pub chosen: Committee,
    /// Index of the chosen committee within the input family.
    pub chosen_index: usize,
    /// Combined query costs.
    pub total_ledger: QueryLedger,
    /// Per-committee audit costs, aligned with the family.
    pub per_committee: Vec<QueryLedger>,
}

/// Phased racing over a finite family with persistent per-committee
/// audits. Each phase refines every active committee's interval to width
/// `c * 2^-j`, eliminates committees whose upper bound falls more than
/// `epsilon` below the best lower bound, and stops once some committee's
/// lower bound is within `epsilon` of every surviving upper bound. Returns
/// a committee whose value is within `epsilon` of the family optimum with
/// probability at least `1 - delta`.
pub fn active_family_learning(
    base: &FeedbackSource,
    family: &[Committee],
    epsilon: f64,
    delta: f64,
    config: &FamilyConfig,
) -> Result<FamilyOutcome> {
    let m = base.m();
    check_family(family, m)?;
    if !base.is_strict_pairwise() {
        return Err(Error::SourceMismatch(
            "audits need a strict pairwise source".into(),
        ));
    }
    bounds::check_positive_accuracy("epsilon", epsilon)?;
    bounds::check_unit_open("delta", delta)?;
    if config.racing_width_constant <= 0.0 {
        return Err(Error::InvalidParam(
            "racing width constant must be positive".into(),
        ));
    }
    let n_family: u64 = family.iter().map(|s| (m - s.len()) as u64).sum();
    let delta_s = delta / n_family as f64;
    let mut audits = Vec::with_capacity(family.len());
    let mut sources = Vec::with_capacity(family.len());
    let mut ledgers = vec![QueryLedger::new(); family.len()];
    for (i, s) in family.iter().enumerate() {
        audits.push(GapAdaptiveAudit::new(s.clone(), m, delta_s)?);
        sources.push(
            base.reseeded(
                config
                    .seed
                    .wrapping_add(0x9E37_79B9)
                    .wrapping_mul(i as u64 + 1),
            ),
        );
    }
    let mut active: Vec<usize> = (0..family.len()).collect();
    for phase in 0..64 {
        let target = config.racing_width_constant * 0.5f64.powi(phase);
        for &i in &active {
            audits[i].refine_to_width(&mut sources[i], target, &mut ledgers[i])?;
        }
        let lower = |i: usize| audits[i].confidence_bounds().0;
        let upper = |i: usize| audits[i].confidence_bounds().1;
        let best_lower = active
            .iter()
            .map(|&i| lower(i))
            .fold(f64::NEG_INFINITY, f64::max);
        // ties keep the committee active
        active.retain(|&i| upper(i) >= best_lower - epsilon);
        let max_upper = active
            .iter()
            .map(|&i| upper(i))
            .fold(f64::NEG_INFINITY, f64::max);
        let winner = active
            .iter()
            .copied()
            .filter(|&i| lower(i) >= max_upper - epsilon)
            .max_by(|&a, &b| lower(a).partial_cmp(&lower(b)).unwrap().then(b.cmp(&a)));
        if let Some(i) = winner {
            let mut total = QueryLedger::new();
            for l in &ledgers {
                total.absorb(l);
            }
            return Ok(FamilyOutcome {
                chosen: family[i].clone(),
                chosen_index: i,
                total_ledger: total,
                per_committee: ledgers,
            });
        }
    }
    Err(Error::InvalidParam(
        "family racing did not settle within 64 phases; widen epsilon".into(),
    ))
}

/// Exact committee and rival gaps of a family on a finite profile, the
/// quantities the racing query bounds are written in.
#[derive(Debug, Clone)]
pub struct FamilyGaps {
    /// Family optimum.
    pub optimum: f64,
    /// Per-committee gap to the family optimum.
    pub committee_gaps: Vec<f64>,
    /// Per-committee, per-rival gap above that committee's value.
    pub rival_gaps: Vec<Vec<(CandidateId, f64)>>,
    /// `max(epsilon, committee gap)` per committee.
    pub alpha: Vec<f64>,
    /// `max(epsilon, committee gap, rival gap)` per committee and rival.
    pub h: Vec<Vec<(CandidateId, f64)>>,
}

/// Computes [`FamilyGaps`] exactly from ground truth.
pub fn family_gaps(
    profile: &RankingProfile,
    family: &[Committee],
    epsilon: f64,
) -> Result<FamilyGaps> {
    check_family(family, profile.m())?;
    let thetas: Vec<f64> = family
        .iter()
        .map(|s| ordinal::theta(profile, s).map(|t| t.value))
        .collect::<Result<_>>()?;
    let optimum = thetas.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let committee_gaps: Vec<f64> = thetas.iter().map(|&t| optimum - t).collect();
    let mut rival_gaps = Vec::with_capacity(family.len());
    let mut h = Vec::with_capacity(family.len());
    for (i, s) in family.iter().enumerate() {
        let mut gaps = Vec::new();
        let mut hs = Vec::new();
        for x in s.outside(profile.m()) {
            let win = ordinal::rival_cover_rate(profile, s, x);
            let gamma = win - thetas[i];
            gaps.push((x, gamma));
            hs.push((x, epsilon.max(committee_gaps[i]).max(gamma)));
        }
        rival_gaps.push(gaps);
        h.push(hs);
    }
    let alpha = committee_gaps.iter().map(|&g| epsilon.max(g)).collect();
    Ok(FamilyGaps {
        optimum,
        committee_gaps,
        rival_gaps,
        alpha,
        h,
    })
}

fn check_family(family: &[Committee], m: usize) -> Result<()> {
    if family.is_empty() {
        return Err(Error::InvalidParam("family must be nonempty".into()));
    }
    for s in family {
        if s.is_empty() || !s.is_proper(m) {
            return Err(Error::InvalidParam(
                "family members must be nonempty proper committees".into(),
            ));
        }
    }
    Ok(())
}

/// Estimates every rival's cover rate against one committee from fresh
/// sampled rankings, as the minimax wrapper's sampled audit does, exposed
/// for harness-level reuse.
pub fn sampled_rival_cover_rates(
    source: &mut FeedbackSource,
    s: &Committee,
    samples: u64,
    ledger: &mut QueryLedger,
) -> Result<Vec<f64>> {
    let m = source.m();
    let mut wins = vec![0u64; m];
    for _ in 0..samples {
        let handle = source.sample_task(ledger)?;
        let top = source.top_of_committee(&handle, s, ledger)?;
        for (x, win) in wins.iter_mut().enumerate() {
            if s.contains(x) {
                continue;
            }
            if source.query_pairwise(&handle, top, x, QueryCost::Candidate, ledger)? {
                *win += 1;
            }
        }
    }
    Ok((0..m)
        .map(|x| {
            if s.contains(x) {
                1.0
            } else {
                wins[x] as f64 / samples as f64
            }
        })
        .collect())
}
