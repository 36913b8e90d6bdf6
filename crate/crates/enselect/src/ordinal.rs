//! Pairwise-feedback objectives and algorithms: exact evaluation of the
//! min-rival winning value and its rival-weighted relaxation, ordinal ERM,
//! the fixed-weight failure-conditioned greedy, the minimax wrapper, the
//! enumeration-based approximation scheme, and the Borda baseline.
//!
//! Committees are compared through their best-ranked member. A committee
//! covers a `(ranking, rival)` pair when some member is ranked at least as
//! highly as the rival; on strict rankings this is exactly "the committee's
//! best member beats the rival", and on weak rankings ties count as wins.

use std::collections::BTreeSet;

use crate::binary::{binomial, Combinations, SelectionResult, StepTrace};
use crate::bounds::{self, check_positive_accuracy, check_unit_open};
use crate::error::{Error, Result};
use crate::oracle::{FeedbackSource, TaskHandle};
use crate::types::{CandidateId, Committee, QueryCost, QueryLedger, RankingProfile, RivalWeights};

/// Structural constant bounding the committee size needed for a winning
/// value of `1 - c0 / K` on any finite profile.
pub const PTAS_C0: f64 = 9.8217;

/// Default cap on elimination rounds per greedy step for pairwise feedback.
pub const DEFAULT_ORDINAL_ROUND_CAP: u64 = 10_000;

/// Pairwise win rate of `s` against `s_prime`: the weighted fraction of
/// rankings where `s`'s best member outranks `s_prime`'s, with half credit
/// for ties (which arise when the committees overlap).
pub fn win_rate(profile: &RankingProfile, s: &Committee, s_prime: &Committee) -> f64 {
    let mut total = 0.0;
    for t in 0..profile.n() {
        let a = profile.best_rank(t, s);
        let b = profile.best_rank(t, s_prime);
        if a < b {
            total += profile.weights()[t];
        } else if a == b {
            total += 0.5 * profile.weights()[t];
        }
    }
    total
}

/// The min-rival winning value of a committee with its worst rival.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaValue {
    /// Minimum over outside rivals of the committee's win rate against them.
    pub value: f64,
    /// Lexicographically first rival attaining the minimum.
    pub argmin_rival: CandidateId,
}

/// Probability that some member of `s` is ranked at least as highly as `x`.
/// Equals 1 when `x` is a member.
pub fn rival_cover_rate(profile: &RankingProfile, s: &Committee, x: CandidateId) -> f64 {
    (0..profile.n())
        .filter(|&t| profile.covers(t, s, x))
        .map(|t| profile.weights()[t])
        .sum()
}

/// Exact min-rival winning value of a nonempty proper committee.
pub fn theta(profile: &RankingProfile, s: &Committee) -> Result<ThetaValue> {
    let m = profile.m();
    if s.is_empty() || !s.is_proper(m) {
        return Err(Error::InvalidParam(
            "the min-rival objective needs a nonempty proper committee".into(),
        ));
    }
    if let Some(&c) = s.members().iter().find(|&&c| c >= m) {
        return Err(Error::InvalidParam(format!("member {c} out of range")));
    }
    let mut best: Option<ThetaValue> = None;
    for x in 0..m {
        if s.contains(x) {
            continue;
        }
        let g = rival_cover_rate(profile, s, x);
        if best.as_ref().map(|b| g < b.value).unwrap_or(true) {
            best = Some(ThetaValue {
                value: g,
                argmin_rival: x,
            });
        }
    }
    Ok(best.expect("proper committee has an outside rival"))
}

/// The min-rival objective extended to all subsets: 0 on the empty set and
/// 1 on the full pool, matching the conventions used by the wrapper.
pub fn theta_extended(profile: &RankingProfile, s: &Committee) -> f64 {
    if s.is_empty() {
        return 0.0;
    }
    if !s.is_proper(profile.m()) {
        return 1.0;
    }
    theta(profile, s).expect("nonempty proper committee").value
}

/// Exact rival-weighted coverage of a committee plus the failure mass and
/// per-candidate rescue rates under that rival distribution.
#[derive(Debug, Clone)]
pub struct PrefixCoverStats {
    /// Rival-weighted coverage.
    pub phi: f64,
    /// Failure mass `1 - phi`.
    pub rho_lambda: f64,
    /// Rescue rate per candidate on failed pairs; zero for members and
    /// identically zero when the failure mass is zero.
    pub q_lambda: Vec<f64>,
}

/// Enumerates `(ranking, rival)` pairs with their weight product to compute
/// the rival-weighted coverage and all conditional rescue rates exactly.
pub fn prefix_cover_stats(
    profile: &RankingProfile,
    s: &Committee,
    rivals: &RivalWeights,
) -> Result<PrefixCoverStats> {
    let m = profile.m();
    if rivals.len() != m {
        return Err(Error::InvalidParam(
            "rival weights sized for a different pool".into(),
        ));
    }
    let mut phi = 0.0;
    let mut rescue_mass = vec![0.0; m];
    let mut fail_mass = 0.0;
    for t in 0..profile.n() {
        let w_t = profile.weights()[t];
        if w_t == 0.0 {
            continue;
        }
        let best = profile.best_rank(t, s);
        for x in 0..m {
            let w = w_t * rivals.prob(x);
            if w == 0.0 {
                continue;
            }
            if best <= profile.rank(t, x) {
                phi += w;
            } else {
                fail_mass += w;
                for (c, mass) in rescue_mass.iter_mut().enumerate() {
                    // c = x rescues automatically via rank(x) <= rank(x)
                    if !s.contains(c) && profile.rank(t, c) <= profile.rank(t, x) {
                        *mass += w;
                    }
                }
            }
        }
    }
    let q_lambda = if fail_mass > 0.0 {
        rescue_mass.iter().map(|&v| v / fail_mass).collect()
    } else {
        vec![0.0; m]
    };
    Ok(PrefixCoverStats {
        phi,
        rho_lambda: fail_mass,
        q_lambda,
    })
}

/// Ordinal ERM: draws tasks, recovers each full ranking by comparison
/// sorting, and maximizes the empirical min-rival value over all size-`k`
/// committees, ties broken lexicographically.
pub fn ordinal_erm(
    source: &mut FeedbackSource,
    m: usize,
    k: usize,
    epsilon: f64,
    delta: f64,
    cap: u128,
) -> Result<SelectionResult> {
    if k == 0 || k >= m || m != source.m() {
        return Err(Error::InvalidParam("need 1 <= k < m".into()));
    }
    if !source.is_strict_pairwise() {
        return Err(Error::SourceMismatch(
            "ordinal ERM recovers full rankings and needs a strict source".into(),
        ));
    }
    let count = binomial(m, k);
    if count > cap {
        return Err(Error::CapExceeded { needed: count, cap });
    }
    let t = bounds::ordinal_erm_t(m, k, epsilon, delta)?;
    let mut ledger = QueryLedger::new();
    let mut rows = Vec::with_capacity(t as usize);
    for _ in 0..t {
        let handle = source.sample_task(&mut ledger)?;
        let order = source.recover_ranking(&handle, &mut ledger)?;
        let mut row = vec![0u32; m];
        for (pos, &c) in order.iter().enumerate() {
            row[c] = pos as u32 + 1;
        }
        rows.push(row);
    }
    let empirical = RankingProfile::new(rows, None)?;
    let committee = argmax_theta_over_sizes(&empirical, k, k)?;
    Ok(SelectionResult {
        committee: committee.pad_to_size(k, m)?,
        ledger,
        trace: Vec::new(),
    })
}

fn argmax_theta_over_sizes(
    profile: &RankingProfile,
    min_size: usize,
    max_size: usize,
) -> Result<Committee> {
    let m = profile.m();
    let mut best: Option<(f64, Committee)> = None;
    for size in min_size..=max_size {
        let mut iter = Combinations::new(m, size);
        while let Some(members) = iter.next() {
            let s = Committee::exact(members.to_vec())?;
            let value = theta(profile, &s)?.value;
            if best.as_ref().map(|(v, _)| value > *v).unwrap_or(true) {
                best = Some((value, s));
            }
        }
    }
    Ok(best.expect("at least one committee enumerated").1)
}

/// Caps for ordinal elimination and the weighted greedy around it.
#[derive(Debug, Clone, Copy)]
pub struct WofgConfig {
    /// Hard cap on elimination rounds per greedy step.
    pub max_rounds_per_step: u64,
    /// Cap on tentative pairs per accepted failed pair.
    pub max_draws_per_failure: u64,
}

impl Default for WofgConfig {
    fn default() -> Self {
        Self {
            max_rounds_per_step: DEFAULT_ORDINAL_ROUND_CAP,
            max_draws_per_failure: 10_000,
        }
    }
}

/// Outcome of one ordinal elimination call.
#[derive(Debug, Clone)]
pub struct OrdinalElimOutcome {
    /// The returned candidate.
    pub chosen: CandidateId,
    /// Accepted failed pairs consumed.
    pub rounds: u64,
    /// True when the round cap stopped the loop.
    pub capped: bool,
    /// Candidate-versus-rival comparisons per arm, aligned with the arms.
    pub queries_per_arm: Vec<u64>,
}

/// Successive elimination over rival-conditioned rescue rates on failed
/// `(ranking, rival)` pairs of `s`. A candidate equal to the sampled rival
/// rescues automatically with no oracle call; otherwise one cover query per
/// active candidate is charged as candidate evaluation.
#[allow(clippy::too_many_arguments)]
pub fn ordinal_failcond_elim(
    source: &mut FeedbackSource,
    s: &Committee,
    arms: &[CandidateId],
    rivals: &RivalWeights,
    eta: f64,
    delta: f64,
    warm_start: &[(TaskHandle, CandidateId)],
    config: &WofgConfig,
    ledger: &mut QueryLedger,
) -> Result<OrdinalElimOutcome> {
    if arms.is_empty() {
        return Err(Error::InvalidParam(
            "elimination needs at least one arm".into(),
        ));
    }
    if arms.iter().any(|c| s.contains(*c)) {
        return Err(Error::InvalidParam(
            "arms must be disjoint from the committee".into(),
        ));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParam(format!("eta {eta} outside (0, 1]")));
    }
    check_unit_open("delta", delta)?;
    if !source.is_pairwise() {
        return Err(Error::SourceMismatch(
            "ordinal elimination needs pairwise feedback".into(),
        ));
    }

    let mut sums = vec![0u64; arms.len()];
    let mut queries = vec![0u64; arms.len()];
    let mut active = vec![true; arms.len()];
    let mut n_active = arms.len();
    let mut warm = warm_start.iter();
    let mut capped = false;
    let mut r = 0u64;
    loop {
        if r >= config.max_rounds_per_step {
            capped = true;
            break;
        }
        let (handle, x) = match warm.next() {
            Some(&(h, x)) => (h, x),
            None => source.rejection_sample_failed_pair(
                s,
                rivals,
                ledger,
                config.max_draws_per_failure,
            )?,
        };
        r += 1;
        for (i, &c) in arms.iter().enumerate() {
            if !active[i] {
                continue;
            }
            let rescued = if c == x {
                true
            } else {
                queries[i] += 1;
                source.query_cover(&handle, c, x, QueryCost::Candidate, ledger)?
            };
            sums[i] += rescued as u64;
        }
        let rad = bounds::elim_radius(r, arms.len(), delta)?;
        let best = best_active(&sums, &active);
        let threshold = sums[best] as f64 / r as f64 - 2.0 * rad - eta;
        for i in 0..arms.len() {
            if active[i] && i != best && (sums[i] as f64 / r as f64) < threshold {
                active[i] = false;
                n_active -= 1;
            }
        }
        if rad <= eta / 4.0 || n_active == 1 {
            break;
        }
    }
    if r == 0 {
        return Err(Error::InvalidParam(
            "round cap must allow at least one round".into(),
        ));
    }
    Ok(OrdinalElimOutcome {
        chosen: arms[best_active(&sums, &active)],
        rounds: r,
        capped,
        queries_per_arm: queries,
    })
}

fn best_active(sums: &[u64], active: &[bool]) -> usize {
    let mut best = usize::MAX;
    let mut best_sum = 0u64;
    for i in 0..sums.len() {
        if active[i] && (best == usize::MAX || sums[i] > best_sum) {
            best = i;
            best_sum = sums[i];
        }
    }
    best
}

/// Failure-conditioned greedy for the rival-weighted coverage objective.
///
/// Each step estimates the failure mass from `L` tentative pairs, stops and
/// pads once the clamped estimate falls to `eps / (4k)`, and otherwise runs
/// an ordinal elimination at accuracy `eps / (4k rho_bar)` and confidence
/// `delta / (2k)`. With probability at least `1 - delta` the result's
/// rival-weighted coverage is within `eps` of `(1 - 1/e)` times the best
/// size-`k` value.
#[allow(clippy::too_many_arguments)]
pub fn weighted_ordinal_fail_greedy(
    source: &mut FeedbackSource,
    m: usize,
    k: usize,
    rivals: &RivalWeights,
    epsilon: f64,
    delta: f64,
    initial: Option<&Committee>,
    config: &WofgConfig,
) -> Result<SelectionResult> {
    if k == 0 || k > m || m != source.m() {
        return Err(Error::InvalidParam("need 1 <= k <= m".into()));
    }
    if rivals.len() != m {
        return Err(Error::InvalidParam(
            "rival weights sized for a different pool".into(),
        ));
    }
    if !source.is_pairwise() {
        return Err(Error::SourceMismatch(
            "weighted ordinal greedy needs pairwise feedback".into(),
        ));
    }
    let l = bounds::wofg_l(k, epsilon, delta)?;
    let mut s = match initial {
        Some(init) => {
            if init.len() > k || init.members().iter().any(|&c| c >= m) {
                return Err(Error::InvalidParam(
                    "initial committee does not fit the target".into(),
                ));
            }
            Committee::new(init.members().to_vec(), k)?
        }
        None => Committee::empty(k),
    };
    let mut ledger = QueryLedger::new();
    let mut trace = Vec::new();
    while s.len() < k {
        let mut failures = 0u64;
        for _ in 0..l {
            let (handle, x) = source.sample_pair(rivals, &mut ledger)?;
            if !source.committee_covers_pair(&handle, &s, x, &mut ledger)? {
                failures += 1;
            }
        }
        let rho_hat = failures as f64 / l as f64;
        let rho_bar = (rho_hat + epsilon / (16.0 * k as f64)).min(1.0);
        if rho_bar <= epsilon / (4.0 * k as f64) {
            trace.push(StepTrace {
                chosen: None,
                rho_bar: Some(rho_bar),
                accepted_failures: 0,
                capped: false,
            });
            break;
        }
        let eta_i = (epsilon / (4.0 * k as f64 * rho_bar)).min(1.0);
        let delta_i = delta / (2.0 * k as f64);
        let arms = s.outside(m);
        let outcome = ordinal_failcond_elim(
            source,
            &s,
            &arms,
            rivals,
            eta_i,
            delta_i,
            &[],
            config,
            &mut ledger,
        )?;
        trace.push(StepTrace {
            chosen: Some(outcome.chosen),
            rho_bar: Some(rho_bar),
            accepted_failures: outcome.rounds,
            capped: outcome.capped,
        });
        s = s.with_member(outcome.chosen)?;
    }
    Ok(SelectionResult {
        committee: s.pad_to_size(k, m)?,
        ledger,
        trace,
    })
}

/// A uniform distribution over the committees produced by the minimax
/// wrapper's rounds.
#[derive(Debug, Clone)]
pub struct Lottery {
    committees: Vec<Committee>,
}

impl Lottery {
    /// The per-round committees, in round order.
    pub fn committees(&self) -> &[Committee] {
        &self.committees
    }

    /// Mean cover rate of rival `x` under the lottery, evaluated exactly on
    /// a finite profile.
    pub fn rival_cover_rate(&self, profile: &RankingProfile, x: CandidateId) -> f64 {
        let total: f64 = self
            .committees
            .iter()
            .map(|s| rival_cover_rate(profile, s, x))
            .sum();
        total / self.committees.len() as f64
    }

    /// `min` over every candidate of the lottery's mean cover rate against
    /// it; the wrapper's guarantee lower-bounds this quantity.
    pub fn value(&self, profile: &RankingProfile) -> f64 {
        (0..profile.m())
            .map(|x| self.rival_cover_rate(profile, x))
            .fold(f64::INFINITY, f64::min)
    }
}

/// How the wrapper estimates per-round rival cover rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RivalAuditMode {
    /// Exact reads of the empirical profile, charged at full-information
    /// cost (`m - 1` comparisons per training ranking per round).
    FullInfo,
    /// Fresh sampled rankings per round: find the committee's best member,
    /// then compare it against every outside rival.
    Sampled,
}

/// Configuration for [`minimax_wrapper`].
#[derive(Debug, Clone)]
pub struct MinimaxConfig {
    /// Rival audit mode; full information requires an empirical profile.
    pub rival_audit: RivalAuditMode,
    /// Overrides the round count from the formula when set.
    pub rounds_override: Option<u64>,
    /// Constant in the round-count formula.
    pub mw_round_constant: f64,
    /// Constant in the sampled-audit size formula.
    pub audit_constant: f64,
    /// Caps for the inner greedy oracle.
    pub wofg: WofgConfig,
}

impl Default for MinimaxConfig {
    fn default() -> Self {
        Self {
            rival_audit: RivalAuditMode::Sampled,
            rounds_override: None,
            mw_round_constant: bounds::DEFAULT_MW_ROUND_CONSTANT,
            audit_constant: bounds::DEFAULT_AUDIT_CONSTANT,
            wofg: WofgConfig::default(),
        }
    }
}

/// Output of the minimax wrapper: a lottery over size-`k` committees and
/// their union.
#[derive(Debug, Clone)]
pub struct MinimaxOutcome {
    /// Uniform lottery over the per-round committees.
    pub lottery: Lottery,
    /// Union of all round committees, of size at most `k * rounds`.
    pub union: Committee,
    /// Query costs of the whole run.
    pub ledger: QueryLedger,
    /// Rounds executed.
    pub rounds: u64,
}

/// Multiplicative weights over rivals around the fixed-weight greedy
/// oracle. Each round selects a committee for the current rival
/// distribution at accuracy `eps / 4` and confidence `delta / (2R)`,
/// estimates every rival's cover rate against it, and reweights rivals
/// toward the ones the committee fails.
pub fn minimax_wrapper(
    source: &mut FeedbackSource,
    m: usize,
    k: usize,
    epsilon: f64,
    delta: f64,
    config: &MinimaxConfig,
) -> Result<MinimaxOutcome> {
    if k == 0 || k >= m || m != source.m() {
        return Err(Error::InvalidParam("need 1 <= k < m".into()));
    }
    check_positive_accuracy("epsilon", epsilon)?;
    check_unit_open("delta", delta)?;
    if !source.is_pairwise() {
        return Err(Error::SourceMismatch(
            "minimax wrapper needs pairwise feedback".into(),
        ));
    }
    if config.rival_audit == RivalAuditMode::FullInfo && source.profile().is_none() {
        return Err(Error::SourceMismatch(
            "full-information rival audits need an empirical profile".into(),
        ));
    }
    let (formula_rounds, _) = bounds::mw_rounds_and_rate(m, epsilon, config.mw_round_constant)?;
    let rounds = config.rounds_override.unwrap_or(formula_rounds).max(1);
    let eta_mw = ((m as f64).ln() / rounds as f64).sqrt();
    let inner_delta = delta / (2.0 * rounds as f64);
    let audit_t = bounds::minimax_audit_t(m, rounds, epsilon, delta, config.audit_constant)?;

    let mut ledger = QueryLedger::new();
    let mut cum_loss = vec![0.0f64; m];
    let mut committees = Vec::with_capacity(rounds as usize);
    for _ in 0..rounds {
        let max_loss = cum_loss.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let raw: Vec<f64> = cum_loss
            .iter()
            .map(|&l| (eta_mw * (l - max_loss)).exp())
            .collect();
        let total: f64 = raw.iter().sum();
        let lambda = RivalWeights::new(normalize_exact(&raw, total))?;

        let inner = weighted_ordinal_fail_greedy(
            source,
            m,
            k,
            &lambda,
            epsilon / 4.0,
            inner_delta,
            None,
            &config.wofg,
        )?;
        ledger.absorb(&inner.ledger);
        let s_t = inner.committee;

        let g_hat = match config.rival_audit {
            RivalAuditMode::FullInfo => {
                let profile = source.profile().expect("checked above").clone();
                for _ in 0..profile.n() {
                    for _ in 0..s_t.len().saturating_sub(1) {
                        ledger.charge(QueryCost::Committee);
                    }
                    for _ in 0..m - s_t.len() {
                        ledger.charge(QueryCost::Candidate);
                    }
                }
                (0..m)
                    .map(|x| rival_cover_rate(&profile, &s_t, x))
                    .collect::<Vec<f64>>()
            }
            RivalAuditMode::Sampled => {
                crate::audit::sampled_rival_cover_rates(source, &s_t, audit_t, &mut ledger)?
            }
        };
        for (x, loss) in cum_loss.iter_mut().enumerate() {
            *loss += 1.0 - g_hat[x];
        }
        committees.push(s_t);
    }
    let mut union_members: BTreeSet<CandidateId> = BTreeSet::new();
    for s in &committees {
        union_members.extend(s.members().iter().copied());
    }
    let union = Committee::exact(union_members.into_iter().collect::<Vec<_>>())?;
    Ok(MinimaxOutcome {
        lottery: Lottery { committees },
        union,
        ledger,
        rounds,
    })
}

fn normalize_exact(raw: &[f64], total: f64) -> Vec<f64> {
    let mut probs: Vec<f64> = raw.iter().map(|&w| w / total).collect();
    let sum: f64 = probs.iter().sum();
    // pin the largest coordinate so the simplex check holds exactly
    let imax = (0..probs.len())
        .max_by(|&a, &b| probs[a].partial_cmp(&probs[b]).unwrap())
        .unwrap();
    probs[imax] += 1.0 - sum;
    probs
}

/// Enumeration-based approximation for the min-rival objective: enumerates
/// all committees of size up to `min(k, ceil(c0 / gamma))`, takes the best,
/// and pads it to size `k`. Exact when `k` is below the size threshold.
pub fn ptas_theta(profile: &RankingProfile, k: usize, gamma: f64, cap: u128) -> Result<Committee> {
    let m = profile.m();
    if k == 0 || k >= m {
        return Err(Error::InvalidParam("need 1 <= k < m".into()));
    }
    check_unit_open("gamma", gamma)?;
    let k_gamma = ptas_size_threshold(gamma);
    let bound = k.min(k_gamma);
    let mut needed: u128 = 0;
    for size in 1..=bound {
        needed = needed.saturating_add(binomial(m, size));
    }
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    let best = argmax_theta_over_sizes(profile, 1, bound)?;
    best.pad_to_size(k, m)
}

/// The enumeration size threshold `ceil(c0 / gamma)`.
pub fn ptas_size_threshold(gamma: f64) -> usize {
    (PTAS_C0 / gamma).ceil() as usize
}

/// Picks the `k` candidates with lowest weighted mean rank, lowest id on
/// ties, charging the full comparison-sort elicitation cost
/// `ceil(log2 m!)` per ranking.
pub fn borda_top_k(profile: &RankingProfile, k: usize) -> Result<SelectionResult> {
    let m = profile.m();
    if k > m {
        return Err(Error::InvalidParam("k exceeds the candidate count".into()));
    }
    let mean_rank: Vec<f64> = (0..m)
        .map(|c| {
            (0..profile.n())
                .map(|t| profile.weights()[t] * profile.rank(t, c) as f64)
                .sum()
        })
        .collect();
    let mut order: Vec<CandidateId> = (0..m).collect();
    order.sort_by(|&a, &b| {
        mean_rank[a]
            .partial_cmp(&mean_rank[b])
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut ledger = QueryLedger::new();
    ledger.q_rank = log2_factorial_ceil(m) * profile.n() as u64;
    Ok(SelectionResult {
        committee: Committee::new(order[..k].to_vec(), k)?,
        ledger,
        trace: Vec::new(),
    })
}

/// `ceil(log2(m!))`, the comparison-sort cost of one full ranking.
pub fn log2_factorial_ceil(m: usize) -> u64 {
    let bits: f64 = (2..=m).map(|i| (i as f64).log2()).sum();
    bits.ceil() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;
    use crate::instances::{self, nonsubmodular4};

    fn committee(ids: &[CandidateId]) -> Committee {
        Committee::exact(ids.to_vec()).unwrap()
    }

    #[test]
    fn win_rate_on_fixture() {
        let p = nonsubmodular4();
        // a, b, c, d are ids 0..4
        let v = win_rate(&p, &committee(&[0, 1]), &committee(&[0, 2]));
        assert!((v - 2.0 / 3.0).abs() < 1e-12);

        let single = RankingProfile::from_orders(vec![vec![0, 1, 2, 3]], None).unwrap();
        let v = win_rate(&single, &committee(&[0, 1]), &committee(&[0, 2]));
        assert!((v - 0.5).abs() < 1e-12, "shared top is a tie");
        let s = committee(&[1, 3]);
        assert!((win_rate(&p, &s, &s) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn win_rate_half_credit_symmetry() {
        let p = nonsubmodular4();
        for a_mask in 1u32..15 {
            for b_mask in 1u32..15 {
                let a = committee(&(0..4).filter(|&c| a_mask >> c & 1 == 1).collect::<Vec<_>>());
                let b = committee(&(0..4).filter(|&c| b_mask >> c & 1 == 1).collect::<Vec<_>>());
                assert!((win_rate(&p, &a, &b) + win_rate(&p, &b, &a) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn theta_fixture_values() {
        let p = nonsubmodular4();
        assert!((theta(&p, &committee(&[0])).unwrap().value - 1.0 / 3.0).abs() < 1e-12);
        assert!((theta(&p, &committee(&[0, 2])).unwrap().value - 1.0 / 3.0).abs() < 1e-12);
        assert!((theta(&p, &committee(&[0, 1])).unwrap().value - 2.0 / 3.0).abs() < 1e-12);
        assert!((theta(&p, &committee(&[0, 1, 2])).unwrap().value - 1.0).abs() < 1e-12);
        assert!(theta(&p, &Committee::empty(1)).is_err());
        assert!(theta(&p, &committee(&[0, 1, 2, 3])).is_err());
    }

    #[test]
    fn theta_cyclic_argmin() {
        let p = instances::gen_cyclic_profile(3).unwrap();
        let t = theta(&p, &committee(&[0])).unwrap();
        assert!((t.value - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(t.argmin_rival, 2);
    }

    #[test]
    fn prefix_cover_stats_fixture() {
        let p = nonsubmodular4();
        let s = committee(&[0]);
        // point mass on b: coverage is WIN({a},{b}) = 1/3
        let stats = prefix_cover_stats(&p, &s, &RivalWeights::point_mass(4, 1).unwrap()).unwrap();
        assert!((stats.phi - 1.0 / 3.0).abs() < 1e-12);
        assert!((stats.rho_lambda - 2.0 / 3.0).abs() < 1e-12);

        // point mass on d: a is above d in both rankings
        let stats = prefix_cover_stats(&p, &s, &RivalWeights::point_mass(4, 3).unwrap()).unwrap();
        assert!((stats.phi - 1.0).abs() < 1e-12);
        assert_eq!(stats.rho_lambda, 0.0);
        assert!(
            stats.q_lambda.iter().all(|&q| q == 0.0),
            "convention branch"
        );

        // the full pool covers every rival under any weights
        let full = committee(&[0, 1, 2, 3]);
        let stats = prefix_cover_stats(&p, &full, &RivalWeights::uniform(4)).unwrap();
        assert!((stats.phi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weak_profiles_use_the_covering_predicate() {
        // ties are weak wins for the min-rival objective, so theta can
        // exceed the half-credit win rate on tied rankings
        let p = RankingProfile::new(vec![vec![1, 1, 3, 3], vec![3, 1, 1, 4]], None).unwrap();
        assert!(!p.strict());
        let s = committee(&[0]);
        let t = theta(&p, &s).unwrap();
        assert!((t.value - 0.5).abs() < 1e-12);
        assert_eq!(t.argmin_rival, 1);
        // half credit on the tied ranking gives 1/4, below the cover rate
        let w = win_rate(&p, &s, &committee(&[1]));
        assert!((w - 0.25).abs() < 1e-12);
        assert!((rival_cover_rate(&p, &s, 1) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ordinal_marginal_identity_on_fixture() {
        let p = nonsubmodular4();
        for mask in 0u32..15 {
            let s = committee(&(0..4).filter(|&c| mask >> c & 1 == 1).collect::<Vec<_>>());
            for x in 0..4 {
                let lambda = RivalWeights::point_mass(4, x).unwrap();
                let stats = prefix_cover_stats(&p, &s, &lambda).unwrap();
                for c in 0..4 {
                    if s.contains(c) {
                        continue;
                    }
                    let with_c = s.with_member(c).unwrap();
                    let stats_c = prefix_cover_stats(&p, &with_c, &lambda).unwrap();
                    let marginal = stats_c.phi - stats.phi;
                    let product = stats.rho_lambda * stats.q_lambda[c];
                    assert!(
                        (marginal - product).abs() < 1e-12,
                        "S={s} c={c} x={x}: {marginal} vs {product}"
                    );
                }
            }
        }
    }

    #[test]
    fn ordinal_erm_recovers_population_optimum() {
        let p = nonsubmodular4();
        let mut source = FeedbackSource::from_profile(p.clone(), 5);
        let result = ordinal_erm(&mut source, 4, 1, 0.2, 0.2, 1 << 20).unwrap();
        let opt = exact::opt_theta_bruteforce(&p, 1, 1 << 20).unwrap();
        assert_eq!(result.committee.members(), opt.witness.members());
        // comparison budget per recovered ranking
        let t = bounds::ordinal_erm_t(4, 1, 0.2, 0.2).unwrap();
        assert!(result.ledger.q_rank <= t * 8);
        assert_eq!(result.ledger.draws, t);
    }

    #[test]
    fn ordinal_erm_rejects_weak_sources() {
        let weak = RankingProfile::new(vec![vec![1, 1, 3, 3], vec![1, 2, 2, 4]], None).unwrap();
        let mut source = FeedbackSource::from_profile(weak, 0);
        assert!(matches!(
            ordinal_erm(&mut source, 4, 1, 0.3, 0.2, 1 << 20),
            Err(Error::SourceMismatch(_))
        ));
    }

    #[test]
    fn ordinal_elim_fixture_returns_auto_rescuer() {
        // S = {a}, rivals point mass on b: only the b-first ranking fails,
        // and on it only b itself rescues (its prefix is just {b})
        let mut source = FeedbackSource::from_profile(nonsubmodular4(), 1);
        let s = committee(&[0]);
        let lambda = RivalWeights::point_mass(4, 1).unwrap();
        let mut ledger = QueryLedger::new();
        let out = ordinal_failcond_elim(
            &mut source,
            &s,
            &[1, 2, 3],
            &lambda,
            0.2,
            0.1,
            &[],
            &WofgConfig::default(),
            &mut ledger,
        )
        .unwrap();
        assert_eq!(out.chosen, 1);

        // a single arm is returned directly
        let out = ordinal_failcond_elim(
            &mut source,
            &s,
            &[2],
            &lambda,
            0.5,
            0.2,
            &[],
            &WofgConfig::default(),
            &mut ledger,
        )
        .unwrap();
        assert_eq!(out.chosen, 2);
    }

    #[test]
    fn wofg_picks_dominant_candidate() {
        // candidate 2 is ranked first in every drawn ranking
        let profile = RankingProfile::from_orders(
            vec![vec![2, 0, 1, 3], vec![2, 1, 3, 0], vec![2, 3, 0, 1]],
            None,
        )
        .unwrap();
        let mut source = FeedbackSource::from_profile(profile.clone(), 3);
        let result = weighted_ordinal_fail_greedy(
            &mut source,
            4,
            1,
            &RivalWeights::uniform(4),
            0.3,
            0.2,
            None,
            &WofgConfig::default(),
        )
        .unwrap();
        assert_eq!(result.committee.members(), &[2]);
        let stats =
            prefix_cover_stats(&profile, &result.committee, &RivalWeights::uniform(4)).unwrap();
        assert!((stats.phi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wofg_early_stops_when_preseeded() {
        // candidate 2 is everywhere first, so rho is 0 once it is seeded
        let profile =
            RankingProfile::from_orders(vec![vec![2, 0, 1, 3], vec![2, 1, 3, 0]], None).unwrap();
        let mut source = FeedbackSource::from_profile(profile, 7);
        let init = committee(&[2]);
        let result = weighted_ordinal_fail_greedy(
            &mut source,
            4,
            2,
            &RivalWeights::uniform(4),
            0.4,
            0.2,
            Some(&init),
            &WofgConfig::default(),
        )
        .unwrap();
        assert_eq!(
            result.committee.members(),
            &[0, 2],
            "padded with the lowest unused id"
        );
        assert!(result.trace.iter().any(|s| s.chosen.is_none()));
    }

    #[test]
    fn minimax_single_round_uses_uniform_weights() {
        let mut source = FeedbackSource::from_profile(nonsubmodular4(), 2);
        let config = MinimaxConfig {
            rival_audit: RivalAuditMode::FullInfo,
            rounds_override: Some(1),
            ..MinimaxConfig::default()
        };
        let out = minimax_wrapper(&mut source, 4, 1, 0.4, 0.3, &config).unwrap();
        assert_eq!(out.rounds, 1);
        assert_eq!(out.lottery.committees().len(), 1);
        assert_eq!(out.union.len(), 1);
    }

    #[test]
    fn minimax_union_theta_dominates_rounds() {
        let p = nonsubmodular4();
        let mut source = FeedbackSource::from_profile(p.clone(), 11);
        let config = MinimaxConfig {
            rival_audit: RivalAuditMode::FullInfo,
            rounds_override: Some(12),
            ..MinimaxConfig::default()
        };
        let out = minimax_wrapper(&mut source, 4, 1, 0.3, 0.3, &config).unwrap();
        let union_theta = theta_extended(&p, &out.union);
        for s in out.lottery.committees() {
            assert!(union_theta >= theta_extended(&p, s) - 1e-12);
        }
    }

    #[test]
    fn ptas_threshold_and_exactness() {
        assert_eq!(ptas_size_threshold(0.99), 10);
        let p = nonsubmodular4();
        // K(0.5) = 20 > k, so enumeration covers all sizes <= k: exact
        let s = ptas_theta(&p, 2, 0.5, 1 << 20).unwrap();
        let opt = exact::opt_theta_bruteforce(&p, 2, 1 << 20).unwrap();
        assert!((theta(&p, &s).unwrap().value - opt.value).abs() < 1e-12);
        assert!(matches!(
            ptas_theta(&p, 2, 0.5, 3),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn borda_fixture_tie_breaks_lexicographically() {
        let p = nonsubmodular4();
        // mean ranks: a = 2, b = 2, c = 3, d = 3
        let result = borda_top_k(&p, 1).unwrap();
        assert_eq!(result.committee.members(), &[0]);
        assert_eq!(result.ledger.q_rank, log2_factorial_ceil(4) * 2);

        let single = RankingProfile::from_orders(vec![vec![0, 1, 2, 3]], None).unwrap();
        let result = borda_top_k(&single, 2).unwrap();
        assert_eq!(result.committee.members(), &[0, 1]);
    }

    #[test]
    fn log2_factorial_values() {
        assert_eq!(log2_factorial_ceil(1), 0);
        assert_eq!(log2_factorial_ceil(2), 1);
        assert_eq!(log2_factorial_ceil(4), 5); // log2(24) = 4.58
    }
}
