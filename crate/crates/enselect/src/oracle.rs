//! The query surface: task sampling, binary and pairwise queries with
//! ledger accounting, rejection sampling of failures, and ranking recovery.
//!
//! A [`FeedbackSource`] bundles ground truth (a finite matrix or profile, or
//! a generative law) with a seeded RNG. Tasks are observed only as
//! [`TaskHandle`]s; the latent profile behind a handle never changes, so
//! repeated identical queries return identical answers. Generative sources
//! derive each queried coordinate by hashing the handle's seed, so untouched
//! coordinates are never materialized.
//!
//! Charging rules follow the query-access conventions: repeat calls are
//! counted again (algorithms are responsible for not repeating), while a
//! pairwise query whose reversed pair was already asked on the same handle
//! is answered as determined and charges nothing.

use std::collections::HashMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::types::{
    BinaryOutcomeMatrix, CandidateId, Committee, QueryCost, QueryLedger, RankingProfile,
    RivalWeights,
};

/// Opaque token identifying one sampled task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TaskHandle {
    id: u64,
    latent: Latent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Latent {
    /// Index into an empirical matrix or profile.
    Column(u32),
    /// Per-task seed for a generative law.
    Seeded(u64),
}

impl TaskHandle {
    /// Column index for handles drawn from an empirical source.
    pub fn column(&self) -> Option<usize> {
        match self.latent {
            Latent::Column(c) => Some(c as usize),
            Latent::Seeded(_) => None,
        }
    }
}

#[derive(Debug, Clone)]
enum SourceData {
    Matrix(BinaryOutcomeMatrix),
    Profile(RankingProfile),
    /// Independent per-candidate solve probabilities.
    Bernoulli(Vec<f64>),
    /// Strict rankings: winners block before losers block, uniform inside.
    BitBlock(Vec<f64>),
}

/// Binary or pairwise feedback with deterministic seeded sampling.
#[derive(Debug, Clone)]
pub struct FeedbackSource {
    data: SourceData,
    rng: ChaCha8Rng,
    next_handle: u64,
    /// Cumulative weights for weighted empirical profile sampling.
    cum_weights: Option<Vec<f64>>,
    /// Orientations asked per (handle, unordered pair); bit 0 = (lo, hi)
    /// asked, bit 1 = (hi, lo) asked. Used for the reversed-pair discount.
    asked_pairs: HashMap<(u64, u32), u8>,
    /// Opt-in audit of repeated binary queries (tests assert algorithms
    /// never re-ask a (handle, candidate) pair).
    repeat_tracker: Option<(std::collections::HashSet<(u64, u32)>, u64)>,
}

impl FeedbackSource {
    /// Empirical binary source sampling columns uniformly.
    pub fn from_matrix(matrix: BinaryOutcomeMatrix, seed: u64) -> Self {
        Self::build(SourceData::Matrix(matrix), seed)
    }

    /// Empirical pairwise source sampling rankings by their weights.
    pub fn from_profile(profile: RankingProfile, seed: u64) -> Self {
        let cum = cumulative(profile.weights());
        let mut src = Self::build(SourceData::Profile(profile), seed);
        src.cum_weights = cum;
        src
    }

    /// Generative binary source with independent per-candidate biases.
    pub fn bernoulli(biases: Vec<f64>, seed: u64) -> Result<Self> {
        check_biases(&biases)?;
        Ok(Self::build(SourceData::Bernoulli(biases), seed))
    }

    /// Generative strict-ranking source: each task draws independent bits,
    /// lists the winners block before the losers block, uniform order within
    /// each block.
    pub fn bit_block(biases: Vec<f64>, seed: u64) -> Result<Self> {
        check_biases(&biases)?;
        Ok(Self::build(SourceData::BitBlock(biases), seed))
    }

    fn build(data: SourceData, seed: u64) -> Self {
        Self {
            data,
            rng: ChaCha8Rng::seed_from_u64(seed),
            next_handle: 0,
            cum_weights: None,
            asked_pairs: HashMap::new(),
            repeat_tracker: None,
        }
    }

    /// Starts auditing repeated identical binary queries.
    pub fn track_repeats(&mut self) {
        self.repeat_tracker = Some((std::collections::HashSet::new(), 0));
    }

    /// Repeated identical binary queries observed since tracking started.
    pub fn repeated_binary_queries(&self) -> u64 {
        self.repeat_tracker.as_ref().map(|(_, n)| *n).unwrap_or(0)
    }

    /// Same ground truth with a fresh RNG stream and empty transcript.
    /// Runs over one immutable instance derive their stream from
    /// `(master_seed, run_index)` this way.
    pub fn reseeded(&self, seed: u64) -> Self {
        let mut src = Self::build(self.data.clone(), seed);
        src.cum_weights = self.cum_weights.clone();
        src
    }

    /// Sub-stream selection on top of the current seed.
    pub fn set_stream(&mut self, stream: u64) {
        self.rng.set_stream(stream);
    }

    /// Candidate count.
    pub fn m(&self) -> usize {
        match &self.data {
            SourceData::Matrix(m) => m.m(),
            SourceData::Profile(p) => p.m(),
            SourceData::Bernoulli(b) | SourceData::BitBlock(b) => b.len(),
        }
    }

    /// True for binary-feedback sources.
    pub fn is_binary(&self) -> bool {
        matches!(self.data, SourceData::Matrix(_) | SourceData::Bernoulli(_))
    }

    /// True for pairwise-feedback sources.
    pub fn is_pairwise(&self) -> bool {
        !self.is_binary()
    }

    /// True for pairwise sources whose rankings are strict.
    pub fn is_strict_pairwise(&self) -> bool {
        match &self.data {
            SourceData::Profile(p) => p.strict(),
            SourceData::BitBlock(_) => true,
            _ => false,
        }
    }

    /// The empirical matrix behind this source, when there is one.
    pub fn matrix(&self) -> Option<&BinaryOutcomeMatrix> {
        match &self.data {
            SourceData::Matrix(m) => Some(m),
            _ => None,
        }
    }

    /// The empirical profile behind this source, when there is one.
    pub fn profile(&self) -> Option<&RankingProfile> {
        match &self.data {
            SourceData::Profile(p) => Some(p),
            _ => None,
        }
    }

    /// Draws one task i.i.d. from the source law and charges one draw.
    pub fn sample_task(&mut self, ledger: &mut QueryLedger) -> Result<TaskHandle> {
        ledger.draws += 1;
        let latent = match &self.data {
            SourceData::Matrix(m) => Latent::Column(self.rng.random_range(0..m.n()) as u32),
            SourceData::Profile(p) => {
                let col = match &self.cum_weights {
                    Some(cum) => sample_cumulative(cum, self.rng.random::<f64>()),
                    None => self.rng.random_range(0..p.n()),
                };
                Latent::Column(col as u32)
            }
            SourceData::Bernoulli(_) | SourceData::BitBlock(_) => {
                Latent::Seeded(self.rng.next_u64())
            }
        };
        let id = self.next_handle;
        self.next_handle += 1;
        Ok(TaskHandle { id, latent })
    }

    /// Answers `u(d, c)` and charges one call to the given cost class.
    /// Repeat calls return the cached answer but are charged again.
    pub fn query_binary(
        &mut self,
        handle: &TaskHandle,
        c: CandidateId,
        cost: QueryCost,
        ledger: &mut QueryLedger,
    ) -> Result<bool> {
        self.check_candidate(c)?;
        let answer = match (&self.data, handle.latent) {
            (SourceData::Matrix(m), Latent::Column(col)) => m.get(c, col as usize),
            (SourceData::Bernoulli(biases), Latent::Seeded(seed)) => {
                coord_uniform(seed, c as u64) < biases[c]
            }
            _ => {
                return Err(Error::SourceMismatch(
                    "binary query on a pairwise source".into(),
                ))
            }
        };
        ledger.charge(cost);
        if let Some((seen, repeats)) = &mut self.repeat_tracker {
            if !seen.insert((handle.id, c as u32)) {
                *repeats += 1;
            }
        }
        Ok(answer)
    }

    /// Answers whether `a` is ranked above `b` on the handle's latent strict
    /// ranking. The reversed pair is answered as determined with no charge.
    pub fn query_pairwise(
        &mut self,
        handle: &TaskHandle,
        a: CandidateId,
        b: CandidateId,
        cost: QueryCost,
        ledger: &mut QueryLedger,
    ) -> Result<bool> {
        if a == b {
            return Err(Error::InvalidParam(
                "pairwise query needs two distinct candidates".into(),
            ));
        }
        self.check_candidate(a)?;
        self.check_candidate(b)?;
        if !self.is_strict_pairwise() {
            return Err(Error::SourceMismatch(
                "pairwise query needs a strict pairwise source".into(),
            ));
        }
        let answer = self.beats(handle, a, b)?;
        self.charge_pair(handle, a, b, cost, ledger);
        Ok(answer)
    }

    /// Covering predicate `rank(c) <= rank(x)`: ties are weak wins and
    /// `c = x` rescues automatically with no oracle call. On strict sources
    /// this coincides with the pairwise query for distinct candidates.
    pub fn query_cover(
        &mut self,
        handle: &TaskHandle,
        c: CandidateId,
        x: CandidateId,
        cost: QueryCost,
        ledger: &mut QueryLedger,
    ) -> Result<bool> {
        self.check_candidate(c)?;
        self.check_candidate(x)?;
        if c == x {
            return Ok(true);
        }
        match (&self.data, handle.latent) {
            (SourceData::Profile(p), Latent::Column(col)) if !p.strict() => {
                let answer = p.rank(col as usize, c) <= p.rank(col as usize, x);
                ledger.charge(cost);
                Ok(answer)
            }
            _ => {
                if !self.is_pairwise() {
                    return Err(Error::SourceMismatch(
                        "cover query on a binary source".into(),
                    ));
                }
                let answer = self.beats(handle, c, x)?;
                self.charge_pair(handle, c, x, cost, ledger);
                Ok(answer)
            }
        }
    }

    /// Tests the committee on a task by querying members in ascending id
    /// order, short-circuiting at the first success. All queries are charged
    /// as committee evaluation. The empty committee covers nothing and uses
    /// no queries.
    pub fn evaluate_committee_binary(
        &mut self,
        handle: &TaskHandle,
        s: &Committee,
        ledger: &mut QueryLedger,
    ) -> Result<(bool, usize)> {
        let mut used = 0;
        for &c in s.members() {
            used += 1;
            if self.query_binary(handle, c, QueryCost::Committee, ledger)? {
                return Ok((true, used));
            }
        }
        Ok((false, used))
    }

    /// Draws tasks until one that the committee misses is accepted, or the
    /// draw cap is hit. Draws and committee-evaluation queries are charged.
    pub fn rejection_sample_failure(
        &mut self,
        s: &Committee,
        ledger: &mut QueryLedger,
        max_draws: u64,
    ) -> Result<TaskHandle> {
        for _ in 0..max_draws {
            let handle = self.sample_task(ledger)?;
            let (covered, _) = self.evaluate_committee_binary(&handle, s, ledger)?;
            if !covered {
                return Ok(handle);
            }
        }
        Err(Error::Exhausted { draws: max_draws })
    }

    /// Draws one `(task, rival)` pair from the product of the task law and
    /// the rival weights, charging one draw.
    pub fn sample_pair(
        &mut self,
        rivals: &RivalWeights,
        ledger: &mut QueryLedger,
    ) -> Result<(TaskHandle, CandidateId)> {
        if rivals.len() != self.m() {
            return Err(Error::InvalidParam(
                "rival weights sized for a different pool".into(),
            ));
        }
        let handle = self.sample_task(ledger)?;
        let u = self.rng.random::<f64>();
        Ok((handle, rivals.sample_with(u)))
    }

    /// Draws `(task, rival)` pairs from the product of the task law and the
    /// rival weights until one the committee fails to cover is accepted.
    /// Coverage is tested by scanning members in ascending id order; a
    /// member equal to the rival covers without an oracle call.
    pub fn rejection_sample_failed_pair(
        &mut self,
        s: &Committee,
        rivals: &RivalWeights,
        ledger: &mut QueryLedger,
        max_draws: u64,
    ) -> Result<(TaskHandle, CandidateId)> {
        for _ in 0..max_draws {
            let (handle, x) = self.sample_pair(rivals, ledger)?;
            if !self.committee_covers_pair(&handle, s, x, ledger)? {
                return Ok((handle, x));
            }
        }
        Err(Error::Exhausted { draws: max_draws })
    }

    /// Scan test of `S ∩ P_π(x) != ∅` used by tentative-pair phases; charged
    /// as committee evaluation, skipping the call when a member equals `x`.
    pub fn committee_covers_pair(
        &mut self,
        handle: &TaskHandle,
        s: &Committee,
        x: CandidateId,
        ledger: &mut QueryLedger,
    ) -> Result<bool> {
        for &member in s.members() {
            if member == x {
                return Ok(true);
            }
            if self.query_cover(handle, member, x, QueryCost::Committee, ledger)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Best member of the committee on this task, found with exactly
    /// `|S| - 1` comparisons charged as committee evaluation.
    pub fn top_of_committee(
        &mut self,
        handle: &TaskHandle,
        s: &Committee,
        ledger: &mut QueryLedger,
    ) -> Result<CandidateId> {
        if s.is_empty() {
            return Err(Error::InvalidParam("top of an empty committee".into()));
        }
        let members = s.members();
        let mut best = members[0];
        for &c in &members[1..] {
            if self.query_pairwise(handle, c, best, QueryCost::Committee, ledger)? {
                best = c;
            }
        }
        Ok(best)
    }

    /// Recovers the handle's full ranking (best first) by merge sort,
    /// charging at most `m * ceil(log2 m)` comparisons to ranking recovery.
    pub fn recover_ranking(
        &mut self,
        handle: &TaskHandle,
        ledger: &mut QueryLedger,
    ) -> Result<Vec<CandidateId>> {
        if !self.is_strict_pairwise() {
            return Err(Error::SourceMismatch(
                "full ranking recovery is undefined for weak profiles".into(),
            ));
        }
        let m = self.m();
        let items: Vec<CandidateId> = (0..m).collect();
        self.merge_sort(handle, &items, ledger)
    }

    fn merge_sort(
        &mut self,
        handle: &TaskHandle,
        items: &[CandidateId],
        ledger: &mut QueryLedger,
    ) -> Result<Vec<CandidateId>> {
        if items.len() <= 1 {
            return Ok(items.to_vec());
        }
        let mid = items.len() / 2;
        let left = self.merge_sort(handle, &items[..mid], ledger)?;
        let right = self.merge_sort(handle, &items[mid..], ledger)?;
        let mut merged = Vec::with_capacity(items.len());
        let (mut i, mut j) = (0, 0);
        while i < left.len() && j < right.len() {
            if self.query_pairwise(handle, left[i], right[j], QueryCost::Ranking, ledger)? {
                merged.push(left[i]);
                i += 1;
            } else {
                merged.push(right[j]);
                j += 1;
            }
        }
        merged.extend_from_slice(&left[i..]);
        merged.extend_from_slice(&right[j..]);
        Ok(merged)
    }

    /// Materializes `n` sampled tasks into a finite matrix. Instance
    /// construction, not an algorithm query: no ledger is charged.
    pub fn materialize_matrix(&mut self, n: usize) -> Result<BinaryOutcomeMatrix> {
        if !self.is_binary() {
            return Err(Error::SourceMismatch(
                "matrix materialization needs a binary source".into(),
            ));
        }
        if n == 0 {
            return Err(Error::InvalidParam("cannot materialize zero tasks".into()));
        }
        let m = self.m();
        let mut scratch = QueryLedger::new();
        let mut rows = vec![Vec::with_capacity(n); m];
        for _ in 0..n {
            let h = self.sample_task(&mut scratch)?;
            for (c, row) in rows.iter_mut().enumerate() {
                let bit = self.query_binary(&h, c, QueryCost::Candidate, &mut scratch)?;
                row.push(bit as u8);
            }
        }
        BinaryOutcomeMatrix::new(rows)
    }

    /// Materializes `n` sampled rankings into a finite strict profile with
    /// uniform weights. No ledger is charged.
    pub fn materialize_profile(&mut self, n: usize) -> Result<RankingProfile> {
        if !self.is_strict_pairwise() {
            return Err(Error::SourceMismatch(
                "profile materialization needs a strict pairwise source".into(),
            ));
        }
        if n == 0 {
            return Err(Error::InvalidParam("cannot materialize zero tasks".into()));
        }
        let m = self.m();
        let mut scratch = QueryLedger::new();
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(n);
        for _ in 0..n {
            let h = self.sample_task(&mut scratch)?;
            let mut order: Vec<CandidateId> = (0..m).collect();
            // direct latent sort; recovery through the oracle would charge
            order.sort_by(|&a, &b| {
                if a == b {
                    std::cmp::Ordering::Equal
                } else if self.beats(&h, a, b).unwrap_or(a < b) {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                }
            });
            let mut row = vec![0u32; m];
            for (pos, &c) in order.iter().enumerate() {
                row[c] = pos as u32 + 1;
            }
            rows.push(row);
        }
        RankingProfile::new(rows, None)
    }

    fn beats(&self, handle: &TaskHandle, a: CandidateId, b: CandidateId) -> Result<bool> {
        match (&self.data, handle.latent) {
            (SourceData::Profile(p), Latent::Column(col)) => {
                Ok(p.rank(col as usize, a) < p.rank(col as usize, b))
            }
            (SourceData::BitBlock(biases), Latent::Seeded(seed)) => {
                Ok(rank_key(seed, a, biases) < rank_key(seed, b, biases))
            }
            _ => Err(Error::SourceMismatch(
                "pairwise query on a binary source".into(),
            )),
        }
    }

    fn charge_pair(
        &mut self,
        handle: &TaskHandle,
        a: CandidateId,
        b: CandidateId,
        cost: QueryCost,
        ledger: &mut QueryLedger,
    ) {
        let (lo, hi, this_bit, other_bit) = if a < b {
            (a, b, 1u8, 2u8)
        } else {
            (b, a, 2u8, 1u8)
        };
        let key = (handle.id, (lo as u32) << 16 | hi as u32);
        let entry = self.asked_pairs.entry(key).or_insert(0);
        // the first ask of an orientation whose reverse is known is a
        // determined answer and free; identical repeats are counted
        let derived = *entry & this_bit == 0 && *entry & other_bit != 0;
        if !derived {
            ledger.charge(cost);
        }
        *entry |= this_bit;
    }

    fn check_candidate(&self, c: CandidateId) -> Result<()> {
        if c >= self.m() {
            return Err(Error::InvalidParam(format!(
                "candidate {c} out of range for m = {}",
                self.m()
            )));
        }
        Ok(())
    }
}

fn check_biases(biases: &[f64]) -> Result<()> {
    if biases.is_empty() {
        return Err(Error::InvalidParam(
            "generative source needs at least one candidate".into(),
        ));
    }
    if biases.len() > u16::MAX as usize {
        return Err(Error::InvalidParam("candidate pool exceeds 65535".into()));
    }
    for &b in biases {
        if !(0.0..=1.0).contains(&b) || !b.is_finite() {
            return Err(Error::InvalidParam(format!("bias {b} outside [0, 1]")));
        }
    }
    Ok(())
}

fn cumulative(weights: &[f64]) -> Option<Vec<f64>> {
    let uniform = weights.iter().all(|&w| (w - weights[0]).abs() < 1e-15);
    if uniform {
        return None;
    }
    let mut acc = 0.0;
    Some(
        weights
            .iter()
            .map(|&w| {
                acc += w;
                acc
            })
            .collect(),
    )
}

fn sample_cumulative(cum: &[f64], u: f64) -> usize {
    match cum.binary_search_by(|probe| probe.partial_cmp(&u).unwrap()) {
        Ok(i) | Err(i) => i.min(cum.len() - 1),
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform in [0, 1) derived from a task seed and a coordinate index,
/// independent of query order.
fn coord_uniform(seed: u64, coord: u64) -> f64 {
    let h = splitmix64(seed ^ splitmix64(coord.wrapping_add(1)));
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Sort key realizing the bit-block ranking: winners (bit = 1) precede
/// losers, uniform order within each block. Lower keys rank higher.
fn rank_key(seed: u64, c: CandidateId, biases: &[f64]) -> (u8, u64, usize) {
    let bit = coord_uniform(seed, c as u64) < biases[c];
    let tiebreak = splitmix64(seed ^ splitmix64((c as u64) << 20 | 0xB10C));
    (1 - bit as u8, tiebreak, c)
}
