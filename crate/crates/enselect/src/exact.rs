//! Brute-force oracles and structural checkers used as ground truth in
//! tests and as the held-out reference in reports.

use crate::binary::{binomial, Combinations};
use crate::error::{Error, Result};
use crate::ordinal;
use crate::types::{BinaryOutcomeMatrix, CandidateId, Committee, RankingProfile};

/// An exact optimum with its witness.
#[derive(Debug, Clone)]
pub struct OptResult {
    /// The optimal objective value.
    pub value: f64,
    /// Lexicographically first committee attaining it.
    pub witness: Committee,
    /// Committees enumerated.
    pub enumerated: u64,
}

/// Exact maximum coverage over all size-`k` committees by enumeration.
pub fn opt_coverage_bruteforce(
    matrix: &BinaryOutcomeMatrix,
    k: usize,
    cap: u128,
) -> Result<OptResult> {
    let m = matrix.m();
    if k > m {
        return Err(Error::InvalidParam("k exceeds the candidate count".into()));
    }
    if k == 0 {
        return Ok(OptResult {
            value: 0.0,
            witness: Committee::empty(0),
            enumerated: 1,
        });
    }
    let count = binomial(m, k);
    if count > cap {
        return Err(Error::CapExceeded { needed: count, cap });
    }
    let mut best: Option<(usize, Vec<CandidateId>)> = None;
    let mut enumerated = 0u64;
    let mut iter = Combinations::new(m, k);
    while let Some(members) = iter.next() {
        enumerated += 1;
        let hits = (0..matrix.n())
            .filter(|&t| members.iter().any(|&c| matrix.get(c, t)))
            .count();
        if best.as_ref().map(|(h, _)| hits > *h).unwrap_or(true) {
            best = Some((hits, members.to_vec()));
        }
    }
    let (hits, members) = best.expect("k >= 1 enumerates at least one committee");
    Ok(OptResult {
        value: hits as f64 / matrix.n() as f64,
        witness: Committee::new(members, k)?,
        enumerated,
    })
}

/// Exact maximum of the min-rival winning value over all size-`k`
/// committees by enumeration. Requires `1 <= k < m`.
pub fn opt_theta_bruteforce(profile: &RankingProfile, k: usize, cap: u128) -> Result<OptResult> {
    let m = profile.m();
    if k == 0 || k >= m {
        return Err(Error::InvalidParam("need 1 <= k < m".into()));
    }
    let count = binomial(m, k);
    if count > cap {
        return Err(Error::CapExceeded { needed: count, cap });
    }
    let mut best: Option<(f64, Vec<CandidateId>)> = None;
    let mut enumerated = 0u64;
    let mut iter = Combinations::new(m, k);
    while let Some(members) = iter.next() {
        enumerated += 1;
        let s = Committee::exact(members.to_vec())?;
        let value = ordinal::theta(profile, &s)?.value;
        if best.as_ref().map(|(v, _)| value > *v).unwrap_or(true) {
            best = Some((value, members.to_vec()));
        }
    }
    let (value, members) = best.expect("k >= 1 enumerates at least one committee");
    Ok(OptResult {
        value,
        witness: Committee::new(members, k)?,
        enumerated,
    })
}

/// Result of checking a set function for normalization, monotonicity, and
/// diminishing returns over every chain of subsets of `[0, m)`.
#[derive(Debug, Clone, PartialEq)]
pub enum StructureCheck {
    /// All three properties hold.
    Pass,
    /// `f(empty)` is not zero.
    NotNormalized {
        /// The offending value.
        value: f64,
    },
    /// Adding a candidate strictly decreased the value.
    NotMonotone {
        /// Base set.
        set: Vec<CandidateId>,
        /// Added candidate.
        added: CandidateId,
        /// The (negative) gain.
        gain: f64,
    },
    /// A diminishing-returns violation, with the first witnessing triple.
    NotSubmodular {
        /// The smaller set.
        small: Vec<CandidateId>,
        /// The superset.
        large: Vec<CandidateId>,
        /// The added candidate.
        added: CandidateId,
        /// Marginal gain at the smaller set.
        gain_small: f64,
        /// Marginal gain at the superset.
        gain_large: f64,
    },
}

const STRUCT_TOL: f64 = 1e-9;

/// Exhaustively verifies that a set function over subsets of `[0, m)` is
/// normalized, monotone, and submodular, returning the first violation in
/// a fixed enumeration order (supersets by ascending bitmask, then subsets,
/// then added candidates).
pub fn check_submodularity(
    mut eval: impl FnMut(&[CandidateId]) -> f64,
    m: usize,
) -> Result<StructureCheck> {
    if m == 0 || m > 16 {
        return Err(Error::InvalidParam(
            "exhaustive check supports 1 <= m <= 16".into(),
        ));
    }
    let size = 1usize << m;
    let mut values = vec![0.0; size];
    let mut scratch = Vec::with_capacity(m);
    for (mask, value) in values.iter_mut().enumerate() {
        scratch.clear();
        scratch.extend((0..m).filter(|&c| mask >> c & 1 == 1));
        *value = eval(&scratch);
    }
    let members =
        |mask: usize| -> Vec<CandidateId> { (0..m).filter(|&c| mask >> c & 1 == 1).collect() };
    if values[0].abs() > STRUCT_TOL {
        return Ok(StructureCheck::NotNormalized { value: values[0] });
    }
    for mask in 0..size {
        for x in 0..m {
            if mask >> x & 1 == 1 {
                continue;
            }
            let gain = values[mask | 1 << x] - values[mask];
            if gain < -STRUCT_TOL {
                return Ok(StructureCheck::NotMonotone {
                    set: members(mask),
                    added: x,
                    gain,
                });
            }
        }
    }
    for large in 0..size {
        // submasks of `large` in ascending numeric order
        for small in 0..=large {
            if small & large != small {
                continue;
            }
            for x in 0..m {
                if large >> x & 1 == 1 {
                    continue;
                }
                let gain_small = values[small | 1 << x] - values[small];
                let gain_large = values[large | 1 << x] - values[large];
                if gain_small + STRUCT_TOL < gain_large {
                    return Ok(StructureCheck::NotSubmodular {
                        small: members(small),
                        large: members(large),
                        added: x,
                        gain_small,
                        gain_large,
                    });
                }
            }
        }
    }
    Ok(StructureCheck::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary;
    use crate::instances;

    #[test]
    fn coverage_bruteforce_small_instance() {
        // c0 solves {t0, t2}, c1 solves {t1}, c2 solves {t0, t1}
        let matrix =
            BinaryOutcomeMatrix::new(vec![vec![1, 0, 1], vec![0, 1, 0], vec![1, 1, 0]]).unwrap();
        let opt = opt_coverage_bruteforce(&matrix, 2, 1 << 20).unwrap();
        assert!((opt.value - 1.0).abs() < 1e-12);
        assert_eq!(opt.witness.members(), &[0, 1]);
        assert_eq!(opt.enumerated, 3);

        let zero = opt_coverage_bruteforce(&matrix, 0, 1 << 20).unwrap();
        assert_eq!(zero.value, 0.0);
        assert!(zero.witness.is_empty());

        let ones = BinaryOutcomeMatrix::new(vec![vec![1, 1], vec![1, 1]]).unwrap();
        for k in 1..=2 {
            assert!(
                (opt_coverage_bruteforce(&ones, k, 1 << 20).unwrap().value - 1.0).abs() < 1e-12
            );
        }
    }

    #[test]
    fn theta_bruteforce_on_fixture() {
        let p = instances::nonsubmodular4();
        let opt = opt_theta_bruteforce(&p, 1, 1 << 20).unwrap();
        assert!((opt.value - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(opt.witness.members(), &[1], "the singleton {{b}}");
        let opt3 = opt_theta_bruteforce(&p, 3, 1 << 20).unwrap();
        assert!((opt3.value - 1.0).abs() < 1e-12);
        assert_eq!(opt3.witness.members(), &[0, 1, 2]);
        assert!(opt_theta_bruteforce(&p, 4, 1 << 20).is_err());
    }

    #[test]
    fn theta_bruteforce_cyclic() {
        let p = instances::gen_cyclic_profile(5).unwrap();
        let opt = opt_theta_bruteforce(&p, 1, 1 << 20).unwrap();
        assert_eq!(opt.enumerated, 5);
        // by symmetry every singleton has the same value; witness is {0}
        assert_eq!(opt.witness.members(), &[0]);
        assert!(opt.value < 1.0 - 1e-9);
        let direct = ordinal::theta(&p, &opt.witness).unwrap().value;
        assert!((opt.value - direct).abs() < 1e-12);
    }

    #[test]
    fn coverage_is_submodular_exhaustively() {
        let matrix = BinaryOutcomeMatrix::new(vec![
            vec![1, 0, 1, 0, 1],
            vec![0, 1, 0, 0, 1],
            vec![1, 1, 0, 1, 0],
            vec![0, 0, 0, 1, 1],
        ])
        .unwrap();
        let check = check_submodularity(
            |members| {
                let s = Committee::exact(members.to_vec()).unwrap();
                matrix.coverage(&s)
            },
            4,
        )
        .unwrap();
        assert_eq!(check, StructureCheck::Pass);
    }

    #[test]
    fn theta_nonsubmodularity_witness() {
        let p = instances::nonsubmodular4();
        let check = check_submodularity(
            |members| {
                let s = Committee::exact(members.to_vec()).unwrap();
                ordinal::theta_extended(&p, &s)
            },
            4,
        )
        .unwrap();
        match check {
            StructureCheck::NotSubmodular {
                small,
                large,
                added,
                gain_small,
                gain_large,
            } => {
                assert_eq!(small, vec![0], "S = {{a}}");
                assert_eq!(large, vec![0, 1], "R = {{a, b}}");
                assert_eq!(added, 2, "x = c");
                assert!(gain_small.abs() < 1e-12);
                assert!((gain_large - 1.0 / 3.0).abs() < 1e-12);
            }
            other => panic!("expected the diminishing-returns witness, got {other:?}"),
        }
    }

    #[test]
    fn greedy_ratio_against_bruteforce() {
        let ratio = 1.0 - 1.0 / std::f64::consts::E;
        let mut source = instances::gen_bernoulli_product(vec![0.4; 6], 3).unwrap();
        for seed in 0..20 {
            source.set_stream(seed);
            let matrix = source.materialize_matrix(16).unwrap();
            for k in 1..=3 {
                let greedy = binary::greedy_on_matrix(&matrix, k).unwrap();
                let opt = opt_coverage_bruteforce(&matrix, k, 1 << 20).unwrap();
                assert!(
                    matrix.coverage(&greedy) >= ratio * opt.value - 1e-12,
                    "seed {seed} k {k}"
                );
            }
        }
    }

    #[test]
    fn ptas_matches_bruteforce_when_threshold_exceeds_k() {
        let mut source = instances::gen_bitblock_ranking(vec![0.7, 0.5, 0.6, 0.3, 0.4], 9).unwrap();
        for seed in 0..10 {
            source.set_stream(seed);
            let profile = source.materialize_profile(12).unwrap();
            for k in 1..=2 {
                let s = ordinal::ptas_theta(&profile, k, 0.5, 1 << 20).unwrap();
                let opt = opt_theta_bruteforce(&profile, k, 1 << 20).unwrap();
                let got = ordinal::theta(&profile, &s).unwrap().value;
                assert!((got - opt.value).abs() < 1e-12, "seed {seed} k {k}");
            }
        }
    }
}
