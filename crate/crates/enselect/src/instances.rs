//! Synthetic instance generators, CSV loading and saving, and train/test
//! splitting.
//!
//! CSV is the sole interchange format: UTF-8, comma separated, no quoting,
//! first row and first column are labels. Three layouts are used:
//!
//! - binary matrix: header `id,<task labels>`, one row per candidate with
//!   0/1 cells;
//! - score matrix: same layout with real cells, converted per task column
//!   into competition ranks (`rank = 1 + #{c': score(c') > score(c)}`);
//! - rank profile: header `task,<candidate labels>[,weight]`, one row per
//!   ranking holding each candidate's competition rank, with an optional
//!   trailing weight column.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracle::FeedbackSource;
use crate::types::{BinaryOutcomeMatrix, CandidateId, RankingProfile};

/// Generative binary source: `u(d, c) ~ Bernoulli(bias_c)` independently.
pub fn gen_bernoulli_product(biases: Vec<f64>, seed: u64) -> Result<FeedbackSource> {
    FeedbackSource::bernoulli(biases, seed)
}

/// Conditional-failure source with one near-optimal arm: the starred
/// candidate solves with probability 1/2, and the candidate with the j-th
/// id among the others solves with probability `1/2 - gaps[j]`. Used with a
/// committee disjoint from the arms (typically the empty one, under which
/// every draw is an accepted failure).
pub fn gen_planted_gap(
    m: usize,
    star: CandidateId,
    gaps: &[f64],
    seed: u64,
) -> Result<FeedbackSource> {
    if star >= m {
        return Err(Error::InvalidParam(format!(
            "star {star} out of range for m = {m}"
        )));
    }
    if gaps.len() != m - 1 {
        return Err(Error::InvalidParam(format!(
            "need {} gaps for the non-starred candidates, got {}",
            m - 1,
            gaps.len()
        )));
    }
    for &g in gaps {
        if !(g > 0.0 && g <= 0.5) {
            return Err(Error::InvalidParam(format!("gap {g} outside (0, 1/2]")));
        }
    }
    let mut biases = Vec::with_capacity(m);
    let mut next_gap = gaps.iter();
    for c in 0..m {
        if c == star {
            biases.push(0.5);
        } else {
            biases.push(0.5 - next_gap.next().unwrap());
        }
    }
    FeedbackSource::bernoulli(biases, seed)
}

/// The uniform cyclic profile over `Z_n`: ranking `i` lists
/// `i, i+1, ..., i-1`.
pub fn gen_cyclic_profile(n: usize) -> Result<RankingProfile> {
    if n < 3 {
        return Err(Error::InvalidParam(
            "cyclic profile needs at least 3 candidates".into(),
        ));
    }
    let orders = (0..n)
        .map(|i| (0..n).map(|j| (i + j) % n).collect())
        .collect();
    RankingProfile::from_orders(orders, None)
}

/// Generative strict-ranking source: each task draws independent bits with
/// the given biases, lists the winners block in uniform random order, then
/// the losers block.
pub fn gen_bitblock_ranking(biases: Vec<f64>, seed: u64) -> Result<FeedbackSource> {
    FeedbackSource::bit_block(biases, seed)
}

/// The 4-candidate, 2-ranking weighted profile on which the min-rival
/// objective violates diminishing returns: weight 2/3 on `b>a>d>c` and 1/3
/// on `c>a>d>b`, candidates labeled a, b, c, d in id order.
pub fn nonsubmodular4() -> RankingProfile {
    let orders = vec![vec![1, 0, 3, 2], vec![2, 0, 3, 1]];
    RankingProfile::from_orders(orders, Some(vec![2.0 / 3.0, 1.0 / 3.0]))
        .expect("fixed fixture is valid")
        .with_labels(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec!["r0".into(), "r1".into()],
        )
        .expect("fixed fixture labels are unique")
}

fn read_rows(path: &Path) -> Result<Vec<Vec<String>>> {
    let text = std::fs::read_to_string(path)?;
    let rows: Vec<Vec<String>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(|c| c.trim().to_string()).collect())
        .collect();
    if rows.len() < 2 {
        return Err(Error::BadData {
            path: path.display().to_string(),
            msg: "expected a header row and at least one data row".into(),
        });
    }
    let width = rows[0].len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(Error::BadData {
                path: path.display().to_string(),
                msg: format!(
                    "ragged rows: row {} has {} cells, header has {width}",
                    i + 1,
                    row.len()
                ),
            });
        }
    }
    if width < 2 {
        return Err(Error::BadData {
            path: path.display().to_string(),
            msg: "expected at least one data column".into(),
        });
    }
    Ok(rows)
}

fn check_label_uniqueness(path: &Path, labels: &[String], what: &str) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::BadData {
                path: path.display().to_string(),
                msg: format!("duplicate {what} label {l:?}"),
            });
        }
    }
    Ok(())
}

/// Loads a candidate-by-task 0/1 matrix.
pub fn load_binary_csv(path: impl AsRef<Path>) -> Result<BinaryOutcomeMatrix> {
    let path = path.as_ref();
    let rows = read_rows(path)?;
    let task_labels: Vec<String> = rows[0][1..].to_vec();
    let mut candidate_labels = Vec::with_capacity(rows.len() - 1);
    let mut bits = Vec::with_capacity(rows.len() - 1);
    for (i, row) in rows.iter().enumerate().skip(1) {
        candidate_labels.push(row[0].clone());
        let mut bit_row = Vec::with_capacity(row.len() - 1);
        for (j, cell) in row.iter().enumerate().skip(1) {
            match cell.as_str() {
                "0" => bit_row.push(0),
                "1" => bit_row.push(1),
                other => {
                    return Err(Error::Malformed {
                        path: path.display().to_string(),
                        row: i + 1,
                        col: j + 1,
                        msg: format!("expected 0 or 1, found {other:?}"),
                    })
                }
            }
        }
        bits.push(bit_row);
    }
    check_label_uniqueness(path, &candidate_labels, "candidate")?;
    check_label_uniqueness(path, &task_labels, "task")?;
    BinaryOutcomeMatrix::new(bits)?.with_labels(candidate_labels, task_labels)
}

/// Writes a matrix in the layout [`load_binary_csv`] reads.
pub fn save_binary_csv(matrix: &BinaryOutcomeMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::from("id");
    for t in 0..matrix.n() {
        let label = matrix
            .task_labels()
            .map(|ls| ls[t].clone())
            .unwrap_or_else(|| format!("t{t}"));
        write!(out, ",{label}").unwrap();
    }
    out.push('\n');
    for c in 0..matrix.m() {
        let label = matrix
            .candidate_labels()
            .map(|ls| ls[c].clone())
            .unwrap_or_else(|| format!("c{c}"));
        out.push_str(&label);
        for t in 0..matrix.n() {
            write!(out, ",{}", matrix.get(c, t) as u8).unwrap();
        }
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Loads a candidate-by-task real score matrix and converts each task
/// column into competition ranks. The profile is weak unless every task's
/// scores are distinct. Missing cells are rejected: the layout is dense.
pub fn load_scores_csv(path: impl AsRef<Path>) -> Result<RankingProfile> {
    let path = path.as_ref();
    let rows = read_rows(path)?;
    let task_labels: Vec<String> = rows[0][1..].to_vec();
    let n = task_labels.len();
    let mut candidate_labels = Vec::with_capacity(rows.len() - 1);
    let mut scores: Vec<Vec<f64>> = Vec::with_capacity(rows.len() - 1);
    for (i, row) in rows.iter().enumerate().skip(1) {
        candidate_labels.push(row[0].clone());
        let mut score_row = Vec::with_capacity(n);
        for (j, cell) in row.iter().enumerate().skip(1) {
            if cell.is_empty() {
                return Err(Error::Malformed {
                    path: path.display().to_string(),
                    row: i + 1,
                    col: j + 1,
                    msg: "missing score cell (dense matrix required)".into(),
                });
            }
            let v: f64 = cell.parse().map_err(|_| Error::Malformed {
                path: path.display().to_string(),
                row: i + 1,
                col: j + 1,
                msg: format!("expected a number, found {cell:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Malformed {
                    path: path.display().to_string(),
                    row: i + 1,
                    col: j + 1,
                    msg: "score is not finite".into(),
                });
            }
            score_row.push(v);
        }
        scores.push(score_row);
    }
    check_label_uniqueness(path, &candidate_labels, "candidate")?;
    check_label_uniqueness(path, &task_labels, "task")?;
    let m = candidate_labels.len();
    let mut rank_rows = Vec::with_capacity(n);
    #[allow(clippy::needless_range_loop)]
    for t in 0..n {
        let mut row = Vec::with_capacity(m);
        for c in 0..m {
            let better = (0..m).filter(|&c2| scores[c2][t] > scores[c][t]).count();
            row.push(better as u32 + 1);
        }
        rank_rows.push(row);
    }
    RankingProfile::new(rank_rows, None)?.with_labels(candidate_labels, task_labels)
}

/// Loads a ranking profile: one row per ranking holding competition ranks,
/// with an optional trailing `weight` column.
pub fn load_ranks_csv(path: impl AsRef<Path>) -> Result<RankingProfile> {
    let path = path.as_ref();
    let rows = read_rows(path)?;
    let weighted = rows[0].last().map(|h| h == "weight").unwrap_or(false);
    let rank_cols = rows[0].len() - 1 - weighted as usize;
    if rank_cols == 0 {
        return Err(Error::BadData {
            path: path.display().to_string(),
            msg: "no candidate columns".into(),
        });
    }
    let candidate_labels: Vec<String> = rows[0][1..1 + rank_cols].to_vec();
    let mut task_labels = Vec::with_capacity(rows.len() - 1);
    let mut rank_rows = Vec::with_capacity(rows.len() - 1);
    let mut weights = Vec::new();
    for (i, row) in rows.iter().enumerate().skip(1) {
        task_labels.push(row[0].clone());
        let mut rank_row = Vec::with_capacity(rank_cols);
        for (j, cell) in row[1..1 + rank_cols].iter().enumerate() {
            let r: u32 = cell.parse().map_err(|_| Error::Malformed {
                path: path.display().to_string(),
                row: i + 1,
                col: j + 2,
                msg: format!("expected a positive integer rank, found {cell:?}"),
            })?;
            if r == 0 {
                return Err(Error::Malformed {
                    path: path.display().to_string(),
                    row: i + 1,
                    col: j + 2,
                    msg: "ranks are 1-based".into(),
                });
            }
            rank_row.push(r);
        }
        if weighted {
            let cell = row.last().unwrap();
            let w: f64 = cell.parse().map_err(|_| Error::Malformed {
                path: path.display().to_string(),
                row: i + 1,
                col: row.len(),
                msg: format!("expected a weight, found {cell:?}"),
            })?;
            weights.push(w);
        }
        rank_rows.push(rank_row);
    }
    check_label_uniqueness(path, &candidate_labels, "candidate")?;
    check_label_uniqueness(path, &task_labels, "task")?;
    let weights = if weighted { Some(weights) } else { None };
    RankingProfile::new(rank_rows, weights)?.with_labels(candidate_labels, task_labels)
}

/// Writes a profile in the layout [`load_ranks_csv`] reads. The weight
/// column is included only for non-uniform profiles.
pub fn save_ranks_csv(profile: &RankingProfile, path: impl AsRef<Path>) -> Result<()> {
    let n = profile.n();
    let uniform = profile
        .weights()
        .iter()
        .all(|&w| (w - 1.0 / n as f64).abs() < 1e-15);
    let mut out = String::from("task");
    for c in 0..profile.m() {
        let label = profile
            .candidate_labels()
            .map(|ls| ls[c].clone())
            .unwrap_or_else(|| format!("c{c}"));
        write!(out, ",{label}").unwrap();
    }
    if !uniform {
        out.push_str(",weight");
    }
    out.push('\n');
    for t in 0..n {
        let label = profile
            .task_labels()
            .map(|ls| ls[t].clone())
            .unwrap_or_else(|| format!("t{t}"));
        out.push_str(&label);
        for c in 0..profile.m() {
            write!(out, ",{}", profile.rank(t, c)).unwrap();
        }
        if !uniform {
            write!(out, ",{}", profile.weights()[t]).unwrap();
        }
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// A deterministic train/test split with per-stratum warnings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    /// Sorted train indices.
    pub train: Vec<usize>,
    /// Sorted test indices.
    pub test: Vec<usize>,
    /// Strata too small to place one element per side.
    pub warnings: Vec<String>,
}

/// Splits `n` tasks into disjoint, exhaustive train and test index sets by
/// a seeded permutation. With strata, the split is proportional within each
/// stratum; a stratum with a single element goes wholly to train with a
/// warning.
pub fn train_test_split(
    n: usize,
    fraction: f64,
    seed: u64,
    strata: Option<&[String]>,
) -> Result<Split> {
    if n < 2 {
        return Err(Error::InvalidParam(
            "need at least two tasks to split".into(),
        ));
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidParam(format!(
            "fraction {fraction} outside (0, 1)"
        )));
    }
    if let Some(s) = strata {
        if s.len() != n {
            return Err(Error::InvalidParam(
                "strata labels do not match task count".into(),
            ));
        }
    }
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    match strata {
        Some(labels) => {
            for (i, l) in labels.iter().enumerate() {
                groups.entry(l.clone()).or_default().push(i);
            }
        }
        None => {
            groups.insert(String::new(), (0..n).collect());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    let mut warnings = Vec::new();
    for (label, mut idx) in groups {
        idx.shuffle(&mut rng);
        if idx.len() < 2 {
            warnings.push(format!(
                "stratum {label:?} has {} element(s); assigned to train",
                idx.len()
            ));
            train.extend(idx);
            continue;
        }
        let want = (fraction * idx.len() as f64).round() as usize;
        let n_train = want.clamp(1, idx.len() - 1);
        train.extend(&idx[..n_train]);
        test.extend(&idx[n_train..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(Split {
        train,
        test,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{Committee, QueryCost, QueryLedger};

    #[test]
    fn cyclic_profile_shape() {
        let p = gen_cyclic_profile(3).unwrap();
        assert_eq!(p.rank_row(0), &[1, 2, 3]);
        assert_eq!(p.rank_row(1), &[3, 1, 2]);
        assert_eq!(p.rank_row(2), &[2, 3, 1]);
        assert!(gen_cyclic_profile(2).is_err());
    }

    #[test]
    fn fixture_profile_ranks() {
        let p = nonsubmodular4();
        // 2/3 weight on b>a>d>c
        assert_eq!(p.rank_row(0), &[2, 1, 4, 3]);
        assert_eq!(p.rank_row(1), &[2, 4, 1, 3]);
        assert!((p.weights()[0] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn planted_gap_biases() {
        let src = gen_planted_gap(3, 0, &[0.25, 0.1], 1).unwrap();
        let mut ledger = QueryLedger::new();
        let mut src2 = src.clone();
        // empirical solve rate of the star is about 1/2
        let trials = 40_000;
        let mut hits = 0;
        for _ in 0..trials {
            let h = src2.sample_task(&mut ledger).unwrap();
            if src2
                .query_binary(&h, 0, QueryCost::Candidate, &mut ledger)
                .unwrap()
            {
                hits += 1;
            }
        }
        let freq = hits as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 3.0 * (0.25f64 / trials as f64).sqrt());
        assert!(gen_planted_gap(3, 0, &[0.6, 0.1], 1).is_err());
        assert!(gen_planted_gap(3, 3, &[0.1, 0.1], 1).is_err());
    }

    #[test]
    fn binary_csv_round_trip() {
        let dir = std::env::temp_dir().join("enselect-test-bin");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("m.csv");
        let mat = BinaryOutcomeMatrix::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        save_binary_csv(&mat, &path).unwrap();
        let loaded = load_binary_csv(&path).unwrap();
        assert!(loaded.get(0, 0) && loaded.get(1, 1));
        assert!(!loaded.get(0, 1));
        // round trip again through explicit labels
        save_binary_csv(&loaded, &path).unwrap();
        assert_eq!(load_binary_csv(&path).unwrap(), loaded);
    }

    #[test]
    fn binary_csv_rejects_documented_malformations() {
        let dir = std::env::temp_dir().join("enselect-test-bad");
        std::fs::create_dir_all(&dir).unwrap();
        let bad_cell = dir.join("cell.csv");
        std::fs::write(&bad_cell, "id,t0,t1\nc0,1,2\n").unwrap();
        match load_binary_csv(&bad_cell) {
            Err(Error::Malformed { row, col, .. }) => assert_eq!((row, col), (2, 3)),
            other => panic!("expected malformed-cell error, got {other:?}"),
        }
        let ragged = dir.join("ragged.csv");
        std::fs::write(&ragged, "id,t0,t1\nc0,1\n").unwrap();
        assert!(matches!(
            load_binary_csv(&ragged),
            Err(Error::BadData { .. })
        ));
        let dup = dir.join("dup.csv");
        std::fs::write(&dup, "id,t0,t1\nc0,1,0\nc0,0,1\n").unwrap();
        assert!(matches!(load_binary_csv(&dup), Err(Error::BadData { .. })));
    }

    #[test]
    fn scores_convert_to_competition_ranks() {
        let dir = std::env::temp_dir().join("enselect-test-scores");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("s.csv");
        std::fs::write(&path, "id,t0\nc0,5\nc1,5\nc2,2\n").unwrap();
        let p = load_scores_csv(&path).unwrap();
        assert_eq!(p.rank_row(0), &[1, 1, 3]);
        assert!(!p.strict());

        std::fs::write(&path, "id,t0\nc0,3\nc1,5\nc2,2\n").unwrap();
        let p = load_scores_csv(&path).unwrap();
        assert_eq!(p.rank_row(0), &[2, 1, 3]);
        assert!(p.strict());

        std::fs::write(&path, "id,t0\nc0,4\nc1,4\nc2,4\n").unwrap();
        let p = load_scores_csv(&path).unwrap();
        assert_eq!(p.rank_row(0), &[1, 1, 1]);

        std::fs::write(&path, "id,t0\nc0,\nc1,4\nc2,4\n").unwrap();
        assert!(matches!(
            load_scores_csv(&path),
            Err(Error::Malformed { .. })
        ));
    }

    #[test]
    fn ranks_csv_round_trip_with_weights() {
        let dir = std::env::temp_dir().join("enselect-test-ranks");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("p.csv");
        let p = nonsubmodular4();
        save_ranks_csv(&p, &path).unwrap();
        let loaded = load_ranks_csv(&path).unwrap();
        assert_eq!(loaded.rank_row(0), p.rank_row(0));
        assert_eq!(loaded.rank_row(1), p.rank_row(1));
        assert!((loaded.weights()[0] - p.weights()[0]).abs() < 1e-15);

        let cyclic = gen_cyclic_profile(5).unwrap();
        save_ranks_csv(&cyclic, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 6, "5x5 rank csv plus header");
        assert!(!text.contains("weight"));
        let loaded = load_ranks_csv(&path).unwrap();
        assert_eq!(loaded.rank_row(3), cyclic.rank_row(3));
    }

    #[test]
    fn split_is_deterministic_and_exhaustive() {
        let a = train_test_split(4, 0.5, 42, None).unwrap();
        let b = train_test_split(4, 0.5, 42, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.train.len(), 2);
        assert_eq!(a.test.len(), 2);
        let mut all: Vec<usize> = a.train.iter().chain(a.test.iter()).copied().collect();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3]);
    }

    #[test]
    fn split_respects_strata() {
        let strata: Vec<String> = ["A", "A", "B", "B"].iter().map(|s| s.to_string()).collect();
        let s = train_test_split(4, 0.5, 7, Some(&strata)).unwrap();
        let a_train = s.train.iter().filter(|&&i| i < 2).count();
        let b_train = s.train.iter().filter(|&&i| i >= 2).count();
        assert_eq!((a_train, b_train), (1, 1));

        let tiny: Vec<String> = ["A", "B", "B", "B"].iter().map(|s| s.to_string()).collect();
        let s = train_test_split(4, 0.5, 7, Some(&tiny)).unwrap();
        assert!(s.train.contains(&0));
        assert_eq!(s.warnings.len(), 1);
    }

    #[test]
    fn split_fraction_matches_reported_counts() {
        let s = train_test_split(1976, 0.75, 0, None).unwrap();
        assert_eq!(s.train.len(), 1482);
        assert_eq!(s.test.len(), 494);
    }

    #[test]
    fn materialized_instances_are_reproducible() {
        let mut a = gen_bernoulli_product(vec![0.3, 0.9], 5).unwrap();
        let mut b = gen_bernoulli_product(vec![0.3, 0.9], 5).unwrap();
        assert_eq!(
            a.materialize_matrix(64).unwrap(),
            b.materialize_matrix(64).unwrap()
        );

        let mut a = gen_bitblock_ranking(vec![0.8, 0.5, 0.2], 9).unwrap();
        let mut b = gen_bitblock_ranking(vec![0.8, 0.5, 0.2], 9).unwrap();
        assert_eq!(
            a.materialize_profile(32).unwrap(),
            b.materialize_profile(32).unwrap()
        );
    }

    #[test]
    fn fixture_source_evaluation() {
        let mut src = FeedbackSource::from_profile(nonsubmodular4(), 0);
        let mut ledger = QueryLedger::new();
        let s = Committee::exact(vec![0]).unwrap();
        let mut covered = 0;
        for _ in 0..3000 {
            let h = src.sample_task(&mut ledger).unwrap();
            if src.committee_covers_pair(&h, &s, 1, &mut ledger).unwrap() {
                covered += 1;
            }
        }
        // a covers rival b only on the 1/3-weight ranking
        let freq = covered as f64 / 3000.0;
        assert!((freq - 1.0 / 3.0).abs() < 0.05, "freq {freq}");
    }
}
