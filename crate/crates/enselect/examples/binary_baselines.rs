//! The redundancy trap: picking the individually strongest candidates can
//! lose badly to complementarity-aware selection.
//!
//! Run with: cargo run --example binary_baselines

use enselect::binary::{
    greedy_on_matrix, sampled_erm_baseline, top_k_baseline, ucb_greedy_baseline,
    uniform_greedy_baseline,
};
use enselect::types::BinaryOutcomeMatrix;
use enselect::FeedbackSource;

fn main() -> enselect::Result<()> {
    // candidates 0 and 1 are clones solving the same 60% of tasks;
    // candidate 2 solves a disjoint 30%; candidate 3 is weak
    let mut rows = vec![vec![0u8; 100]; 4];
    rows[0][..60].fill(1);
    rows[1][..60].fill(1);
    rows[2][60..90].fill(1);
    rows[3][90..95].fill(1);
    let matrix = BinaryOutcomeMatrix::new(rows)?;

    let top = top_k_baseline(&matrix, 2)?;
    println!(
        "top-k by solo accuracy: {} covers {:.2} (cost {} reads)",
        top.committee,
        matrix.coverage(&top.committee),
        top.ledger.q_cand
    );

    let greedy = greedy_on_matrix(&matrix, 2)?;
    println!(
        "exact greedy:           {} covers {:.2}",
        greedy,
        matrix.coverage(&greedy)
    );

    for n in [1u64, 4, 6] {
        let sampled = sampled_erm_baseline(&matrix, 2, n, 7)?;
        println!(
            "sampled ERM (N = {n}):   {} covers {:.2} ({} reads)",
            sampled.committee,
            matrix.coverage(&sampled.committee),
            sampled.ledger.q_eval
        );
    }

    let budget = 4_000;
    let mut source = FeedbackSource::from_matrix(matrix.clone(), 1);
    let uniform = uniform_greedy_baseline(&mut source, 4, 2, budget)?;
    println!(
        "uniform greedy @ {budget}: {} covers {:.2} ({} queries)",
        uniform.committee,
        matrix.coverage(&uniform.committee),
        uniform.ledger.total_queries()
    );

    let mut source = FeedbackSource::from_matrix(matrix.clone(), 1);
    let ucb = ucb_greedy_baseline(&mut source, 4, 2, budget, 10_000)?;
    println!(
        "ucb greedy @ {budget}:     {} covers {:.2} ({} queries)",
        ucb.committee,
        matrix.coverage(&ucb.committee),
        ucb.ledger.total_queries()
    );
    Ok(())
}
