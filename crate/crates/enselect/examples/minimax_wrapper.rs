//! From a fixed-weight oracle back to a min-rival guarantee: runs
//! multiplicative weights over rivals around the weighted ordinal greedy
//! and reports the lottery floor and the union committee.
//!
//! Run with: cargo run --example minimax_wrapper

use enselect::exact::opt_theta_bruteforce;
use enselect::instances::gen_bitblock_ranking;
use enselect::ordinal::{
    minimax_wrapper, rival_cover_rate, theta_extended, MinimaxConfig, RivalAuditMode,
};
use enselect::FeedbackSource;

fn main() -> enselect::Result<()> {
    // materialize a finite population of 120 rankings over 6 candidates
    let mut generator = gen_bitblock_ranking(vec![0.85, 0.75, 0.55, 0.4, 0.3, 0.15], 42)?;
    let profile = generator.materialize_profile(120)?;
    let (m, k, epsilon, delta) = (6, 2, 0.4, 0.2);

    let opt = opt_theta_bruteforce(&profile, k, 1 << 24)?;
    println!(
        "exact size-{k} optimum: theta* = {:.4} at {}",
        opt.value, opt.witness
    );
    let guarantee = (1.0 - 1.0 / std::f64::consts::E) * opt.value - epsilon;
    println!(
        "wrapper guarantee floor: (1 - 1/e) theta* - eps = {:.4}\n",
        guarantee
    );

    let mut source = FeedbackSource::from_profile(profile.clone(), 7);
    let config = MinimaxConfig {
        rival_audit: RivalAuditMode::FullInfo,
        rounds_override: Some(10),
        // tighter inner-loop cap keeps this walkthrough snappy
        wofg: enselect::ordinal::WofgConfig {
            max_rounds_per_step: 2_000,
            ..Default::default()
        },
        ..MinimaxConfig::default()
    };
    let out = minimax_wrapper(&mut source, m, k, epsilon, delta, &config)?;

    println!("{} rounds, ledger: {:?}", out.rounds, out.ledger);
    let mut counts = std::collections::BTreeMap::new();
    for s in out.lottery.committees() {
        *counts.entry(format!("{s}")).or_insert(0u32) += 1;
    }
    println!("round committees:");
    for (committee, count) in counts {
        println!("  {committee} x{count}");
    }

    println!("\nper-rival lottery cover rates:");
    for x in 0..m {
        println!(
            "  rival {x}: {:.4}",
            out.lottery.rival_cover_rate(&profile, x)
        );
    }
    let value = out.lottery.value(&profile);
    println!(
        "lottery floor (min over rivals): {:.4} >= {:.4}",
        value, guarantee
    );

    println!(
        "union committee {} (size {}): theta = {:.4}",
        out.union,
        out.union.len(),
        theta_extended(&profile, &out.union)
    );
    // a singleton reference: the strongest candidate alone
    let best_single = enselect::Committee::exact(vec![0])?;
    println!(
        "best singleton reference: theta({best_single}) = {:.4}",
        rival_cover_rate(&profile, &best_single, 1).min(
            (0..m)
                .filter(|&x| x != 0)
                .map(|x| rival_cover_rate(&profile, &best_single, x))
                .fold(f64::INFINITY, f64::min)
        )
    );
    Ok(())
}
