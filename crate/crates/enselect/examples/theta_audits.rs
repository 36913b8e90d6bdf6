//! Auditing a proposed committee's min-rival value: the fixed-size audit,
//! the gap-adaptive audit with per-rival query counts, and racing over a
//! finite family of committees.
//!
//! Run with: cargo run --example theta_audits

use enselect::audit::{
    active_family_learning, audit_theta_fixed, gap_adaptive_audit, FamilyConfig,
};
use enselect::instances::gen_bitblock_ranking;
use enselect::ordinal::theta;
use enselect::types::{Committee, QueryLedger};
use enselect::FeedbackSource;

fn main() -> enselect::Result<()> {
    let mut generator = gen_bitblock_ranking(vec![0.9, 0.7, 0.6, 0.45, 0.1], 3)?;
    let profile = generator.materialize_profile(500)?;
    let s = Committee::exact(vec![0, 2])?;
    let truth = theta(&profile, &s)?.value;
    println!("auditing {s}: true value {truth:.4}\n");

    let mut source = FeedbackSource::from_profile(profile.clone(), 1);
    let mut ledger = QueryLedger::new();
    let fixed = audit_theta_fixed(&mut source, &s, 0.1, 0.1, &mut ledger)?;
    println!(
        "fixed audit: estimate {:.4} in [{:.4}, {:.4}], {} rankings, {} comparisons",
        fixed.theta_hat,
        fixed.interval.0,
        fixed.interval.1,
        fixed.stopped_at,
        ledger.total_queries()
    );

    let mut source = FeedbackSource::from_profile(profile.clone(), 2);
    let mut ledger = QueryLedger::new();
    let gap = gap_adaptive_audit(&mut source, &s, 0.1, 0.1, &mut ledger)?;
    println!(
        "gap-adaptive audit: estimate {:.4} in [{:.4}, {:.4}], {} rankings, {} comparisons",
        gap.theta_hat,
        gap.interval.0,
        gap.interval.1,
        gap.stopped_at,
        ledger.total_queries()
    );
    println!("  per-rival comparisons (far rivals are dropped early):");
    for (rival, count) in &gap.per_rival_counts {
        println!("    rival {rival}: {count}");
    }

    let family = vec![
        Committee::exact(vec![0])?,
        Committee::exact(vec![0, 2])?,
        Committee::exact(vec![3, 4])?,
        Committee::exact(vec![1, 3])?,
    ];
    let base = FeedbackSource::from_profile(profile.clone(), 5);
    let outcome = active_family_learning(&base, &family, 0.1, 0.1, &FamilyConfig::default())?;
    println!(
        "\nfamily racing chose {} with per-committee query splits:",
        outcome.chosen
    );
    for (i, (member, ledger)) in family.iter().zip(&outcome.per_committee).enumerate() {
        println!(
            "  {} -> {} queries (true theta {:.4}){}",
            member,
            ledger.total_queries(),
            theta(&profile, member)?.value,
            if i == outcome.chosen_index {
                "  <- selected"
            } else {
                ""
            }
        );
    }
    Ok(())
}
