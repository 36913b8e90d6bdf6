//! The min-rival winning objective and its rival-weighted relaxation on
//! the fixed 4-candidate counterexample profile.
//!
//! Shows that the min-rival value is monotone but violates diminishing
//! returns, while the rival-weighted coverage is submodular for any fixed
//! rival distribution and factors its marginals into failure mass times
//! rescue rate.
//!
//! Run with: cargo run --example ordinal_objectives

use enselect::exact::{check_submodularity, StructureCheck};
use enselect::instances::nonsubmodular4;
use enselect::ordinal::{prefix_cover_stats, theta, theta_extended, win_rate};
use enselect::types::Committee;
use enselect::RivalWeights;

fn committee(ids: &[usize]) -> Committee {
    Committee::exact(ids.to_vec()).unwrap()
}

fn main() -> enselect::Result<()> {
    let profile = nonsubmodular4();
    println!("profile: 2/3 on b>a>d>c, 1/3 on c>a>d>b (ids a=0, b=1, c=2, d=3)\n");

    for members in [vec![0], vec![0, 2], vec![0, 1], vec![0, 1, 2]] {
        let s = committee(&members);
        let t = theta(&profile, &s)?;
        println!(
            "theta({s}) = {:.4}  (worst rival: candidate {})",
            t.value, t.argmin_rival
        );
    }

    println!("\nwin rate of {{a,b}} vs {{a,c}}: {:.4}", {
        win_rate(&profile, &committee(&[0, 1]), &committee(&[0, 2]))
    });

    // diminishing returns fails: adding c helps {a,b} but not {a}
    let check = check_submodularity(
        |members| theta_extended(&profile, &Committee::exact(members.to_vec()).unwrap()),
        4,
    )?;
    match check {
        StructureCheck::NotSubmodular {
            small,
            large,
            added,
            gain_small,
            gain_large,
        } => {
            println!(
                "\ndiminishing-returns violation: adding {added} to {small:?} gains {gain_small:.4}, \
                 to the superset {large:?} gains {gain_large:.4}"
            );
        }
        other => println!("\nunexpected: {other:?}"),
    }

    // the rival-weighted relaxation is submodular for every rival choice
    for x in 0..4 {
        let check = check_submodularity(
            |members| {
                let s = Committee::exact(members.to_vec()).unwrap();
                prefix_cover_stats(&profile, &s, &RivalWeights::point_mass(4, x).unwrap())
                    .unwrap()
                    .phi
            },
            4,
        )?;
        assert_eq!(check, StructureCheck::Pass);
    }
    println!("rival-weighted coverage: submodular at every vertex distribution");

    // marginal identity: gain = failure mass times rescue rate
    let s = committee(&[0]);
    let rivals = RivalWeights::uniform(4);
    let stats = prefix_cover_stats(&profile, &s, &rivals)?;
    println!(
        "\nuniform rivals at S = {{a}}: coverage = {:.4}, failure mass = {:.4}",
        stats.phi, stats.rho_lambda
    );
    for c in 1..4 {
        let with_c = s.with_member(c)?;
        let gain = prefix_cover_stats(&profile, &with_c, &rivals)?.phi - stats.phi;
        println!(
            "  candidate {c}: rescue rate {:.4}, gain {:.4} = {:.4} * {:.4}",
            stats.q_lambda[c], gain, stats.rho_lambda, stats.q_lambda[c]
        );
    }
    Ok(())
}
