//! The enumeration-based approximation scheme for the min-rival objective:
//! exact below its size threshold, capped instead of unbounded above it.
//!
//! Run with: cargo run --example ptas_enumeration

use enselect::exact::opt_theta_bruteforce;
use enselect::instances::{gen_bitblock_ranking, gen_cyclic_profile};
use enselect::ordinal::{ptas_size_threshold, ptas_theta, theta};

fn main() -> enselect::Result<()> {
    for gamma in [0.99, 0.5, 0.2] {
        println!(
            "accuracy gamma = {gamma}: enumeration covers committees up to size {}",
            ptas_size_threshold(gamma)
        );
    }

    let mut generator = gen_bitblock_ranking(vec![0.8, 0.7, 0.5, 0.45, 0.3, 0.25, 0.1], 9)?;
    let profile = generator.materialize_profile(60)?;
    for k in 1..=3 {
        let approx = ptas_theta(&profile, k, 0.5, 1 << 24)?;
        let opt = opt_theta_bruteforce(&profile, k, 1 << 24)?;
        println!(
            "k = {k}: scheme {} -> {:.4}, brute force {} -> {:.4}",
            approx,
            theta(&profile, &approx)?.value,
            opt.witness,
            opt.value
        );
    }

    // the cyclic profile keeps every committee's value low
    let cyclic = gen_cyclic_profile(9)?;
    let opt = opt_theta_bruteforce(&cyclic, 3, 1 << 24)?;
    println!(
        "cyclic pool of 9: best size-3 committee {} only reaches {:.4}",
        opt.witness, opt.value
    );

    // the committee-count cap turns a blow-up into a typed error
    let err = ptas_theta(&profile, 3, 0.5, 10).unwrap_err();
    println!("tiny cap: {err}");
    Ok(())
}
