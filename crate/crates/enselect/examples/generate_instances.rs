//! Tour of the synthetic instance generators and the CSV interchange
//! formats the binary understands.
//!
//! Run with: cargo run --example generate_instances

use enselect::harness::{cmd_gen, GeneratorSpec};
use enselect::instances::{
    gen_cyclic_profile, load_binary_csv, load_ranks_csv, load_scores_csv, nonsubmodular4,
    train_test_split,
};

fn main() -> enselect::Result<()> {
    let dir = std::env::temp_dir().join("enselect-example-gen");
    std::fs::create_dir_all(&dir)?;

    // binary matrix: independent per-candidate solve probabilities
    let matrix_path = dir.join("bernoulli.csv");
    cmd_gen(
        &GeneratorSpec::Bernoulli {
            biases: vec![0.7, 0.5, 0.3],
            tasks: 8,
            seed: 4,
        },
        &matrix_path,
    )?;
    let matrix = load_binary_csv(&matrix_path)?;
    println!("bernoulli matrix ({} x {}):", matrix.m(), matrix.n());
    println!("{}", std::fs::read_to_string(&matrix_path)?);

    // rank profile: the cyclic pool where every committee has a beater
    let cyclic = gen_cyclic_profile(5)?;
    println!(
        "cyclic rank rows: {:?}, {:?}, ...",
        cyclic.rank_row(0),
        cyclic.rank_row(1)
    );

    // the weighted counterexample fixture round-trips through CSV
    let fixture_path = dir.join("fixture.csv");
    cmd_gen(&GeneratorSpec::Nonsubmodular4, &fixture_path)?;
    let fixture = load_ranks_csv(&fixture_path)?;
    assert_eq!(fixture.rank_row(0), nonsubmodular4().rank_row(0));
    println!("fixture profile with weights:");
    println!("{}", std::fs::read_to_string(&fixture_path)?);

    // score matrices convert into competition ranks (ties share a rank)
    let scores_path = dir.join("scores.csv");
    std::fs::write(
        &scores_path,
        "id,t0,t1\nalpha,5,1.5\nbeta,5,2.5\ngamma,2,2.5\n",
    )?;
    let from_scores = load_scores_csv(&scores_path)?;
    println!(
        "score columns become competition ranks: t0 -> {:?}, t1 -> {:?} (strict: {})",
        from_scores.rank_row(0),
        from_scores.rank_row(1),
        from_scores.strict()
    );

    // deterministic stratified splitting
    let strata: Vec<String> = ["qa", "qa", "qa", "code", "code", "code"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let split = train_test_split(6, 0.5, 0, Some(&strata))?;
    println!(
        "stratified split: train {:?}, test {:?}",
        split.train, split.test
    );
    Ok(())
}
