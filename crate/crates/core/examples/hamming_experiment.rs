//! A reduced Hamming-ball exclusion sweep on random trees.
//!
//! ```bash
//! cargo run --release --example hamming_experiment
//! ```

use hoplp::experiment::{run_experiment, ExperimentConfig, Family};

fn main() -> hoplp::Result<()> {
    let config = ExperimentConfig {
        n: 8,
        seeds: 10,
        lambdas: vec![0.5, 1.0, 2.0],
        ks: vec![1, 2],
        ..ExperimentConfig::default()
    };
    let report = run_experiment(Family::Hamming, &config)?;
    println!("{}", serde_json::to_string_pretty(&report.summary).expect("summary serializes"));
    Ok(())
}
