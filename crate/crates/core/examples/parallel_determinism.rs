//! The same experiment on 1, 2 and 8 worker threads gives identical curves.
//!
//! cargo run --release --example parallel_determinism

use graphbandit::bandit::PolicySpec;
use graphbandit::sim::{run_experiment, ExperimentConfig};

fn main() -> graphbandit::Result<()> {
    let base =
        ExperimentConfig::new(5, 1000, 400, PolicySpec::TsN, "er:0,0.2,dir".parse()?).with_seed(11);
    let reference = run_experiment(&base.clone().with_workers(1))?;
    for workers in [2, 8] {
        let curve = run_experiment(&base.clone().with_workers(workers))?;
        let same = curve
            .mean
            .iter()
            .zip(&reference.mean)
            .all(|(a, b)| a.to_bits() == b.to_bits());
        println!("{workers} workers: bit-identical = {same}");
        assert!(same);
    }
    println!(
        "final regret {:.3} ± {:.3}",
        reference.final_mean(),
        reference.final_stderr()
    );
    Ok(())
}
