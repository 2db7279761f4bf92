//! Empirical TS-N and TS-U regret next to the information-theoretic bounds.
//!
//! cargo run --release --example regret_bounds -- [trials]

use graphbandit::verify::RegretSuite;

fn main() -> graphbandit::Result<()> {
    let trials = std::env::args()
        .nth(1)
        .map_or(Ok(300), |s| s.parse())
        .expect("trials");
    let suite = RegretSuite {
        trials,
        ..RegretSuite::default()
    };
    for r in suite.run_bounds()? {
        println!(
            "{:<48} regret {:7.2} ± {:5.2}  bound {:8.2}  {}",
            r.check,
            r.lhs,
            r.stderr,
            r.rhs,
            if r.pass { "ok" } else { "VIOLATED" }
        );
    }
    Ok(())
}
