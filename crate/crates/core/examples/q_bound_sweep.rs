//! Random sweep of the Q(π, G) inequalities with worst cases.
//!
//! cargo run --release --example q_bound_sweep -- [graphs]

use graphbandit::verify::QBoundSuite;

fn main() -> graphbandit::Result<()> {
    let graphs = std::env::args()
        .nth(1)
        .map_or(Ok(1000), |s| s.parse())
        .expect("graphs");
    let out = QBoundSuite {
        graphs,
        ..QBoundSuite::default()
    }
    .run()?;
    for (r, n) in out.summaries.iter().zip(&out.instances) {
        println!(
            "{:<28} {n:>6} instances, worst {:.4} vs {:.4}",
            r.check, r.lhs, r.rhs
        );
    }
    println!("{} violations", out.violations.len());
    Ok(())
}
