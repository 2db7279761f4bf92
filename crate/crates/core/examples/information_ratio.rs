//! Posterior probability of optimality, information gain and the
//! information-ratio inequality for one posterior.
//!
//! cargo run --release --example information_ratio

use graphbandit::analysis::{check_prop1, info_quantities_mc, optimal_action_dist};
use graphbandit::bandit::{BetaPosterior, BetaPrior};
use graphbandit::graph::GraphSpec;
use graphbandit::seed;

fn main() -> graphbandit::Result<()> {
    let post = BetaPosterior::from_counts(
        BetaPrior::default(),
        vec![8.0, 5.0, 3.0, 2.0],
        vec![3.0, 4.0, 3.0, 6.0],
    )?;
    let alpha = optimal_action_dist(&post)?;
    println!("alpha (quadrature) {:.5?}", alpha.probs());
    println!("H(alpha)           {:.5}", alpha.entropy());

    let mut rng = seed::stream(3, 0, "example");
    let info = info_quantities_mc(&post, 1_000_000, &mut rng)?;
    println!("alpha (MC)         {:.5?}", info.alpha.probs());
    println!("gaps Delta         {:.5?}", info.delta);
    println!("info gains h       {:.5?}", info.h);
    println!("E regret           {:.5}", info.expected_regret());

    for spec in ["empty", "cliques:2,2", "complete"] {
        let g = spec.parse::<GraphSpec>()?.family(4)?;
        let seq = graphbandit::graph::GraphSequence::new(g, 1)?;
        let g = seq.next_graph(&mut rng).into_owned();
        let r = check_prop1(&post, &g, 1_000_000, &mut rng)?;
        println!(
            "{spec:<12} (a'D)^2 = {:.5} <= {:.5} = Q(a) a'Gh / 2 : {}",
            r.lhs, r.rhs, r.pass
        );
    }
    Ok(())
}
