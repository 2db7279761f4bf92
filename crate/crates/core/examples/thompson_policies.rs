//! One trial of each policy on the same environment, step by step.
//!
//! cargo run --release --example thompson_policies

use graphbandit::bandit::{draw_environment, BetaPrior, PolicySpec};
use graphbandit::graph::GraphSpec;
use graphbandit::seed;

fn main() -> graphbandit::Result<()> {
    let (k, horizon) = (5, 2000);
    let graph: GraphSpec = "cliques:3,2".parse()?;
    let prior = BetaPrior::default();
    let env = draw_environment(k, prior, &mut seed::stream(7, 0, "environment"))?;
    println!("means {:.3?}, best arm {}", env.means(), env.best_arm() + 1);

    for name in ["ts-n", "ts-u", "ucb-n", "uniform"] {
        let spec = name.parse::<PolicySpec>()?.for_horizon(horizon);
        let mut policy = spec.build(k, prior);
        let seq = graph.sequence(k, horizon)?;
        let mut graph_rng = seed::stream(7, 0, "graph");
        let mut reward_rng = seed::stream(7, 0, "rewards");
        let mut policy_rng = seed::stream(7, 0, name);
        let mut rewards = vec![false; k];
        let (mut regret, mut pulls) = (0.0, vec![0u32; k]);
        for t in 1..=horizon {
            let g = seq.next_graph(&mut graph_rng);
            env.realize(&mut reward_rng, &mut rewards);
            let arm = policy.select(t, &mut policy_rng);
            let seen: Vec<(usize, bool)> = g.out_neighbors(arm).map(|j| (j, rewards[j])).collect();
            policy.observe(arm, &seen);
            regret += env.gap(arm);
            pulls[arm] += 1;
        }
        println!("{name:<8} regret {regret:7.2}  pulls {pulls:?}");
        if let Some(post) = policy.posterior() {
            let means: Vec<f64> = (0..k).map(|i| post.mean(i)).collect();
            println!("         posterior means {means:.3?}");
        }
    }
    Ok(())
}
