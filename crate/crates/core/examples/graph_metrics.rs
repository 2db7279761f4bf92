//! Exact graph numbers for the experiment graphs and a random one.
//!
//! cargo run --release --example graph_metrics

use graphbandit::graph::{make_graph, sample_er_graph, GraphKind, GraphMetrics};
use graphbandit::seed;
use graphbandit::PolicyDistribution;

fn main() -> graphbandit::Result<()> {
    let k = 5;
    let shapes = [
        ("empty", make_graph(&GraphKind::Empty, k, false)?),
        ("complete", make_graph(&GraphKind::Complete, k, false)?),
        (
            "cliques 3+2",
            make_graph(&GraphKind::Cliques(vec![3, 2]), k, false)?,
        ),
        ("total order", make_graph(&GraphKind::TotalOrder, k, true)?),
    ];
    let uniform = PolicyDistribution::uniform(k);
    println!(
        "{:<12} {:>5} {:>4} {:>4} {:>10}",
        "graph", "beta0", "mas", "chi", "Q(uniform)"
    );
    for (name, g) in &shapes {
        let m = GraphMetrics::compute(g)?;
        let q = g.q_quantity(uniform.probs())?;
        println!(
            "{name:<12} {:>5} {:>4} {:>4} {q:>10.4}",
            m.beta0, m.mas, m.chi
        );
    }

    // A directed random graph at the default exact-search limit.
    let mut rng = seed::stream(42, 0, "example");
    let g = sample_er_graph(20, 0.3, 0.3, true, &mut rng)?;
    let m = GraphMetrics::compute(&g)?;
    println!("\nER(20, 0.3) directed, {} arcs: {m:?}", g.arc_count());
    println!("{}", serde_json::to_string(&g.to_json())?);
    Ok(())
}
