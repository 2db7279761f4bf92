use approx::assert_abs_diff_eq;
use graphbandit::analysis::{floor_q_bound, optimal_action_dist};
use graphbandit::bandit::{ts_u_select, BanditEnvironment, BetaPosterior, BetaPrior, PolicySpec};
use graphbandit::graph::{naive, sample_er_graph, FeedbackGraph, GraphMetrics, GraphSpec};
use graphbandit::seed;
use graphbandit::sim::{run_experiment, ExperimentConfig};
use graphbandit::PolicyDistribution;
use proptest::prelude::*;
use rand::Rng;

/// Any graph on up to 8 arms; undirected ones are symmetrized.
fn graphs() -> impl Strategy<Value = FeedbackGraph> {
    (1usize..=8, any::<bool>()).prop_flat_map(|(k, directed)| {
        proptest::collection::vec(any::<bool>(), k * k).prop_map(move |mut m| {
            if !directed {
                for i in 0..k {
                    for j in 0..i {
                        m[i * k + j] = m[j * k + i];
                    }
                }
            }
            FeedbackGraph::from_matrix(k, directed, m).unwrap()
        })
    })
}

fn graph_and_dist() -> impl Strategy<Value = (FeedbackGraph, Vec<f64>)> {
    graphs().prop_flat_map(|g| {
        let k = g.k();
        let weights = proptest::collection::vec(prop_oneof![Just(0.0), 1e-6..1.0f64], k);
        (Just(g), weights).prop_filter_map("all-zero weights", |(g, w)| {
            let total: f64 = w.iter().sum();
            (total > 0.0).then(|| (g, w.iter().map(|x| x / total).collect()))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn solvers_agree_with_enumeration(g in graphs()) {
        let m = GraphMetrics::compute(&g).unwrap();
        prop_assert_eq!(m.beta0, naive::independence_number(&g));
        prop_assert_eq!(m.mas, naive::mas_number(&g));
        prop_assert_eq!(m.chi, naive::clique_cover_number(&g));
        prop_assert!(1 <= m.beta0 && m.beta0 <= m.mas && m.beta0 <= m.chi && m.chi <= g.k());
        if !g.is_directed() {
            prop_assert_eq!(m.beta0, m.mas);
        }
    }

    #[test]
    fn q_is_bounded_by_graph_numbers((g, pi) in graph_and_dist()) {
        let m = GraphMetrics::compute(&g).unwrap();
        let q = g.q_quantity(&pi).unwrap();
        prop_assert!(q > 0.0);
        prop_assert!(q <= m.chi as f64 + 1e-9);
        prop_assert!(q <= m.mas as f64 + 1e-9);
        if !g.is_directed() {
            prop_assert!(q <= m.beta0 as f64 + 1e-9);
        }
    }

    #[test]
    fn extra_arcs_never_raise_q_or_beta0((g, pi) in graph_and_dist(), i in 0usize..8, j in 0usize..8) {
        let k = g.k();
        let (i, j) = (i % k, j % k);
        let mut arcs = g.arcs();
        arcs.push((i, j));
        let denser = FeedbackGraph::from_arcs(k, g.is_directed(), &arcs).unwrap();
        prop_assert!(denser.q_quantity(&pi).unwrap() <= g.q_quantity(&pi).unwrap() + 1e-12);
        prop_assert!(
            GraphMetrics::compute(&denser).unwrap().beta0 <= GraphMetrics::compute(&g).unwrap().beta0
        );
    }

    #[test]
    fn floored_distributions_meet_the_log_bound(
        g in graphs(),
        eta in prop_oneof![Just(0.01), Just(0.05), Just(0.1)],
        seed in any::<u64>(),
    ) {
        let k = g.k();
        prop_assume!(k as f64 * eta < 1.0);
        let mut rng = seed::stream(seed, 0, "floor");
        let pi = graphbandit::verify::floored_distribution(k, eta, &mut rng);
        let beta0 = GraphMetrics::compute(&g).unwrap().beta0;
        prop_assert!(g.q_quantity(&pi).unwrap() <= floor_q_bound(beta0, k, eta).unwrap() + 1e-9);
    }

    #[test]
    fn uniform_mixing_floors_every_arm(w in proptest::collection::vec(0.0..1.0f64, 1..10), eps in 0.0..=1.0f64) {
        prop_assume!(w.iter().sum::<f64>() > 0.0);
        let k = w.len();
        let mixed = PolicyDistribution::normalized(w).unwrap().mix_uniform(eps).unwrap();
        prop_assert!(mixed.min_prob() >= eps / k as f64 - 1e-12);
        prop_assert!((mixed.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn posterior_counts_track_revealed_rewards(g in graphs(), seed in any::<u64>(), rounds in 1usize..40) {
        let k = g.k();
        let mut rng = seed::stream(seed, 0, "post");
        let mut post = BetaPosterior::new(k, BetaPrior::default());
        let mut expected = vec![0.0; k];
        let mut rewards = vec![false; k];
        for _ in 0..rounds {
            let arm = rng.random_range(0..k);
            for r in rewards.iter_mut() {
                *r = rng.random_bool(0.5);
            }
            post.update(&g, arm, &rewards);
            for j in g.out_neighbors(arm) {
                expected[j] += 1.0;
            }
        }
        for (i, &n) in expected.iter().enumerate() {
            prop_assert_eq!(post.observations(i), n);
        }
    }
}

#[test]
fn er_arc_count_matches_mixture_mean() {
    // p ~ U[0, 0.2], 20 ordered pairs: E[arcs] = 2, Var = 20 E[p(1-p)] + 400 Var(p).
    let n = 10_000;
    let mut rng = seed::stream(1, 0, "er-count");
    let mean = (0..n)
        .map(|_| {
            sample_er_graph(5, 0.0, 0.2, true, &mut rng)
                .unwrap()
                .arc_count() as f64
        })
        .sum::<f64>()
        / n as f64;
    let var = 20.0 * (0.1 - 0.04 / 3.0) + 400.0 * (0.04 / 12.0);
    assert!(
        (mean - 2.0).abs() <= 3.0 * (var / n as f64).sqrt(),
        "{mean}"
    );
}

#[test]
fn ts_u_selects_by_mixture_law() {
    let post = BetaPosterior::from_counts(
        BetaPrior::default(),
        vec![4.0, 2.0, 1.0],
        vec![1.0, 2.0, 3.0],
    )
    .unwrap();
    let alpha = optimal_action_dist(&post).unwrap();
    let eps = 0.3;
    let n = 200_000;
    let mut rng = seed::stream(2, 0, "ts-u-law");
    let mut counts = [0usize; 3];
    for _ in 0..n {
        counts[ts_u_select(&post, eps, &mut rng)] += 1;
    }
    for (i, (&c, &a)) in counts.iter().zip(alpha.probs()).enumerate() {
        let p = eps / 3.0 + (1.0 - eps) * a;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((c as f64 / n as f64 - p).abs() <= 3.0 * sigma, "arm {i}");
    }
}

#[test]
fn full_feedback_posterior_concentrates() {
    let env =
        BanditEnvironment::from_means(vec![0.2, 0.5, 0.7, 0.9], BetaPrior::default()).unwrap();
    let g = FeedbackGraph::from_arcs(4, false, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
        .unwrap();
    let mut rng = seed::stream(3, 0, "rewards");
    let mut post = BetaPosterior::new(4, BetaPrior::default());
    let mut rewards = vec![false; 4];
    for _ in 0..10_000 {
        env.realize(&mut rng, &mut rewards);
        post.update(&g, 0, &rewards);
    }
    for (i, &mu) in env.means().iter().enumerate() {
        assert_abs_diff_eq!(post.mean(i), mu, epsilon = 0.02);
    }
}

#[test]
fn uniform_policy_regret_matches_closed_form() {
    // Two U[0,1] means: E[max − mean] = E|μ₁ − μ₂| / 2 = 1/6 per round.
    let cfg =
        ExperimentConfig::new(2, 1000, 10_000, PolicySpec::Uniform, GraphSpec::Empty).with_seed(4);
    let curve = run_experiment(&cfg).unwrap();
    let expected = 1000.0 / 6.0;
    assert!(
        (curve.final_mean() - expected).abs() <= 3.0 * curve.final_stderr(),
        "{} ± {}",
        curve.final_mean(),
        curve.final_stderr()
    );
}

#[test]
fn richer_feedback_lowers_ts_regret() {
    let run = |graph: &str| {
        let cfg = ExperimentConfig::new(5, 500, 400, PolicySpec::TsN, graph.parse().unwrap())
            .with_seed(5);
        run_experiment(&cfg).unwrap()
    };
    let (empty, complete) = (run("empty"), run("complete"));
    let se = empty.final_stderr().hypot(complete.final_stderr());
    assert!(complete.final_mean() + 3.0 * se < empty.final_mean());
}
