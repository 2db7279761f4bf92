//! Trials, pseudo-regret accounting and aggregation.
//!
//! A trial is a pure function of `(config, trial_id)`: its environment, graph
//! sequence, reward draws and policy randomness each come from their own
//! stream keyed by the master seed and the trial id. Trials run in parallel
//! and are reduced in trial-id order, so results do not depend on the worker
//! count.

use rand::RngCore;
use rayon::prelude::*;

use crate::bandit::{draw_environment, BanditEnvironment, BetaPrior, Policy, PolicySpec};
use crate::graph::{GraphMetrics, GraphSpec};
use crate::seed;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum EnvironmentSpec {
    /// Fresh means from the prior in every trial.
    Prior(BetaPrior),
    /// The same means in every trial; the prior only seeds the posteriors.
    Fixed { means: Vec<f64>, prior: BetaPrior },
}

impl Default for EnvironmentSpec {
    fn default() -> Self {
        EnvironmentSpec::Prior(BetaPrior::default())
    }
}

impl EnvironmentSpec {
    pub fn prior(&self) -> BetaPrior {
        match self {
            EnvironmentSpec::Prior(p) => *p,
            EnvironmentSpec::Fixed { prior, .. } => *prior,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub arms: usize,
    pub horizon: u64,
    pub trials: u64,
    pub policy: PolicySpec,
    pub graph: GraphSpec,
    pub environment: EnvironmentSpec,
    pub seed: u64,
    /// Worker threads; 0 uses the ambient rayon pool.
    pub workers: usize,
    /// Share one graph sequence per trial across policies instead of drawing
    /// one per (policy, trial).
    pub paired_graphs: bool,
    /// Accumulate `Σ_t β₀(G_t)` and `Σ_t mas(G_t)` along each trial.
    pub track_graph_metrics: bool,
}

impl ExperimentConfig {
    pub fn new(
        arms: usize,
        horizon: u64,
        trials: u64,
        policy: PolicySpec,
        graph: GraphSpec,
    ) -> Self {
        Self {
            arms,
            horizon,
            trials,
            policy: policy.for_horizon(horizon),
            graph,
            environment: EnvironmentSpec::default(),
            seed: 0,
            workers: 0,
            paired_graphs: false,
            track_graph_metrics: false,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_policy(mut self, policy: PolicySpec) -> Self {
        self.policy = policy.for_horizon(self.horizon);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.arms == 0 || self.horizon == 0 || self.trials == 0 {
            return Err(Error::config(
                "arms, horizon and trials must all be positive",
            ));
        }
        self.policy.validate()?;
        self.environment.prior().validate()?;
        if let EnvironmentSpec::Fixed { means, .. } = &self.environment {
            if means.len() != self.arms {
                return Err(Error::config(format!(
                    "{} fixed means for {} arms",
                    means.len(),
                    self.arms
                )));
            }
        }
        self.graph.sequence(self.arms, self.horizon)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MetricSums {
    pub beta0: u64,
    pub mas: u64,
    /// `beta0_rounds[b]` counts rounds whose graph had independence number `b`.
    pub beta0_rounds: Vec<u64>,
}

impl MetricSums {
    /// Per-round independence numbers, in nondecreasing order.
    pub fn beta0_per_round(&self) -> Vec<usize> {
        self.beta0_rounds
            .iter()
            .enumerate()
            .flat_map(|(b, &n)| std::iter::repeat_n(b, n as usize))
            .collect()
    }
}

/// Cumulative pseudo-regret of one trial, entry `t - 1` for round `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    pub trial_id: u64,
    pub cum_regret: Vec<f64>,
    /// Rewards revealed to the policy over the whole trial.
    pub observations: u64,
    pub metric_sums: Option<MetricSums>,
}

impl RegretTrace {
    pub fn final_regret(&self) -> f64 {
        self.cum_regret.last().copied().unwrap_or(0.0)
    }
}

pub fn run_trial(cfg: &ExperimentConfig, trial_id: u64) -> Result<RegretTrace> {
    let policy = cfg.policy;
    let prior = cfg.environment.prior();
    run_trial_with(cfg, trial_id, &|env| policy.build(env.k(), prior), None)
}

/// Callback receiving `(t, policy)` during a trial.
pub type TrialObserver<'a> = &'a mut dyn FnMut(u64, &dyn Policy);

/// Runs one trial with a caller-built policy.
///
/// `observer` is called with `(t, policy)` before every selection and once
/// more with `t = T + 1` after the last update.
pub fn run_trial_with(
    cfg: &ExperimentConfig,
    trial_id: u64,
    make_policy: &dyn Fn(&BanditEnvironment) -> Box<dyn Policy>,
    mut observer: Option<TrialObserver<'_>>,
) -> Result<RegretTrace> {
    let wrap = |e: Error| Error::Trial {
        trial_id,
        source: Box::new(e),
    };
    let k = cfg.arms;
    let env = match &cfg.environment {
        EnvironmentSpec::Prior(prior) => {
            let mut rng = seed::stream(cfg.seed, trial_id, "environment");
            draw_environment(k, *prior, &mut rng).map_err(wrap)?
        }
        EnvironmentSpec::Fixed { means, prior } => {
            BanditEnvironment::from_means(means.clone(), *prior).map_err(wrap)?
        }
    };
    let mut policy = make_policy(&env);
    let name = policy.name();
    let graphs = cfg.graph.sequence(k, cfg.horizon).map_err(wrap)?;

    let graph_label = if cfg.paired_graphs {
        "graph".to_string()
    } else {
        format!("graph/{name}")
    };
    let mut graph_rng = seed::stream(cfg.seed, trial_id, &graph_label);
    let mut reward_rng = seed::stream(cfg.seed, trial_id, "rewards");
    let mut policy_rng = seed::stream(cfg.seed, trial_id, &format!("policy/{name}"));

    let fixed_metrics = match (cfg.track_graph_metrics, graphs.is_time_invariant()) {
        (true, true) => {
            let g = graphs.next_graph(&mut graph_rng);
            Some(GraphMetrics::compute(&g).map_err(wrap)?)
        }
        _ => None,
    };
    let mut sums = cfg.track_graph_metrics.then(|| MetricSums {
        beta0_rounds: vec![0; k + 1],
        ..MetricSums::default()
    });

    let mut cum_regret = Vec::with_capacity(cfg.horizon as usize);
    let mut total = 0.0;
    let mut observations = 0u64;
    let mut rewards = vec![false; k];
    let mut revealed = Vec::with_capacity(k);

    for t in 1..=cfg.horizon {
        let g = graphs.next_graph(&mut graph_rng);
        if let Some(sums) = sums.as_mut() {
            let m = match fixed_metrics {
                Some(m) => m,
                None => GraphMetrics::compute(&g).map_err(wrap)?,
            };
            sums.beta0 += m.beta0 as u64;
            sums.mas += m.mas as u64;
            sums.beta0_rounds[m.beta0] += 1;
        }
        if let Some(obs) = observer.as_mut() {
            obs(t, policy.as_ref());
        }
        let arm = policy.select(t, &mut policy_rng as &mut dyn RngCore);
        env.realize(&mut reward_rng, &mut rewards);
        revealed.clear();
        revealed.extend(g.out_neighbors(arm).map(|a| (a, rewards[a])));
        observations += revealed.len() as u64;
        policy.observe(arm, &revealed);
        total += env.gap(arm);
        cum_regret.push(total);
    }
    if let Some(obs) = observer.as_mut() {
        obs(cfg.horizon + 1, policy.as_ref());
    }

    Ok(RegretTrace {
        trial_id,
        cum_regret,
        observations,
        metric_sums: sums,
    })
}

fn in_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::config(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(job))
}

/// Every trial of the experiment, in trial-id order.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<Vec<RegretTrace>> {
    cfg.validate()?;
    in_pool(cfg.workers, || {
        (0..cfg.trials)
            .into_par_iter()
            .map(|id| run_trial(cfg, id))
            .collect::<Result<Vec<_>>>()
    })?
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<AggregateCurve> {
    AggregateCurve::from_traces(&run_trials(cfg)?)
}

/// Per-round mean and sample standard deviation of cumulative regret.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateCurve {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub trials: u64,
}

impl AggregateCurve {
    /// Folds traces in the order given. A single trace has zero spread.
    pub fn from_traces(traces: &[RegretTrace]) -> Result<Self> {
        let Some(first) = traces.first() else {
            return Err(Error::config("no traces to aggregate"));
        };
        let len = first.cum_regret.len();
        if traces.iter().any(|t| t.cum_regret.len() != len) {
            return Err(Error::config("traces have different horizons"));
        }
        let n = traces.len() as f64;
        let mut mean = vec![0.0; len];
        for tr in traces {
            for (m, x) in mean.iter_mut().zip(&tr.cum_regret) {
                *m += x;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut std = vec![0.0; len];
        if traces.len() > 1 {
            for tr in traces {
                for ((s, x), m) in std.iter_mut().zip(&tr.cum_regret).zip(&mean) {
                    *s += (x - m) * (x - m);
                }
            }
            std.iter_mut().for_each(|s| *s = (*s / (n - 1.0)).sqrt());
        }
        Ok(Self {
            mean,
            std,
            trials: traces.len() as u64,
        })
    }

    pub fn horizon(&self) -> usize {
        self.mean.len()
    }

    pub fn final_mean(&self) -> f64 {
        self.mean.last().copied().unwrap_or(0.0)
    }

    pub fn final_std(&self) -> f64 {
        self.std.last().copied().unwrap_or(0.0)
    }

    /// Standard error of the final mean.
    pub fn final_stderr(&self) -> f64 {
        self.final_std() / (self.trials as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(policy: &str, graph: &str, arms: usize, horizon: u64, trials: u64) -> ExperimentConfig {
        ExperimentConfig::new(
            arms,
            horizon,
            trials,
            policy.parse().unwrap(),
            graph.parse().unwrap(),
        )
        .with_seed(7)
    }

    struct Always(usize);

    impl Policy for Always {
        fn name(&self) -> String {
            "always".into()
        }
        fn select(&mut self, _t: u64, _rng: &mut dyn RngCore) -> usize {
            self.0
        }
        fn observe(&mut self, _chosen: usize, _revealed: &[(usize, bool)]) {}
    }

    #[test]
    fn oracle_policy_has_no_regret() {
        let c = cfg("ts-n", "er:0,0.2,dir", 5, 200, 1);
        let tr = run_trial_with(&c, 3, &|env| Box::new(Always(env.best_arm())), None).unwrap();
        assert!(tr.cum_regret.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn fixed_means_constant_gap() {
        let mut c = cfg("uniform", "empty", 2, 100, 1);
        c.environment = EnvironmentSpec::Fixed {
            means: vec![0.9, 0.5],
            prior: BetaPrior::default(),
        };
        let tr = run_trial_with(&c, 0, &|_| Box::new(Always(1)), None).unwrap();
        assert!((tr.final_regret() - 40.0).abs() < 1e-9);
    }

    #[test]
    fn traces_are_monotone_and_bounded() {
        for policy in ["ts-n", "ts-u", "ucb-n", "uniform"] {
            let c = cfg(policy, "cliques:3,2", 5, 300, 3);
            for id in 0..3 {
                let tr = run_trial(&c, id).unwrap();
                assert_eq!(tr.cum_regret.len(), 300);
                assert!(tr.cum_regret[0] >= 0.0);
                assert!(tr.cum_regret.windows(2).all(|w| w[1] >= w[0]));
                assert!(tr.final_regret() <= 300.0);
            }
        }
    }

    #[test]
    fn observation_counts_follow_the_graph() {
        let complete = run_trial(&cfg("uniform", "complete", 4, 50, 1), 0).unwrap();
        assert_eq!(complete.observations, 4 * 50);
        let empty = run_trial(&cfg("ts-n", "empty", 4, 50, 1), 0).unwrap();
        assert_eq!(empty.observations, 50);
    }

    #[test]
    fn posterior_counts_match_revealed_observations() {
        let c = cfg("ts-n", "er:0,0.5,dir", 5, 400, 1);
        let mut seen = 0.0;
        let mut grab = |t: u64, p: &dyn Policy| {
            if t == 401 {
                let post = p.posterior().unwrap();
                seen = (0..5).map(|a| post.observations(a)).sum();
            }
        };
        let prior = c.environment.prior();
        let tr = run_trial_with(
            &c,
            0,
            &|env| c.policy.build(env.k(), prior),
            Some(&mut grab),
        )
        .unwrap();
        assert_eq!(seen, tr.observations as f64);
    }

    #[test]
    fn fixed_graph_metric_sums() {
        let mut c = cfg("ts-n", "cliques:3,2", 5, 100, 1);
        c.track_graph_metrics = true;
        let tr = run_trial(&c, 0).unwrap();
        let sums = tr.metric_sums.unwrap();
        assert_eq!((sums.beta0, sums.mas), (200, 200));
        assert_eq!(sums.beta0_rounds, vec![0, 0, 100, 0, 0, 0]);
        assert_eq!(sums.beta0_per_round(), vec![2; 100]);
    }

    #[test]
    fn single_trial_curve_has_zero_spread() {
        let c = cfg("ts-n", "empty", 3, 50, 1);
        let curve = run_experiment(&c).unwrap();
        let tr = run_trial(&c, 0).unwrap();
        assert_eq!(curve.mean, tr.cum_regret);
        assert!(curve.std.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let c = cfg("ts-u", "er:0,0.2,undir", 5, 100, 24);
        let one = run_experiment(&c.clone().with_workers(1)).unwrap();
        let four = run_experiment(&c.clone().with_workers(4)).unwrap();
        assert_eq!(one, four);
        assert_eq!(one, run_experiment(&c.with_workers(1)).unwrap());
    }

    #[test]
    fn invalid_configs() {
        assert!(run_experiment(&cfg("ts-n", "cliques:3,3", 5, 10, 1)).is_err());
        assert!(run_experiment(&cfg("ts-n", "empty", 5, 0, 1)).is_err());
        assert!(run_experiment(&cfg("ts-n", "empty", 5, 10, 0)).is_err());
        let mut c = cfg("ts-n", "empty", 3, 10, 1);
        c.environment = EnvironmentSpec::Fixed {
            means: vec![0.5],
            prior: BetaPrior::default(),
        };
        assert!(run_experiment(&c).is_err());
    }

    #[test]
    fn oversized_graph_metrics_report_the_trial() {
        let mut c = cfg("uniform", "empty", 21, 5, 1);
        c.track_graph_metrics = true;
        match run_trial(&c, 9) {
            Err(Error::Trial { trial_id: 9, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
