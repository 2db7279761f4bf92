//! Randomized property suites.
//!
//! Each suite returns [`CheckRecord`]s, the JSON lines printed by
//! `graphbandit verify`. A record passes when `lhs ≤ rhs` up to the stated
//! slack (three standard errors for Monte Carlo checks, `1e-9` for exact ones).

use std::fmt::Write as _;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use crate::analysis::{
    check_prop1, floor_q_bound, info_quantities_mc, optimal_action_dist, regret_bound_value,
    tsu_bound_value,
};
use crate::bandit::{BetaPosterior, BetaPrior, ExplorationSchedule, PolicySpec};
use crate::graph::{naive, sample_er_graph, FeedbackGraph, GraphMetrics, GraphSpec};
use crate::seed::{self, digest_hex};
use crate::sim::{run_trials, AggregateCurve, ExperimentConfig, RegretTrace};
use crate::Result;

/// Slack for exact (non-random) inequalities.
pub const EXACT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub inputs_digest: String,
    pub lhs: f64,
    pub rhs: f64,
    pub stderr: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub inconclusive: bool,
}

impl CheckRecord {
    fn exact(check: impl Into<String>, inputs: &str, lhs: f64, rhs: f64) -> Self {
        Self {
            check: check.into(),
            inputs_digest: digest_hex(inputs),
            lhs,
            rhs,
            stderr: 0.0,
            pass: lhs <= rhs + EXACT_SLACK,
            inconclusive: false,
        }
    }

    fn statistical(
        check: impl Into<String>,
        inputs: &str,
        lhs: f64,
        rhs: f64,
        stderr: f64,
    ) -> Self {
        Self {
            check: check.into(),
            inputs_digest: digest_hex(inputs),
            lhs,
            rhs,
            stderr,
            pass: lhs <= rhs + 3.0 * stderr,
            inconclusive: false,
        }
    }
}

/// Random graph for property sweeps: `p` uniform on `[0, 1]`, orientation
/// by coin flip.
pub fn random_graph<R: Rng + ?Sized>(k: usize, rng: &mut R) -> FeedbackGraph {
    let directed = rng.random_bool(0.5);
    let p: f64 = rng.random();
    sample_er_graph(k, p, p, directed, rng).expect("p in [0, 1]")
}

fn dirichlet_ones<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// A mix of dense, sparse and near-degenerate simplex points.
pub fn random_distribution<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    match rng.random_range(0..3) {
        0 => dirichlet_ones(k, rng),
        1 => {
            let mut w = dirichlet_ones(k, rng);
            let keep = rng.random_range(0..k);
            for (i, x) in w.iter_mut().enumerate() {
                if i != keep && rng.random_bool(0.5) {
                    *x = 0.0;
                }
            }
            let total: f64 = w.iter().sum();
            w.into_iter().map(|x| x / total).collect()
        }
        _ => {
            let w = dirichlet_ones(k, rng);
            let peak = rng.random_range(0..k);
            w.iter()
                .enumerate()
                .map(|(i, x)| 0.05 * x + if i == peak { 0.95 } else { 0.0 })
                .collect()
        }
    }
}

/// `η + (1 − Kη)·Dirichlet(1)`, so every entry is at least `η`.
pub fn floored_distribution<R: Rng + ?Sized>(k: usize, eta: f64, rng: &mut R) -> Vec<f64> {
    let free = (1.0 - k as f64 * eta).max(0.0);
    dirichlet_ones(k, rng)
        .into_iter()
        .map(|x| eta + free * x)
        .collect()
}

#[derive(Debug, Clone)]
pub struct QBoundSuite {
    pub seed: u64,
    pub graphs: usize,
    pub dists_per_graph: usize,
    pub min_k: usize,
    pub max_k: usize,
    pub etas: Vec<f64>,
    /// Metrics are compared with full enumeration up to this size.
    pub oracle_max_k: usize,
}

impl Default for QBoundSuite {
    fn default() -> Self {
        Self {
            seed: 1,
            graphs: 1000,
            dists_per_graph: 10,
            min_k: 2,
            max_k: 10,
            etas: vec![0.01, 0.05, 0.1],
            oracle_max_k: 8,
        }
    }
}

/// Running worst case of one inequality family.
#[derive(Debug, Clone)]
struct Worst {
    check: &'static str,
    instances: usize,
    violations: usize,
    ratio: f64,
    lhs: f64,
    rhs: f64,
}

impl Worst {
    fn new(check: &'static str) -> Self {
        Self {
            check,
            instances: 0,
            violations: 0,
            ratio: f64::NEG_INFINITY,
            lhs: 0.0,
            rhs: 0.0,
        }
    }

    fn add(&mut self, lhs: f64, rhs: f64) {
        self.instances += 1;
        if lhs > rhs + EXACT_SLACK {
            self.violations += 1;
        }
        let ratio = lhs / rhs;
        if ratio > self.ratio {
            self.ratio = ratio;
            self.lhs = lhs;
            self.rhs = rhs;
        }
    }

    fn record(&self, inputs: &str) -> CheckRecord {
        let mut r = CheckRecord::exact(self.check, inputs, self.lhs, self.rhs);
        r.pass = self.violations == 0;
        r
    }
}

#[derive(Debug, Clone)]
pub struct QBoundOutcome {
    /// One summary per inequality family (worst instance shown).
    pub summaries: Vec<CheckRecord>,
    /// Every violating instance.
    pub violations: Vec<CheckRecord>,
    /// Instances checked per family, in the order of `summaries`.
    pub instances: Vec<usize>,
}

impl QBoundSuite {
    /// Q ≤ β₀ (undirected), Q ≤ mas (directed), Q ≤ χ (all), the η-floor
    /// bound for every `η` the distribution satisfies, and exact metrics
    /// against enumeration for small graphs.
    pub fn run(&self) -> Result<QBoundOutcome> {
        let inputs = format!("{self:?}");
        let mut undirected = Worst::new("q-le-beta0-undirected");
        let mut directed = Worst::new("q-le-mas-directed");
        let mut cover = Worst::new("q-le-chi");
        let mut floor = Worst::new("q-le-floor-bound");
        let mut oracle = Worst::new("metrics-match-enumeration");
        let mut order = Worst::new("metric-ordering");
        let mut violations = Vec::new();

        for gi in 0..self.graphs {
            let mut rng = seed::stream(self.seed, gi as u64, "lemmas");
            let k = rng.random_range(self.min_k..=self.max_k);
            let g = random_graph(k, &mut rng);
            let m = GraphMetrics::compute(&g)?;
            let graph_text = serde_json::to_string(&g.to_json())?;

            let ordered =
                m.beta0 <= m.mas && m.beta0 <= m.chi && (g.is_directed() || m.beta0 == m.mas);
            order.add(f64::from(u8::from(!ordered)), 0.0);
            if k <= self.oracle_max_k {
                let mismatches = [
                    m.beta0 != naive::independence_number(&g),
                    m.mas != naive::mas_number(&g),
                    m.chi != naive::clique_cover_number(&g),
                ]
                .iter()
                .filter(|&&b| b)
                .count();
                oracle.add(mismatches as f64, 0.0);
                if mismatches > 0 {
                    violations.push(CheckRecord::exact(
                        oracle.check,
                        &graph_text,
                        mismatches as f64,
                        0.0,
                    ));
                }
            }

            for di in 0..self.dists_per_graph {
                let pi = if di % 2 == 0 || self.etas.is_empty() {
                    random_distribution(k, &mut rng)
                } else {
                    let eta = self.etas[(di / 2) % self.etas.len()];
                    floored_distribution(k, eta, &mut rng)
                };
                let q = g.q_quantity(&pi)?;
                let inst = || format!("{graph_text} {pi:?}");
                let mut check = |w: &mut Worst, bound: f64| {
                    w.add(q, bound);
                    if q > bound + EXACT_SLACK {
                        violations.push(CheckRecord::exact(w.check, &inst(), q, bound));
                    }
                };
                if g.is_directed() {
                    check(&mut directed, m.mas as f64);
                } else {
                    check(&mut undirected, m.beta0 as f64);
                }
                check(&mut cover, m.chi as f64);
                let min = pi.iter().copied().fold(f64::INFINITY, f64::min);
                for &eta in &self.etas {
                    if min >= eta {
                        check(&mut floor, floor_q_bound(m.beta0, k, eta)?);
                    }
                }
            }
        }
        let families = [undirected, directed, cover, floor, oracle, order];
        Ok(QBoundOutcome {
            summaries: families.iter().map(|w| w.record(&inputs)).collect(),
            instances: families.iter().map(|w| w.instances).collect(),
            violations,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Prop1Suite {
    pub seed: u64,
    pub cases: usize,
    pub samples: usize,
    pub max_k: usize,
    pub max_count: u32,
}

impl Default for Prop1Suite {
    fn default() -> Self {
        Self {
            seed: 1,
            cases: 100,
            samples: 1_000_000,
            max_k: 5,
            max_count: 10,
        }
    }
}

/// Random posterior with integer counts in `1..=max_count`.
pub fn random_posterior<R: Rng + ?Sized>(k: usize, max_count: u32, rng: &mut R) -> BetaPosterior {
    let mut draw = || f64::from(rng.random_range(1..=max_count));
    let s: Vec<f64> = (0..k).map(|_| draw()).collect();
    let f: Vec<f64> = (0..k).map(|_| draw()).collect();
    BetaPosterior::from_counts(BetaPrior::default(), s, f).expect("counts ≥ 1")
}

fn posterior_text(post: &BetaPosterior) -> String {
    let mut out = String::new();
    let _ = write!(out, "S={:?} F={:?}", post.successes(), post.failures());
    out
}

impl Prop1Suite {
    /// `(αᵀΔ)² ≤ ½ Q(α) αᵀ(G h)` on random posteriors and graphs.
    pub fn run(&self) -> Result<Vec<CheckRecord>> {
        (0..self.cases)
            .map(|case| {
                let mut rng = seed::stream(self.seed, case as u64, "prop1");
                let k = rng.random_range(2..=self.max_k.max(2));
                let post = random_posterior(k, self.max_count, &mut rng);
                let g = random_graph(k, &mut rng);
                let report = check_prop1(&post, &g, self.samples, &mut rng)?;
                let inputs = format!(
                    "{} {} n={}",
                    posterior_text(&post),
                    serde_json::to_string(&g.to_json())?,
                    self.samples
                );
                Ok(CheckRecord {
                    check: "prop1-information-ratio".into(),
                    inputs_digest: digest_hex(&inputs),
                    lhs: report.lhs,
                    rhs: report.rhs,
                    stderr: report.stderr,
                    pass: report.pass,
                    inconclusive: report.inconclusive,
                })
            })
            .collect()
    }

    /// Share of inconclusive cases against the allowed budget. Exceeding it
    /// is reported as inconclusive rather than as a failure.
    pub fn summary(&self, cases: &[CheckRecord]) -> CheckRecord {
        let n = cases.len().max(1) as f64;
        let frac = cases.iter().filter(|r| r.inconclusive).count() as f64 / n;
        let over = frac > MAX_INCONCLUSIVE;
        CheckRecord {
            check: "prop1-inconclusive-fraction".into(),
            inputs_digest: digest_hex(&format!("{self:?}")),
            lhs: frac,
            rhs: MAX_INCONCLUSIVE,
            stderr: 0.0,
            pass: !over,
            inconclusive: over,
        }
    }
}

/// Largest tolerated share of inconclusive Monte Carlo cases.
pub const MAX_INCONCLUSIVE: f64 = 0.05;

#[derive(Debug, Clone)]
pub struct AlphaSuite {
    pub seed: u64,
    pub cases: usize,
    pub samples: usize,
    pub max_k: usize,
    pub max_count: u32,
}

impl Default for AlphaSuite {
    /// At 4·10⁶ samples three binomial standard errors stay under `1e-3` for
    /// every arm, so the absolute tolerance is what gets tested.
    fn default() -> Self {
        Self {
            seed: 1,
            cases: 100,
            samples: 4_000_000,
            max_k: 5,
            max_count: 10,
        }
    }
}

impl AlphaSuite {
    /// Quadrature `α` against Monte Carlo argmax frequencies. `lhs` is the
    /// largest per-arm gap and `rhs` the allowed `max(1e-3, 3σ)` at that arm.
    pub fn run(&self) -> Result<Vec<CheckRecord>> {
        (0..self.cases)
            .map(|case| {
                let mut rng = seed::stream(self.seed, case as u64, "alpha");
                let k = rng.random_range(2..=self.max_k.max(2));
                let post = random_posterior(k, self.max_count, &mut rng);
                let exact = optimal_action_dist(&post)?;
                let info = info_quantities_mc(&post, self.samples, &mut rng)?;
                let (mut lhs, mut rhs, mut se, mut pass) = (0.0, f64::INFINITY, 0.0, true);
                for i in 0..k {
                    let gap = (exact.probs()[i] - info.alpha.probs()[i]).abs();
                    let allowed = (3.0 * info.stderr.alpha[i]).max(1e-3);
                    pass &= gap <= allowed;
                    if gap - allowed > lhs - rhs {
                        (lhs, rhs, se) = (gap, allowed, info.stderr.alpha[i]);
                    }
                }
                Ok(CheckRecord {
                    check: "alpha-quadrature-vs-mc".into(),
                    inputs_digest: digest_hex(&format!(
                        "{} n={}",
                        posterior_text(&post),
                        self.samples
                    )),
                    lhs,
                    rhs,
                    stderr: se,
                    pass,
                    inconclusive: false,
                })
            })
            .collect()
    }
}

/// The four feedback settings of the regret experiments.
pub fn figure_settings() -> Vec<(&'static str, GraphSpec)> {
    vec![
        ("undirected-invariant", GraphSpec::Cliques(vec![3, 2])),
        (
            "undirected-variant",
            GraphSpec::ErdosRenyi {
                p_low: 0.0,
                p_high: 0.2,
                directed: false,
            },
        ),
        ("directed-invariant", GraphSpec::TotalOrder),
        (
            "directed-variant",
            GraphSpec::ErdosRenyi {
                p_low: 0.0,
                p_high: 0.2,
                directed: true,
            },
        ),
    ]
}

/// Shared shape of the regret experiments.
#[derive(Debug, Clone)]
pub struct RegretSuite {
    pub seed: u64,
    pub arms: usize,
    pub horizon: u64,
    pub trials: u64,
    pub workers: usize,
}

impl Default for RegretSuite {
    fn default() -> Self {
        Self {
            seed: 1,
            arms: 5,
            horizon: 1000,
            trials: 1000,
            workers: 0,
        }
    }
}

/// Curves of one policy on one setting.
#[derive(Debug, Clone)]
pub struct PolicyRun {
    pub setting: &'static str,
    pub graph: GraphSpec,
    pub policy: PolicySpec,
    pub curve: AggregateCurve,
    pub traces: Vec<RegretTrace>,
}

impl RegretSuite {
    fn config(&self, policy: PolicySpec, graph: GraphSpec) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(self.arms, self.horizon, self.trials, policy, graph)
            .with_seed(self.seed)
            .with_workers(self.workers);
        cfg.track_graph_metrics = true;
        cfg
    }

    pub fn run_policy(
        &self,
        setting: &'static str,
        graph: &GraphSpec,
        policy: PolicySpec,
    ) -> Result<PolicyRun> {
        let traces = run_trials(&self.config(policy, graph.clone()))?;
        Ok(PolicyRun {
            setting,
            graph: graph.clone(),
            policy: policy.for_horizon(self.horizon),
            curve: AggregateCurve::from_traces(&traces)?,
            traces,
        })
    }

    /// TS-N, TS-U (`ε_t = 1/t`) and UCB-N on every setting.
    pub fn figure_runs(&self) -> Result<Vec<PolicyRun>> {
        let policies = [
            PolicySpec::TsN,
            PolicySpec::TsU(ExplorationSchedule::InvT),
            PolicySpec::UcbN {
                exploration: crate::bandit::DEFAULT_UCB_EXPLORATION,
            },
        ];
        let mut runs = Vec::new();
        for (setting, graph) in figure_settings() {
            for p in policies {
                runs.push(self.run_policy(setting, &graph, p)?);
            }
        }
        Ok(runs)
    }

    /// On every setting, TS-N and TS-U finish below UCB-N by more than three
    /// combined standard errors.
    pub fn ordering_checks(&self, runs: &[PolicyRun]) -> Vec<CheckRecord> {
        let mut out = Vec::new();
        for (setting, graph) in figure_settings() {
            let find = |name: &str| {
                runs.iter()
                    .find(|r| r.setting == setting && r.policy.name() == name)
            };
            let Some(ucb) = find("ucb-n") else { continue };
            for name in ["ts-n", "ts-u"] {
                let Some(ts) = find(name) else { continue };
                let se = ts.curve.final_stderr().hypot(ucb.curve.final_stderr());
                let lhs = ts.curve.final_mean();
                let rhs = ucb.curve.final_mean();
                out.push(CheckRecord {
                    check: format!("{name}-below-ucb-n/{setting}"),
                    inputs_digest: digest_hex(&format!("{self:?} {graph}")),
                    lhs,
                    rhs,
                    stderr: se,
                    pass: lhs + 3.0 * se < rhs,
                    inconclusive: false,
                });
            }
        }
        out
    }

    /// Empirical TS-N regret against `sqrt(½ Σ_t m(G_t) H(α₁))` with the
    /// realized per-trial metric sums (β₀ undirected, mas directed), and TS-U
    /// with `ε = 1/√T` against its closed-form bound.
    pub fn bound_checks(&self, runs: &[PolicyRun]) -> Result<Vec<CheckRecord>> {
        let h0 =
            optimal_action_dist(&BetaPosterior::new(self.arms, BetaPrior::default()))?.entropy();
        let mut out = Vec::new();
        for run in runs {
            let directed = run.graph.is_directed();
            let (check, bounds) = match run.policy {
                PolicySpec::TsN => {
                    let name = if directed {
                        "ts-n-regret-le-mas-bound"
                    } else {
                        "ts-n-regret-le-beta0-bound"
                    };
                    let bounds = run
                        .traces
                        .iter()
                        .map(|t| {
                            let s = t.metric_sums.as_ref().expect("metrics tracked");
                            regret_bound_value(if directed { s.mas } else { s.beta0 } as f64, h0)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    (name, bounds)
                }
                PolicySpec::TsU(ExplorationSchedule::InvSqrtHorizon(t)) => {
                    let eps = 1.0 / (t as f64).sqrt();
                    let bounds = run
                        .traces
                        .iter()
                        .map(|tr| {
                            let s = tr.metric_sums.as_ref().expect("metrics tracked");
                            tsu_bound_value(self.arms, eps, &s.beta0_per_round(), h0)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    ("ts-u-regret-le-bound", bounds)
                }
                _ => continue,
            };
            let bound = bounds.iter().sum::<f64>() / bounds.len() as f64;
            out.push(CheckRecord::statistical(
                format!("{check}/{}", run.setting),
                &format!("{self:?} {}", run.graph),
                run.curve.final_mean(),
                bound,
                run.curve.final_stderr(),
            ));
        }
        Ok(out)
    }

    /// Runs TS-N and TS-U (`ε = 1/√T`) on every setting and checks the bounds.
    pub fn run_bounds(&self) -> Result<Vec<CheckRecord>> {
        let mut runs = Vec::new();
        for (setting, graph) in figure_settings() {
            runs.push(self.run_policy(setting, &graph, PolicySpec::TsN)?);
            runs.push(self.run_policy(
                setting,
                &graph,
                PolicySpec::TsU(ExplorationSchedule::InvSqrtHorizon(self.horizon)),
            )?);
        }
        self.bound_checks(&runs)
    }
}
