//! Monte Carlo estimates of the posterior information structure.
//!
//! Draws `θ ~ Π_i Beta(S_i, F_i)`, labels each draw with its argmax `a*` and
//! keeps per-label sums of every coordinate. From those:
//!
//! - `α(a*)` is the label frequency,
//! - `M(a, a*) = E[θ_a | A* = a*]`,
//! - `Δ(i) = E[θ_{A*}] − E[θ_i]`,
//! - `h(a) = H_b(E[θ_a]) − Σ_{a*} α(a*) H_b(M(a, a*))`, the mutual information
//!   between `A*` and a Bernoulli observation of arm `a`.
//!
//! All quantities are exact functionals of the empirical draw distribution, so
//! inequalities that hold for every prior also hold for the estimates.
//! Standard errors come from a fixed number of independent shards.

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::bandit::BetaPosterior;
use crate::graph::FeedbackGraph;
use crate::seed::StreamRng;
use crate::{Error, PolicyDistribution, Result};

/// Shards per estimate; fixed so results do not depend on thread count.
pub const SHARDS: usize = 32;
pub const MIN_SAMPLES: usize = 10_000;

/// Binary entropy in nats.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |q: f64| if q <= 0.0 { 0.0 } else { -q * q.ln() };
    term(p) + term(1.0 - p)
}

#[derive(Debug, Clone)]
struct Tally {
    k: usize,
    draws: u64,
    /// draws labelled a*
    count: Vec<u64>,
    /// `sum[a * k + a*]` = Σ θ_a over draws labelled a*
    sum: Vec<f64>,
}

impl Tally {
    fn new(k: usize) -> Self {
        Self {
            k,
            draws: 0,
            count: vec![0; k],
            sum: vec![0.0; k * k],
        }
    }

    fn run(post: &BetaPosterior, draws: usize, rng: &mut StreamRng) -> Self {
        let k = post.k();
        let mut t = Self::new(k);
        let mut theta = vec![0.0; k];
        for _ in 0..draws {
            post.sample_into(rng, &mut theta);
            let star = argmax(&theta);
            t.count[star] += 1;
            for (a, &x) in theta.iter().enumerate() {
                t.sum[a * k + star] += x;
            }
        }
        t.draws = draws as u64;
        t
    }

    fn merge(&mut self, other: &Tally) {
        self.draws += other.draws;
        for (c, o) in self.count.iter_mut().zip(&other.count) {
            *c += o;
        }
        for (s, o) in self.sum.iter_mut().zip(&other.sum) {
            *s += o;
        }
    }

    fn estimate(&self) -> Estimate {
        let k = self.k;
        let n = self.draws as f64;
        let alpha: Vec<f64> = self.count.iter().map(|&c| c as f64 / n).collect();
        let means: Vec<f64> = (0..k)
            .map(|a| self.sum[a * k..(a + 1) * k].iter().sum::<f64>() / n)
            .collect();
        let cond: Vec<Option<f64>> = (0..k * k)
            .map(|idx| {
                let star = idx % k;
                (self.count[star] > 0).then(|| self.sum[idx] / self.count[star] as f64)
            })
            .collect();
        let best_mean: f64 = (0..k)
            .filter_map(|s| cond[s * k + s].map(|m| alpha[s] * m))
            .sum();
        let delta: Vec<f64> = means.iter().map(|m| (best_mean - m).max(0.0)).collect();
        let h: Vec<f64> = (0..k)
            .map(|a| {
                let conditional: f64 = (0..k)
                    .filter_map(|s| cond[a * k + s].map(|m| alpha[s] * binary_entropy(m)))
                    .sum();
                (binary_entropy(means[a]) - conditional).max(0.0)
            })
            .collect();
        Estimate {
            alpha,
            means,
            cond,
            delta,
            h,
        }
    }
}

fn argmax(values: &[f64]) -> usize {
    // continuous draws tie with probability zero
    values
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > values[best] { i } else { best })
}

#[derive(Debug, Clone, PartialEq)]
struct Estimate {
    alpha: Vec<f64>,
    means: Vec<f64>,
    #[allow(dead_code)]
    cond: Vec<Option<f64>>,
    delta: Vec<f64>,
    h: Vec<f64>,
}

impl Estimate {
    fn sides(&self, g: &FeedbackGraph) -> Result<(f64, f64)> {
        let regret: f64 = self.alpha.iter().zip(&self.delta).map(|(a, d)| a * d).sum();
        let lhs = regret * regret;
        let q = g.q_quantity(&renormalize(&self.alpha))?;
        let gh = g.out_sum(&self.h);
        let gain: f64 = self.alpha.iter().zip(&gh).map(|(a, x)| a * x).sum();
        Ok((lhs, 0.5 * q * gain))
    }
}

fn renormalize(p: &[f64]) -> Vec<f64> {
    let total: f64 = p.iter().sum();
    p.iter().map(|x| x / total).collect()
}

/// Standard errors of the Monte Carlo estimates, per arm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfoStdErr {
    pub alpha: Vec<f64>,
    pub delta: Vec<f64>,
    pub h: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfoAnalysis {
    pub alpha: PolicyDistribution,
    pub delta: Vec<f64>,
    pub h: Vec<f64>,
    /// `cond_means[a][a*] = E[θ_a | A* = a*]`; `None` when no draw had that
    /// argmax.
    pub cond_means: Vec<Vec<Option<f64>>>,
    pub means: Vec<f64>,
    pub stderr: InfoStdErr,
    pub samples: usize,
    /// Optimal-arm labels with no draws; their conditional means are undefined
    /// and left out of `h`.
    pub undefined: Vec<usize>,
    shards: Vec<Estimate>,
}

impl InfoAnalysis {
    pub fn k(&self) -> usize {
        self.delta.len()
    }

    /// `αᵀΔ`, the expected instantaneous regret of sampling from `α`.
    pub fn expected_regret(&self) -> f64 {
        dot(self.alpha.probs(), &self.delta)
    }

    pub fn q_of_alpha(&self, g: &FeedbackGraph) -> Result<f64> {
        g.q_quantity(self.alpha.probs())
    }

    /// `(αᵀΔ)²` and `½ Q(α) αᵀ(G h)`.
    pub fn prop1_sides(&self, g: &FeedbackGraph) -> Result<(f64, f64)> {
        let lhs = self.expected_regret().powi(2);
        let gh = g.out_sum(&self.h);
        let rhs = 0.5 * self.q_of_alpha(g)? * dot(self.alpha.probs(), &gh);
        Ok((lhs, rhs))
    }

    /// Shard standard errors of both sides.
    pub fn prop1_stderr(&self, g: &FeedbackGraph) -> Result<(f64, f64)> {
        let sides = self
            .shards
            .iter()
            .map(|s| s.sides(g))
            .collect::<Result<Vec<_>>>()?;
        let l: Vec<f64> = sides.iter().map(|s| s.0).collect();
        let r: Vec<f64> = sides.iter().map(|s| s.1).collect();
        Ok((shard_stderr(&l), shard_stderr(&r)))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Standard error of the full-sample estimate from per-shard estimates.
fn shard_stderr(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    if values.len() < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (var / n).sqrt()
}

/// Estimates `α`, `Δ`, `h` and `M` from `samples` posterior draws.
pub fn info_quantities_mc<R: Rng + ?Sized>(
    post: &BetaPosterior,
    samples: usize,
    rng: &mut R,
) -> Result<InfoAnalysis> {
    if samples < MIN_SAMPLES {
        return Err(Error::config(format!(
            "at least {MIN_SAMPLES} samples are required, got {samples}"
        )));
    }
    let k = post.k();
    let seeds: Vec<u64> = (0..SHARDS).map(|_| rng.random()).collect();
    let tallies: Vec<Tally> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let draws = samples / SHARDS + usize::from(i < samples % SHARDS);
            Tally::run(post, draws, &mut StreamRng::seed_from_u64(s))
        })
        .collect();
    let mut total = Tally::new(k);
    for t in &tallies {
        total.merge(t);
    }
    let est = total.estimate();
    let shards: Vec<Estimate> = tallies.iter().map(Tally::estimate).collect();

    let per_arm = |pick: fn(&Estimate) -> &Vec<f64>| -> Vec<f64> {
        (0..k)
            .map(|a| {
                let v: Vec<f64> = shards.iter().map(|s| pick(s)[a]).collect();
                shard_stderr(&v)
            })
            .collect()
    };
    let stderr = InfoStdErr {
        alpha: est
            .alpha
            .iter()
            .map(|p| (p * (1.0 - p) / samples as f64).sqrt())
            .collect(),
        delta: per_arm(|s| &s.delta),
        h: per_arm(|s| &s.h),
    };
    let undefined: Vec<usize> = (0..k).filter(|&s| total.count[s] == 0).collect();
    let cond_means = (0..k)
        .map(|a| (0..k).map(|s| est.cond[a * k + s]).collect())
        .collect();
    Ok(InfoAnalysis {
        alpha: PolicyDistribution::normalized(est.alpha.clone())?,
        delta: est.delta.clone(),
        h: est.h.clone(),
        cond_means,
        means: est.means.clone(),
        stderr,
        samples,
        undefined,
        shards,
    })
}

/// Outcome of comparing `(αᵀΔ)²` with `½ Q(α) αᵀ(G h)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop1Report {
    pub lhs: f64,
    pub rhs: f64,
    /// Combined standard error of both sides.
    pub stderr: f64,
    /// `rhs + 3·stderr − lhs`.
    pub margin: f64,
    pub pass: bool,
    /// Monte Carlo noise on the left side exceeds a tenth of the right side.
    pub inconclusive: bool,
}

pub fn check_prop1<R: Rng + ?Sized>(
    post: &BetaPosterior,
    g: &FeedbackGraph,
    samples: usize,
    rng: &mut R,
) -> Result<Prop1Report> {
    if g.k() != post.k() {
        return Err(Error::config(
            "graph and posterior disagree on the arm count",
        ));
    }
    let info = info_quantities_mc(post, samples, rng)?;
    let (lhs, rhs) = info.prop1_sides(g)?;
    let (se_l, se_r) = info.prop1_stderr(g)?;
    let stderr = se_l.hypot(se_r);
    let margin = rhs + 3.0 * stderr - lhs;
    Ok(Prop1Report {
        lhs,
        rhs,
        stderr,
        margin,
        pass: margin >= 0.0,
        inconclusive: 3.0 * se_l > 0.1 * rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::optimal_action_dist;
    use crate::bandit::BetaPrior;
    use crate::graph::{make_graph, GraphKind};
    use crate::seed;

    fn post(s: &[f64], f: &[f64]) -> BetaPosterior {
        BetaPosterior::from_counts(BetaPrior::default(), s.to_vec(), f.to_vec()).unwrap()
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.5) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn single_arm_has_nothing_to_learn() {
        let mut rng = seed::stream(0, 0, "mc");
        let info = info_quantities_mc(&post(&[3.0], &[2.0]), 20_000, &mut rng).unwrap();
        assert_eq!(info.alpha.probs(), &[1.0]);
        assert_eq!(info.delta, vec![0.0]);
        assert!(info.h[0].abs() < 1e-12);
    }

    #[test]
    fn exchangeable_arms_share_regret() {
        let mut rng = seed::stream(0, 1, "mc");
        let info = info_quantities_mc(
            &BetaPosterior::new(4, BetaPrior::default()),
            200_000,
            &mut rng,
        )
        .unwrap();
        let mean = info.delta.iter().sum::<f64>() / 4.0;
        for (d, se) in info.delta.iter().zip(&info.stderr.delta) {
            assert!((d - mean).abs() < 4.0 * se.max(1e-4), "{:?}", info.delta);
        }
        // E[max of 4 uniforms] - E[uniform] = 4/5 - 1/2
        assert!((info.expected_regret() - 0.3).abs() < 4.0 * info.stderr.delta[0]);
    }

    #[test]
    fn alpha_matches_quadrature() {
        let p = post(&[2.0, 1.0], &[1.0, 1.0]);
        let mut rng = seed::stream(0, 2, "mc");
        let info = info_quantities_mc(&p, 200_000, &mut rng).unwrap();
        let exact = optimal_action_dist(&p).unwrap();
        for ((a, e), se) in info
            .alpha
            .probs()
            .iter()
            .zip(exact.probs())
            .zip(&info.stderr.alpha)
        {
            assert!((a - e).abs() < 3.0 * se, "{a} vs {e}");
        }
    }

    #[test]
    fn information_is_bounded() {
        let p = post(&[4.0, 1.0, 6.0], &[2.0, 3.0, 1.0]);
        let mut rng = seed::stream(0, 3, "mc");
        let info = info_quantities_mc(&p, 100_000, &mut rng).unwrap();
        for &h in &info.h {
            assert!((0.0..=2f64.ln()).contains(&h));
        }
        // conditioning on optimality raises an arm's own mean
        for a in 0..3 {
            assert!(info.cond_means[a][a].unwrap() >= info.means[a]);
        }
        assert!(info.delta.iter().all(|&d| d >= 0.0));
    }

    #[test]
    fn zero_draw_labels_are_flagged() {
        let p = post(&[1e6, 1.0], &[1.0, 1e6]);
        let mut rng = seed::stream(0, 4, "mc");
        let info = info_quantities_mc(&p, 10_000, &mut rng).unwrap();
        assert_eq!(info.undefined, vec![1]);
        assert!(info.cond_means[0][1].is_none());
        assert!(info.h.iter().all(|h| h.is_finite()));
    }

    #[test]
    fn too_few_samples() {
        let mut rng = seed::stream(0, 5, "mc");
        assert!(info_quantities_mc(&post(&[1.0], &[1.0]), 100, &mut rng).is_err());
    }

    #[test]
    fn prop1_symmetric_posterior() {
        // Δ is constant across arms, αᵀΔ = E[max of 3 uniforms] - 1/2 = 1/4
        let g = make_graph(&GraphKind::Cliques(vec![2, 1]), 3, false).unwrap();
        let mut rng = seed::stream(0, 6, "mc");
        let r = check_prop1(
            &BetaPosterior::new(3, BetaPrior::default()),
            &g,
            100_000,
            &mut rng,
        )
        .unwrap();
        assert!((r.lhs - 0.0625).abs() < 0.005, "{r:?}");
        assert!(r.pass && !r.inconclusive, "{r:?}");
    }

    #[test]
    fn prop1_two_arm_empty_graph() {
        let g = make_graph(&GraphKind::Empty, 2, false).unwrap();
        let mut rng = seed::stream(0, 7, "mc");
        let r = check_prop1(&post(&[2.0, 1.0], &[1.0, 1.0]), &g, 1_000_000, &mut rng).unwrap();
        assert!(r.pass && !r.inconclusive, "{r:?}");
    }

    #[test]
    fn deterministic_given_stream() {
        let p = post(&[2.0, 5.0], &[3.0, 1.0]);
        let a = info_quantities_mc(&p, 20_000, &mut seed::stream(1, 1, "mc")).unwrap();
        let b = info_quantities_mc(&p, 20_000, &mut seed::stream(1, 1, "mc")).unwrap();
        assert_eq!(a.delta, b.delta);
        assert_eq!(a.h, b.h);
    }
}
