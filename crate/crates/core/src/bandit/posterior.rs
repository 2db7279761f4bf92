use rand::Rng;
use rand_distr::{Beta, Distribution};

use super::BetaPrior;
use crate::graph::FeedbackGraph;
use crate::{Error, Result};

/// Per-arm Beta(S_i, F_i) posterior. Counts start at the prior and only grow.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaPosterior {
    prior: BetaPrior,
    s: Vec<f64>,
    f: Vec<f64>,
}

impl BetaPosterior {
    pub fn new(k: usize, prior: BetaPrior) -> Self {
        Self {
            prior,
            s: vec![prior.a; k],
            f: vec![prior.b; k],
        }
    }

    /// Posterior with explicit parameters. Each `S_i` must be at least `a` and
    /// each `F_i` at least `b`.
    pub fn from_counts(prior: BetaPrior, s: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        prior.validate()?;
        if s.is_empty() || s.len() != f.len() {
            return Err(Error::config("success and failure counts must align"));
        }
        let below = s.iter().any(|&x| !(x >= prior.a) || !x.is_finite())
            || f.iter().any(|&x| !(x >= prior.b) || !x.is_finite());
        if below {
            return Err(Error::config("posterior counts fall below the prior"));
        }
        Ok(Self { prior, s, f })
    }

    pub fn k(&self) -> usize {
        self.s.len()
    }

    pub fn prior(&self) -> BetaPrior {
        self.prior
    }

    pub fn successes(&self) -> &[f64] {
        &self.s
    }

    pub fn failures(&self) -> &[f64] {
        &self.f
    }

    /// Observations of `arm` beyond the prior.
    pub fn observations(&self, arm: usize) -> f64 {
        self.s[arm] + self.f[arm] - self.prior.a - self.prior.b
    }

    pub fn mean(&self, arm: usize) -> f64 {
        self.s[arm] / (self.s[arm] + self.f[arm])
    }

    pub fn observe(&mut self, arm: usize, reward: bool) {
        if reward {
            self.s[arm] += 1.0;
        } else {
            self.f[arm] += 1.0;
        }
    }

    /// Folds in the rewards of every out-neighbour of `chosen` in `g`.
    pub fn update(&mut self, g: &FeedbackGraph, chosen: usize, rewards: &[bool]) {
        for a in g.out_neighbors(chosen) {
            self.observe(a, rewards[a]);
        }
    }

    /// One draw `θ_i ~ Beta(S_i, F_i)` per arm.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, theta: &mut [f64]) {
        for ((t, &s), &f) in theta.iter_mut().zip(&self.s).zip(&self.f) {
            *t = Beta::new(s, f)
                .expect("posterior parameters are positive")
                .sample(rng);
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut theta = vec![0.0; self.k()];
        self.sample_into(rng, &mut theta);
        theta
    }
}
