use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Beta(a, b) prior shared by every arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaPrior {
    pub a: f64,
    pub b: f64,
}

impl Default for BetaPrior {
    fn default() -> Self {
        Self { a: 1.0, b: 1.0 }
    }
}

impl BetaPrior {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let prior = Self { a, b };
        prior.validate()?;
        Ok(prior)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.b.is_finite() && self.a > 0.0 && self.b > 0.0) {
            return Err(Error::config(format!(
                "Beta prior parameters ({}, {}) must be positive and finite",
                self.a, self.b
            )));
        }
        Ok(())
    }
}

/// Bernoulli arms with means `μ`, one realization of the prior.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditEnvironment {
    means: Vec<f64>,
    prior: BetaPrior,
    best: usize,
}

impl BanditEnvironment {
    /// Fixes the arm means directly instead of drawing them.
    pub fn from_means(means: Vec<f64>, prior: BetaPrior) -> Result<Self> {
        prior.validate()?;
        if means.is_empty() {
            return Err(Error::config("an environment needs at least one arm"));
        }
        if let Some(m) = means.iter().find(|m| !(0.0..=1.0).contains(*m)) {
            return Err(Error::config(format!("arm mean {m} outside [0, 1]")));
        }
        let best = means
            .iter()
            .enumerate()
            .fold(0, |best, (i, &m)| if m > means[best] { i } else { best });
        Ok(Self { means, prior, best })
    }

    pub fn k(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn prior(&self) -> BetaPrior {
        self.prior
    }

    /// Optimal arm, lowest index on ties.
    pub fn best_arm(&self) -> usize {
        self.best
    }

    pub fn best_mean(&self) -> f64 {
        self.means[self.best]
    }

    /// Expected per-round regret of playing `arm`.
    pub fn gap(&self, arm: usize) -> f64 {
        self.best_mean() - self.means[arm]
    }

    /// Realizes the full reward vector `Y_t` into `out`.
    pub fn realize<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [bool]) {
        for (y, &mu) in out.iter_mut().zip(&self.means) {
            *y = rng.random::<f64>() < mu;
        }
    }
}

/// Draws every arm mean independently from `prior`.
pub fn draw_environment<R: Rng + ?Sized>(
    k: usize,
    prior: BetaPrior,
    rng: &mut R,
) -> Result<BanditEnvironment> {
    prior.validate()?;
    let beta = Beta::new(prior.a, prior.b).map_err(|e| Error::config(e.to_string()))?;
    let means = (0..k).map(|_| beta.sample(rng)).collect();
    BanditEnvironment::from_means(means, prior)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    #[test]
    fn best_arm_lowest_index_on_ties() {
        let env = BanditEnvironment::from_means(vec![0.9, 0.5], BetaPrior::default()).unwrap();
        assert_eq!(env.best_arm(), 0);
        let tie = BanditEnvironment::from_means(vec![0.2, 0.7, 0.7], BetaPrior::default()).unwrap();
        assert_eq!(tie.best_arm(), 1);
        assert!((tie.gap(0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_arm_is_optimal() {
        let mut rng = seed::stream(0, 0, "env");
        let env = draw_environment(1, BetaPrior::default(), &mut rng).unwrap();
        assert_eq!(env.best_arm(), 0);
        assert_eq!(env.gap(0), 0.0);
    }

    #[test]
    fn rejects_invalid_input() {
        assert!(BanditEnvironment::from_means(vec![1.2], BetaPrior::default()).is_err());
        assert!(BanditEnvironment::from_means(vec![], BetaPrior::default()).is_err());
        assert!(BetaPrior::new(0.0, 1.0).is_err());
        assert!(BetaPrior::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn uniform_prior_mean() {
        // mean of U[0,1] is 1/2 with variance 1/12
        let mut rng = seed::stream(11, 0, "env");
        let n = 100_000;
        let mut total = 0.0;
        for _ in 0..n / 5 {
            let env = draw_environment(5, BetaPrior::default(), &mut rng).unwrap();
            total += env.means().iter().sum::<f64>();
        }
        let mean = total / n as f64;
        let sigma = (1.0f64 / 12.0 / n as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma, "{mean}");
    }

    #[test]
    fn realization_frequency() {
        let env = BanditEnvironment::from_means(vec![0.0, 0.3, 1.0], BetaPrior::default()).unwrap();
        let mut rng = seed::stream(2, 0, "rewards");
        let mut y = [false; 3];
        let mut hits = [0usize; 3];
        let n = 20_000;
        for _ in 0..n {
            env.realize(&mut rng, &mut y);
            for (h, &v) in hits.iter_mut().zip(&y) {
                *h += usize::from(v);
            }
        }
        assert_eq!(hits[0], 0);
        assert_eq!(hits[2], n);
        let p = hits[1] as f64 / n as f64;
        assert!((p - 0.3).abs() < 3.0 * (0.21f64 / n as f64).sqrt());
    }
}
