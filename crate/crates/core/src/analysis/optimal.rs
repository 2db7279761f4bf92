use statrs::distribution::{Beta, Continuous, ContinuousCDF};

use super::quadrature;
use crate::bandit::BetaPosterior;
use crate::{Error, PolicyDistribution, Result};

/// Absolute tolerance for the optimality integrals.
pub const ALPHA_TOLERANCE: f64 = 1e-6;

/// Posterior probability that each arm is optimal,
/// `α(i) = ∫ p_i(x) Π_{j≠i} F_j(x) dx`, renormalized to sum to one.
pub fn optimal_action_dist(post: &BetaPosterior) -> Result<PolicyDistribution> {
    let k = post.k();
    if k == 1 {
        return Ok(PolicyDistribution::point_mass(1, 0));
    }
    let betas = post
        .successes()
        .iter()
        .zip(post.failures())
        .map(|(&s, &f)| Beta::new(s, f).map_err(|e| Error::Numeric(e.to_string())))
        .collect::<Result<Vec<_>>>()?;

    let integrand = |x: f64, out: &mut [f64]| {
        let mut cdf = vec![0.0; k];
        let mut zeros = 0;
        let mut nonzero_product = 1.0;
        for (c, b) in cdf.iter_mut().zip(&betas) {
            *c = b.cdf(x);
            if *c == 0.0 {
                zeros += 1;
            } else {
                nonzero_product *= *c;
            }
        }
        for (i, o) in out.iter_mut().enumerate() {
            // product over j != i, without dividing by a zero cdf
            let others = match (zeros, cdf[i] == 0.0) {
                (0, _) => nonzero_product / cdf[i],
                (1, true) => nonzero_product,
                _ => 0.0,
            };
            *o = if others == 0.0 {
                0.0
            } else {
                betas[i].pdf(x) * others
            };
        }
    };
    let raw = quadrature::integrate_between(&integrand, k, &breakpoints(post), ALPHA_TOLERANCE)?;
    let clipped: Vec<f64> = raw.iter().map(|v| v.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if !((total - 1.0).abs() <= 1e-3) {
        return Err(Error::Numeric(format!(
            "optimality probabilities integrate to {total}, expected 1"
        )));
    }
    PolicyDistribution::normalized(clipped)
}

/// A uniform grid plus points every standard deviation around each arm's
/// posterior mean, so that concentrated posteriors are always sampled.
fn breakpoints(post: &BetaPosterior) -> Vec<f64> {
    const GRID: usize = 16;
    let mut points: Vec<f64> = (0..=GRID).map(|i| i as f64 / GRID as f64).collect();
    for (&s, &f) in post.successes().iter().zip(post.failures()) {
        let n = s + f;
        let mean = s / n;
        let sd = (s * f / (n * n * (n + 1.0))).sqrt();
        for j in -8..=8 {
            points.push((mean + f64::from(j) * sd).clamp(0.0, 1.0));
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

/// Shannon entropy in nats, `0 log 0 = 0`.
pub fn entropy(dist: &PolicyDistribution) -> f64 {
    dist.entropy()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandit::BetaPrior;

    fn post(s: &[f64], f: &[f64]) -> BetaPosterior {
        BetaPosterior::from_counts(BetaPrior::default(), s.to_vec(), f.to_vec()).unwrap()
    }

    #[test]
    fn symmetric_posterior_is_uniform() {
        let a = optimal_action_dist(&BetaPosterior::new(5, BetaPrior::default())).unwrap();
        for p in a.probs() {
            assert!((p - 0.2).abs() < 1e-9);
        }
    }

    #[test]
    fn closed_form_two_arms() {
        // ∫ 2x · x dx = 2/3
        let a = optimal_action_dist(&post(&[2.0, 1.0], &[1.0, 1.0])).unwrap();
        assert!((a.probs()[0] - 2.0 / 3.0).abs() < 1e-6);
        assert!((a.probs()[1] - 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn closed_form_three_uniform_vs_beta21() {
        // arm 0 ~ Beta(2,1): ∫ 2x · x² dx = 1/2; others share the rest equally
        let a = optimal_action_dist(&post(&[2.0, 1.0, 1.0], &[1.0, 1.0, 1.0])).unwrap();
        assert!((a.probs()[0] - 0.5).abs() < 1e-6);
        assert!((a.probs()[1] - 0.25).abs() < 1e-6);
    }

    #[test]
    fn extreme_posteriors() {
        let a = optimal_action_dist(&post(&[1000.0, 1.0], &[1.0, 1000.0])).unwrap();
        assert!(a.probs()[0] > 1.0 - 1e-9);
        let b = optimal_action_dist(&post(&[1e6, 1.0], &[1.0, 1e6])).unwrap();
        assert!(b.probs()[1] < 1e-9);
    }

    #[test]
    fn always_normalized() {
        let a = optimal_action_dist(&post(&[3.0, 7.0, 2.0, 9.0], &[5.0, 2.0, 8.0, 4.0])).unwrap();
        assert!((a.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert_eq!(
            optimal_action_dist(&post(&[4.0], &[2.0])).unwrap().probs(),
            &[1.0]
        );
    }

    #[test]
    fn entropy_values() {
        assert!((entropy(&PolicyDistribution::uniform(5)) - 1.609_437_912_434_100_3).abs() < 1e-12);
        assert_eq!(entropy(&PolicyDistribution::point_mass(4, 1)), 0.0);
        let half = PolicyDistribution::new(vec![0.5, 0.5]).unwrap();
        assert!((entropy(&half) - 2f64.ln()).abs() < 1e-12);
    }
}
