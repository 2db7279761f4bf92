use crate::{Error, Result};

/// Allowed deviation of the total mass from one.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

/// A probability vector over the arms.
///
/// Used both for the sampling law of a policy and for the posterior law of the
/// optimal arm.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyDistribution {
    probs: Vec<f64>,
}

impl PolicyDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_simplex(&probs)?;
        Ok(Self { probs })
    }

    /// Rescales nonnegative weights so they sum to one.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        Ok(Self {
            probs: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn uniform(k: usize) -> Self {
        assert!(k > 0, "uniform distribution over zero arms");
        Self {
            probs: vec![1.0 / k as f64; k],
        }
    }

    pub fn point_mass(k: usize, arm: usize) -> Self {
        assert!(arm < k, "arm {arm} out of range for {k} arms");
        let mut probs = vec![0.0; k];
        probs[arm] = 1.0;
        Self { probs }
    }

    /// `(1 - eps) * self + eps / K`, the TS-U sampling law.
    pub fn mix_uniform(&self, eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::InvalidDistribution(format!(
                "mixing weight {eps} outside [0, 1]"
            )));
        }
        let k = self.probs.len() as f64;
        Ok(Self {
            probs: self
                .probs
                .iter()
                .map(|p| (1.0 - eps) * p + eps / k)
                .collect(),
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn min_prob(&self) -> f64 {
        self.probs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Shannon entropy in nats.
    pub fn entropy(&self) -> f64 {
        -self
            .probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.ln())
            .sum::<f64>()
    }
}

impl AsRef<[f64]> for PolicyDistribution {
    fn as_ref(&self) -> &[f64] {
        &self.probs
    }
}

pub(crate) fn check_simplex(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidDistribution(
            "empty probability vector".into(),
        ));
    }
    if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::InvalidDistribution(format!(
            "entry {p} is negative or not finite"
        )));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > SIMPLEX_TOLERANCE {
        return Err(Error::InvalidDistribution(format!(
            "entries sum to {total}, expected 1"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_off_simplex() {
        assert!(PolicyDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(PolicyDistribution::new(vec![1.5, -0.5]).is_err());
        assert!(PolicyDistribution::new(vec![]).is_err());
        assert!(PolicyDistribution::new(vec![0.25; 4]).is_ok());
    }

    #[test]
    fn mixing_keeps_mass() {
        let alpha = PolicyDistribution::point_mass(4, 2);
        let pi = alpha.mix_uniform(0.2).unwrap();
        assert!((pi.probs()[2] - 0.85).abs() < 1e-12);
        assert!((pi.probs()[0] - 0.05).abs() < 1e-12);
        assert!((pi.min_prob() - 0.05).abs() < 1e-12);
        assert!(alpha.mix_uniform(1.5).is_err());
    }

    #[test]
    fn entropy_endpoints() {
        assert_eq!(PolicyDistribution::point_mass(3, 0).entropy(), 0.0);
        let h = PolicyDistribution::uniform(5).entropy();
        assert!((h - 5f64.ln()).abs() < 1e-12);
    }
}
