use super::optimal_action_dist;
use crate::sim::{run_trial_with, ExperimentConfig};
use crate::{Error, Result};

/// `H(α_t)` at the requested one-based rounds of one trial.
///
/// Round `T + 1` refers to the posterior after the final update. The policy
/// must keep a Beta posterior (TS-N or TS-U).
pub fn entropy_trajectory(
    cfg: &ExperimentConfig,
    trial_id: u64,
    checkpoints: &[u64],
) -> Result<Vec<(u64, f64)>> {
    cfg.validate()?;
    let prior = cfg.environment.prior();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut failure = None;
    let mut record = |t: u64, policy: &dyn crate::bandit::Policy| {
        if failure.is_some() || !checkpoints.contains(&t) {
            return;
        }
        let Some(post) = policy.posterior() else {
            failure = Some(Error::config(format!(
                "policy {} keeps no posterior",
                policy.name()
            )));
            return;
        };
        match optimal_action_dist(post) {
            Ok(alpha) => out.push((t, alpha.entropy())),
            Err(e) => failure = Some(e),
        }
    };
    let policy = cfg.policy;
    run_trial_with(
        cfg,
        trial_id,
        &|env| policy.build(env.k(), prior),
        Some(&mut record),
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}
