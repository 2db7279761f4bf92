//! Closed-form regret and `Q` bounds.

use crate::{Error, Result};

fn nonnegative(name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(Error::config(format!(
            "{name} must be finite and nonnegative, got {v}"
        )));
    }
    Ok(())
}

/// `sqrt(½ · Σ_t m(G_t) · H(α₁))` where `m` is β₀ (undirected) or mas
/// (directed).
pub fn regret_bound_value(metric_sum: f64, h0: f64) -> Result<f64> {
    nonnegative("metric sum", metric_sum)?;
    nonnegative("prior entropy", h0)?;
    Ok((0.5 * metric_sum * h0).sqrt())
}

/// `4 β₀ ln(4K / (β₀ η))`, the bound on `Q(π, G)` for directed `G` when every
/// `π(i) ≥ η`.
pub fn floor_q_bound(beta0: usize, k: usize, eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta < 0.5) {
        return Err(Error::config(format!("η = {eta} must lie in (0, 0.5)")));
    }
    if beta0 == 0 || k == 0 {
        return Err(Error::config(
            "independence number and arm count must be positive",
        ));
    }
    let b = beta0 as f64;
    Ok(4.0 * b * (4.0 * k as f64 / (b * eta)).ln())
}

/// TS-U bound with a constant rate `ε`:
/// `εT + sqrt(½ · Σ_t 4β₀(G_t) ln(4K² / (β₀(G_t) ε)) · H(α₁))`,
/// with one entry of `beta0_per_round` per round.
///
/// The logarithm uses `η = ε/K`, so it is evaluated directly rather than
/// through [`floor_q_bound`], whose `η < ½` precondition does not restrict
/// the closed form.
pub fn tsu_bound_value(k: usize, eps: f64, beta0_per_round: &[usize], h0: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::config(format!("ε = {eps} outside [0, 1]")));
    }
    nonnegative("prior entropy", h0)?;
    if beta0_per_round.is_empty() {
        return Ok(0.0);
    }
    if eps == 0.0 {
        return Err(Error::config(
            "ε = 0 leaves the exploration floor η = ε/K at zero",
        ));
    }
    if k == 0 || beta0_per_round.iter().any(|&b| b == 0 || b > k) {
        return Err(Error::config("independence numbers must lie in 1..=K"));
    }
    let kf = k as f64;
    let q_sum: f64 = beta0_per_round
        .iter()
        .map(|&b| {
            let b = b as f64;
            4.0 * b * (4.0 * kf * kf / (b * eps)).ln()
        })
        .sum();
    let horizon = beta0_per_round.len() as f64;
    Ok(eps * horizon + (0.5 * q_sum * h0).sqrt())
}
