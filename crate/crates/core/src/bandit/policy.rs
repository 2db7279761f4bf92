//! Arm-selection rules.
//!
//! Policies see only `(arm, reward)` pairs revealed by the round's graph; the
//! graph itself never reaches them.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};

use super::{BetaPosterior, BetaPrior, ExplorationSchedule};
use crate::{Error, Result};

pub const DEFAULT_UCB_EXPLORATION: f64 = 2.0;

/// Index of a maximal entry, uniformly at random among ties.
pub fn argmax_random_ties<R: Rng + ?Sized>(values: &[f64], rng: &mut R) -> usize {
    let mut best = f64::NEG_INFINITY;
    let mut chosen = 0;
    let mut ties = 0u32;
    for (i, &v) in values.iter().enumerate() {
        if v > best {
            best = v;
            chosen = i;
            ties = 1;
        } else if v == best {
            // reservoir sampling over the tied indices
            ties += 1;
            if rng.random_range(0..ties) == 0 {
                chosen = i;
            }
        }
    }
    chosen
}

/// Thompson Sampling step: one posterior draw per arm, play the argmax.
pub fn ts_n_select<R: Rng + ?Sized>(post: &BetaPosterior, rng: &mut R) -> usize {
    let theta = post.sample(rng);
    argmax_random_ties(&theta, rng)
}

/// With probability `eps` a uniform arm, otherwise [`ts_n_select`].
pub fn ts_u_select<R: Rng + ?Sized>(post: &BetaPosterior, eps: f64, rng: &mut R) -> usize {
    if rng.random::<f64>() < eps {
        rng.random_range(0..post.k())
    } else {
        ts_n_select(post, rng)
    }
}

/// UCB over every observation of each arm, played or side-observed.
///
/// Unobserved arms come first, lowest index first. Otherwise the index is
/// `mean_i + sqrt(c ln t / n_i)`.
pub fn ucb_n_select<R: Rng + ?Sized>(
    counts: &[u64],
    sums: &[f64],
    t: u64,
    exploration: f64,
    rng: &mut R,
) -> usize {
    if let Some(i) = counts.iter().position(|&n| n == 0) {
        return i;
    }
    let log_t = (t.max(1) as f64).ln();
    let index: Vec<f64> = counts
        .iter()
        .zip(sums)
        .map(|(&n, &s)| {
            let n = n as f64;
            s / n + (exploration * log_t / n).sqrt()
        })
        .collect();
    argmax_random_ties(&index, rng)
}

pub trait Policy: Send {
    fn name(&self) -> String;

    /// Chooses the arm for the one-based round `t`.
    fn select(&mut self, t: u64, rng: &mut dyn RngCore) -> usize;

    /// Rewards revealed after playing `chosen`.
    fn observe(&mut self, chosen: usize, revealed: &[(usize, bool)]);

    fn posterior(&self) -> Option<&BetaPosterior> {
        None
    }
}

#[derive(Debug, Clone)]
pub struct TsN {
    post: BetaPosterior,
}

impl TsN {
    pub fn new(k: usize, prior: BetaPrior) -> Self {
        Self {
            post: BetaPosterior::new(k, prior),
        }
    }
}

impl Policy for TsN {
    fn name(&self) -> String {
        "ts-n".into()
    }

    fn select(&mut self, _t: u64, rng: &mut dyn RngCore) -> usize {
        ts_n_select(&self.post, rng)
    }

    fn observe(&mut self, _chosen: usize, revealed: &[(usize, bool)]) {
        for &(a, y) in revealed {
            self.post.observe(a, y);
        }
    }

    fn posterior(&self) -> Option<&BetaPosterior> {
        Some(&self.post)
    }
}

#[derive(Debug, Clone)]
pub struct TsU {
    post: BetaPosterior,
    schedule: ExplorationSchedule,
}

impl TsU {
    pub fn new(k: usize, prior: BetaPrior, schedule: ExplorationSchedule) -> Self {
        Self {
            post: BetaPosterior::new(k, prior),
            schedule,
        }
    }
}

impl Policy for TsU {
    fn name(&self) -> String {
        "ts-u".into()
    }

    fn select(&mut self, t: u64, rng: &mut dyn RngCore) -> usize {
        ts_u_select(&self.post, self.schedule.eps(t), rng)
    }

    fn observe(&mut self, _chosen: usize, revealed: &[(usize, bool)]) {
        for &(a, y) in revealed {
            self.post.observe(a, y);
        }
    }

    fn posterior(&self) -> Option<&BetaPosterior> {
        Some(&self.post)
    }
}

#[derive(Debug, Clone)]
pub struct UcbN {
    counts: Vec<u64>,
    sums: Vec<f64>,
    exploration: f64,
}

impl UcbN {
    pub fn new(k: usize, exploration: f64) -> Self {
        Self {
            counts: vec![0; k],
            sums: vec![0.0; k],
            exploration,
        }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }
}

impl Policy for UcbN {
    fn name(&self) -> String {
        "ucb-n".into()
    }

    fn select(&mut self, t: u64, rng: &mut dyn RngCore) -> usize {
        ucb_n_select(&self.counts, &self.sums, t, self.exploration, rng)
    }

    fn observe(&mut self, _chosen: usize, revealed: &[(usize, bool)]) {
        for &(a, y) in revealed {
            self.counts[a] += 1;
            self.sums[a] += f64::from(u8::from(y));
        }
    }
}

#[derive(Debug, Clone)]
pub struct UniformPolicy {
    k: usize,
}

impl UniformPolicy {
    pub fn new(k: usize) -> Self {
        Self { k }
    }
}

impl Policy for UniformPolicy {
    fn name(&self) -> String {
        "uniform".into()
    }

    fn select(&mut self, _t: u64, rng: &mut dyn RngCore) -> usize {
        rng.random_range(0..self.k)
    }

    fn observe(&mut self, _chosen: usize, _revealed: &[(usize, bool)]) {}
}

/// Policy choice as given on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicySpec {
    TsN,
    TsU(ExplorationSchedule),
    UcbN { exploration: f64 },
    Uniform,
}

impl PolicySpec {
    pub fn name(&self) -> &'static str {
        match self {
            PolicySpec::TsN => "ts-n",
            PolicySpec::TsU(_) => "ts-u",
            PolicySpec::UcbN { .. } => "ucb-n",
            PolicySpec::Uniform => "uniform",
        }
    }

    /// Binds horizon-dependent schedules.
    pub fn for_horizon(self, horizon: u64) -> Self {
        match self {
            PolicySpec::TsU(s) => PolicySpec::TsU(s.for_horizon(horizon)),
            other => other,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PolicySpec::TsU(s) => s.validate(),
            PolicySpec::UcbN { exploration } if !(*exploration >= 0.0) => Err(Error::config(
                format!("UCB exploration constant {exploration} must be nonnegative"),
            )),
            _ => Ok(()),
        }
    }

    pub fn build(&self, k: usize, prior: BetaPrior) -> Box<dyn Policy> {
        match *self {
            PolicySpec::TsN => Box::new(TsN::new(k, prior)),
            PolicySpec::TsU(schedule) => Box::new(TsU::new(k, prior, schedule)),
            PolicySpec::UcbN { exploration } => Box::new(UcbN::new(k, exploration)),
            PolicySpec::Uniform => Box::new(UniformPolicy::new(k)),
        }
    }
}

impl FromStr for PolicySpec {
    type Err = Error;

    /// Parses the policy name; TS-U starts with the `1/t` schedule.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ts-n" => Ok(PolicySpec::TsN),
            "ts-u" => Ok(PolicySpec::TsU(ExplorationSchedule::InvT)),
            "ucb-n" => Ok(PolicySpec::UcbN {
                exploration: DEFAULT_UCB_EXPLORATION,
            }),
            "uniform" => Ok(PolicySpec::Uniform),
            _ => Err(Error::config(format!("unrecognized policy `{s}`"))),
        }
    }
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
