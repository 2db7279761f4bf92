//! Thompson Sampling for stochastic bandits whose feedback graph is latent.
//!
//! Each round the learner picks an arm, the environment draws a full vector of
//! Bernoulli rewards and a feedback graph, and the learner sees the rewards of
//! the chosen arm's out-neighbours. The graph itself is never shown to the
//! policies.
//!
//! The crate is split by concern:
//!
//! - [`graph`]: feedback graphs, the graph families used in experiments, exact
//!   independence / acyclic-subgraph / clique-cover numbers and the `Q(π, G)`
//!   quantity that links graph structure to regret.
//! - [`bandit`]: the Beta-Bernoulli environment, posterior bookkeeping and the
//!   TS-N, TS-U, UCB-N and uniform policies.
//! - [`sim`]: seeded trials, pseudo-regret accounting and worker-count
//!   independent aggregation.
//! - [`analysis`]: posterior probability of optimality, information gains,
//!   information-ratio checks and the closed-form regret bounds.
//! - [`verify`]: randomized property suites built on the above.
//! - [`cli`]: the `graphbandit` command line (simulate / metrics / verify).

// Range checks are written `!(x >= lo)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bandit;
pub mod cli;
mod dist;
mod error;
pub mod graph;
pub mod seed;
pub mod sim;
pub mod verify;

pub use dist::PolicyDistribution;
pub use error::{Error, Result};
