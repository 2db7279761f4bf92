//! Beta-Bernoulli bandits and the policies that learn from side observations.

mod env;
mod policy;
mod posterior;
mod schedule;

pub use env::{draw_environment, BanditEnvironment, BetaPrior};
pub use policy::{
    argmax_random_ties, ts_n_select, ts_u_select, ucb_n_select, Policy, PolicySpec, TsN, TsU, UcbN,
    UniformPolicy, DEFAULT_UCB_EXPLORATION,
};
pub use posterior::BetaPosterior;
pub use schedule::ExplorationSchedule;
