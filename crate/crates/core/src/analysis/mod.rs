//! Information-theoretic quantities of a Beta posterior and the regret bounds
//! they feed.

mod bounds;
mod info;
mod optimal;
pub mod quadrature;
mod trajectory;

pub use bounds::{floor_q_bound, regret_bound_value, tsu_bound_value};
pub use info::{
    binary_entropy, check_prop1, info_quantities_mc, InfoAnalysis, InfoStdErr, Prop1Report,
    MIN_SAMPLES, SHARDS,
};
pub use optimal::{entropy, optimal_action_dist, ALPHA_TOLERANCE};
pub use trajectory::entropy_trajectory;
