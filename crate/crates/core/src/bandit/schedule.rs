use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Exploration rate `ε_t` used by TS-U.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExplorationSchedule {
    None,
    Fixed(f64),
    /// Constant `1/√T`. Parsed with horizon 0; bind it with
    /// [`ExplorationSchedule::for_horizon`].
    InvSqrtHorizon(u64),
    /// `1/t`.
    InvT,
}

impl ExplorationSchedule {
    pub fn for_horizon(self, horizon: u64) -> Self {
        match self {
            ExplorationSchedule::InvSqrtHorizon(_) => ExplorationSchedule::InvSqrtHorizon(horizon),
            other => other,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ExplorationSchedule::Fixed(e) if !(0.0..=1.0).contains(&e) => Err(Error::config(
                format!("exploration rate {e} outside [0, 1]"),
            )),
            ExplorationSchedule::InvSqrtHorizon(0) => {
                Err(Error::config("inv-sqrt-T schedule has no horizon"))
            }
            _ => Ok(()),
        }
    }

    /// `ε_t` for the one-based round `t`.
    pub fn eps(&self, t: u64) -> f64 {
        match *self {
            ExplorationSchedule::None => 0.0,
            ExplorationSchedule::Fixed(e) => e,
            ExplorationSchedule::InvSqrtHorizon(horizon) => 1.0 / (horizon.max(1) as f64).sqrt(),
            ExplorationSchedule::InvT => 1.0 / t.max(1) as f64,
        }
    }
}

impl FromStr for ExplorationSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let schedule = match s {
            "none" => ExplorationSchedule::None,
            "inv-sqrt-T" => ExplorationSchedule::InvSqrtHorizon(0),
            "inv-t" => ExplorationSchedule::InvT,
            _ => match s.strip_prefix("fixed:").map(str::parse::<f64>) {
                Some(Ok(e)) => ExplorationSchedule::Fixed(e),
                _ => return Err(Error::config(format!("unrecognized schedule `{s}`"))),
            },
        };
        if let ExplorationSchedule::Fixed(_) = schedule {
            schedule.validate()?;
        }
        Ok(schedule)
    }
}

impl fmt::Display for ExplorationSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExplorationSchedule::None => f.write_str("none"),
            ExplorationSchedule::Fixed(e) => write!(f, "fixed:{e}"),
            ExplorationSchedule::InvSqrtHorizon(_) => f.write_str("inv-sqrt-T"),
            ExplorationSchedule::InvT => f.write_str("inv-t"),
        }
    }
}
