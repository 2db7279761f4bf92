use std::borrow::Cow;

use rand::Rng;

use super::FeedbackGraph;
use crate::{Error, Result};

/// Draws one Erdős–Rényi graph.
///
/// The edge probability `p` is itself drawn uniformly from `[p_low, p_high]`.
/// Directed graphs flip one coin per ordered pair, undirected graphs one coin
/// per unordered pair. Self-loops are always present.
pub fn sample_er_graph<R: Rng + ?Sized>(
    k: usize,
    p_low: f64,
    p_high: f64,
    directed: bool,
    rng: &mut R,
) -> Result<FeedbackGraph> {
    check_probability_range(p_low, p_high)?;
    let p = if p_low == p_high {
        p_low
    } else {
        rng.random_range(p_low..=p_high)
    };
    let mut g = FeedbackGraph::empty(k, directed)?;
    for i in 0..k {
        let first = if directed { 0 } else { i + 1 };
        for j in first..k {
            if i == j {
                continue;
            }
            if rng.random::<f64>() < p {
                g.set_arc(i, j);
                if !directed {
                    g.set_arc(j, i);
                }
            }
        }
    }
    Ok(g)
}

fn check_probability_range(p_low: f64, p_high: f64) -> Result<()> {
    if !(0.0 <= p_low && p_low <= p_high && p_high <= 1.0) {
        return Err(Error::config(format!(
            "edge probability range [{p_low}, {p_high}] is not inside [0, 1]"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphFamily {
    Fixed(FeedbackGraph),
    ErdosRenyi {
        k: usize,
        p_low: f64,
        p_high: f64,
        directed: bool,
    },
}

/// One feedback graph per round for `horizon` rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSequence {
    family: GraphFamily,
    horizon: u64,
}

impl GraphSequence {
    pub fn new(family: GraphFamily, horizon: u64) -> Result<Self> {
        if let GraphFamily::ErdosRenyi {
            k, p_low, p_high, ..
        } = family
        {
            check_probability_range(p_low, p_high)?;
            if k == 0 {
                return Err(Error::config("a feedback graph needs at least one arm"));
            }
        }
        Ok(Self { family, horizon })
    }

    pub fn family(&self) -> &GraphFamily {
        &self.family
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn k(&self) -> usize {
        match &self.family {
            GraphFamily::Fixed(g) => g.k(),
            GraphFamily::ErdosRenyi { k, .. } => *k,
        }
    }

    pub fn is_directed(&self) -> bool {
        match &self.family {
            GraphFamily::Fixed(g) => g.is_directed(),
            GraphFamily::ErdosRenyi { directed, .. } => *directed,
        }
    }

    pub fn is_time_invariant(&self) -> bool {
        matches!(self.family, GraphFamily::Fixed(_))
    }

    /// The graph for the next round. Fixed families never touch `rng`.
    pub fn next_graph<R: Rng + ?Sized>(&self, rng: &mut R) -> Cow<'_, FeedbackGraph> {
        match &self.family {
            GraphFamily::Fixed(g) => Cow::Borrowed(g),
            GraphFamily::ErdosRenyi {
                k,
                p_low,
                p_high,
                directed,
            } => Cow::Owned(
                sample_er_graph(*k, *p_low, *p_high, *directed, rng)
                    .expect("range validated at construction"),
            ),
        }
    }

    /// All `horizon` graphs in round order.
    pub fn iter<'a, R: Rng + ?Sized>(
        &'a self,
        rng: &'a mut R,
    ) -> impl Iterator<Item = Cow<'a, FeedbackGraph>> + 'a {
        (0..self.horizon).map(move |_| self.next_graph(rng))
    }
}
