use std::fmt;
use std::str::FromStr;

use super::{make_graph, GraphFamily, GraphKind, GraphSequence};
use crate::{Error, Result};

/// Compact graph description used on the command line and in CSV output.
///
/// `empty | complete | cliques:<s1>,<s2>,... | total-order | er:<p_low>,<p_high>,<dir|undir>`
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Empty,
    Complete,
    Cliques(Vec<usize>),
    TotalOrder,
    ErdosRenyi {
        p_low: f64,
        p_high: f64,
        directed: bool,
    },
}

impl GraphSpec {
    pub fn is_directed(&self) -> bool {
        match self {
            GraphSpec::TotalOrder => true,
            GraphSpec::ErdosRenyi { directed, .. } => *directed,
            _ => false,
        }
    }

    pub fn family(&self, k: usize) -> Result<GraphFamily> {
        let kind = match self {
            GraphSpec::Empty => GraphKind::Empty,
            GraphSpec::Complete => GraphKind::Complete,
            GraphSpec::Cliques(sizes) => GraphKind::Cliques(sizes.clone()),
            GraphSpec::TotalOrder => GraphKind::TotalOrder,
            GraphSpec::ErdosRenyi {
                p_low,
                p_high,
                directed,
            } => {
                return Ok(GraphFamily::ErdosRenyi {
                    k,
                    p_low: *p_low,
                    p_high: *p_high,
                    directed: *directed,
                })
            }
        };
        make_graph(&kind, k, self.is_directed()).map(GraphFamily::Fixed)
    }

    pub fn sequence(&self, k: usize, horizon: u64) -> Result<GraphSequence> {
        GraphSequence::new(self.family(k)?, horizon)
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::config(format!("unrecognized graph spec `{s}`"));
        let (head, args) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, args) {
            ("empty", None) => Ok(GraphSpec::Empty),
            ("complete", None) => Ok(GraphSpec::Complete),
            ("total-order", None) => Ok(GraphSpec::TotalOrder),
            ("cliques", Some(a)) => {
                let sizes = a
                    .split(',')
                    .map(|p| p.trim().parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| bad())?;
                if sizes.is_empty() || sizes.contains(&0) {
                    return Err(bad());
                }
                Ok(GraphSpec::Cliques(sizes))
            }
            ("er", Some(a)) => {
                let parts: Vec<&str> = a.split(',').map(str::trim).collect();
                let [lo, hi, dir] = parts[..] else {
                    return Err(bad());
                };
                let p_low: f64 = lo.parse().map_err(|_| bad())?;
                let p_high: f64 = hi.parse().map_err(|_| bad())?;
                let directed = match dir {
                    "dir" => true,
                    "undir" => false,
                    _ => return Err(bad()),
                };
                if !(0.0 <= p_low && p_low <= p_high && p_high <= 1.0) {
                    return Err(Error::config(format!(
                        "edge probability range in `{s}` is not inside [0, 1]"
                    )));
                }
                Ok(GraphSpec::ErdosRenyi {
                    p_low,
                    p_high,
                    directed,
                })
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Empty => f.write_str("empty"),
            GraphSpec::Complete => f.write_str("complete"),
            GraphSpec::TotalOrder => f.write_str("total-order"),
            GraphSpec::Cliques(sizes) => {
                let parts: Vec<String> = sizes.iter().map(usize::to_string).collect();
                write!(f, "cliques:{}", parts.join(","))
            }
            GraphSpec::ErdosRenyi {
                p_low,
                p_high,
                directed,
            } => write!(
                f,
                "er:{p_low},{p_high},{}",
                if *directed { "dir" } else { "undir" }
            ),
        }
    }
}
