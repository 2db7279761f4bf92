//! Exact independence, acyclic-subgraph and clique-cover numbers.
//!
//! All three are exponential in the arm count, so every entry point refuses
//! graphs above a configurable size instead of approximating.

use serde::{Deserialize, Serialize};

use super::FeedbackGraph;
use crate::{Error, Result};

pub const DEFAULT_EXACT_LIMIT: usize = 20;
/// The acyclic-subgraph table has `2^k` entries.
const HARD_LIMIT: usize = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMetrics {
    pub beta0: usize,
    pub mas: usize,
    pub chi: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct MetricSolver {
    limit: usize,
}

impl Default for MetricSolver {
    fn default() -> Self {
        Self {
            limit: DEFAULT_EXACT_LIMIT,
        }
    }
}

impl MetricSolver {
    pub fn with_limit(limit: usize) -> Result<Self> {
        if limit == 0 || limit > HARD_LIMIT {
            return Err(Error::config(format!(
                "exact-search limit must be in 1..={HARD_LIMIT}"
            )));
        }
        Ok(Self { limit })
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    fn masks(&self, g: &FeedbackGraph) -> Result<Masks> {
        if g.k() > self.limit {
            return Err(Error::SizeLimit {
                k: g.k(),
                limit: self.limit,
            });
        }
        Ok(Masks::new(g))
    }

    /// Largest vertex set with no arc in either direction between members.
    pub fn independence_number(&self, g: &FeedbackGraph) -> Result<usize> {
        let m = self.masks(g)?;
        Ok(max_independent(&m.any, m.full))
    }

    /// Largest vertex set whose induced subgraph has no directed cycle.
    pub fn mas_number(&self, g: &FeedbackGraph) -> Result<usize> {
        let m = self.masks(g)?;
        Ok(max_acyclic(&m.inn, m.k))
    }

    /// Fewest cliques (mutual arcs between every pair) partitioning the arms.
    pub fn clique_cover_number(&self, g: &FeedbackGraph) -> Result<usize> {
        let m = self.masks(g)?;
        Ok(min_clique_cover(&m.mutual, m.k))
    }

    pub fn metrics(&self, g: &FeedbackGraph) -> Result<GraphMetrics> {
        let m = self.masks(g)?;
        Ok(GraphMetrics {
            beta0: max_independent(&m.any, m.full),
            mas: max_acyclic(&m.inn, m.k),
            chi: min_clique_cover(&m.mutual, m.k),
        })
    }
}

impl GraphMetrics {
    pub fn compute(g: &FeedbackGraph) -> Result<Self> {
        MetricSolver::default().metrics(g)
    }
}

pub fn independence_number(g: &FeedbackGraph) -> Result<usize> {
    MetricSolver::default().independence_number(g)
}

pub fn mas_number(g: &FeedbackGraph) -> Result<usize> {
    MetricSolver::default().mas_number(g)
}

pub fn clique_cover_number(g: &FeedbackGraph) -> Result<usize> {
    MetricSolver::default().clique_cover_number(g)
}

/// Neighbourhood bitmasks with self-loops removed.
struct Masks {
    k: usize,
    full: u32,
    /// Neighbours regardless of orientation.
    any: Vec<u32>,
    /// In-neighbours.
    inn: Vec<u32>,
    /// Vertices joined by arcs in both directions.
    mutual: Vec<u32>,
}

impl Masks {
    fn new(g: &FeedbackGraph) -> Self {
        let k = g.k();
        let mut out = vec![0u32; k];
        let mut inn = vec![0u32; k];
        for (i, j) in g.arcs() {
            out[i] |= 1 << j;
            inn[j] |= 1 << i;
        }
        Self {
            k,
            full: (1u32 << k) - 1,
            any: (0..k).map(|i| out[i] | inn[i]).collect(),
            mutual: (0..k).map(|i| out[i] & inn[i]).collect(),
            inn,
        }
    }
}

/// Branch and bound over the lowest remaining vertex: either it is excluded,
/// or it is included and its neighbours are dropped.
fn max_independent(adj: &[u32], candidates: u32) -> usize {
    fn go(adj: &[u32], cand: u32, size: usize, best: &mut usize) {
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + cand.count_ones() as usize <= *best {
            return;
        }
        // Pick the candidate with the most neighbours among the candidates;
        // isolated ones are always taken.
        let mut pick = cand.trailing_zeros() as usize;
        let mut pick_deg = 0;
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let deg = (adj[v] & cand).count_ones();
            if deg == 0 {
                return go(adj, cand & !(1 << v), size + 1, best);
            }
            if deg > pick_deg {
                pick = v;
                pick_deg = deg;
            }
        }
        let bit = 1u32 << pick;
        go(adj, cand & !bit & !adj[pick], size + 1, best);
        go(adj, cand & !bit, size, best);
    }
    let mut best = 0;
    go(adj, candidates, 0, &mut best);
    best
}

/// `acyclic[S]` iff some vertex of `S` has no in-arc from `S` and removing it
/// leaves an acyclic set.
fn max_acyclic(inn: &[u32], k: usize) -> usize {
    let n = 1usize << k;
    let mut acyclic = vec![false; n];
    acyclic[0] = true;
    let mut best = 0;
    for set in 1..n {
        let s = set as u32;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if inn[v] & s == 0 && acyclic[set & !(1 << v)] {
                acyclic[set] = true;
                best = best.max(s.count_ones() as usize);
                break;
            }
        }
    }
    best
}

/// Assigns vertices one at a time to an existing compatible clique or a new
/// one, pruning on the best cover found so far.
fn min_clique_cover(mutual: &[u32], k: usize) -> usize {
    // Vertices with no mutual arc between them need separate cliques.
    let lower = max_independent(mutual, (1u32 << k) - 1);

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&v| mutual[v].count_ones());

    struct Search<'a> {
        mutual: &'a [u32],
        order: Vec<usize>,
        cliques: Vec<u32>,
        best: usize,
        lower: usize,
    }

    impl Search<'_> {
        fn go(&mut self, idx: usize) {
            if self.best == self.lower {
                return;
            }
            if idx == self.order.len() {
                self.best = self.best.min(self.cliques.len());
                return;
            }
            let v = self.order[idx];
            for c in 0..self.cliques.len() {
                if self.cliques[c] & !self.mutual[v] == 0 {
                    self.cliques[c] |= 1 << v;
                    self.go(idx + 1);
                    self.cliques[c] &= !(1 << v);
                }
            }
            if self.cliques.len() + 1 < self.best {
                self.cliques.push(1 << v);
                self.go(idx + 1);
                self.cliques.pop();
            }
        }
    }

    let mut search = Search {
        mutual,
        order,
        cliques: Vec::with_capacity(k),
        best: k,
        lower,
    };
    search.go(0);
    search.best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_graph, GraphKind};

    fn g(kind: GraphKind, k: usize, directed: bool) -> FeedbackGraph {
        make_graph(&kind, k, directed).unwrap()
    }

    #[test]
    fn total_order_metrics() {
        let t = g(GraphKind::TotalOrder, 5, true);
        assert_eq!(
            GraphMetrics::compute(&t).unwrap(),
            GraphMetrics {
                beta0: 1,
                mas: 5,
                chi: 5
            }
        );
    }

    #[test]
    fn reference_graphs() {
        assert_eq!(
            independence_number(&g(GraphKind::Empty, 7, false)).unwrap(),
            7
        );
        let cl = g(GraphKind::Cliques(vec![3, 2]), 5, false);
        assert_eq!(independence_number(&cl).unwrap(), 2);
        assert_eq!(clique_cover_number(&cl).unwrap(), 2);
        assert_eq!(mas_number(&cl).unwrap(), 2);

        assert_eq!(mas_number(&g(GraphKind::Complete, 4, true)).unwrap(), 1);
        assert_eq!(mas_number(&g(GraphKind::Empty, 6, true)).unwrap(), 6);
        assert_eq!(
            clique_cover_number(&g(GraphKind::Complete, 5, false)).unwrap(),
            1
        );
        assert_eq!(
            clique_cover_number(&g(GraphKind::Empty, 5, false)).unwrap(),
            5
        );
    }

    #[test]
    fn single_arm() {
        let one = g(GraphKind::Empty, 1, false);
        assert_eq!(
            GraphMetrics::compute(&one).unwrap(),
            GraphMetrics {
                beta0: 1,
                mas: 1,
                chi: 1
            }
        );
    }

    #[test]
    fn directed_cycle() {
        // 1 -> 2 -> 3 -> 1
        let c = FeedbackGraph::from_arcs(3, true, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let m = GraphMetrics::compute(&c).unwrap();
        assert_eq!(m.beta0, 1);
        assert_eq!(m.mas, 2);
        assert_eq!(m.chi, 3);
    }

    #[test]
    fn size_limit_is_an_error() {
        let big = g(GraphKind::Empty, 21, false);
        assert!(matches!(
            independence_number(&big),
            Err(Error::SizeLimit { k: 21, limit: 20 })
        ));
        assert!(mas_number(&big).is_err());
        assert!(clique_cover_number(&big).is_err());
        let wide = MetricSolver::with_limit(22).unwrap();
        assert_eq!(wide.independence_number(&big).unwrap(), 21);
        assert!(MetricSolver::with_limit(40).is_err());
    }

    #[test]
    fn handles_the_limit_size() {
        let big = g(GraphKind::Cliques(vec![4, 4, 4, 4, 4]), 20, false);
        let m = GraphMetrics::compute(&big).unwrap();
        assert_eq!((m.beta0, m.mas, m.chi), (5, 5, 5));
        let t = g(GraphKind::TotalOrder, 20, true);
        let m = GraphMetrics::compute(&t).unwrap();
        assert_eq!((m.beta0, m.mas, m.chi), (1, 20, 20));
    }
}
