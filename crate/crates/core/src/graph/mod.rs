//! Feedback graphs.
//!
//! Arms are indexed from zero in the API. The JSON literal format and the
//! command line use one-based indices.

mod generate;
mod metrics;
pub mod naive;
mod spec;

pub use generate::{sample_er_graph, GraphFamily, GraphSequence};
pub use metrics::{
    clique_cover_number, independence_number, mas_number, GraphMetrics, MetricSolver,
    DEFAULT_EXACT_LIMIT,
};
pub use spec::GraphSpec;

use serde::{Deserialize, Serialize};

use crate::dist::check_simplex;
use crate::{Error, Result};

/// Adjacency structure of one round's observation system.
///
/// Entry `(i, j)` is true iff playing `i` reveals the reward of `j`. Self-loops
/// are always present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedbackGraph {
    k: usize,
    adjacency: Vec<bool>,
    directed: bool,
}

impl FeedbackGraph {
    /// Graph with self-loops only.
    pub fn empty(k: usize, directed: bool) -> Result<Self> {
        if k == 0 {
            return Err(Error::config("a feedback graph needs at least one arm"));
        }
        let mut adjacency = vec![false; k * k];
        for i in 0..k {
            adjacency[i * k + i] = true;
        }
        Ok(Self {
            k,
            adjacency,
            directed,
        })
    }

    /// Builds a graph from zero-based arcs. Undirected graphs get both
    /// orientations of every listed pair.
    pub fn from_arcs(k: usize, directed: bool, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(k, directed)?;
        for &(i, j) in arcs {
            if i >= k || j >= k {
                return Err(Error::config(format!(
                    "arc ({i}, {j}) out of range for {k} arms"
                )));
            }
            g.set_arc(i, j);
            if !directed {
                g.set_arc(j, i);
            }
        }
        Ok(g)
    }

    /// Builds a graph from a row-major boolean matrix. Diagonal entries are
    /// forced to true.
    pub fn from_matrix(k: usize, directed: bool, matrix: Vec<bool>) -> Result<Self> {
        if k == 0 || matrix.len() != k * k {
            return Err(Error::config(format!(
                "adjacency matrix of length {} does not match {k} arms",
                matrix.len()
            )));
        }
        let mut g = Self {
            k,
            adjacency: matrix,
            directed,
        };
        for i in 0..k {
            g.adjacency[i * k + i] = true;
        }
        if !directed && !g.is_symmetric() {
            return Err(Error::config("undirected graph with asymmetric adjacency"));
        }
        Ok(g)
    }

    pub(crate) fn set_arc(&mut self, i: usize, j: usize) {
        self.adjacency[i * self.k + j] = true;
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.adjacency[from * self.k + to]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.k).all(|i| (0..i).all(|j| self.has_arc(i, j) == self.has_arc(j, i)))
    }

    /// Arms revealed when `arm` is played, itself included.
    pub fn out_neighbors(&self, arm: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.adjacency[arm * self.k..(arm + 1) * self.k];
        row.iter()
            .enumerate()
            .filter_map(|(j, &on)| on.then_some(j))
    }

    pub fn out_degree(&self, arm: usize) -> usize {
        self.out_neighbors(arm).count()
    }

    /// Off-diagonal arcs, each ordered pair counted once.
    pub fn arc_count(&self) -> usize {
        self.adjacency.iter().filter(|&&a| a).count() - self.k
    }

    /// Zero-based off-diagonal arcs in row-major order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.k)
            .flat_map(|i| (0..self.k).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && self.has_arc(i, j))
            .collect()
    }

    /// `Σ_i π(i) / Σ_{j → i} π(j)`, with self-loops in every denominator.
    ///
    /// Terms with `π(i) = 0` contribute zero.
    pub fn q_quantity(&self, pi: &[f64]) -> Result<f64> {
        if pi.len() != self.k {
            return Err(Error::InvalidDistribution(format!(
                "distribution over {} arms for a graph with {}",
                pi.len(),
                self.k
            )));
        }
        check_simplex(pi)?;
        let mut q = 0.0;
        for i in 0..self.k {
            if pi[i] == 0.0 {
                continue;
            }
            let in_mass: f64 = (0..self.k)
                .filter(|&j| self.has_arc(j, i))
                .map(|j| pi[j])
                .sum();
            q += pi[i] / in_mass;
        }
        Ok(q)
    }

    /// `Σ_{j: i → j} v(j)` for every `i`, i.e. the product `G v`.
    pub fn out_sum(&self, values: &[f64]) -> Vec<f64> {
        (0..self.k)
            .map(|i| self.out_neighbors(i).map(|j| values[j]).sum())
            .collect()
    }

    pub fn to_json(&self) -> GraphLiteral {
        GraphLiteral {
            k: self.k,
            directed: self.directed,
            arcs: self
                .arcs()
                .into_iter()
                .filter(|&(i, j)| self.directed || i < j)
                .map(|(i, j)| [i + 1, j + 1])
                .collect(),
        }
    }
}

/// Serialized graph: `{"k": 3, "directed": true, "arcs": [[1, 2]]}`.
///
/// Arc indices are one-based and self-loops are implied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphLiteral {
    pub k: usize,
    pub directed: bool,
    pub arcs: Vec<[usize; 2]>,
}

impl TryFrom<GraphLiteral> for FeedbackGraph {
    type Error = Error;

    fn try_from(lit: GraphLiteral) -> Result<Self> {
        let mut arcs = Vec::with_capacity(lit.arcs.len());
        for [i, j] in lit.arcs {
            if i == 0 || j == 0 {
                return Err(Error::config("graph literal arcs are one-based"));
            }
            arcs.push((i - 1, j - 1));
        }
        FeedbackGraph::from_arcs(lit.k, lit.directed, &arcs)
    }
}

/// Deterministic graph shapes used by the experiments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphKind {
    Empty,
    Complete,
    /// Disjoint union of complete subgraphs with the given sizes.
    Cliques(Vec<usize>),
    /// Arc `(i, j)` iff `i ≤ j`.
    TotalOrder,
}

pub fn make_graph(kind: &GraphKind, k: usize, directed: bool) -> Result<FeedbackGraph> {
    let mut g = FeedbackGraph::empty(k, directed)?;
    match kind {
        GraphKind::Empty => {}
        GraphKind::Complete => g.adjacency.fill(true),
        GraphKind::Cliques(sizes) => {
            if sizes.contains(&0) || sizes.iter().sum::<usize>() != k {
                return Err(Error::config(format!(
                    "clique sizes {sizes:?} do not partition {k} arms"
                )));
            }
            let mut start = 0;
            for &size in sizes {
                for i in start..start + size {
                    for j in start..start + size {
                        g.set_arc(i, j);
                    }
                }
                start += size;
            }
        }
        GraphKind::TotalOrder => {
            if !directed {
                return Err(Error::config("the total-order graph is directed"));
            }
            for i in 0..k {
                for j in i..k {
                    g.set_arc(i, j);
                }
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_order_arcs() {
        let g = make_graph(&GraphKind::TotalOrder, 5, true).unwrap();
        assert!(g.has_arc(0, 4));
        assert!(!g.has_arc(4, 0));
        assert!(make_graph(&GraphKind::TotalOrder, 5, false).is_err());
    }

    #[test]
    fn empty_is_identity() {
        let g = make_graph(&GraphKind::Empty, 3, false).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g.has_arc(i, j), i == j);
            }
        }
    }

    #[test]
    fn cliques_are_disjoint() {
        let g = make_graph(&GraphKind::Cliques(vec![3, 2]), 5, false).unwrap();
        let block = |i: usize| usize::from(i >= 3);
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(g.has_arc(i, j), block(i) == block(j), "({i},{j})");
            }
        }
        assert!(g.is_symmetric());
        assert!(make_graph(&GraphKind::Cliques(vec![3, 3]), 5, false).is_err());
        assert!(make_graph(&GraphKind::Cliques(vec![5, 0]), 5, false).is_err());
    }

    #[test]
    fn zero_arms_rejected() {
        assert!(make_graph(&GraphKind::Empty, 0, false).is_err());
    }

    #[test]
    fn q_on_reference_graphs() {
        let uniform = vec![0.2; 5];
        let empty = make_graph(&GraphKind::Empty, 5, false).unwrap();
        assert!((empty.q_quantity(&uniform).unwrap() - 5.0).abs() < 1e-12);

        let complete = make_graph(&GraphKind::Complete, 5, false).unwrap();
        let skewed = [0.1, 0.4, 0.05, 0.3, 0.15];
        assert!((complete.q_quantity(&skewed).unwrap() - 1.0).abs() < 1e-12);

        // 0.5/0.5 + 0.5/(0.5 + 0.5)
        let g = FeedbackGraph::from_arcs(2, true, &[(0, 1)]).unwrap();
        assert!((g.q_quantity(&[0.5, 0.5]).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn q_zero_mass_terms_vanish() {
        let g = make_graph(&GraphKind::Empty, 3, false).unwrap();
        assert!((g.q_quantity(&[0.0, 0.5, 0.5]).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn q_rejects_bad_input() {
        let g = make_graph(&GraphKind::Empty, 3, false).unwrap();
        assert!(matches!(
            g.q_quantity(&[0.5, 0.5, 0.5]),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(g.q_quantity(&[0.5, 0.5]).is_err());
    }

    #[test]
    fn json_literal_round_trip() {
        let g = make_graph(&GraphKind::TotalOrder, 3, true).unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(
            text,
            r#"{"k":3,"directed":true,"arcs":[[1,2],[1,3],[2,3]]}"#
        );
        let lit: GraphLiteral = serde_json::from_str(&text).unwrap();
        assert_eq!(FeedbackGraph::try_from(lit).unwrap(), g);

        let u = make_graph(&GraphKind::Cliques(vec![2, 1]), 3, false).unwrap();
        let back = FeedbackGraph::try_from(u.to_json()).unwrap();
        assert_eq!(back, u);
    }

    #[test]
    fn literal_rejects_zero_index() {
        let lit = GraphLiteral {
            k: 2,
            directed: true,
            arcs: vec![[0, 1]],
        };
        assert!(FeedbackGraph::try_from(lit).is_err());
    }
}
