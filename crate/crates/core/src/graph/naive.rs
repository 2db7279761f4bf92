//! Reference implementations by plain enumeration.
//!
//! These share no code with the solvers in this crate and are only practical
//! for small graphs (the clique cover walks every set partition). They back
//! the randomized cross-checks in [`crate::verify`] and the test suites.

use super::FeedbackGraph;

pub const NAIVE_LIMIT: usize = 10;

fn members(k: usize, set: usize) -> Vec<usize> {
    (0..k).filter(|v| set >> v & 1 == 1).collect()
}

pub fn independence_number(g: &FeedbackGraph) -> usize {
    let k = g.k();
    assert!(
        k <= NAIVE_LIMIT,
        "naive enumeration limited to {NAIVE_LIMIT} arms"
    );
    (0..1usize << k)
        .map(|set| members(k, set))
        .filter(|vs| {
            vs.iter().all(|&a| {
                vs.iter()
                    .all(|&b| a == b || (!g.has_arc(a, b) && !g.has_arc(b, a)))
            })
        })
        .map(|vs| vs.len())
        .max()
        .unwrap_or(0)
}

fn induced_is_acyclic(g: &FeedbackGraph, vs: &[usize]) -> bool {
    // Kahn's algorithm on the induced subgraph.
    let mut indegree: Vec<usize> = vs
        .iter()
        .map(|&b| vs.iter().filter(|&&a| a != b && g.has_arc(a, b)).count())
        .collect();
    let mut removed = vec![false; vs.len()];
    for _ in 0..vs.len() {
        let Some(next) = (0..vs.len()).find(|&i| !removed[i] && indegree[i] == 0) else {
            return false;
        };
        removed[next] = true;
        for j in 0..vs.len() {
            if j != next && g.has_arc(vs[next], vs[j]) {
                indegree[j] -= 1;
            }
        }
    }
    true
}

pub fn mas_number(g: &FeedbackGraph) -> usize {
    let k = g.k();
    assert!(
        k <= NAIVE_LIMIT,
        "naive enumeration limited to {NAIVE_LIMIT} arms"
    );
    (0..1usize << k)
        .map(|set| members(k, set))
        .filter(|vs| induced_is_acyclic(g, vs))
        .map(|vs| vs.len())
        .max()
        .unwrap_or(0)
}

/// Minimum over all set partitions whose blocks are mutual-arc cliques.
pub fn clique_cover_number(g: &FeedbackGraph) -> usize {
    let k = g.k();
    assert!(
        k <= NAIVE_LIMIT,
        "naive enumeration limited to {NAIVE_LIMIT} arms"
    );
    // Restricted growth strings enumerate every set partition exactly once.
    fn go(g: &FeedbackGraph, labels: &mut Vec<usize>, blocks: usize, best: &mut usize) {
        let k = g.k();
        let v = labels.len();
        if v == k {
            let ok = (0..k).all(|a| {
                (0..k).all(|b| {
                    a == b || labels[a] != labels[b] || (g.has_arc(a, b) && g.has_arc(b, a))
                })
            });
            if ok {
                *best = (*best).min(blocks);
            }
            return;
        }
        for label in 0..=blocks {
            labels.push(label);
            go(g, labels, blocks.max(label + 1), best);
            labels.pop();
        }
    }
    let mut best = usize::MAX;
    go(g, &mut Vec::with_capacity(k), 0, &mut best);
    best
}
