use crate::graph::{condensation, CondensationDigraph, Digraph};
use crate::mpa::Mpa;

/// Outcome of [`check_convergence_hypothesis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    /// Nodes of nontrivial strongly connected components from which no
    /// driven node is reachable, ascending.
    Violating(Vec<usize>),
}

impl Verdict {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, Verdict::Satisfied)
    }
}

/// Checks that every node in a nontrivial strongly connected component of
/// `d` reaches some node of `alpha_support` (the nodes whose `α` sequence is
/// not identically zero).
pub fn check_convergence_hypothesis(d: &Digraph, alpha_support: &[usize]) -> Verdict {
    check_with_condensation(d, &condensation(d), alpha_support)
}

pub(crate) fn check_with_condensation(
    d: &Digraph,
    cond: &CondensationDigraph,
    alpha_support: &[usize],
) -> Verdict {
    // a component reaches the support iff it contains a driven node or one
    // of its successor components does; successors always have smaller ids
    let mut driven = vec![false; cond.len()];
    for &w in alpha_support {
        driven[cond.component_of(w)] = true;
    }
    for k in 0..cond.len() {
        if !driven[k] {
            driven[k] = cond.digraph().successors(k).iter().any(|&h| driven[h]);
        }
    }
    let mut violating: Vec<usize> = cond
        .components()
        .iter()
        .enumerate()
        .filter(|&(k, c)| c.nontrivial && !driven[k])
        .flat_map(|(_, c)| c.nodes.iter().copied())
        .collect();
    debug_assert!(violating.iter().all(|&v| v < d.node_count()));
    if violating.is_empty() {
        Verdict::Satisfied
    } else {
        violating.sort_unstable();
        Verdict::Violating(violating)
    }
}

/// Message ids with `q_i / Q_ij > 0`, the driven nodes of the message digraph.
pub fn message_alpha_support(mpa: &Mpa) -> Vec<usize> {
    mpa.alpha()
        .iter()
        .enumerate()
        .filter_map(|(id, &a)| (a > 0.0).then_some(id))
        .collect()
}
