//! Forward simulation of the leader-plus-field opinion dynamics.
//!
//! Every regular agent replaces its opinion by the weighted average
//! `x_i(t+1) = sum_j Q_ij x_j(t) + q_i x_f`; the leader never moves. The
//! iteration is slow compared with a direct solve and exists to cross-check
//! the electrical potentials.

use crate::electrical::InfluenceWeights;
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OpinionState {
    pub leader: usize,
    pub leader_opinion: f64,
    pub field_opinion: f64,
    pub opinions: Vec<f64>,
    pub t: usize,
}

impl OpinionState {
    /// Leader at 1, field at 0, every regular agent starting at 0.
    pub fn new(node_count: usize, leader: usize) -> Self {
        Self::with_initial(leader, vec![0.0; node_count])
    }

    /// Leader at 1, field at 0, regular agents at `initial` (the leader's
    /// entry is overwritten).
    pub fn with_initial(leader: usize, mut initial: Vec<f64>) -> Self {
        initial[leader] = 1.0;
        Self {
            leader,
            leader_opinion: 1.0,
            field_opinion: 0.0,
            opinions: initial,
            t: 0,
        }
    }

    pub fn step(&self, w: &InfluenceWeights) -> Self {
        let g = w.graph();
        let opinions = (0..self.opinions.len())
            .map(|i| {
                if i == self.leader {
                    return self.leader_opinion;
                }
                let social: f64 = g
                    .neighbors(i)
                    .iter()
                    .zip(w.row(i))
                    .map(|(&j, &q)| q * self.opinions[j])
                    .sum();
                social + w.field(i) * self.field_opinion
            })
            .collect();
        Self {
            opinions,
            t: self.t + 1,
            ..*self
        }
    }
}

impl OpinionState {
    fn distance_l1(&self, other: &Self) -> f64 {
        self.opinions
            .iter()
            .zip(&other.opinions)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

/// Iterates until `||x(t+1) - x(t)||_1 <= tol` and returns `x(t+1)`.
pub fn simulate_to_fixed_point(
    state: OpinionState,
    w: &InfluenceWeights,
    tol: f64,
    max_iter: usize,
) -> Result<OpinionState> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    if state.opinions.len() != w.node_count() {
        return Err(Error::InvalidArgument(
            "state and weights have different node counts".into(),
        ));
    }
    let mut current = state;
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let next = current.step(w);
        residual = next.distance_l1(&current);
        current = next;
        if residual <= tol {
            return Ok(current);
        }
    }
    Err(Error::NotConverged {
        iterations: max_iter,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::electrical::{build_weights, grounded_laplacian_solve, ConductanceNetwork};
    use crate::graph::UndirectedGraph;

    fn weights(g: UndirectedGraph) -> (ConductanceNetwork, InfluenceWeights) {
        let net = ConductanceNetwork::uniform(g, 0.04).unwrap();
        let w = build_weights(&net).unwrap();
        (net, w)
    }

    #[test]
    fn one_step_on_two_nodes() {
        let (_, w) = weights(UndirectedGraph::from_edges(2, [(0, 1)]).unwrap());
        let s = OpinionState::new(2, 0).step(&w);
        assert_eq!(s.t, 1);
        assert_eq!(s.opinions[0], 1.0);
        assert!((s.opinions[1] - 1.0 / 1.04).abs() < 1e-15);
    }

    #[test]
    fn leader_never_moves() {
        let (_, w) = weights(UndirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap());
        let mut s = OpinionState::with_initial(1, vec![0.3, 0.0, 0.9]);
        for _ in 0..20 {
            s = s.step(&w);
            assert_eq!(s.opinions[1], 1.0);
        }
    }

    #[test]
    fn fixed_point_is_stationary() {
        let (net, w) = weights(UndirectedGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap());
        let y = grounded_laplacian_solve(&net, 2).unwrap();
        let s = OpinionState::with_initial(2, y.values.clone());
        let next = s.step(&w);
        for (a, b) in s.opinions.iter().zip(&next.opinions) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn limit_matches_the_potential() {
        let (net, w) = weights(UndirectedGraph::from_edges(2, [(0, 1)]).unwrap());
        let tol = 1e-12;
        let s = simulate_to_fixed_point(OpinionState::new(2, 0), &w, tol, 1000).unwrap();
        assert!((s.opinions[1] - 1.0 / 1.04).abs() <= tol);
        let y = grounded_laplacian_solve(&net, 0).unwrap();
        assert!((s.opinions[1] - y.values[1]).abs() <= 10.0 * tol);
    }

    #[test]
    fn initial_condition_is_forgotten() {
        // successive differences bound the error only up to a factor 1/(1 - rho);
        // a strong field keeps rho(Q_RR) <= 1/2 so the 2 tol bound applies
        let g = UndirectedGraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let w = build_weights(&ConductanceNetwork::uniform(g, 2.0).unwrap()).unwrap();
        let tol = 1e-10;
        let a = simulate_to_fixed_point(OpinionState::new(5, 3), &w, tol, DEFAULT_MAX_ITER).unwrap();
        let b = simulate_to_fixed_point(OpinionState::with_initial(3, vec![1.0; 5]), &w, tol, DEFAULT_MAX_ITER)
            .unwrap();
        let gap: f64 = a.opinions.iter().zip(&b.opinions).map(|(x, y)| (x - y).abs()).sum();
        assert!(gap <= 2.0 * tol, "gap {gap}");
    }

    #[test]
    fn reports_non_convergence() {
        let (_, w) = weights(UndirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap());
        let err = simulate_to_fixed_point(OpinionState::new(3, 0), &w, 1e-14, 3).unwrap_err();
        assert!(matches!(err, Error::NotConverged { iterations: 3, .. }));
        assert!(simulate_to_fixed_point(OpinionState::new(3, 0), &w, 0.0, 3).is_err());
    }
}
