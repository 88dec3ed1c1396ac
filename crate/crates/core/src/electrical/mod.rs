//! The electrical network behind the opinion dynamics.
//!
//! Regular agents are nodes of a conductance network whose extra reference
//! node `f` is the opinion field, held at potential 0. With the leader held
//! at potential 1, each node's potential equals its asymptotic opinion, and
//! the harmonic influence of the leader is one plus the sum of all other
//! potentials.

mod glue;
mod solve;

use rayon::prelude::*;

use crate::graph::UndirectedGraph;
use crate::{Error, Result};

pub use glue::{glue_leaders, split_field, GluedNetwork, SplitNetwork};
pub use solve::{dirichlet_potentials, SolverKind, DENSE_LIMIT};

/// Conductances on a social graph plus a conductance from each node to the
/// field. Edge conductances are stored once per unordered pair, aligned with
/// [`UndirectedGraph::edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConductanceNetwork {
    graph: UndirectedGraph,
    edge_conductance: Vec<f64>,
    field_conductance: Vec<f64>,
}

impl ConductanceNetwork {
    /// Validates and builds a network.
    ///
    /// Every edge conductance must be positive and finite, field
    /// conductances nonnegative, at least one field conductance positive,
    /// and every connected component of the graph must touch the field.
    pub fn new(
        graph: UndirectedGraph,
        edge_conductance: Vec<f64>,
        field_conductance: Vec<f64>,
    ) -> Result<Self> {
        if edge_conductance.len() != graph.edge_count() {
            return Err(Error::InvalidArgument(format!(
                "{} edge conductances for {} edges",
                edge_conductance.len(),
                graph.edge_count()
            )));
        }
        if field_conductance.len() != graph.node_count() {
            return Err(Error::InvalidArgument(format!(
                "{} field conductances for {} nodes",
                field_conductance.len(),
                graph.node_count()
            )));
        }
        for (&(u, v), &c) in graph.edges().iter().zip(&edge_conductance) {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::BadConductance { u, v, value: c });
            }
        }
        for (i, &c) in field_conductance.iter().enumerate() {
            if !(c.is_finite() && c >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "field conductance {c} at node {i}"
                )));
            }
        }
        if !field_conductance.iter().any(|&c| c > 0.0) {
            return Err(Error::NoFieldCoupling);
        }
        check_field_reaches_every_node(&graph, &field_conductance)?;
        Ok(Self {
            graph,
            edge_conductance,
            field_conductance,
        })
    }

    /// Unit conductance on every edge and `gamma` from every node to the field.
    pub fn uniform(graph: UndirectedGraph, gamma: f64) -> Result<Self> {
        let m = graph.edge_count();
        let n = graph.node_count();
        Self::new(graph, vec![1.0; m], vec![gamma; n])
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_conductances(&self) -> &[f64] {
        &self.edge_conductance
    }

    pub fn field_conductances(&self) -> &[f64] {
        &self.field_conductance
    }

    /// `C_ij`, zero when `{i, j}` is not an edge.
    pub fn conductance(&self, i: usize, j: usize) -> f64 {
        self.graph
            .edge_id(i, j)
            .map_or(0.0, |e| self.edge_conductance[e])
    }

    pub fn field(&self, i: usize) -> f64 {
        self.field_conductance[i]
    }

    /// Sum of all conductances at `i`, field included.
    pub fn total_conductance(&self, i: usize) -> f64 {
        let edges: f64 = self
            .graph
            .neighbors(i)
            .iter()
            .map(|&j| self.conductance(i, j))
            .sum();
        edges + self.field_conductance[i]
    }

    /// Same network with every conductance multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.graph.clone(),
            self.edge_conductance.iter().map(|c| c * factor).collect(),
            self.field_conductance.iter().map(|c| c * factor).collect(),
        )
    }
}

fn check_field_reaches_every_node(graph: &UndirectedGraph, field: &[f64]) -> Result<()> {
    let n = graph.node_count();
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        let mut members = Vec::new();
        seen[start] = true;
        while let Some(u) = stack.pop() {
            members.push(u);
            for &v in graph.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        if members.iter().all(|&u| field[u] == 0.0) {
            return Err(if members.len() == 1 {
                Error::IsolatedNode(start)
            } else {
                Error::InvalidArgument(format!(
                    "the component containing node {start} has no field coupling"
                ))
            });
        }
    }
    Ok(())
}

/// Row-normalized trust weights: `Q_ij = C_ij / sum_k C_ik` and
/// `q_i = C_if / sum_k C_ik`, the sums running over neighbours and the field.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceWeights {
    graph: UndirectedGraph,
    // q_matrix[i][p] = Q_{i, neighbors(i)[p]}
    q_matrix: Vec<Vec<f64>>,
    q_field: Vec<f64>,
}

impl InfluenceWeights {
    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    /// `Q_ij` for every neighbour `j` of `i`, aligned with `graph().neighbors(i)`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.q_matrix[i]
    }

    /// `Q_ij`, zero for non-adjacent pairs.
    pub fn q(&self, i: usize, j: usize) -> f64 {
        self.graph
            .neighbors(i)
            .binary_search(&j)
            .map_or(0.0, |p| self.q_matrix[i][p])
    }

    /// `q_i`, the weight node `i` gives to the field.
    pub fn field(&self, i: usize) -> f64 {
        self.q_field[i]
    }

    pub fn field_weights(&self) -> &[f64] {
        &self.q_field
    }
}

pub fn build_weights(net: &ConductanceNetwork) -> Result<InfluenceWeights> {
    let g = net.graph();
    let mut q_matrix = Vec::with_capacity(g.node_count());
    let mut q_field = Vec::with_capacity(g.node_count());
    for i in 0..g.node_count() {
        let total = net.total_conductance(i);
        if total <= 0.0 {
            return Err(Error::IsolatedNode(i));
        }
        q_matrix.push(
            g.neighbors(i)
                .iter()
                .map(|&j| net.conductance(i, j) / total)
                .collect(),
        );
        q_field.push(net.field(i) / total);
    }
    Ok(InfluenceWeights {
        graph: g.clone(),
        q_matrix,
        q_field,
    })
}

/// Node potentials with the leader at 1 and the field at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialVector {
    pub leader: usize,
    pub values: Vec<f64>,
}

impl PotentialVector {
    /// `1 + sum of potentials of the regular nodes`.
    pub fn influence(&self) -> f64 {
        1.0 + self
            .values
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.leader)
            .map(|(_, y)| y)
            .sum::<f64>()
    }
}

/// Harmonic influence `H(l)` for every node `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceVector(pub Vec<f64>);

impl InfluenceVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::ops::Index<usize> for InfluenceVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Solves `L_RR y_R = C_{R,l}` with `R` every node except the leader.
pub fn grounded_laplacian_solve(net: &ConductanceNetwork, leader: usize) -> Result<PotentialVector> {
    grounded_laplacian_solve_with(net, leader, SolverKind::Auto)
}

pub fn grounded_laplacian_solve_with(
    net: &ConductanceNetwork,
    leader: usize,
    solver: SolverKind,
) -> Result<PotentialVector> {
    let n = net.node_count();
    if leader >= n {
        return Err(Error::NodeOutOfRange {
            node: leader,
            node_count: n,
        });
    }
    let values = solve::grounded(net, leader, solver)?;
    Ok(PotentialVector { leader, values })
}

/// Potentials for every choice of leader, one independent solve each.
pub fn all_potentials(net: &ConductanceNetwork) -> Result<Vec<PotentialVector>> {
    (0..net.node_count())
        .into_par_iter()
        .map(|leader| grounded_laplacian_solve(net, leader))
        .collect()
}

pub fn harmonic_influence_exact(net: &ConductanceNetwork) -> Result<InfluenceVector> {
    let values = (0..net.node_count())
        .into_par_iter()
        .map(|leader| grounded_laplacian_solve(net, leader).map(|y| y.influence()))
        .collect::<Result<Vec<_>>>()?;
    Ok(InfluenceVector(values))
}
