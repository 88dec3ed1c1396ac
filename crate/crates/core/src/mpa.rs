//! The synchronous message passing algorithm (MPA).
//!
//! For every edge `{i, j}` node `i` sends `j` two numbers, `W^{i->j}` and
//! `H^{i->j}`, both starting at 1. One step recomputes every message from
//! the messages of the previous step only:
//!
//! ```text
//! W^{i->j}(t+1) = 1 / (1 + q_i/Q_ij + sum_{k in N_i \ j} (Q_ik/Q_ij) (1 - W^{k->i}(t)))
//! H^{i->j}(t+1) = 1 + sum_{k in N_i \ j} W^{k->i}(t) H^{k->i}(t)
//! ```
//!
//! and node `l` estimates its influence as `1 + sum_{i in N_l} W^{i->l} H^{i->l}`.
//! On a tree the messages are exact and stop changing after as many steps as
//! the diameter; on other connected graphs they converge to a fixed point
//! whose influence estimates over-shoot the exact values.
//!
//! Messages are indexed by [`MessageDigraph`] ids: the message `i -> j`
//! lives at the id of the ordered pair `(j, i)`. Sums run over senders in
//! ascending order, so runs are bitwise reproducible.

use crate::electrical::{InfluenceVector, InfluenceWeights, PotentialVector};
use crate::graph::MessageDigraph;
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100_000;
/// Traces keep every iteration up to this one, then every tenth.
pub const FULL_TRACE_LIMIT: usize = 10_000;
pub const TRACE_STRIDE: usize = 10;

/// Message values at one step.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageState {
    pub w: Vec<f64>,
    pub h: Vec<f64>,
    pub t: usize,
}

impl MessageState {
    pub fn initial(len: usize) -> Self {
        Self {
            w: vec![1.0; len],
            h: vec![1.0; len],
            t: 0,
        }
    }
}

/// The update rules compiled for one graph and set of weights.
#[derive(Debug, Clone)]
pub struct Mpa {
    md: MessageDigraph,
    // q_i / Q_ij for message i -> j
    alpha: Vec<f64>,
    // Q_ik / Q_ij, aligned with md.dependencies(id)
    coupling: Vec<Vec<f64>>,
}

impl Mpa {
    pub fn new(weights: &InfluenceWeights) -> Self {
        let md = MessageDigraph::new(weights.graph());
        let mut alpha = Vec::with_capacity(md.len());
        let mut coupling = Vec::with_capacity(md.len());
        for id in 0..md.len() {
            let (j, i) = md.pair(id);
            let q_ij = weights.q(i, j);
            alpha.push(weights.field(i) / q_ij);
            coupling.push(
                md.dependencies(id)
                    .iter()
                    .map(|&dep| {
                        let (_, k) = md.pair(dep);
                        weights.q(i, k) / q_ij
                    })
                    .collect(),
            );
        }
        Self {
            md,
            alpha,
            coupling,
        }
    }

    pub fn message_digraph(&self) -> &MessageDigraph {
        &self.md
    }

    /// `q_i / Q_ij` for each message `i -> j`.
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn initial_state(&self) -> MessageState {
        MessageState::initial(self.md.len())
    }

    /// One synchronous update. Reads only `state`.
    pub fn step(&self, state: &MessageState) -> MessageState {
        let mut next = MessageState {
            w: vec![0.0; self.md.len()],
            h: vec![0.0; self.md.len()],
            t: 0,
        };
        self.step_into(state, &mut next);
        next
    }

    /// One synchronous update written into `next`, reusing its buffers.
    pub fn step_into(&self, state: &MessageState, next: &mut MessageState) {
        for id in 0..self.md.len() {
            let mut leak = 0.0;
            let mut mass = 0.0;
            for (&dep, &c) in self.md.dependencies(id).iter().zip(&self.coupling[id]) {
                leak += c * (1.0 - state.w[dep]);
                mass += state.w[dep] * state.h[dep];
            }
            next.w[id] = 1.0 / (1.0 + self.alpha[id] + leak);
            next.h[id] = 1.0 + mass;
        }
        next.t = state.t + 1;
    }

    /// `H^l(t) = 1 + sum_{i in N_l} W^{i->l}(t) H^{i->l}(t)`.
    pub fn node_influence_estimate(&self, state: &MessageState, leader: usize) -> f64 {
        let mass: f64 = self
            .md
            .incoming(leader)
            .map(|id| state.w[id] * state.h[id])
            .sum();
        1.0 + mass
    }

    pub fn estimates(&self, state: &MessageState) -> Vec<f64> {
        (0..self.md.base().node_count())
            .map(|l| self.node_influence_estimate(state, l))
            .collect()
    }
}

/// Exact values the `W` messages reach on a tree: the message `i -> j` is the
/// potential of `i` when `j` is the leader. `potentials[j]` must hold the
/// solve with leader `j`.
pub fn exact_messages(md: &MessageDigraph, potentials: &[PotentialVector]) -> Vec<f64> {
    md.pairs()
        .iter()
        .map(|&(j, i)| potentials[j].values[i])
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpaOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub trace: bool,
}

impl Default for MpaOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            trace: false,
        }
    }
}

/// Snapshots `(t, values)`; every step up to [`FULL_TRACE_LIMIT`], then every
/// [`TRACE_STRIDE`]-th, and always the last recorded step.
pub type Trace = Vec<(usize, Vec<f64>)>;

#[derive(Debug, Clone)]
pub struct MpaResult {
    /// `H^l` at the final iterate, for every node.
    pub h_estimates: InfluenceVector,
    /// `W` messages at the final iterate, indexed by message id.
    pub w_limits: Vec<f64>,
    pub final_state: MessageState,
    /// Smallest `t` with `||w(t+1) - w(t)||_1 + ||h(t+1) - h(t)||_1 <= tol`
    /// when converged; `max_iter` otherwise. The final iterate is step
    /// `iterations + 1` (resp. `max_iter`).
    pub iterations: usize,
    pub converged: bool,
    /// Last successive-difference value.
    pub residual: f64,
    pub h_trace: Option<Trace>,
    pub w_trace: Option<Trace>,
}

fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn keep_in_trace(t: usize) -> bool {
    t <= FULL_TRACE_LIMIT || t.is_multiple_of(TRACE_STRIDE)
}

/// Runs the MPA from the all-ones state until the combined 1-norm change of
/// the `W` messages and of the influence estimates drops to `tol`.
///
/// Exhausting `max_iter` is not an error: the result reports
/// `converged == false` with the last residual.
pub fn run_mpa(weights: &InfluenceWeights, options: MpaOptions) -> Result<MpaResult> {
    let g = weights.graph();
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    g.check_connected()?;
    if !(options.tol >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {} must be nonnegative",
            options.tol
        )));
    }
    let mpa = Mpa::new(weights);
    let mut current = mpa.initial_state();
    let mut next = mpa.initial_state();
    let mut h_current = mpa.estimates(&current);
    let mut h_trace = options.trace.then(Vec::new);
    let mut w_trace = options.trace.then(Vec::new);
    let mut residual = f64::INFINITY;
    let mut converged = false;
    let mut iterations = options.max_iter;

    for t in 0..options.max_iter {
        if let (Some(ht), Some(wt)) = (h_trace.as_mut(), w_trace.as_mut()) {
            if keep_in_trace(t) {
                ht.push((t, h_current.clone()));
                wt.push((t, current.w.clone()));
            }
        }
        mpa.step_into(&current, &mut next);
        let h_next = mpa.estimates(&next);
        residual = l1_distance(&next.w, &current.w) + l1_distance(&h_next, &h_current);
        std::mem::swap(&mut current, &mut next);
        h_current = h_next;
        if residual <= options.tol {
            converged = true;
            iterations = t;
            break;
        }
    }
    if !converged {
        if let (Some(ht), Some(wt)) = (h_trace.as_mut(), w_trace.as_mut()) {
            if ht.last().map(|(t, _)| *t) != Some(options.max_iter) {
                ht.push((options.max_iter, h_current.clone()));
                wt.push((options.max_iter, current.w.clone()));
            }
        }
    } else if let (Some(ht), Some(wt)) = (h_trace.as_mut(), w_trace.as_mut()) {
        // the stopping iterate itself is always recorded
        if ht.last().map(|(t, _)| *t) != Some(iterations) {
            let before = mpa.estimates(&next);
            ht.push((iterations, before));
            wt.push((iterations, next.w.clone()));
        }
    }

    Ok(MpaResult {
        h_estimates: InfluenceVector(h_current),
        w_limits: current.w.clone(),
        final_state: current,
        iterations,
        converged,
        residual,
        h_trace,
        w_trace,
    })
}

/// One row per trace entry: `(t, ||h(t) - h_final||_1, ||w(t) - w_final||_1)`,
/// with the final iterate standing in for the limit.
pub fn error_trace(result: &MpaResult) -> Result<Vec<(usize, f64, f64)>> {
    let (Some(ht), Some(wt)) = (&result.h_trace, &result.w_trace) else {
        return Err(Error::MissingTraces);
    };
    Ok(ht
        .iter()
        .zip(wt)
        .map(|((t, h), (_, w))| {
            (
                *t,
                l1_distance(h, result.h_estimates.values()),
                l1_distance(w, &result.w_limits),
            )
        })
        .collect())
}
