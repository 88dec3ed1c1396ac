//! Nonlinear ω/η dynamics on a digraph `D = (V, Φ)`:
//!
//! ```text
//! ω_v(t+1) = 1 / (1 + α_v(t) + Σ_w W_vw (1 - ω_w(t)))
//! η_v(t+1) = 1 + β_v(t) + Σ_w M_vw ω_w(t) η_w(t)
//! ```
//!
//! with `M` the adjacency indicator of `D` and `W_vw = r_v M_vw s_w`. Started
//! from `ω = η = 1`, `ω` is non-increasing and convergent whenever `α` is
//! non-decreasing, `β` converges and `r_v s_v = 1`; `η` converges as well if
//! every node of a nontrivial strongly connected component reaches some node
//! with nonzero `α`. The MPA is the special case on the message digraph.

use crate::electrical::{ConductanceNetwork, InfluenceWeights};
use crate::graph::{Digraph, MessageDigraph};
use crate::{Error, Result};

const SCALING_TOL: f64 = 1e-12;

/// A vector-valued sequence `t -> x(t)`, nonnegative entrywise.
pub trait DrivingSequence: Send + Sync {
    fn fill(&self, t: usize, out: &mut [f64]);
}

/// The same vector at every step.
#[derive(Debug, Clone)]
pub struct Constant(pub Vec<f64>);

impl DrivingSequence for Constant {
    fn fill(&self, _t: usize, out: &mut [f64]) {
        out.copy_from_slice(&self.0);
    }
}

/// Explicit rows for the first steps; the last row is the declared limit and
/// is repeated forever after.
#[derive(Debug, Clone)]
pub struct Table(pub Vec<Vec<f64>>);

impl DrivingSequence for Table {
    fn fill(&self, t: usize, out: &mut [f64]) {
        let row = self.0.get(t).or(self.0.last()).expect("table has at least one row");
        out.copy_from_slice(row);
    }
}

/// Sequence given by a closure writing `x(t)` into its buffer.
pub struct FromFn<F>(pub F);

impl<F> DrivingSequence for FromFn<F>
where
    F: Fn(usize, &mut [f64]) + Send + Sync,
{
    fn fill(&self, t: usize, out: &mut [f64]) {
        (self.0)(t, out)
    }
}

pub struct GeneralizedDynamicsState {
    d: Digraph,
    pub omega: Vec<f64>,
    pub eta: Vec<f64>,
    alpha_seq: Box<dyn DrivingSequence>,
    beta_seq: Box<dyn DrivingSequence>,
    r: Vec<f64>,
    s: Vec<f64>,
    pub t: usize,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    previous_alpha: Option<Vec<f64>>,
    next_omega: Vec<f64>,
    next_eta: Vec<f64>,
}

impl std::fmt::Debug for GeneralizedDynamicsState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GeneralizedDynamicsState")
            .field("t", &self.t)
            .field("omega", &self.omega)
            .field("eta", &self.eta)
            .finish_non_exhaustive()
    }
}

impl GeneralizedDynamicsState {
    /// Initial state `ω(0) = η(0) = 1`. Fails when `r` or `s` is not
    /// positive or `r_v s_v` differs from 1 by more than `1e-12`.
    pub fn new(
        d: Digraph,
        alpha_seq: Box<dyn DrivingSequence>,
        beta_seq: Box<dyn DrivingSequence>,
        r: Vec<f64>,
        s: Vec<f64>,
    ) -> Result<Self> {
        let n = d.node_count();
        if r.len() != n || s.len() != n {
            return Err(Error::InvalidArgument(
                "scaling vectors must have one entry per node".into(),
            ));
        }
        for v in 0..n {
            if !(r[v] > 0.0 && s[v] > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "scaling vectors must be positive (node {v})"
                )));
            }
            let product = r[v] * s[v];
            if (product - 1.0).abs() > SCALING_TOL {
                return Err(Error::ScalingMismatch { node: v, product });
            }
        }
        Ok(Self {
            d,
            omega: vec![1.0; n],
            eta: vec![1.0; n],
            alpha_seq,
            beta_seq,
            r,
            s,
            t: 0,
            alpha: vec![0.0; n],
            beta: vec![0.0; n],
            previous_alpha: None,
            next_omega: vec![0.0; n],
            next_eta: vec![0.0; n],
        })
    }

    /// Unit scaling (`r = s = 1`), so `W = M`.
    pub fn unscaled(
        d: Digraph,
        alpha_seq: Box<dyn DrivingSequence>,
        beta_seq: Box<dyn DrivingSequence>,
    ) -> Result<Self> {
        let n = d.node_count();
        Self::new(d, alpha_seq, beta_seq, vec![1.0; n], vec![1.0; n])
    }

    /// The dynamics on the message digraph that reproduce the MPA:
    /// `α_ji = q_i / Q_ij`, `β = 0`, `r_ji = 1 / C_ij`, `s_ji = C_ji`.
    /// Node `v` carries `ω_v = W^{i->j}` and `η_v = H^{i->j}` for the pair
    /// `(j, i)` with id `v`.
    pub fn for_messages(net: &ConductanceNetwork, weights: &InfluenceWeights) -> Result<Self> {
        let md = MessageDigraph::new(net.graph());
        let mut alpha = Vec::with_capacity(md.len());
        let mut r = Vec::with_capacity(md.len());
        let mut s = Vec::with_capacity(md.len());
        for &(j, i) in md.pairs() {
            alpha.push(weights.field(i) / weights.q(i, j));
            r.push(1.0 / net.conductance(i, j));
            s.push(net.conductance(j, i));
        }
        let len = md.len();
        Self::new(
            md.digraph().clone(),
            Box::new(Constant(alpha)),
            Box::new(Constant(vec![0.0; len])),
            r,
            s,
        )
    }

    pub fn digraph(&self) -> &Digraph {
        &self.d
    }

    /// Synchronous update of both vectors.
    pub fn step(&mut self) -> Result<()> {
        self.alpha_seq.fill(self.t, &mut self.alpha);
        self.beta_seq.fill(self.t, &mut self.beta);
        if let Some(prev) = &self.previous_alpha {
            if let Some(node) = (0..prev.len()).find(|&v| self.alpha[v] < prev[v]) {
                return Err(Error::AlphaDecreased {
                    node,
                    step: self.t - 1,
                });
            }
        }
        for v in 0..self.d.node_count() {
            let mut leak = 0.0;
            let mut mass = 0.0;
            for &w in self.d.successors(v) {
                leak += self.r[v] * self.s[w] * (1.0 - self.omega[w]);
                mass += self.omega[w] * self.eta[w];
            }
            self.next_omega[v] = 1.0 / (1.0 + self.alpha[v] + leak);
            self.next_eta[v] = 1.0 + self.beta[v] + mass;
        }
        std::mem::swap(&mut self.omega, &mut self.next_omega);
        std::mem::swap(&mut self.eta, &mut self.next_eta);
        match &mut self.previous_alpha {
            Some(prev) => prev.copy_from_slice(&self.alpha),
            None => self.previous_alpha = Some(self.alpha.clone()),
        }
        self.t += 1;
        Ok(())
    }

    /// Steps until the 1-norm change of `(ω, η)` drops to `tol`. Returns the
    /// number of steps taken.
    pub fn run(&mut self, tol: f64, max_iter: usize) -> Result<usize> {
        let mut residual = f64::INFINITY;
        for k in 1..=max_iter {
            self.step()?;
            residual = l1(&self.omega, &self.next_omega) + l1(&self.eta, &self.next_eta);
            if residual <= tol {
                return Ok(k);
            }
        }
        Err(Error::NotConverged {
            iterations: max_iter,
            residual,
        })
    }
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
