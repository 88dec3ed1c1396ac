use crate::graph::{condensation, Digraph};
use crate::{Error, Result};

pub const POWER_TOL: f64 = 1e-8;
pub const POWER_MAX_ITER: usize = 10_000;

/// Spectral radius of `M diag(ω)`, with `M` the adjacency indicator of `d`.
///
/// The radius of a nonnegative matrix is the largest radius among the
/// diagonal blocks of its strongly connected components. A trivial component
/// contributes 0 (or `ω_v` with a self-loop); on each larger component, power
/// iteration runs on the shifted block `A + I`, which is primitive with Perron
/// root `ρ + 1`, until the Collatz–Wielandt bounds meet within [`POWER_TOL`].
pub fn spectral_radius_diagnostic(d: &Digraph, omega: &[f64]) -> Result<f64> {
    let n = d.node_count();
    if omega.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{} weights for {n} nodes",
            omega.len()
        )));
    }
    if let Some(v) = omega.iter().position(|&w| !(w > 0.0 && w <= 1.0)) {
        return Err(Error::InvalidArgument(format!(
            "weight {} at node {v} outside (0, 1]",
            omega[v]
        )));
    }
    let cond = condensation(d);
    let mut rho = 0.0f64;
    for (k, component) in cond.components().iter().enumerate() {
        let block = match component.nodes.as_slice() {
            &[v] => {
                if d.has_self_loop(v) {
                    omega[v]
                } else {
                    0.0
                }
            }
            nodes => block_radius(d, omega, nodes, |v| cond.component_of(v) == k)?,
        };
        rho = rho.max(block);
    }
    Ok(rho)
}

fn block_radius(
    d: &Digraph,
    omega: &[f64],
    nodes: &[usize],
    inside: impl Fn(usize) -> bool,
) -> Result<f64> {
    let m = nodes.len();
    let local: std::collections::HashMap<usize, usize> =
        nodes.iter().enumerate().map(|(a, &v)| (v, a)).collect();
    let rows: Vec<Vec<(usize, f64)>> = nodes
        .iter()
        .map(|&v| {
            d.successors(v)
                .iter()
                .filter(|&&w| inside(w))
                .map(|&w| (local[&w], omega[w]))
                .collect()
        })
        .collect();

    let mut x = vec![1.0 / m as f64; m];
    let mut y = vec![0.0; m];
    let mut estimate = f64::NAN;
    for _ in 0..POWER_MAX_ITER {
        let mut lower = f64::INFINITY;
        let mut upper = 0.0f64;
        for a in 0..m {
            y[a] = x[a] + rows[a].iter().map(|&(b, w)| w * x[b]).sum::<f64>();
            let q = y[a] / x[a];
            lower = lower.min(q);
            upper = upper.max(q);
        }
        estimate = 0.5 * (upper + lower) - 1.0;
        if upper - lower <= POWER_TOL {
            return Ok(estimate);
        }
        let norm: f64 = y.iter().sum();
        for a in 0..m {
            x[a] = y[a] / norm;
        }
    }
    Err(Error::PowerIteration { estimate })
}
