use nalgebra::{DMatrix, DVector};

use super::ConductanceNetwork;
use crate::graph::UndirectedGraph;
use crate::{Error, Result};

/// Systems with at most this many unknowns use a dense Cholesky factorization
/// under [`SolverKind::Auto`].
pub const DENSE_LIMIT: usize = 2000;

const RELATIVE_RESIDUAL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverKind {
    /// Dense up to [`DENSE_LIMIT`] unknowns, conjugate gradient above.
    #[default]
    Auto,
    Dense,
    /// Jacobi-preconditioned conjugate gradient.
    ConjugateGradient,
}

/// A symmetric Laplacian block: `diag[u] x_u - sum_{(v, c) in off[u]} c x_v = rhs[u]`.
struct LaplacianSystem {
    diag: Vec<f64>,
    off: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
}

impl LaplacianSystem {
    fn len(&self) -> usize {
        self.diag.len()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (u, o) in out.iter_mut().enumerate() {
            let coupled: f64 = self.off[u].iter().map(|&(v, c)| c * x[v]).sum();
            *o = self.diag[u] * x[u] - coupled;
        }
    }

    fn residual_l1(&self, x: &[f64]) -> f64 {
        let mut ax = vec![0.0; self.len()];
        self.apply(x, &mut ax);
        ax.iter().zip(&self.rhs).map(|(a, b)| (a - b).abs()).sum()
    }

    fn solve(&self, kind: SolverKind) -> Result<Vec<f64>> {
        let m = self.len();
        if m == 0 {
            return Ok(Vec::new());
        }
        let bound = RELATIVE_RESIDUAL * self.rhs.iter().map(|b| b.abs()).sum::<f64>();
        let dense = match kind {
            SolverKind::Auto => m <= DENSE_LIMIT,
            SolverKind::Dense => true,
            SolverKind::ConjugateGradient => false,
        };
        let x = if dense {
            self.solve_dense()?
        } else {
            self.solve_cg(bound)?
        };
        let residual = self.residual_l1(&x);
        if residual > bound {
            return Err(Error::ResidualTooLarge { residual, bound });
        }
        Ok(x)
    }

    fn solve_dense(&self) -> Result<Vec<f64>> {
        let m = self.len();
        let mut a = DMatrix::<f64>::zeros(m, m);
        for u in 0..m {
            a[(u, u)] = self.diag[u];
            for &(v, c) in &self.off[u] {
                a[(u, v)] -= c;
            }
        }
        let chol = a.cholesky().ok_or(Error::SingularSystem)?;
        let x = chol.solve(&DVector::from_column_slice(&self.rhs));
        Ok(x.iter().copied().collect())
    }

    fn solve_cg(&self, bound: f64) -> Result<Vec<f64>> {
        let m = self.len();
        if self.diag.iter().any(|&d| d <= 0.0) {
            return Err(Error::SingularSystem);
        }
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let mut x = vec![0.0; m];
        let mut r = self.rhs.clone();
        let mut z: Vec<f64> = r.iter().zip(&self.diag).map(|(r, d)| r / d).collect();
        let mut p = z.clone();
        let mut ap = vec![0.0; m];
        let mut rz = dot(&r, &z);
        for _ in 0..10 * m + 100 {
            if r.iter().map(|v| v.abs()).sum::<f64>() <= 0.5 * bound {
                return Ok(x);
            }
            self.apply(&p, &mut ap);
            let pap = dot(&p, &ap);
            if pap <= 0.0 {
                return Err(Error::SingularSystem);
            }
            let step = rz / pap;
            for u in 0..m {
                x[u] += step * p[u];
                r[u] -= step * ap[u];
                z[u] = r[u] / self.diag[u];
            }
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            for u in 0..m {
                p[u] = z[u] + beta * p[u];
            }
        }
        // recurrence residual drifts from the true one; let the caller's check decide
        Ok(x)
    }
}

pub(super) fn grounded(net: &ConductanceNetwork, leader: usize, kind: SolverKind) -> Result<Vec<f64>> {
    let g = net.graph();
    let n = g.node_count();
    let unknown = |i: usize| if i < leader { i } else { i - 1 };
    let mut system = LaplacianSystem {
        diag: Vec::with_capacity(n - 1),
        off: Vec::with_capacity(n - 1),
        rhs: Vec::with_capacity(n - 1),
    };
    for i in (0..n).filter(|&i| i != leader) {
        let mut diag = net.field(i);
        let mut rhs = 0.0;
        let mut off = Vec::with_capacity(g.degree(i));
        for &j in g.neighbors(i) {
            let c = net.conductance(i, j);
            diag += c;
            if j == leader {
                rhs += c;
            } else {
                off.push((unknown(j), c));
            }
        }
        system.diag.push(diag);
        system.off.push(off);
        system.rhs.push(rhs);
    }
    let y = system.solve(kind)?;
    let mut values = Vec::with_capacity(n);
    values.extend_from_slice(&y[..leader]);
    values.push(1.0);
    values.extend_from_slice(&y[leader..]);
    Ok(values)
}

/// Potentials of a conductance network with prescribed values at `fixed`
/// nodes (no field node). Returns a value for every node.
pub fn dirichlet_potentials(
    graph: &UndirectedGraph,
    conductances: &[f64],
    fixed: &[(usize, f64)],
) -> Result<Vec<f64>> {
    let n = graph.node_count();
    if conductances.len() != graph.edge_count() {
        return Err(Error::InvalidArgument(
            "one conductance per edge is required".into(),
        ));
    }
    let mut value = vec![None; n];
    for &(node, v) in fixed {
        if node >= n {
            return Err(Error::NodeOutOfRange {
                node,
                node_count: n,
            });
        }
        value[node] = Some(v);
    }
    let mut index = vec![usize::MAX; n];
    let free: Vec<usize> = (0..n).filter(|&i| value[i].is_none()).collect();
    for (u, &i) in free.iter().enumerate() {
        index[i] = u;
    }
    let mut system = LaplacianSystem {
        diag: Vec::with_capacity(free.len()),
        off: Vec::with_capacity(free.len()),
        rhs: Vec::with_capacity(free.len()),
    };
    for &i in &free {
        let mut diag = 0.0;
        let mut rhs = 0.0;
        let mut off = Vec::new();
        for &j in graph.neighbors(i) {
            let c = conductances[graph.edge_id(i, j).expect("neighbour implies edge")];
            diag += c;
            match value[j] {
                Some(v) => rhs += c * v,
                None => off.push((index[j], c)),
            }
        }
        system.diag.push(diag);
        system.off.push(off);
        system.rhs.push(rhs);
    }
    let y = system.solve(SolverKind::Auto)?;
    Ok((0..n)
        .map(|i| value[i].unwrap_or_else(|| y[index[i]]))
        .collect())
}
