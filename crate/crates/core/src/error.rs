use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("node {node} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("graph is not connected: node {from} cannot reach node {to}")]
    Disconnected { from: usize, to: usize },

    #[error("graph has no edges")]
    NoEdges,

    #[error("node {0} has zero total conductance")]
    IsolatedNode(usize),

    #[error("field conductance is zero at every node")]
    NoFieldCoupling,

    #[error("non-positive conductance {value} on edge {{{u}, {v}}}")]
    BadConductance { u: usize, v: usize, value: f64 },

    #[error("node {0} is not a leaf")]
    NotALeaf(usize),

    #[error("grounded Laplacian is singular or not positive definite")]
    SingularSystem,

    #[error("linear solve residual {residual:e} exceeds bound {bound:e}")]
    ResidualTooLarge { residual: f64, bound: f64 },

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("power iteration did not converge (last estimate {estimate})")]
    PowerIteration { estimate: f64 },

    #[error("driving sequence alpha decreased at node {node} between steps {step} and {next}", next = step + 1)]
    AlphaDecreased { node: usize, step: usize },

    #[error("scaling vectors violate r_v * s_v = 1 at node {node} (product {product})")]
    ScalingMismatch { node: usize, product: f64 },

    #[error("rank variance is zero; correlation undefined")]
    ZeroVariance,

    #[error("MPA result carries no traces")]
    MissingTraces,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
