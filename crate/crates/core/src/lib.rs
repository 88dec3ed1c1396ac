//! Harmonic influence of nodes in a social network with a stubborn leader and
//! a constant opinion field.
//!
//! Two routes compute the same quantity:
//!
//! * [`electrical`] solves one grounded Laplacian system per leader on the
//!   associated conductance network and returns the exact influence vector.
//! * [`mpa`] runs the synchronous, distributed message passing algorithm,
//!   which is exact on trees and converges (to an over-estimate) on any
//!   connected graph.
//!
//! [`graph`] holds the undirected/directed graph types, random generators,
//! the message digraph and the strongly-connected-component condensation.
//! [`analysis`] contains the generalized ω/η dynamics on arbitrary digraphs,
//! the convergence-hypothesis checker, a spectral radius diagnostic and the
//! Spearman rank correlation. [`opinion`] simulates the opinion dynamics
//! forward and serves as an independent oracle for the electrical solve.
//! [`experiment`] and [`io`] wire everything into the end-to-end pipeline used
//! by the `harmonic-influence` binary.

pub mod analysis;
pub mod electrical;
mod error;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod mpa;
pub mod opinion;

pub use error::{Error, Result};
