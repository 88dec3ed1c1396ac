//! Convergence machinery on general digraphs and the statistics used to
//! compare approximate and exact influence.

mod generalized;
mod hypothesis;
mod spectral;
mod stats;

pub use generalized::{Constant, DrivingSequence, FromFn, GeneralizedDynamicsState, Table};
pub use hypothesis::{check_convergence_hypothesis, message_alpha_support, Verdict};
pub use spectral::{spectral_radius_diagnostic, POWER_MAX_ITER, POWER_TOL};
pub use stats::{fractional_ranks, scatter_pairs, spearman};
