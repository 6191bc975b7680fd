//! Pivoting over the ε-field: Lemke's complementary pivoting for LCPs, a
//! two-phase simplex method for LPs, and the assembly of both from a
//! two-player game's perturbed sequence form.
//!
//! Both kernels keep a dense Gauss-Jordan tableau whose body is rational
//! and whose right-hand side (and, for the simplex, objective row) is an
//! [`EpsPoly`]. Basic solutions are therefore polynomials in ε.

mod assembly;
mod lemke;
mod simplex;
mod tableau;

pub use assembly::{
    assemble_lcp, cost_matrices, ge_rows, simplex_zero_sum, solve_two_player, GeRows, TwoPlayerSolution,
    ZeroSumSolution,
};
pub use lemke::{lemke, LcpInstance, LcpSolution, VarTag};
pub use simplex::{simplex, LpInstance, LpSolution};

use thiserror::Error;

use crate::sequence_form::SequenceError;

/// Default pivot budget for both kernels.
pub const DEFAULT_MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("Lemke's algorithm ended on a secondary ray after {pivots} pivots (entering {entering})")]
    RayTermination { pivots: usize, entering: String },
    #[error("pivot limit {limit} reached")]
    IterationLimit { limit: usize },
    #[error("basis repeated after {pivots} pivots")]
    Cycling { pivots: usize },
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("game is not zero-sum")]
    NotZeroSum,
    #[error("covering vector must be positive and match the dimension")]
    BadCovering,
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}
