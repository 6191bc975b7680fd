//! Exact computation of quasi-proper equilibria in extensive-form games.
//!
//! * [`eps_field`]: polynomials and rational functions in an infinitesimal ε.
//! * [`game_model`]: perfect-recall game trees, reach probabilities, payoffs
//!   and the conditional best-response valuations `K_i^{h,c}`.
//! * [`game_format`]: the `.qpef` game grammar and the result document.
//! * [`permutahedron`]: ε-permutahedra as Rado facets or as a comparator
//!   network extended formulation.
//! * [`sequence_form`]: sequences, payoff matrices and the perturbed
//!   strategy polytopes.
//! * [`pivot_solver`]: Lemke's algorithm and a simplex method over the
//!   ε-field, and the two-player LCP / zero-sum LP built from a game.
//! * [`equilibrium`]: behaviour extraction, ε → 0 limits and exact
//!   verification.
//! * [`multiplayer`]: the n-player fixed-point map with δ-approximate
//!   selection, and a damped search with exact verification.
//! * [`cli`]: the `qpe` command-line driver.

pub mod cli;
pub mod eps_field;
pub mod equilibrium;
pub mod game_format;
pub mod game_model;
pub mod multiplayer;
pub mod permutahedron;
pub mod pivot_solver;
pub mod random_games;
pub mod scalar;
pub mod sequence_form;

pub use eps_field::{EpsError, EpsPoly, EpsRat};
pub use game_model::{BehaviorProfile, GameBuilder, GameError, GameTree, InfosetId, NodeId};
pub use scalar::{rat, Rational, Scalar};
