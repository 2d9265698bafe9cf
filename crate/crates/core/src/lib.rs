//! Polynomial matrix inequality optimization through unconstrained
//! reformulations.
//!
//! A problem `min b(y) s.t. P(x, y) >= 0` (PSD) is rewritten as one of
//! several smooth objectives ([`repr`]), minimized by the drivers in
//! [`solver`], and checked against the brute-force [`oracle`]. The
//! [`tamecheck`] module classifies the definability of objective recipes.

pub mod examples;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod polymatrix;
pub mod repr;
pub mod solver;
pub mod tamecheck;

pub use linalg::SymMatrix;
pub use poly::{Monomial, Polynomial, Term};
pub use polymatrix::{CharPoly, PolyMatrix};
pub use repr::{MatrixVarProblem, Objective, PmiProblem, RepId, SearchBox};
pub use solver::{SolveConfig, SolveResult};
