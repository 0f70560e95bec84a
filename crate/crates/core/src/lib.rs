//! Unique games through the lens of a product-distribution labeling
//! algorithm.
//!
//! The crate is organised bottom-up:
//!
//! * [`instance`]: weighted constraint graphs with one label bijection per
//!   edge, generators, and the text file format.
//! * [`exact`]: labelings, their value, and an exhaustive oracle for `z*`.
//! * [`randomized`]: independent multinomial label distributions, the
//!   expected matched weight, its `y = 2p - 1` form, sampling and
//!   derandomized rounding.
//! * [`relaxation`]: the Gram-matrix relaxation over `(k+1)·n` unit vectors
//!   and its factorized projected-gradient solver.
//! * [`geometry`]: the arcsin re-expression of the same quantities and the
//!   `2/π` bound report.
//! * [`cli`]: the command-line front end.

pub mod cli;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod instance;
pub mod randomized;
pub mod relaxation;

pub use error::{Error, Result};
pub use exact::{solve_exact, solve_exact_partitioned, value, Labeling};
pub use geometry::{verify_bounds, BoundReport};
pub use instance::{Edge, Permutation, UgInstance};
pub use randomized::{ProbAssignment, YAssignment};
pub use relaxation::{build_sdp, solve_sdp, GramSolution, SdpProblem, SolveOptions};
