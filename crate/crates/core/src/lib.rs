//! Approximation solver for the minimum-weight k-connected m-dominating set
//! problem (`m ≥ k`) on node-weighted graphs.
//!
//! The pipeline builds a greedy m-dominating set `T`, joins a virtual root
//! to `k` of its nodes, buys nodes `S` so that every terminal has `k`
//! internally disjoint paths to the root, then repairs the remaining
//! connectivity with an inclusion-minimal forest of virtual edges on the
//! root's neighbours, each realised by a min-cost set of `k` disjoint paths.
//! Every returned set ships with a certificate: domination counts and `k`
//! disjoint paths for each node pair.

pub mod augment;
pub mod bench;
pub mod connectivity;
pub mod dominating;
pub mod error;
pub mod flow;
pub mod format;
pub mod generate;
pub mod geometry;
pub mod graph;
pub mod guarantee;
pub mod oracle;
pub mod rooted;
pub mod solver;
pub mod subsets;

/// Exact scalar for coordinates and radii.
pub type Rational = num_rational::Ratio<i128>;
pub type RationalPoint = geometry::Point<Rational>;
pub type FloatPoint = geometry::Point<f64>;
/// Node weights, already scaled to integers.
pub type Weight = u64;

pub use error::{Error, Result};
pub use graph::{Graph, Instance, NodeSet};
pub use solver::{solve, solve_general, solve_guess_root, solve_unit_disk, SolutionReport, SolverConfig, Variant};
