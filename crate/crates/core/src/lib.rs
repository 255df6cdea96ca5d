//! Exact branch-and-cut for optimizing two linear fractional preference
//! functions over the efficient set of a multi-objective integer quadratic
//! program, with a brute-force oracle for cross-checking.

pub mod cli;
pub mod cuts;
pub mod document;
pub mod efficiency;
pub mod error;
pub mod instance;
pub mod oracle;
pub mod rational;
pub mod search;
pub mod simplex;

pub use error::{Error, Result};
pub use instance::{
    eval_fractional, eval_quadratic, gradient_quadratic, parse_instance, render_instance,
    validate_instance, FractionalObjective, Instance, Polyhedron, QuadraticObjective, Violation,
};
pub use rational::Rat;
pub use search::{solve, BranchingRule, SolveResult, SolverConfig};
