//! Linear and mixed-integer programming substrate.

pub mod bnb;
pub mod lpfile;
pub mod model;
pub mod simplex;

pub use bnb::{milp_solve, relative_gap, CandidateVerdict, LazyCallback, MilpOptions};
pub use lpfile::{read_lp, write_lp};
pub use model::{ConstraintOp, LinearConstraint, MilpModel, Sense, SolveResult, SolveStatus};
pub use simplex::{lp_solve, lp_solve_with, solve_lp, LpOptions, LpSolution, LpStatus};
