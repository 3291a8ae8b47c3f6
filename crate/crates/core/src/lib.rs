//! Generalized submodular optimization: value oracles, valid inequalities,
//! a small branch-and-cut MILP engine and delayed constraint generation.

pub mod apps;
pub mod cuts;
pub mod dcg;
pub mod error;
pub mod functions;
pub mod io;
pub mod milp;
pub mod oracle;

pub use error::{GsoError, Result};
pub use oracle::*;
