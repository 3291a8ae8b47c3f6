//! Delayed constraint generation: a relaxed master over a growing cut pool,
//! solved either by re-optimizing per round or inside one branch-and-bound
//! tree with lazy cuts.

mod driver;
mod solvers;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::cuts::{CutPool, Family, DEFAULT_LIFT_CAP, DEFAULT_XI_CAP};
use crate::error::{GsoError, Result};
use crate::milp::Sense;

pub use solvers::{
    ccmin_branch_and_cut, ccmin_value, dcg_max_ksub, dcg_max_ksub_nogood, dcg_max_submodular, dcg_min_bisub,
    dcg_min_submodular,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DcgMode {
    /// Re-solve the master after every round of cuts.
    Iterative,
    /// One branch-and-bound tree; cuts enter through the lazy callback.
    SingleTree,
}

impl DcgMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DcgMode::Iterative => "iterative",
            DcgMode::SingleTree => "single-tree",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "iterative" => Ok(DcgMode::Iterative),
            "single-tree" | "single_tree" => Ok(DcgMode::SingleTree),
            other => Err(GsoError::UnknownKind(other.to_string())),
        }
    }
}

/// Which cuts seed the master before the first solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialCuts {
    /// One cut, enough to bound `w`.
    Bounding,
    /// Bounding cut plus a second one at the opposite extreme point.
    Standard,
}

#[derive(Clone, Debug)]
pub struct DcgConfig {
    pub eps: f64,
    pub max_iterations: usize,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    /// `None` picks single-tree when the master needs integrality and
    /// iterative LP otherwise.
    pub mode: Option<DcgMode>,
    pub initial: InitialCuts,
    pub xi_cap: u128,
    pub lift_cap: u128,
    pub skip_families: BTreeSet<Family>,
}

impl Default for DcgConfig {
    fn default() -> Self {
        DcgConfig {
            eps: 1e-6,
            max_iterations: 100_000,
            time_limit: None,
            node_limit: None,
            mode: None,
            initial: InitialCuts::Standard,
            xi_cap: DEFAULT_XI_CAP,
            lift_cap: DEFAULT_LIFT_CAP,
            skip_families: BTreeSet::new(),
        }
    }
}

impl DcgConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) {
            return Err(GsoError::InvalidArgument(format!("gap tolerance {} must be positive", self.eps)));
        }
        Ok(())
    }

    pub fn with_mode(mut self, mode: DcgMode) -> Self {
        self.mode = Some(mode);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Optimal,
    Infeasible,
    IterationLimit,
    TimeLimit,
    NodeLimit,
    /// No violated cut found while the gap is still open.
    Stalled,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Optimal => "optimal",
            Termination::Infeasible => "infeasible",
            Termination::IterationLimit => "iteration_limit",
            Termination::TimeLimit => "time_limit",
            Termination::NodeLimit => "node_limit",
            Termination::Stalled => "stalled",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DcgReport {
    pub problem: String,
    pub sense: Sense,
    pub mode: DcgMode,
    pub termination: Termination,
    pub lower: f64,
    pub upper: f64,
    /// `(UB − LB) / max(|UB|, 1)`.
    pub gap: f64,
    /// Oracle value of the incumbent.
    pub value: f64,
    pub x: Vec<f64>,
    /// `(LB, UB)` after every iteration or node.
    pub trace: Vec<(f64, f64)>,
    pub cuts_by_family: BTreeMap<Family, usize>,
    pub nodes: u64,
    pub iterations: u64,
    pub lp_iterations: u64,
    pub oracle_calls: u64,
    pub time_s: f64,
    #[serde(skip)]
    pub pool: CutPool,
}

impl DcgReport {
    pub fn is_optimal(&self) -> bool {
        self.termination == Termination::Optimal
    }

    pub fn cuts_total(&self) -> usize {
        self.cuts_by_family.values().sum()
    }
}
