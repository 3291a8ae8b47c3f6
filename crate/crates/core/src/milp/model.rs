use serde::{Deserialize, Serialize};

use crate::error::{GsoError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstraintOp {
    Le,
    Ge,
    Eq,
}

impl ConstraintOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ConstraintOp::Le => "<=",
            ConstraintOp::Ge => ">=",
            ConstraintOp::Eq => "=",
        }
    }
}

/// `Σ coeffs · x  op  rhs`, sparse.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub coeffs: Vec<(usize, f64)>,
    pub op: ConstraintOp,
    pub rhs: f64,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<(usize, f64)>, op: ConstraintOp, rhs: f64) -> Self {
        LinearConstraint { coeffs, op, rhs }
    }

    pub fn le(coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        LinearConstraint::new(coeffs, ConstraintOp::Le, rhs)
    }

    pub fn ge(coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        LinearConstraint::new(coeffs, ConstraintOp::Ge, rhs)
    }

    pub fn eq(coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        LinearConstraint::new(coeffs, ConstraintOp::Eq, rhs)
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Amount by which `x` violates the constraint (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.activity(x);
        match self.op {
            ConstraintOp::Le => (lhs - self.rhs).max(0.0),
            ConstraintOp::Ge => (self.rhs - lhs).max(0.0),
            ConstraintOp::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// A mixed-integer linear program.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MilpModel {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub objective_constant: f64,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub integer: Vec<bool>,
    pub names: Vec<String>,
    pub constraints: Vec<LinearConstraint>,
}

impl MilpModel {
    pub fn new(sense: Sense) -> Self {
        MilpModel {
            sense,
            objective: Vec::new(),
            objective_constant: 0.0,
            lower: Vec::new(),
            upper: Vec::new(),
            integer: Vec::new(),
            names: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lo: f64, hi: f64, integer: bool, obj: f64) -> usize {
        self.objective.push(obj);
        self.lower.push(lo);
        self.upper.push(hi);
        self.integer.push(integer);
        self.names.push(name.into());
        self.objective.len() - 1
    }

    pub fn add_binary(&mut self, name: impl Into<String>, obj: f64) -> usize {
        self.add_var(name, 0.0, 1.0, true, obj)
    }

    pub fn add_constraint(&mut self, c: LinearConstraint) -> usize {
        self.constraints.push(c);
        self.constraints.len() - 1
    }

    /// Objective value in the model's own sense.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective_constant
            + self
                .objective
                .iter()
                .zip(x)
                .map(|(c, v)| c * v)
                .sum::<f64>()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        for (name, len) in [
            ("lower", self.lower.len()),
            ("upper", self.upper.len()),
            ("integer", self.integer.len()),
            ("names", self.names.len()),
        ] {
            if len != n {
                return Err(GsoError::InvalidArgument(format!(
                    "{} has length {}, expected {}",
                    name, len, n
                )));
            }
        }
        for j in 0..n {
            if self.lower[j].is_nan() || self.upper[j].is_nan() || self.lower[j] > self.upper[j] {
                return Err(GsoError::InvalidArgument(format!(
                    "variable {} has bounds [{}, {}]",
                    self.names[j], self.lower[j], self.upper[j]
                )));
            }
            if !self.objective[j].is_finite() {
                return Err(GsoError::InvalidArgument(format!(
                    "objective coefficient of {} is not finite",
                    self.names[j]
                )));
            }
        }
        for (r, c) in self.constraints.iter().enumerate() {
            if !c.rhs.is_finite() {
                return Err(GsoError::InvalidArgument(format!("row {} has non-finite rhs", r)));
            }
            for &(j, a) in &c.coeffs {
                if j >= n {
                    return Err(GsoError::IndexOutOfRange { index: j, len: n });
                }
                if !a.is_finite() {
                    return Err(GsoError::InvalidArgument(format!(
                        "row {} has a non-finite coefficient",
                        r
                    )));
                }
            }
        }
        Ok(())
    }

    /// Largest violation of any row or bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for c in &self.constraints {
            worst = worst.max(c.violation(x));
        }
        for j in 0..self.num_vars() {
            worst = worst.max(self.lower[j] - x[j]).max(x[j] - self.upper[j]);
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NodeLimit,
    TimeLimit,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::NodeLimit => "node_limit",
            SolveStatus::TimeLimit => "time_limit",
        }
    }
}

/// Outcome of an LP or MILP solve. `objective` and `bound` are in the
/// model's sense; `bound` is the best proven dual bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub bound: f64,
    pub nodes: u64,
    pub iterations: u64,
}

impl SolveResult {
    pub fn has_solution(&self) -> bool {
        !self.x.is_empty()
    }
}
