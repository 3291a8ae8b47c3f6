//! Best-bound branch and bound with a lazy-constraint callback.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use super::model::{LinearConstraint, MilpModel, Sense, SolveResult, SolveStatus};
use super::simplex::{solve_lp, LpOptions, LpStatus};
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct MilpOptions {
    /// Relative gap `(UB - LB) / max(|UB|, 1)` at which the search stops.
    pub gap_tol: f64,
    pub integrality_tol: f64,
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Rounds of fractional separation per node.
    pub fractional_rounds: usize,
    pub lp: LpOptions,
}

impl Default for MilpOptions {
    fn default() -> Self {
        MilpOptions {
            gap_tol: 1e-6,
            integrality_tol: 1e-6,
            node_limit: None,
            time_limit: None,
            fractional_rounds: 20,
            lp: LpOptions::default(),
        }
    }
}

/// Answer of the callback for an integer-feasible relaxation point.
#[derive(Clone, Debug, Default)]
pub struct CandidateVerdict {
    /// True objective of the candidate in the model's sense, if the callback
    /// can evaluate it (otherwise the relaxation value is trusted).
    pub objective: Option<f64>,
    /// Globally valid cuts violated by the candidate.
    pub cuts: Vec<LinearConstraint>,
}

/// Hooks invoked serially by [`milp_solve`].
pub trait LazyCallback {
    /// Called at every integer-feasible relaxation point (integers rounded).
    fn integer_candidate(&mut self, x: &[f64]) -> Result<CandidateVerdict>;

    /// Called at fractional relaxation points; may return violated cuts.
    fn fractional_point(&mut self, _x: &[f64]) -> Result<Vec<LinearConstraint>> {
        Ok(Vec::new())
    }

    /// Bound report (model sense) after every processed node.
    fn progress(&mut self, _lower_or_upper: f64, _incumbent: Option<f64>) {}
}

const CUT_VIOLATION_TOL: f64 = 1e-7;
const MAX_CUT_ROUNDS_PER_NODE: usize = 500;

struct Node {
    id: u64,
    bound: f64,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // BinaryHeap is a max-heap: the best node is the smallest bound, then
    // the smallest id.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.id.cmp(&self.id))
    }
}

pub fn relative_gap(ub: f64, lb: f64) -> f64 {
    if !ub.is_finite() || !lb.is_finite() {
        return f64::INFINITY;
    }
    ((ub - lb) / ub.abs().max(1.0)).max(0.0)
}

/// Solves `model` by best-bound branch and bound. With a callback, every
/// integer-feasible relaxation point is offered to it before acceptance,
/// and returned cuts are added to the model globally.
pub fn milp_solve(
    model: &MilpModel,
    opts: &MilpOptions,
    mut callback: Option<&mut dyn LazyCallback>,
) -> Result<(SolveResult, Vec<LinearConstraint>)> {
    model.validate()?;
    let start = Instant::now();
    let sign = match model.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let c: Vec<f64> = model.objective.iter().map(|v| sign * v).collect();
    let constant = sign * model.objective_constant;
    let n = model.num_vars();
    let mut rows = model.constraints.clone();
    let base_rows = rows.len();

    let mut heap = BinaryHeap::new();
    let mut next_id = 0u64;
    heap.push(Node {
        id: next_id,
        bound: f64::NEG_INFINITY,
        lo: model.lower.clone(),
        hi: model.upper.clone(),
    });
    next_id += 1;

    let mut incumbent: Option<(Vec<f64>, f64)> = None;
    let mut nodes = 0u64;
    let mut iterations = 0u64;
    let mut status = SolveStatus::Optimal;
    let mut final_lb = f64::NEG_INFINITY;

    let ub_of = |inc: &Option<(Vec<f64>, f64)>| inc.as_ref().map_or(f64::INFINITY, |v| v.1);

    while let Some(node) = heap.pop() {
        let ub = ub_of(&incumbent);
        let lb_now = node.bound;
        if incumbent.is_some() && relative_gap(ub, lb_now) <= opts.gap_tol {
            final_lb = lb_now;
            heap.clear();
            break;
        }
        if let Some(limit) = opts.node_limit {
            if nodes >= limit {
                status = SolveStatus::NodeLimit;
                final_lb = lb_now;
                heap.push(node);
                break;
            }
        }
        if let Some(limit) = opts.time_limit {
            if start.elapsed() >= limit {
                status = SolveStatus::TimeLimit;
                final_lb = lb_now;
                heap.push(node);
                break;
            }
        }
        nodes += 1;

        let mut frac_rounds = 0usize;
        let mut cut_rounds = 0usize;
        loop {
            let lp = solve_lp(&c, &rows, &node.lo, &node.hi, &opts.lp)?;
            iterations += lp.iterations;
            match lp.status {
                LpStatus::Infeasible => break,
                LpStatus::Unbounded => {
                    let res = SolveResult {
                        status: SolveStatus::Unbounded,
                        x: lp.x,
                        objective: -sign * f64::INFINITY,
                        bound: -sign * f64::INFINITY,
                        nodes,
                        iterations,
                    };
                    return Ok((res, rows.split_off(base_rows)));
                }
                LpStatus::Optimal => {}
            }
            let z = lp.objective + constant;
            let bound = z.max(node.bound);
            let ub = ub_of(&incumbent);
            if incumbent.is_some() && relative_gap(ub, bound) <= opts.gap_tol {
                break;
            }
            let mut x = lp.x;
            let frac = most_fractional(&x, &model.integer, opts.integrality_tol);
            match frac {
                None => {
                    for j in 0..n {
                        if model.integer[j] {
                            x[j] = x[j].round();
                        }
                    }
                    let verdict = match callback.as_deref_mut() {
                        Some(cb) => cb.integer_candidate(&x)?,
                        None => CandidateVerdict::default(),
                    };
                    let true_obj = verdict.objective.map_or(z, |v| sign * v);
                    if true_obj < ub_of(&incumbent) {
                        incumbent = Some((x.clone(), true_obj));
                    }
                    let cuts: Vec<LinearConstraint> = verdict
                        .cuts
                        .into_iter()
                        .filter(|cut| cut.violation(&x) > CUT_VIOLATION_TOL)
                        .collect();
                    if !cuts.is_empty() && cut_rounds < MAX_CUT_ROUNDS_PER_NODE {
                        cut_rounds += 1;
                        rows.extend(cuts);
                        continue;
                    }
                    let slack = 1e-7 * true_obj.abs().max(1.0);
                    if true_obj > z + slack {
                        // The callback could not certify the candidate; split
                        // on a free integer variable so the node shrinks.
                        if let Some(j) = (0..n).find(|&j| model.integer[j] && node.hi[j] > node.lo[j]) {
                            let v = x[j];
                            push_children(&mut heap, &mut next_id, &node, j, v, bound);
                        }
                    }
                    break;
                }
                Some(j) => {
                    if frac_rounds < opts.fractional_rounds {
                        if let Some(cb) = callback.as_deref_mut() {
                            let cuts: Vec<LinearConstraint> = cb
                                .fractional_point(&x)?
                                .into_iter()
                                .filter(|cut| cut.violation(&x) > 1e-6)
                                .collect();
                            if !cuts.is_empty() {
                                frac_rounds += 1;
                                rows.extend(cuts);
                                continue;
                            }
                        }
                    }
                    push_children(&mut heap, &mut next_id, &node, j, x[j], bound);
                    break;
                }
            }
        }

        let ub = ub_of(&incumbent);
        let lb = heap.peek().map_or(ub, |nd| nd.bound.min(ub));
        if let Some(cb) = callback.as_deref_mut() {
            cb.progress(sign * lb, incumbent.as_ref().map(|v| sign * v.1));
        }
        final_lb = lb;
    }

    let remaining_lb = heap.peek().map(|nd| nd.bound);
    if let Some(b) = remaining_lb {
        final_lb = final_lb.min(b);
    }
    let res = match incumbent {
        Some((x, obj)) => {
            let lb = if status == SolveStatus::Optimal {
                final_lb.min(obj)
            } else {
                final_lb
            };
            SolveResult {
                status,
                x,
                objective: sign * obj,
                bound: sign * lb,
                nodes,
                iterations,
            }
        }
        None => SolveResult {
            status: if status == SolveStatus::Optimal {
                SolveStatus::Infeasible
            } else {
                status
            },
            x: Vec::new(),
            objective: sign * f64::INFINITY,
            bound: sign * final_lb,
            nodes,
            iterations,
        },
    };
    Ok((res, rows.split_off(base_rows)))
}

fn most_fractional(x: &[f64], integer: &[bool], tol: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (j, (&v, &int)) in x.iter().zip(integer).enumerate() {
        if !int {
            continue;
        }
        let f = v - v.floor();
        let dist = f.min(1.0 - f);
        if dist > tol && best.is_none_or(|(_, d)| dist > d + 1e-12) {
            best = Some((j, dist));
        }
    }
    best.map(|b| b.0)
}

fn push_children(
    heap: &mut BinaryHeap<Node>,
    next_id: &mut u64,
    node: &Node,
    j: usize,
    v: f64,
    bound: f64,
) {
    let (down_hi, up_lo) = if (v - v.round()).abs() < 1e-9 {
        // Integral value on an unfixed variable: split around it.
        let r = v.round();
        if r > node.lo[j] {
            (r - 1.0, r)
        } else {
            (r, r + 1.0)
        }
    } else {
        (v.floor(), v.ceil())
    };
    if down_hi >= node.lo[j] {
        let mut hi = node.hi.clone();
        hi[j] = down_hi;
        heap.push(Node {
            id: *next_id,
            bound,
            lo: node.lo.clone(),
            hi,
        });
        *next_id += 1;
    }
    if up_lo <= node.hi[j] {
        let mut lo = node.lo.clone();
        lo[j] = up_lo;
        heap.push(Node {
            id: *next_id,
            bound,
            lo,
            hi: node.hi.clone(),
        });
        *next_id += 1;
    }
}
