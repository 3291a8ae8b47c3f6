use std::collections::BTreeSet;
use std::time::Instant;

use super::{DcgConfig, DcgMode, DcgReport, InitialCuts, Termination};
use crate::cuts::{Cut, CutPool, Family};
use crate::error::{GsoError, Result};
use crate::milp::{
    lp_solve_with, milp_solve, relative_gap, CandidateVerdict, LazyCallback, LinearConstraint,
    LpOptions, MilpModel, MilpOptions, Sense, SolveResult, SolveStatus,
};

const CUT_TOL: f64 = 1e-7;
const INT_TOL: f64 = 1e-6;

#[derive(Default)]
pub(crate) struct Separation {
    pub cuts: Vec<Cut>,
    /// Full variable vectors of integer points worth evaluating.
    pub candidates: Vec<Vec<f64>>,
}

/// A master problem plus the oracle-side hooks the drivers need.
pub(crate) trait Formulation {
    fn name(&self) -> String;
    fn base(&self) -> &MilpModel;
    fn cut_row(&self, cut: &Cut) -> Result<LinearConstraint>;
    fn initial_cuts(&mut self, recipe: InitialCuts) -> Result<Vec<Cut>>;
    /// Oracle objective (model sense) at an integral point, else `None`.
    fn evaluate(&mut self, x: &[f64]) -> Result<Option<f64>>;
    fn separate(&mut self, x: &[f64], integral: bool) -> Result<Separation>;
    /// Whether `separate` is meaningful at fractional points.
    fn fractional_separation(&self) -> bool;
    fn report_point(&self, x: &[f64]) -> Vec<f64>;
    fn oracle_calls(&self) -> u64;
}

fn clamp_to_box(model: &MilpModel, x: &mut [f64]) {
    for j in 0..x.len().min(model.num_vars()) {
        x[j] = x[j].clamp(model.lower[j], model.upper[j]);
        if model.integer[j] {
            let r = x[j].round();
            if (x[j] - r).abs() <= INT_TOL {
                x[j] = r;
            }
        }
    }
}

fn is_integral(model: &MilpModel, x: &[f64]) -> bool {
    (0..model.num_vars()).all(|j| !model.integer[j] || (x[j] - x[j].round()).abs() <= INT_TOL)
}

fn base_feasible(model: &MilpModel, x: &[f64]) -> bool {
    model.constraints.iter().all(|c| c.violation(x) <= 1e-9)
        && (0..model.num_vars()).all(|j| x[j] >= model.lower[j] - 1e-9 && x[j] <= model.upper[j] + 1e-9)
}

struct Bounds {
    sign: f64,
    dual: f64,
    primal: f64,
    incumbent: Option<Vec<f64>>,
    trace: Vec<(f64, f64)>,
}

impl Bounds {
    fn new(sense: Sense) -> Self {
        Bounds {
            sign: if sense == Sense::Minimize { 1.0 } else { -1.0 },
            dual: f64::NEG_INFINITY,
            primal: f64::INFINITY,
            incumbent: None,
            trace: Vec::new(),
        }
    }

    fn offer(&mut self, x: &[f64], value: f64) {
        let v = self.sign * value;
        if v < self.primal {
            self.primal = v;
            self.incumbent = Some(x.to_vec());
        }
    }

    fn raise_dual(&mut self, bound: f64) {
        self.dual = self.dual.max(self.sign * bound);
    }

    fn gap(&self) -> f64 {
        relative_gap(self.primal, self.dual)
    }

    /// `(LB, UB)` in the model's own sense.
    fn natural(&self) -> (f64, f64) {
        if self.sign > 0.0 {
            (self.dual, self.primal)
        } else {
            (-self.primal, -self.dual)
        }
    }

    fn record(&mut self) {
        let p = self.natural();
        self.trace.push(p);
    }
}

fn admit(
    form: &dyn Formulation,
    pool: &mut CutPool,
    skip: &BTreeSet<Family>,
    cut: Cut,
    at: Option<&[f64]>,
) -> Result<Option<LinearConstraint>> {
    if skip.contains(&cut.family) || pool.contains(cut.family, &cut.provenance) {
        return Ok(None);
    }
    let row = form.cut_row(&cut)?;
    if let Some(x) = at {
        if row.violation(x) <= CUT_TOL {
            return Ok(None);
        }
    }
    pool.add(cut);
    Ok(Some(row))
}

pub(crate) fn run<F: Formulation>(form: &mut F, cfg: &DcgConfig) -> Result<DcgReport> {
    cfg.validate()?;
    let start = Instant::now();
    let calls_before = form.oracle_calls();
    let needs_integer = form.base().integer.iter().any(|&b| b);
    let mode = cfg.mode.unwrap_or(if needs_integer {
        DcgMode::SingleTree
    } else {
        DcgMode::Iterative
    });
    let mut pool = CutPool::new();
    let mut model = form.base().clone();
    for cut in form.initial_cuts(cfg.initial)? {
        if let Some(row) = admit(form, &mut pool, &cfg.skip_families, cut, None)? {
            model.add_constraint(row);
        }
    }
    let sense = model.sense;
    let mut bounds = Bounds::new(sense);
    let mut nodes = 0u64;
    let mut lp_iterations = 0u64;
    let mut iterations = 0u64;

    let termination = match mode {
        DcgMode::Iterative => iterative(
            form,
            cfg,
            &mut model,
            &mut pool,
            &mut bounds,
            &mut nodes,
            &mut lp_iterations,
            &mut iterations,
            start,
        )?,
        DcgMode::SingleTree => {
            let opts = MilpOptions {
                gap_tol: cfg.eps,
                node_limit: cfg.node_limit,
                time_limit: cfg.time_limit,
                ..MilpOptions::default()
            };
            let mut cb = TreeCallback {
                form: &mut *form,
                pool: &mut pool,
                skip: &cfg.skip_families,
                bounds: &mut bounds,
            };
            let (res, _) = milp_solve(&model, &opts, Some(&mut cb))?;
            nodes = res.nodes;
            lp_iterations = res.iterations;
            iterations = 1;
            absorb_tree_result(&mut bounds, &res)
        }
    };

    let (lower, upper) = bounds.natural();
    if bounds.trace.last() != Some(&(lower, upper)) {
        bounds.trace.push((lower, upper));
    }
    let (value, x) = match &bounds.incumbent {
        Some(x) => (bounds.sign * bounds.primal, form.report_point(x)),
        None => (f64::NAN, Vec::new()),
    };
    let termination = if termination == Termination::Optimal && bounds.incumbent.is_none() {
        Termination::Infeasible
    } else {
        termination
    };
    Ok(DcgReport {
        problem: form.name(),
        sense,
        mode,
        termination,
        lower,
        upper,
        gap: bounds.gap(),
        value,
        x,
        trace: bounds.trace,
        cuts_by_family: pool.counts_by_family(),
        nodes,
        iterations,
        lp_iterations,
        oracle_calls: form.oracle_calls() - calls_before,
        time_s: start.elapsed().as_secs_f64(),
        pool,
    })
}

#[allow(clippy::too_many_arguments)]
fn iterative<F: Formulation>(
    form: &mut F,
    cfg: &DcgConfig,
    model: &mut MilpModel,
    pool: &mut CutPool,
    bounds: &mut Bounds,
    nodes: &mut u64,
    lp_iterations: &mut u64,
    iterations: &mut u64,
    start: Instant,
) -> Result<Termination> {
    let needs_integer = model.integer.iter().any(|&b| b);
    loop {
        if *iterations as usize >= cfg.max_iterations {
            return Ok(Termination::IterationLimit);
        }
        let remaining = match cfg.time_limit {
            Some(t) => {
                let e = start.elapsed();
                if e >= t {
                    return Ok(Termination::TimeLimit);
                }
                Some(t - e)
            }
            None => None,
        };
        *iterations += 1;
        let res = if needs_integer {
            let opts = MilpOptions {
                gap_tol: cfg.eps * 1e-2,
                node_limit: cfg.node_limit,
                time_limit: remaining,
                ..MilpOptions::default()
            };
            milp_solve(model, &opts, None)?.0
        } else {
            lp_solve_with(model, &LpOptions::default())?
        };
        *nodes += res.nodes.max(1);
        *lp_iterations += res.iterations;
        match res.status {
            SolveStatus::Optimal => {}
            SolveStatus::Infeasible => return Ok(Termination::Infeasible),
            SolveStatus::Unbounded => {
                return Err(GsoError::Numerical(
                    "relaxed master is unbounded; the initial cuts do not bound w".into(),
                ))
            }
            SolveStatus::NodeLimit => return Ok(Termination::NodeLimit),
            SolveStatus::TimeLimit => return Ok(Termination::TimeLimit),
        }
        bounds.raise_dual(res.bound);
        let mut x = res.x;
        clamp_to_box(model, &mut x);
        let integral = is_integral(model, &x);
        if integral {
            if let Some(v) = form.evaluate(&x)? {
                bounds.offer(&x, v);
            }
        }
        let sep = form.separate(&x, integral)?;
        for cand in &sep.candidates {
            if base_feasible(form.base(), cand) {
                if let Some(v) = form.evaluate(cand)? {
                    bounds.offer(cand, v);
                }
            }
        }
        bounds.record();
        if bounds.incumbent.is_some() && bounds.gap() <= cfg.eps {
            return Ok(Termination::Optimal);
        }
        let mut added = 0;
        for cut in sep.cuts {
            if let Some(row) = admit(form, pool, &cfg.skip_families, cut, Some(&x))? {
                model.add_constraint(row);
                added += 1;
            }
        }
        if added == 0 {
            return Ok(Termination::Stalled);
        }
    }
}

fn absorb_tree_result(bounds: &mut Bounds, res: &SolveResult) -> Termination {
    if res.has_solution() {
        bounds.offer(&res.x, res.objective);
    }
    if res.bound.is_finite() {
        bounds.raise_dual(res.bound);
    }
    match res.status {
        SolveStatus::Optimal => Termination::Optimal,
        SolveStatus::Infeasible => Termination::Infeasible,
        SolveStatus::Unbounded => Termination::Stalled,
        SolveStatus::NodeLimit => Termination::NodeLimit,
        SolveStatus::TimeLimit => Termination::TimeLimit,
    }
}

struct TreeCallback<'a, F: Formulation> {
    form: &'a mut F,
    pool: &'a mut CutPool,
    skip: &'a BTreeSet<Family>,
    bounds: &'a mut Bounds,
}

impl<F: Formulation> LazyCallback for TreeCallback<'_, F> {
    fn integer_candidate(&mut self, x: &[f64]) -> Result<CandidateVerdict> {
        let mut x = x.to_vec();
        clamp_to_box(self.form.base(), &mut x);
        let x = &x[..];
        let objective = self.form.evaluate(x)?;
        if let Some(v) = objective {
            self.bounds.offer(x, v);
        }
        let sep = self.form.separate(x, true)?;
        let mut cuts = Vec::new();
        for cut in sep.cuts {
            if let Some(row) = admit(&*self.form, self.pool, self.skip, cut, Some(x))? {
                cuts.push(row);
            }
        }
        Ok(CandidateVerdict { objective, cuts })
    }

    fn fractional_point(&mut self, x: &[f64]) -> Result<Vec<LinearConstraint>> {
        if !self.form.fractional_separation() {
            return Ok(Vec::new());
        }
        let mut x = x.to_vec();
        clamp_to_box(self.form.base(), &mut x);
        let x = &x[..];
        let sep = self.form.separate(x, false)?;
        let mut cuts = Vec::new();
        for cut in sep.cuts {
            if let Some(row) = admit(&*self.form, self.pool, self.skip, cut, Some(x))? {
                cuts.push(row);
            }
        }
        Ok(cuts)
    }

    fn progress(&mut self, bound: f64, incumbent: Option<f64>) {
        if bound.is_finite() {
            self.bounds.raise_dual(bound);
        }
        let _ = incumbent;
        self.bounds.record();
    }
}
