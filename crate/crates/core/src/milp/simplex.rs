//! Dense bounded-variable primal simplex.
//!
//! Rows `a x (<=|>=|=) b` get one slack each (`a x + s = b`), so the slack
//! basis is always available. Rows that are violated at the starting point
//! get an artificial column; phase 1 drives those to zero. Logical (slack and
//! artificial) columns are unit vectors, so the basis is factored as those
//! plus a dense inverse of the block where the basic structural columns meet
//! the rows no basic logical covers. Cut-heavy LPs have many rows but few
//! structurals, and every solve costs `O(nnz + p²)` for `p` basic
//! structurals.

use super::model::{ConstraintOp, LinearConstraint, MilpModel, Sense, SolveResult, SolveStatus};
use crate::error::{GsoError, Result};

#[derive(Clone, Debug)]
pub struct LpOptions {
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    pub pivot_tol: f64,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
    pub refactor_every: usize,
    pub max_iterations: Option<u64>,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            feasibility_tol: 1e-7,
            optimality_tol: 1e-7,
            pivot_tol: 1e-9,
            bland_after: 50,
            refactor_every: 64,
            max_iterations: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Values of the structural variables.
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
    Free,
}

struct Simplex<'o> {
    m: usize,
    n_struct: usize,
    cols: Vec<Vec<(usize, f64)>>,
    lb: Vec<f64>,
    ub: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    factor: Factor,
    b: Vec<f64>,
    artificial_from: usize,
    iterations: u64,
    since_refactor: usize,
    opts: &'o LpOptions,
}

/// Basis factorization. Row `i` covered by a basic logical column maps to
/// its basis position and entry; the other rows pair up with the basic
/// structural columns through `dinv`, the inverse of `B[rest, structural]`.
#[derive(Clone, Debug, Default)]
struct Factor {
    logical: Vec<Option<(usize, f64)>>,
    rest: Vec<usize>,
    structural: Vec<usize>,
    /// Row-major `p × p`: entry `(b, a)` maps row `rest[a]` to structural `b`.
    dinv: Vec<f64>,
}

/// Minimizes `c x` subject to `rows` and `lo <= x <= hi`. Bounds may be
/// infinite; a variable with both bounds infinite is free.
pub fn solve_lp(
    c: &[f64],
    rows: &[LinearConstraint],
    lo: &[f64],
    hi: &[f64],
    opts: &LpOptions,
) -> Result<LpSolution> {
    let n = c.len();
    if lo.len() != n || hi.len() != n {
        return Err(GsoError::DimensionMismatch {
            expected: n,
            got: lo.len().min(hi.len()),
        });
    }
    for j in 0..n {
        if lo[j] > hi[j] + opts.feasibility_tol {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                x: Vec::new(),
                objective: f64::INFINITY,
                iterations: 0,
            });
        }
    }
    let mut s = Simplex::build(c, rows, lo, hi, opts)?;
    s.refactor()?;
    if s.artificial_from < s.lb.len() {
        let phase1: Vec<f64> = (0..s.lb.len())
            .map(|j| if j >= s.artificial_from { 1.0 } else { 0.0 })
            .collect();
        s.cost = phase1;
        let st = s.run()?;
        debug_assert_ne!(st, LpStatus::Unbounded);
        let infeas: f64 = (s.artificial_from..s.lb.len()).map(|j| s.x[j]).sum();
        let bmax = s.b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if infeas > opts.feasibility_tol * (1.0 + bmax) {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                x: Vec::new(),
                objective: f64::INFINITY,
                iterations: s.iterations,
            });
        }
        s.retire_artificials()?;
    }
    let mut cost = c.to_vec();
    cost.resize(s.lb.len(), 0.0);
    s.cost = cost;
    let mut attempts = 0;
    loop {
        let st = s.run()?;
        if st == LpStatus::Unbounded {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                x: s.x[..n].to_vec(),
                objective: f64::NEG_INFINITY,
                iterations: s.iterations,
            });
        }
        s.refactor()?;
        let drift = s.max_bound_violation();
        if drift <= opts.feasibility_tol * 10.0 && s.choose_entering(false).is_none() {
            break;
        }
        attempts += 1;
        if attempts > 3 {
            return Err(GsoError::Numerical(format!(
                "simplex could not settle: bound violation {:.3e} after refactorization",
                drift
            )));
        }
    }
    let x: Vec<f64> = s.x[..n].to_vec();
    let objective = c.iter().zip(&x).map(|(a, b)| a * b).sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        objective,
        iterations: s.iterations,
    })
}

impl<'o> Simplex<'o> {
    fn build(
        c: &[f64],
        rows: &[LinearConstraint],
        lo: &[f64],
        hi: &[f64],
        opts: &'o LpOptions,
    ) -> Result<Self> {
        let n = c.len();
        let m = rows.len();
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, r) in rows.iter().enumerate() {
            for &(j, a) in &r.coeffs {
                if j >= n {
                    return Err(GsoError::IndexOutOfRange { index: j, len: n });
                }
                if a != 0.0 {
                    match cols[j].last_mut() {
                        Some(last) if last.0 == i => last.1 += a,
                        _ => cols[j].push((i, a)),
                    }
                }
            }
        }
        let mut lb = lo.to_vec();
        let mut ub = hi.to_vec();
        let mut x = vec![0.0; n];
        let mut state = vec![VarState::Free; n];
        for j in 0..n {
            if lb[j].is_finite() {
                x[j] = lb[j];
                state[j] = VarState::AtLower;
            } else if ub[j].is_finite() {
                x[j] = ub[j];
                state[j] = VarState::AtUpper;
            }
        }
        let b: Vec<f64> = rows.iter().map(|r| r.rhs).collect();
        let mut activity = vec![0.0; m];
        for j in 0..n {
            if x[j] != 0.0 {
                for &(i, a) in &cols[j] {
                    activity[i] += a * x[j];
                }
            }
        }
        let mut basis = vec![0; m];
        let mut artificials = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            let (slo, shi) = match r.op {
                ConstraintOp::Le => (0.0, f64::INFINITY),
                ConstraintOp::Ge => (f64::NEG_INFINITY, 0.0),
                ConstraintOp::Eq => (0.0, 0.0),
            };
            let j = cols.len();
            cols.push(vec![(i, 1.0)]);
            lb.push(slo);
            ub.push(shi);
            let resid = b[i] - activity[i];
            if resid >= slo - opts.feasibility_tol && resid <= shi + opts.feasibility_tol {
                x.push(resid);
                state.push(VarState::Basic);
                basis[i] = j;
            } else {
                let at = if resid < slo { slo } else { shi };
                x.push(at);
                state.push(if at == slo {
                    VarState::AtLower
                } else {
                    VarState::AtUpper
                });
                artificials.push((i, resid - at));
            }
        }
        let artificial_from = cols.len();
        for (i, gap) in artificials {
            let sign = if gap >= 0.0 { 1.0 } else { -1.0 };
            let j = cols.len();
            cols.push(vec![(i, sign)]);
            lb.push(0.0);
            ub.push(f64::INFINITY);
            x.push(gap.abs());
            state.push(VarState::Basic);
            basis[i] = j;
        }
        let total = cols.len();
        Ok(Simplex {
            m,
            n_struct: n,
            cols,
            lb,
            ub,
            cost: vec![0.0; total],
            x,
            state,
            basis,
            factor: Factor::default(),
            b,
            artificial_from,
            iterations: 0,
            since_refactor: 0,
            opts,
        })
    }

    /// Refactors the basis and recomputes basic values from scratch.
    fn refactor(&mut self) -> Result<()> {
        let m = self.m;
        self.since_refactor = 0;
        self.factorize()?;
        let mut rhs = self.b.clone();
        for j in 0..self.cols.len() {
            if self.state[j] != VarState::Basic && self.x[j] != 0.0 {
                for &(i, v) in &self.cols[j] {
                    rhs[i] -= v * self.x[j];
                }
            }
        }
        let z = self.ftran(rhs);
        for r in 0..m {
            self.x[self.basis[r]] = z[r];
        }
        Ok(())
    }

    fn factorize(&mut self) -> Result<()> {
        let m = self.m;
        let mut f = Factor {
            logical: vec![None; m],
            rest: Vec::new(),
            structural: Vec::new(),
            dinv: Vec::new(),
        };
        for (r, &j) in self.basis.iter().enumerate() {
            if j >= self.n_struct {
                let (i, v) = self.cols[j][0];
                if f.logical[i].is_some() {
                    return Err(GsoError::Numerical("singular basis during refactorization".into()));
                }
                f.logical[i] = Some((r, v));
            } else {
                f.structural.push(r);
            }
        }
        f.rest = (0..m).filter(|&i| f.logical[i].is_none()).collect();
        let p = f.rest.len();
        if p != f.structural.len() {
            return Err(GsoError::Numerical("singular basis during refactorization".into()));
        }
        let mut at = vec![usize::MAX; m];
        for (a, &i) in f.rest.iter().enumerate() {
            at[i] = a;
        }
        let mut d = vec![0.0; p * p];
        for (b, &r) in f.structural.iter().enumerate() {
            for &(i, v) in &self.cols[self.basis[r]] {
                if at[i] != usize::MAX {
                    d[at[i] * p + b] += v;
                }
            }
        }
        f.dinv = gauss_jordan(d, p)
            .ok_or_else(|| GsoError::Numerical("singular basis during refactorization".into()))?;
        self.factor = f;
        Ok(())
    }

    /// `B⁻¹ v`, indexed by basis position.
    fn ftran(&self, mut v: Vec<f64>) -> Vec<f64> {
        let f = &self.factor;
        let p = f.rest.len();
        let mut z = vec![0.0; self.m];
        let zn: Vec<f64> = (0..p)
            .map(|b| (0..p).map(|a| f.dinv[b * p + a] * v[f.rest[a]]).sum())
            .collect();
        for (b, &r) in f.structural.iter().enumerate() {
            z[r] = zn[b];
            if zn[b] != 0.0 {
                for &(i, a) in &self.cols[self.basis[r]] {
                    v[i] -= a * zn[b];
                }
            }
        }
        for (i, l) in f.logical.iter().enumerate() {
            if let Some((r, s)) = *l {
                z[r] = v[i] / s;
            }
        }
        z
    }

    /// `wᵀ B⁻¹` for `w` indexed by basis position.
    fn btran(&self, w: &[f64]) -> Vec<f64> {
        let f = &self.factor;
        let p = f.rest.len();
        let mut y = vec![0.0; self.m];
        for (i, l) in f.logical.iter().enumerate() {
            if let Some((r, s)) = *l {
                y[i] = w[r] / s;
            }
        }
        let rhs: Vec<f64> = f
            .structural
            .iter()
            .map(|&r| w[r] - self.cols[self.basis[r]].iter().map(|&(i, a)| y[i] * a).sum::<f64>())
            .collect();
        for (a, &i) in f.rest.iter().enumerate() {
            y[i] = (0..p).map(|b| rhs[b] * f.dinv[b * p + a]).sum();
        }
        y
    }

    fn max_bound_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for &j in &self.basis {
            worst = worst.max(self.lb[j] - self.x[j]).max(self.x[j] - self.ub[j]);
        }
        worst
    }

    fn duals(&self) -> Vec<f64> {
        let w: Vec<f64> = self.basis.iter().map(|&j| self.cost[j]).collect();
        self.btran(&w)
    }

    fn reduced_cost(&self, y: &[f64], j: usize) -> f64 {
        self.cost[j] - self.cols[j].iter().map(|&(i, v)| y[i] * v).sum::<f64>()
    }

    /// Entering variable and direction (+1 increase, -1 decrease).
    fn choose_entering(&self, bland: bool) -> Option<(usize, f64)> {
        let y = self.duals();
        let tol = self.opts.optimality_tol;
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..self.cols.len() {
            if self.lb[j] == self.ub[j] {
                continue;
            }
            let dir = match self.state[j] {
                VarState::Basic => continue,
                VarState::AtLower => {
                    let d = self.reduced_cost(&y, j);
                    if d < -tol {
                        (1.0, -d)
                    } else {
                        continue;
                    }
                }
                VarState::AtUpper => {
                    let d = self.reduced_cost(&y, j);
                    if d > tol {
                        (-1.0, d)
                    } else {
                        continue;
                    }
                }
                VarState::Free => {
                    let d = self.reduced_cost(&y, j);
                    if d.abs() > tol {
                        (-d.signum(), d.abs())
                    } else {
                        continue;
                    }
                }
            };
            if bland {
                return Some((j, dir.0));
            }
            if dir.1 > best_score {
                best_score = dir.1;
                best = Some((j, dir.0));
            }
        }
        best
    }

    fn column(&self, j: usize) -> Vec<f64> {
        let mut v = vec![0.0; self.m];
        for &(k, a) in &self.cols[j] {
            v[k] += a;
        }
        self.ftran(v)
    }

    fn pivot(&mut self, r: usize, q: usize) -> Result<()> {
        self.basis[r] = q;
        self.state[q] = VarState::Basic;
        self.since_refactor += 1;
        self.factorize()
    }

    fn iteration_cap(&self) -> u64 {
        self.opts
            .max_iterations
            .unwrap_or(50 * (self.m + self.cols.len()) as u64 + 10_000)
    }

    fn run(&mut self) -> Result<LpStatus> {
        let mut degenerate_run = 0usize;
        let cap = self.iteration_cap();
        let start = self.iterations;
        loop {
            if self.iterations - start > cap {
                return Err(GsoError::Numerical(format!(
                    "simplex iteration limit {} reached",
                    cap
                )));
            }
            if self.since_refactor >= self.opts.refactor_every {
                self.refactor()?;
            }
            let bland = degenerate_run >= self.opts.bland_after;
            let Some((q, dir)) = self.choose_entering(bland) else {
                return Ok(LpStatus::Optimal);
            };
            let alpha = self.column(q);
            let mut t_best = f64::INFINITY;
            let mut leave: Option<usize> = None;
            let mut leave_alpha = 0.0;
            for r in 0..self.m {
                let a = alpha[r];
                if a.abs() <= self.opts.pivot_tol {
                    continue;
                }
                let j = self.basis[r];
                let delta = -a * dir;
                let t = if delta < 0.0 {
                    if self.lb[j].is_finite() {
                        ((self.x[j] - self.lb[j]) / -delta).max(0.0)
                    } else {
                        continue;
                    }
                } else if self.ub[j].is_finite() {
                    ((self.ub[j] - self.x[j]) / delta).max(0.0)
                } else {
                    continue;
                };
                let better = match leave {
                    None => true,
                    Some(prev) => {
                        if t < t_best - 1e-12 {
                            true
                        } else if t <= t_best + 1e-12 {
                            if bland {
                                j < self.basis[prev]
                            } else {
                                a.abs() > leave_alpha
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    t_best = t;
                    leave = Some(r);
                    leave_alpha = a.abs();
                }
            }
            let flip = self.ub[q] - self.lb[q];
            self.iterations += 1;
            if flip.is_finite() && flip <= t_best {
                self.apply_step(q, dir, flip, &alpha);
                self.state[q] = if dir > 0.0 {
                    VarState::AtUpper
                } else {
                    VarState::AtLower
                };
                self.x[q] = if dir > 0.0 { self.ub[q] } else { self.lb[q] };
                degenerate_run = 0;
                continue;
            }
            let Some(r) = leave else {
                return Ok(LpStatus::Unbounded);
            };
            self.apply_step(q, dir, t_best, &alpha);
            let j = self.basis[r];
            let delta = -alpha[r] * dir;
            if delta < 0.0 {
                self.x[j] = self.lb[j];
                self.state[j] = VarState::AtLower;
            } else {
                self.x[j] = self.ub[j];
                self.state[j] = VarState::AtUpper;
            }
            if self.lb[j] == self.ub[j] {
                self.state[j] = VarState::AtLower;
            }
            self.pivot(r, q)?;
            if t_best < 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
        }
    }

    fn apply_step(&mut self, q: usize, dir: f64, t: f64, alpha: &[f64]) {
        if t == 0.0 {
            return;
        }
        self.x[q] += dir * t;
        for r in 0..self.m {
            let j = self.basis[r];
            self.x[j] -= alpha[r] * dir * t;
        }
    }

    /// Fixes artificials at zero and pivots basic ones out where possible.
    fn retire_artificials(&mut self) -> Result<()> {
        for j in self.artificial_from..self.lb.len() {
            self.ub[j] = 0.0;
            if self.state[j] != VarState::Basic {
                self.x[j] = 0.0;
                self.state[j] = VarState::AtLower;
            }
        }
        for r in 0..self.m {
            let a = self.basis[r];
            if a < self.artificial_from {
                continue;
            }
            let mut unit = vec![0.0; self.m];
            unit[r] = 1.0;
            let row = self.btran(&unit);
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.artificial_from {
                if self.state[j] == VarState::Basic || self.lb[j] == self.ub[j] {
                    continue;
                }
                let v: f64 = self.cols[j].iter().map(|&(i, c)| row[i] * c).sum();
                if v.abs() > 1e-7 && best.is_none_or(|(_, b)| v.abs() > b) {
                    best = Some((j, v.abs()));
                }
            }
            if let Some((q, _)) = best {
                self.x[a] = 0.0;
                self.state[a] = VarState::AtLower;
                self.pivot(r, q)?;
            }
        }
        self.refactor()
    }

    #[allow(dead_code)]
    fn n_struct(&self) -> usize {
        self.n_struct
    }
}

/// Solves the continuous relaxation of `model` (integrality ignored).
/// Inverse of the row-major `m × m` matrix `a` by Gauss-Jordan with partial
/// pivoting; `None` if singular.
fn gauss_jordan(mut a: Vec<f64>, m: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; m * m];
    for i in 0..m {
        inv[i * m + i] = 1.0;
    }
    for col in 0..m {
        let mut piv = col;
        let mut best = a[col * m + col].abs();
        for r in col + 1..m {
            let v = a[r * m + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best < 1e-12 {
            return None;
        }
        if piv != col {
            for k in 0..m {
                a.swap(piv * m + k, col * m + k);
                inv.swap(piv * m + k, col * m + k);
            }
        }
        let p = a[col * m + col];
        for k in 0..m {
            a[col * m + k] /= p;
            inv[col * m + k] /= p;
        }
        for r in 0..m {
            if r == col {
                continue;
            }
            let f = a[r * m + col];
            if f != 0.0 {
                for k in 0..m {
                    a[r * m + k] -= f * a[col * m + k];
                    inv[r * m + k] -= f * inv[col * m + k];
                }
            }
        }
    }
    Some(inv)
}

pub fn lp_solve(model: &MilpModel) -> Result<SolveResult> {
    lp_solve_with(model, &LpOptions::default())
}

pub fn lp_solve_with(model: &MilpModel, opts: &LpOptions) -> Result<SolveResult> {
    model.validate()?;
    let sign = match model.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let c: Vec<f64> = model.objective.iter().map(|v| sign * v).collect();
    let sol = solve_lp(&c, &model.constraints, &model.lower, &model.upper, opts)?;
    Ok(match sol.status {
        LpStatus::Optimal => {
            let obj = model.objective_value(&sol.x);
            SolveResult {
                status: SolveStatus::Optimal,
                x: sol.x,
                objective: obj,
                bound: obj,
                nodes: 0,
                iterations: sol.iterations,
            }
        }
        LpStatus::Infeasible => SolveResult {
            status: SolveStatus::Infeasible,
            x: Vec::new(),
            objective: sign * f64::INFINITY,
            bound: sign * f64::INFINITY,
            nodes: 0,
            iterations: sol.iterations,
        },
        LpStatus::Unbounded => SolveResult {
            status: SolveStatus::Unbounded,
            x: sol.x,
            objective: -sign * f64::INFINITY,
            bound: -sign * f64::INFINITY,
            nodes: 0,
            iterations: sol.iterations,
        },
    })
}
