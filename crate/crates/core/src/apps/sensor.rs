use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::search::{es_ksets, EsResult};
use crate::cuts::Family;
use crate::dcg::{dcg_max_ksub, dcg_min_bisub, DcgConfig, DcgMode, DcgReport, Termination};
use crate::error::{GsoError, Result};
use crate::functions::ReadingsTable;
use crate::milp::{relative_gap, LinearConstraint, Sense};
use crate::oracle::{BisetOracle, KPoint, KSetOracle, TernaryPoint};

/// `k`-type sensor placement: maximize joint entropy with at most `caps[q]`
/// sensors of type `q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensorInstance {
    pub table: ReadingsTable,
    pub caps: Vec<usize>,
}

impl SensorInstance {
    pub fn new(table: ReadingsTable, caps: Vec<usize>) -> Result<Self> {
        if caps.len() != table.n_types() {
            return Err(GsoError::DimensionMismatch {
                expected: table.n_types(),
                got: caps.len(),
            });
        }
        Ok(SensorInstance { table, caps })
    }

    /// Caps of `⌊n/10⌋` per type, at least one.
    pub fn with_default_caps(table: ReadingsTable) -> Self {
        let b = (table.n_locations() / 10).max(1);
        let caps = vec![b; table.n_types()];
        SensorInstance { table, caps }
    }

    pub fn n(&self) -> usize {
        self.table.n_locations()
    }

    pub fn k(&self) -> usize {
        self.table.n_types()
    }

    pub fn oracle(&self) -> Result<KSetOracle> {
        self.table.entropy_oracle()
    }
}

#[derive(Clone, Debug)]
pub struct SensorPlan {
    pub plan: KPoint,
    pub value: f64,
    pub report: DcgReport,
}

pub fn solve_sensor_placement(inst: &SensorInstance, cfg: &DcgConfig) -> Result<SensorPlan> {
    let f = inst.oracle()?;
    let report = dcg_max_ksub(&f, &inst.caps, &[], cfg)?;
    let plan = KPoint::from_binary(inst.n(), inst.k(), &report.x, 1e-6)
        .ok_or_else(|| GsoError::Numerical("solver returned no k-set".into()))?;
    Ok(SensorPlan {
        value: report.value,
        plan,
        report,
    })
}

pub fn sensor_exhaustive(inst: &SensorInstance, cap: u128) -> Result<EsResult> {
    es_ksets(&inst.oracle()?, Sense::Maximize, &inst.caps, &[], cap)
}

/// Robust coupled placement: choose `|S₁| = b[0]`, `|S₂| = b[1]` to maximize
/// the worst entropy over functioning subsets `(T₁, T₂)` inside `S₁ ∪ S₂`
/// with `|T_q| ≥ b_prime[q]` and at most `w` sensors of the wrong type.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustInstance {
    pub base: SensorInstance,
    pub b: [usize; 2],
    pub b_prime: [usize; 2],
    pub w: usize,
}

pub const DEFAULT_OUTER_CAP: u128 = 20_000;

impl RobustInstance {
    pub fn new(table: ReadingsTable, b: [usize; 2], b_prime: [usize; 2], w: usize) -> Result<Self> {
        if table.n_types() != 2 {
            return Err(GsoError::InvalidArgument(format!(
                "robust placement needs two sensor types, got {}",
                table.n_types()
            )));
        }
        if b_prime[0] > b[0] || b_prime[1] > b[1] {
            return Err(GsoError::InvalidArgument(
                "functioning lower bounds must not exceed placement sizes".into(),
            ));
        }
        if b[0] + b[1] > table.n_locations() {
            return Err(GsoError::InvalidArgument("placement sizes exceed the number of locations".into()));
        }
        Ok(RobustInstance {
            base: SensorInstance {
                table,
                caps: b.to_vec(),
            },
            b,
            b_prime,
            w,
        })
    }

    /// `B₁ = ⌊2n/5⌋`, `B₂ = ⌊n/2⌋`, `B′₁ = ⌊4B₁/5⌋`, `B′₂ = ⌊3B₂/5⌋`,
    /// `W = ⌊3(B₁+B₂)/5⌋`.
    pub fn with_recipe(table: ReadingsTable) -> Result<Self> {
        let n = table.n_locations();
        let b = [2 * n / 5, n / 2];
        let bp = [4 * b[0] / 5, 3 * b[1] / 5];
        let w = 3 * (b[0] + b[1]) / 5;
        RobustInstance::new(table, b, bp, w)
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn outer_size(&self) -> u128 {
        let n = self.n();
        binom(n, self.b[0]).saturating_mul(binom(n - self.b[0], self.b[1]))
    }

    /// Rows of the inner model over `y¹_i ↦ i`, `y²_i ↦ n + i`.
    pub fn inner_rows(&self, s1: &[usize], s2: &[usize]) -> Vec<LinearConstraint> {
        let n = self.n();
        let mut rows = vec![
            LinearConstraint::ge((0..n).map(|i| (i, 1.0)).collect(), self.b_prime[0] as f64),
            LinearConstraint::ge((0..n).map(|i| (n + i, 1.0)).collect(), self.b_prime[1] as f64),
        ];
        for i in 0..n {
            if !s1.contains(&i) && !s2.contains(&i) {
                rows.push(LinearConstraint::le(vec![(i, 1.0), (n + i, 1.0)], 0.0));
            }
        }
        let switch: Vec<(usize, f64)> = s1
            .iter()
            .map(|&i| (n + i, 1.0))
            .chain(s2.iter().map(|&i| (i, 1.0)))
            .collect();
        rows.push(LinearConstraint::le(switch, self.w as f64));
        rows
    }
}

fn binom(a: usize, b: usize) -> u128 {
    if b > a {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..b {
        r = r * (a - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Calls `visit(S₁, S₂)` for every disjoint pair with the given sizes, in
/// lexicographic order.
pub fn for_each_placement(n: usize, b: [usize; 2], visit: &mut dyn FnMut(&[usize], &[usize]) -> Result<()>) -> Result<()> {
    let mut s1 = Vec::with_capacity(b[0]);
    combos(&(0..n).collect::<Vec<_>>(), b[0], 0, &mut s1, &mut |s1| {
        let rest: Vec<usize> = (0..n).filter(|i| !s1.contains(i)).collect();
        let mut s2 = Vec::with_capacity(b[1]);
        combos(&rest, b[1], 0, &mut s2, &mut |s2| visit(s1, s2))
    })
}

fn combos(
    pool: &[usize],
    size: usize,
    start: usize,
    cur: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if cur.len() == size {
        return visit(cur);
    }
    for j in start..pool.len() {
        if pool.len() - j < size - cur.len() {
            break;
        }
        cur.push(pool[j]);
        combos(pool, size, j + 1, cur, visit)?;
        cur.pop();
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct RobustOutcome {
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    /// Worst-case entropy of the chosen plan.
    pub value: f64,
    /// Adversary's functioning subsets for the chosen plan.
    pub worst: TernaryPoint,
    pub plans: u64,
    /// Aggregate over all inner solves.
    pub report: DcgReport,
}

/// Outer enumeration over placements, inner bisubmodular minimization by
/// DCG for each.
pub fn solve_robust_coupled(inst: &RobustInstance, cfg: &DcgConfig, outer_cap: u128) -> Result<RobustOutcome> {
    let size = inst.outer_size();
    if size > outer_cap {
        return Err(GsoError::CapExceeded {
            what: "robust outer enumeration".into(),
            size,
            cap: outer_cap,
        });
    }
    let start = Instant::now();
    let f: BisetOracle = inst.base.oracle()?.as_biset()?;
    let calls_before = f.call_count();
    let mut best: Option<(f64, Vec<usize>, Vec<usize>, Vec<f64>)> = None;
    let mut agg = Aggregate::default();
    for_each_placement(inst.n(), inst.b, &mut |s1, s2| {
        let r = dcg_min_bisub(&f, &inst.inner_rows(s1, s2), cfg)?;
        agg.absorb(&r);
        if best.as_ref().is_none_or(|b| r.value > b.0) {
            best = Some((r.value, s1.to_vec(), s2.to_vec(), r.x.clone()));
        }
        Ok(())
    })?;
    let (value, s1, s2, x) = best.ok_or(GsoError::Infeasible)?;
    let worst = TernaryPoint::from_values(&x, 1e-6)
        .ok_or_else(|| GsoError::Numerical("inner solver returned no ternary point".into()))?;
    let report = agg.into_report(value, x, f.call_count() - calls_before, start);
    Ok(RobustOutcome {
        s1,
        s2,
        value,
        worst,
        plans: size as u64,
        report,
    })
}

#[derive(Default)]
struct Aggregate {
    nodes: u64,
    iterations: u64,
    lp_iterations: u64,
    cuts: std::collections::BTreeMap<Family, usize>,
    termination: Option<Termination>,
    mode: Option<DcgMode>,
}

impl Aggregate {
    fn absorb(&mut self, r: &DcgReport) {
        self.nodes += r.nodes;
        self.iterations += r.iterations;
        self.lp_iterations += r.lp_iterations;
        for (fam, c) in &r.cuts_by_family {
            *self.cuts.entry(*fam).or_default() += c;
        }
        self.mode.get_or_insert(r.mode);
        if r.termination != Termination::Optimal && self.termination.is_none() {
            self.termination = Some(r.termination);
        }
    }

    fn into_report(self, value: f64, x: Vec<f64>, calls: u64, start: Instant) -> DcgReport {
        let termination = self.termination.unwrap_or(Termination::Optimal);
        let (lower, upper) = if termination == Termination::Optimal {
            (value, value)
        } else {
            (f64::NEG_INFINITY, value)
        };
        DcgReport {
            problem: "robust-sensor".into(),
            sense: Sense::Maximize,
            mode: self.mode.unwrap_or(DcgMode::SingleTree),
            termination,
            lower,
            upper,
            gap: relative_gap(upper, lower),
            value,
            x,
            trace: vec![(lower, upper)],
            cuts_by_family: self.cuts,
            nodes: self.nodes,
            iterations: self.iterations,
            lp_iterations: self.lp_iterations,
            oracle_calls: calls,
            time_s: start.elapsed().as_secs_f64(),
            pool: Default::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobustEs {
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub value: f64,
    pub evaluated: u64,
}

/// Double enumeration: every placement, every admissible functioning pair.
pub fn robust_exhaustive(inst: &RobustInstance, outer_cap: u128) -> Result<RobustEs> {
    let size = inst.outer_size();
    if size > outer_cap {
        return Err(GsoError::CapExceeded {
            what: "robust outer enumeration".into(),
            size,
            cap: outer_cap,
        });
    }
    let f = inst.base.oracle()?.as_biset()?;
    let n = inst.n();
    let mut best: Option<RobustEs> = None;
    let mut evaluated = 0u64;
    for_each_placement(n, inst.b, &mut |s1, s2| {
        let support: Vec<usize> = s1.iter().chain(s2).copied().collect();
        let mut worst = f64::INFINITY;
        let mut vals = vec![0i8; support.len()];
        loop {
            let t1 = vals.iter().filter(|&&v| v == 1).count();
            let t2 = vals.iter().filter(|&&v| v == -1).count();
            let switched = support
                .iter()
                .zip(&vals)
                .filter(|(i, &v)| (v == -1 && s1.contains(i)) || (v == 1 && s2.contains(i)))
                .count();
            if t1 >= inst.b_prime[0] && t2 >= inst.b_prime[1] && switched <= inst.w {
                let mut full = vec![0i8; n];
                for (&i, &v) in support.iter().zip(&vals) {
                    full[i] = v;
                }
                let v = f.value(&TernaryPoint::from_vals(full)?);
                evaluated += 1;
                if v < worst {
                    worst = v;
                }
            }
            let mut carry = true;
            for v in vals.iter_mut() {
                *v = match *v {
                    0 => 1,
                    1 => -1,
                    _ => 0,
                };
                if *v != 0 {
                    carry = false;
                    break;
                }
            }
            if carry {
                break;
            }
        }
        if best.as_ref().is_none_or(|b| worst > b.value) {
            best = Some(RobustEs {
                s1: s1.to_vec(),
                s2: s2.to_vec(),
                value: worst,
                evaluated: 0,
            });
        }
        Ok(())
    })?;
    let mut b = best.ok_or(GsoError::Infeasible)?;
    b.evaluated = evaluated;
    Ok(b)
}
