//! Exhaustive search baselines over the same variable layouts as the DCG
//! masters. Enumeration order is fixed, and the first strictly better point
//! wins, so results are deterministic.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dcg::ccmin_value;
use crate::error::{GsoError, Result};
use crate::functions::ConcaveOfLinear;
use crate::milp::{LinearConstraint, Sense};
use crate::oracle::{BisetOracle, KPoint, KSetOracle, SetOracle, SetPoint, TernaryPoint};

pub const DEFAULT_ES_CAP: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EsResult {
    pub value: f64,
    /// Optimal point in the solver's reporting layout.
    pub x: Vec<f64>,
    pub evaluated: u64,
    pub time_s: f64,
}

fn feasible(rows: &[LinearConstraint], x: &[f64]) -> bool {
    rows.iter().all(|c| c.violation(x) <= 1e-9)
}

fn check_cap(what: &str, size: u128, cap: u128) -> Result<()> {
    if size > cap {
        return Err(GsoError::CapExceeded {
            what: what.into(),
            size,
            cap,
        });
    }
    Ok(())
}

struct Best {
    sense: Sense,
    value: f64,
    x: Option<Vec<f64>>,
    evaluated: u64,
}

impl Best {
    fn new(sense: Sense) -> Self {
        Best {
            sense,
            value: f64::NAN,
            x: None,
            evaluated: 0,
        }
    }

    fn offer(&mut self, v: f64, x: impl FnOnce() -> Vec<f64>) {
        self.evaluated += 1;
        let better = match self.x {
            None => true,
            Some(_) => match self.sense {
                Sense::Minimize => v < self.value,
                Sense::Maximize => v > self.value,
            },
        };
        if better {
            self.value = v;
            self.x = Some(x());
        }
    }

    fn finish(self, start: Instant) -> Result<EsResult> {
        let x = self.x.ok_or(GsoError::Infeasible)?;
        Ok(EsResult {
            value: self.value,
            x,
            evaluated: self.evaluated,
            time_s: start.elapsed().as_secs_f64(),
        })
    }
}

fn pow_size(base: u128, n: usize) -> u128 {
    base.checked_pow(n as u32).unwrap_or(u128::MAX)
}

/// Optimizes `f` over subsets satisfying `extra` (rows over `x ∈ {0,1}ⁿ`).
pub fn es_sets(f: &SetOracle, sense: Sense, extra: &[LinearConstraint], cap: u128) -> Result<EsResult> {
    let start = Instant::now();
    let n = f.n();
    check_cap("set enumeration", pow_size(2, n), cap)?;
    let mut best = Best::new(sense);
    for mask in 0..(1u64 << n) {
        let s = SetPoint::from_mask(n, mask);
        let x = s.to_f64();
        if feasible(extra, &x) {
            best.offer(f.value(&s), || x);
        }
    }
    best.finish(start)
}

/// Minimizes `cᵀx + g(aᵀx)` over subsets with at most `k` items.
pub fn es_ccmin(
    spec: &ConcaveOfLinear,
    modular: Option<&[f64]>,
    k: usize,
    extra: &[LinearConstraint],
    cap: u128,
) -> Result<EsResult> {
    let start = Instant::now();
    let n = spec.n();
    let zeros = vec![0.0; n];
    let c = modular.unwrap_or(&zeros);
    if c.len() != n {
        return Err(GsoError::DimensionMismatch {
            expected: n,
            got: c.len(),
        });
    }
    check_cap("set enumeration", pow_size(2, n), cap)?;
    let f = spec.oracle();
    let mut best = Best::new(Sense::Minimize);
    for mask in 0..(1u64 << n) {
        if mask.count_ones() as usize > k {
            continue;
        }
        let s = SetPoint::from_mask(n, mask);
        let x = s.to_f64();
        if feasible(extra, &x) {
            best.offer(ccmin_value(&f, c, &s), || x);
        }
    }
    best.finish(start)
}

/// Number of k-sets over `n` items whose type-`q` component has at most
/// `caps[q]` items (no caps when `caps` is empty).
pub fn kset_count(n: usize, k: usize, caps: &[usize]) -> u128 {
    // ways[m] = number of ways to fill m more items with the types seen so far
    let mut ways = vec![0u128; n + 1];
    // start: choose which items stay unassigned implicitly; track used count
    ways[0] = 1;
    let binom = |a: usize, b: usize| -> u128 {
        if b > a {
            return 0;
        }
        let mut r: u128 = 1;
        for i in 0..b {
            r = r * (a - i) as u128 / (i + 1) as u128;
        }
        r
    };
    for q in 0..k {
        let b = caps.get(q).copied().unwrap_or(n).min(n);
        let mut next = vec![0u128; n + 1];
        for used in 0..=n {
            if ways[used] == 0 {
                continue;
            }
            for s in 0..=b.min(n - used) {
                next[used + s] = next[used + s].saturating_add(ways[used].saturating_mul(binom(n - used, s)));
            }
        }
        ways = next;
    }
    ways.iter().fold(0u128, |a, &v| a.saturating_add(v))
}

/// Optimizes `f` over k-sets with per-type caps and `extra` rows over the
/// `q·n + i` binary layout.
pub fn es_ksets(
    f: &KSetOracle,
    sense: Sense,
    caps: &[usize],
    extra: &[LinearConstraint],
    cap: u128,
) -> Result<EsResult> {
    let start = Instant::now();
    let (n, k) = (f.n(), f.k());
    if !caps.is_empty() && caps.len() != k {
        return Err(GsoError::DimensionMismatch {
            expected: k,
            got: caps.len(),
        });
    }
    check_cap("k-set enumeration", kset_count(n, k, caps), cap)?;
    let mut left: Vec<usize> = (0..k).map(|q| caps.get(q).copied().unwrap_or(n)).collect();
    let mut best = Best::new(sense);
    let mut cur = KPoint::empty(n, k);
    kset_dfs(f, extra, 0, &mut cur, &mut left, &mut best);
    best.finish(start)
}

fn kset_dfs(
    f: &KSetOracle,
    extra: &[LinearConstraint],
    i: usize,
    cur: &mut KPoint,
    left: &mut [usize],
    best: &mut Best,
) {
    if i == cur.len() {
        let x = cur.to_binary();
        if feasible(extra, &x) {
            best.offer(f.value(cur), || x);
        }
        return;
    }
    kset_dfs(f, extra, i + 1, cur, left, best);
    for q in 0..left.len() {
        if left[q] > 0 {
            left[q] -= 1;
            cur.assign(i, q);
            kset_dfs(f, extra, i + 1, cur, left, best);
            cur.unassign(i);
            left[q] += 1;
        }
    }
}

/// Optimizes `f` over `{−1,0,1}ⁿ` with `extra` rows over the `y¹, y²` layout.
/// The reported point is the ternary vector.
pub fn es_ternary(f: &BisetOracle, sense: Sense, extra: &[LinearConstraint], cap: u128) -> Result<EsResult> {
    let start = Instant::now();
    let n = f.n();
    check_cap("ternary enumeration", pow_size(3, n), cap)?;
    let mut best = Best::new(sense);
    let mut vals = vec![0i8; n];
    loop {
        let mut y = vec![0.0; 2 * n];
        for (i, &v) in vals.iter().enumerate() {
            match v {
                1 => y[i] = 1.0,
                -1 => y[n + i] = 1.0,
                _ => {}
            }
        }
        if feasible(extra, &y) {
            let t = TernaryPoint::from_vals(vals.clone())?;
            best.offer(f.value(&t), || t.to_f64());
        }
        // odometer 0 → 1 → −1
        let mut carry = true;
        for v in vals.iter_mut() {
            match *v {
                0 => {
                    *v = 1;
                    carry = false;
                }
                1 => {
                    *v = -1;
                    carry = false;
                }
                _ => *v = 0,
            }
            if !carry {
                break;
            }
        }
        if carry {
            break;
        }
    }
    best.finish(start)
}
