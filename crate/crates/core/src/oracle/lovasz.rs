use super::points::{Permutation, SetPoint};
use super::value::SetOracle;
use crate::error::{GsoError, Result};
use crate::milp::{solve_lp, LinearConstraint, LpOptions, LpStatus};

pub const DEFAULT_CLOSURE_CAP: usize = 12;

pub(crate) fn check_unit_box(x: &[f64]) -> Result<()> {
    for (i, &v) in x.iter().enumerate() {
        if !(0.0..=1.0).contains(&v) {
            return Err(GsoError::EntryOutOfRange {
                index: i,
                value: v,
                lo: 0.0,
                hi: 1.0,
            });
        }
    }
    Ok(())
}

/// Order of `x` by descending value, ties by ascending index. Every
/// greedy cut generator in the crate uses this rule.
pub fn lovasz_permutation(x: &[f64]) -> Permutation {
    Permutation::descending(x)
}

/// Lovász extension of `f` at `x ∈ [0,1]^n`.
///
/// Evaluated as `(1 - x_δ1) f(∅) + Σ_i (x_δi - x_δ(i+1)) f(X^i)`; the first
/// term vanishes for normalized oracles.
pub fn lovasz_eval(f: &SetOracle, x: &[f64]) -> Result<f64> {
    let n = f.n();
    if x.len() != n {
        return Err(GsoError::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    check_unit_box(x)?;
    let perm = lovasz_permutation(x);
    let mut set = SetPoint::empty(n);
    let head = if n == 0 { 0.0 } else { x[perm.get(0)] };
    let mut total = (1.0 - head) * f.value(&set);
    for pos in 0..n {
        let item = perm.get(pos);
        set.insert(item);
        let next = if pos + 1 < n { x[perm.get(pos + 1)] } else { 0.0 };
        let w = x[item] - next;
        if w != 0.0 {
            total += w * f.value(&set);
        }
    }
    Ok(total)
}

/// Convex closure of `f` at `x`: the cheapest convex combination of
/// vertices `1_S` averaging to `x`, solved as an LP over all `2^n` subsets.
pub fn convex_closure_eval(f: &SetOracle, x: &[f64], cap: usize) -> Result<f64> {
    let n = f.n();
    if x.len() != n {
        return Err(GsoError::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    if n > cap || n >= 63 {
        return Err(GsoError::CapExceeded {
            what: "convex closure".into(),
            size: 1u128 << n.min(127),
            cap: 1u128 << cap.min(127),
        });
    }
    check_unit_box(x)?;
    let count = 1usize << n;
    let cost: Vec<f64> = (0..count)
        .map(|mask| f.value(&SetPoint::from_mask(n, mask as u64)))
        .collect();
    let mut rows = Vec::with_capacity(n + 1);
    for (i, &xi) in x.iter().enumerate() {
        let coeffs = (0..count).filter(|m| m >> i & 1 == 1).map(|m| (m, 1.0)).collect();
        rows.push(LinearConstraint::eq(coeffs, xi));
    }
    rows.push(LinearConstraint::eq((0..count).map(|m| (m, 1.0)).collect(), 1.0));
    let lo = vec![0.0; count];
    let hi = vec![f64::INFINITY; count];
    let opts = LpOptions {
        feasibility_tol: 1e-10,
        optimality_tol: 1e-10,
        ..LpOptions::default()
    };
    let sol = solve_lp(&cost, &rows, &lo, &hi, &opts)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.objective),
        LpStatus::Infeasible => Err(GsoError::Infeasible),
        LpStatus::Unbounded => Err(GsoError::Numerical("closure LP reported unbounded".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coverage() -> SetOracle {
        let sets = [vec![1, 2], vec![2, 3]];
        SetOracle::new(SetPoint::empty(2), move |x: &SetPoint| {
            let mut u: Vec<usize> = x.items().iter().flat_map(|&i| sets[i].clone()).collect();
            u.sort_unstable();
            u.dedup();
            u.len() as f64
        })
    }

    #[test]
    fn lovasz_on_coverage() {
        assert!((lovasz_eval(&coverage(), &[1.0, 0.5]).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn lovasz_on_modular() {
        let f = SetOracle::new(SetPoint::empty(2), |x: &SetPoint| {
            x.to_f64()[0] + 2.0 * x.to_f64()[1]
        });
        assert!((lovasz_eval(&f, &[0.5, 0.25]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lovasz_matches_at_vertices() {
        let f = coverage();
        for mask in 0..4u64 {
            let p = SetPoint::from_mask(2, mask);
            assert_eq!(lovasz_eval(&f, &p.to_f64()).unwrap(), f.value(&p));
        }
    }

    #[test]
    fn lovasz_rejects_out_of_box() {
        assert!(matches!(
            lovasz_eval(&coverage(), &[1.2, 0.0]),
            Err(GsoError::EntryOutOfRange { index: 0, .. })
        ));
    }

    #[test]
    fn closure_below_lovasz_off_submodular() {
        let f = SetOracle::new(SetPoint::empty(2), |x: &SetPoint| {
            if x.cardinality() == 1 {
                -1.0
            } else {
                0.0
            }
        });
        let c = convex_closure_eval(&f, &[0.5, 0.5], 12).unwrap();
        assert!((c + 1.0).abs() < 1e-9);
        assert!(lovasz_eval(&f, &[0.5, 0.5]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn closure_matches_lovasz_on_coverage() {
        let f = coverage();
        let x = [0.3, 0.8];
        let a = convex_closure_eval(&f, &x, 12).unwrap();
        let b = lovasz_eval(&f, &x).unwrap();
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn closure_cap() {
        let f = SetOracle::new(SetPoint::empty(4), |_| 0.0);
        assert!(matches!(
            convex_closure_eval(&f, &[0.0; 4], 3),
            Err(GsoError::CapExceeded { .. })
        ));
    }
}
