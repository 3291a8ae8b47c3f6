use super::cut::{perm_tag, Cut, Family, Orientation};
use crate::error::{GsoError, Result};
use crate::oracle::{BisetOracle, Permutation, TernaryPoint};

/// Signed greedy: walks `perm`, growing `S₁` where `σ = +1` and `S₂` where
/// `σ = −1`, and records `π_{δ(i)} = f(S₁+δ(i), S₂) − f(S₁, S₂)` or
/// `π_{δ(i)} = f(S₁, S₂) − f(S₁, S₂+δ(i))` respectively.
pub fn signed_greedy(f: &BisetOracle, perm: &Permutation, sigma: &[i8]) -> Result<Vec<f64>> {
    let n = f.n();
    if perm.len() != n || sigma.len() != n {
        return Err(GsoError::DimensionMismatch {
            expected: n,
            got: if perm.len() != n { perm.len() } else { sigma.len() },
        });
    }
    let mut cur = TernaryPoint::zero(n);
    let mut prev = f.value(&cur);
    let mut pi = vec![0.0; n];
    for &item in perm.order() {
        let s = sigma[item];
        if s != 1 && s != -1 {
            return Err(GsoError::EntryOutOfRange {
                index: item,
                value: s as f64,
                lo: -1.0,
                hi: 1.0,
            });
        }
        cur.set(item, s);
        let v = f.value(&cur);
        pi[item] = if s == 1 { v - prev } else { prev - v };
        prev = v;
    }
    Ok(pi)
}

fn sign_tag(sigma: &[i8]) -> String {
    sigma.iter().map(|&s| if s >= 0 { '+' } else { '-' }).collect()
}

/// Extremal poly-bimatroid inequality `w ≥ f(0) + πᵀx` for `(perm, σ)`.
pub fn epbm_generate(f: &BisetOracle, perm: &Permutation, sigma: &[i8]) -> Result<Cut> {
    let pi = signed_greedy(f, perm, sigma)?;
    Ok(Cut::new(
        Orientation::Epigraph,
        pi,
        f.value(&TernaryPoint::zero(f.n())),
        Family::Epbm,
        format!("perm={} sign={}", perm_tag(perm.order()), sign_tag(sigma)),
    ))
}

/// Generalized greedy separation at `x̄ ∈ [−1,1]ⁿ`: order by `|x̄|`
/// descending (ties by index), sign `+1` where `x̄ ≥ 0`.
pub fn bisub_separate(f: &BisetOracle, xbar: &[f64]) -> Result<Cut> {
    let n = f.n();
    if xbar.len() != n {
        return Err(GsoError::DimensionMismatch {
            expected: n,
            got: xbar.len(),
        });
    }
    for (i, &v) in xbar.iter().enumerate() {
        if !(-1.0..=1.0).contains(&v) {
            return Err(GsoError::EntryOutOfRange {
                index: i,
                value: v,
                lo: -1.0,
                hi: 1.0,
            });
        }
    }
    let abs: Vec<f64> = xbar.iter().map(|v| v.abs()).collect();
    let perm = Permutation::descending(&abs);
    let sigma: Vec<i8> = xbar.iter().map(|&v| if v >= 0.0 { 1 } else { -1 }).collect();
    epbm_generate(f, &perm, &sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sum_oracle(n: usize) -> BisetOracle {
        BisetOracle::new(TernaryPoint::zero(n), |x: &TernaryPoint| {
            x.vals().iter().map(|&v| v as f64).sum()
        })
    }

    #[test]
    fn sum_gives_ones() {
        let f = sum_oracle(3);
        let perm = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        for sigma in [[1, 1, 1], [1, -1, 1], [-1, -1, -1]] {
            assert_eq!(signed_greedy(&f, &perm, &sigma).unwrap(), vec![1.0; 3]);
        }
    }

    #[test]
    fn trace_at_mixed_signs() {
        let f = BisetOracle::new(TernaryPoint::zero(2), |x: &TernaryPoint| match x.vals() {
            [1, 0] => 3.0,
            [1, -1] => 1.0,
            [0, -1] => 2.0,
            [0, 1] => 0.5,
            [-1, 0] => 1.5,
            _ => 0.0,
        });
        let c = bisub_separate(&f, &[1.0, -1.0]).unwrap();
        assert_eq!(c.pi, vec![3.0, 2.0]);
        assert_eq!(c.provenance, "perm=1,2 sign=+-");
    }

    #[test]
    fn tight_at_signed_vertex() {
        let f = BisetOracle::new(TernaryPoint::zero(3), |x: &TernaryPoint| {
            let v = x.vals();
            (v[0] as f64 - 0.5 * v[1] as f64).abs() + 0.3 * v[2] as f64
        });
        let perm = Permutation::from_one_based(&[3, 1, 2]).unwrap();
        let sigma = [-1, 1, -1];
        let c = epbm_generate(&f, &perm, &sigma).unwrap();
        let x: Vec<f64> = sigma.iter().map(|&s| s as f64).collect();
        let p = TernaryPoint::from_vals(sigma.to_vec()).unwrap();
        assert!((c.affine(&x) - f.value(&p)).abs() < 1e-12);
    }
}
