use super::cut::{perm_tag, Cut, Family, Orientation};
use crate::error::{GsoError, Result};
use crate::oracle::lovasz::check_unit_box;
use crate::oracle::{lovasz_permutation, Permutation, SetOracle, SetPoint};

/// Greedy marginals `ρ_{δ(i)}(X^{δ,i−1})`, indexed by item.
pub fn epi_coefficients(f: &SetOracle, perm: &Permutation) -> Result<Vec<f64>> {
    let n = f.n();
    if perm.len() != n {
        return Err(GsoError::DimensionMismatch {
            expected: n,
            got: perm.len(),
        });
    }
    let mut pi = vec![0.0; n];
    let mut set = SetPoint::empty(n);
    let mut prev = f.value(&set);
    for &item in perm.order() {
        set.insert(item);
        let v = f.value(&set);
        pi[item] = v - prev;
        prev = v;
    }
    Ok(pi)
}

/// The EPI of `f` along `perm`: `w ≥ f(∅) + Σ ρ_{δ(i)}(X^{δ,i−1}) x_{δ(i)}`.
pub fn epi_generate(f: &SetOracle, perm: &Permutation) -> Result<Cut> {
    let pi = epi_coefficients(f, perm)?;
    let beta = f.value(&SetPoint::empty(f.n()));
    Ok(Cut::new(
        Orientation::Epigraph,
        pi,
        beta,
        Family::Epi,
        format!("perm={}", perm_tag(perm.order())),
    ))
}

/// Most violated EPI at `x̄`: greedy along `x̄` sorted descending.
pub fn epi_separate(f: &SetOracle, xbar: &[f64]) -> Result<Cut> {
    if xbar.len() != f.n() {
        return Err(GsoError::DimensionMismatch {
            expected: f.n(),
            got: xbar.len(),
        });
    }
    check_unit_box(xbar)?;
    epi_generate(f, &lovasz_permutation(xbar))
}
