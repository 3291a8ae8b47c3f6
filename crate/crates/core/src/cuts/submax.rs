use super::cut::{set_tag, Cut, Family, Orientation};
use crate::error::{GsoError, Result};
use crate::oracle::{SetOracle, SetPoint};

/// Submodular inequality at `S` for the hypograph of `f`:
/// `w ≤ f*(S) + Σ_{j∉S} [f*(S∪{j}) − f*(S)] x_j + Σ_j ρ_j(N∖{j}) x_j`
/// with `f*(X) = f(X) − Σ_{j∈X} ρ_j(N∖{j})`.
pub fn submax_cut_generate(f: &SetOracle, s: &SetPoint) -> Result<Cut> {
    let n = f.n();
    if s.len() != n {
        return Err(GsoError::DimensionMismatch {
            expected: n,
            got: s.len(),
        });
    }
    let full = SetPoint::full(n);
    let f_full = f.value(&full);
    let tail: Vec<f64> = (0..n).map(|j| f_full - f.value(&full.without(j))).collect();
    let fs = f.value(s);
    let f_star_s = fs - s.items().iter().map(|&j| tail[j]).sum::<f64>();
    let mut pi = tail.clone();
    for j in 0..n {
        if !s.contains(j) {
            let f_star_sj = f.value(&s.with(j)) - tail[j] - (fs - f_star_s);
            pi[j] += f_star_sj - f_star_s;
        }
    }
    Ok(Cut::new(
        Orientation::Hypograph,
        pi,
        f_star_s,
        Family::Submax,
        format!("S={}", set_tag(&s.items())),
    ))
}
