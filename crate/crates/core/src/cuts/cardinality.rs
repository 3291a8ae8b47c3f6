//! Cuts for the epigraph of `g(aᵀx)` under a cardinality cap `Σx ≤ k`.
//!
//! All cuts carry `β = g(0)` so they stay valid for un-normalized `g`.

use super::cut::{perm_tag, set_tag, Cut, Family, Orientation};
use crate::error::{GsoError, Result};
use crate::functions::{Concave, ConcaveOfLinear};
use crate::oracle::lovasz::check_unit_box;
use crate::oracle::Permutation;

/// Default budget on lifting-problem subsets evaluated by [`lift_epi_exact`].
pub const DEFAULT_LIFT_CAP: u128 = 5_000_000;

fn check_perm(perm: &Permutation, n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(GsoError::DimensionMismatch {
            expected: n,
            got: perm.len(),
        });
    }
    Ok(())
}

/// Separation inequality for equal weights `α`:
/// `w ≥ g(0) + Σ_{i≤i₀} ρ_{δ(i)} x_{δ(i)} + Σ_{i>i₀} ψ x_{δ(i)}` with
/// `ρ = g(iα) − g((i−1)α)` and `ψ = (g(kα) − g(i₀α)) / (k − i₀)`.
pub fn si_generate(
    g: &Concave,
    alpha: f64,
    n: usize,
    k: usize,
    i0: usize,
    perm: &Permutation,
) -> Result<Cut> {
    check_perm(perm, n)?;
    if k == 0 || k > n {
        return Err(GsoError::InvalidArgument(format!("cardinality cap {} must lie in 1..={}", k, n)));
    }
    if i0 >= k {
        return Err(GsoError::InvalidArgument(format!("i0 = {} must lie in 0..{}", i0, k)));
    }
    let ga = |m: usize| g.eval(m as f64 * alpha);
    let psi = (ga(k) - ga(i0)) / (k - i0) as f64;
    let mut pi = vec![0.0; n];
    for (pos, &item) in perm.order().iter().enumerate() {
        pi[item] = if pos < i0 { ga(pos + 1) - ga(pos) } else { psi };
    }
    Ok(Cut::new(
        Orientation::Epigraph,
        pi,
        ga(0),
        Family::Si,
        format!("perm={} i0={} k={}", perm_tag(&perm.order()[..i0]), i0, k),
    ))
}

/// Most violated SI at `x̄` over all `i₀`, with `δ` from `x̄` descending.
/// For equal weights the SI coefficients are nonincreasing along `δ`, so
/// this ordering is optimal for each `i₀`.
pub fn si_separate(g: &Concave, alpha: f64, k: usize, xbar: &[f64]) -> Result<Cut> {
    check_unit_box(xbar)?;
    let n = xbar.len();
    let perm = Permutation::descending(xbar);
    let mut best: Option<(f64, Cut)> = None;
    for i0 in 0..k.min(n) {
        let c = si_generate(g, alpha, n, k.min(n), i0, &perm)?;
        let v = c.affine(xbar);
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, c));
        }
    }
    best.map(|(_, c)| c)
        .ok_or_else(|| GsoError::InvalidArgument("empty ground set".into()))
}

/// Prefix coefficients `ρ_i = g(Σ_{j≤i} a_{δ(j)}) − g(Σ_{j<i} a_{δ(j)})` for
/// the first `k` positions of `perm`.
fn prefix_rho(f: &ConcaveOfLinear, k: usize, perm: &Permutation) -> Vec<f64> {
    let mut out = Vec::with_capacity(k);
    let mut acc = 0.0;
    for &item in &perm.order()[..k] {
        let next = acc + f.weights[item];
        out.push(f.g.eval(next) - f.g.eval(acc));
        acc = next;
    }
    out
}

/// Approximate lifted inequality along `perm`. Beyond position `k`, `T` is
/// the `k − 1` heaviest predecessors, ties to the earlier position.
pub fn ali_generate(f: &ConcaveOfLinear, k: usize, perm: &Permutation) -> Result<Cut> {
    let n = f.n();
    check_perm(perm, n)?;
    if k == 0 {
        return Err(GsoError::InvalidArgument("cardinality cap must be positive".into()));
    }
    let k = k.min(n);
    let order = perm.order();
    let mut pi = vec![0.0; n];
    for (pos, rho) in prefix_rho(f, k, perm).into_iter().enumerate() {
        pi[order[pos]] = rho;
    }
    // Predecessor weights kept sorted by (weight desc, position asc).
    let mut ranked: Vec<(f64, usize)> = order[..k].iter().enumerate().map(|(p, &i)| (f.weights[i], p)).collect();
    for pos in k..n {
        ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let base: f64 = ranked.iter().take(k - 1).map(|r| r.0).sum();
        let item = order[pos];
        pi[item] = f.g.eval(f.weights[item] + base) - f.g.eval(base);
        ranked.push((f.weights[item], pos));
    }
    Ok(Cut::new(
        Orientation::Epigraph,
        pi,
        f.g.eval(0.0),
        Family::Ali,
        format!("perm={} k={}", perm_tag(order), k),
    ))
}

/// Number of subsets the exact lifting of `n` items with cap `k` examines.
pub fn lifting_budget(n: usize, k: usize) -> u128 {
    let mut total: u128 = 0;
    for j in k..n {
        // subsets of size ≤ k−1 among j predecessors
        let mut c: u128 = 1;
        let mut s: u128 = 1;
        for r in 1..k {
            c = c * (j - r + 1) as u128 / r as u128;
            s = s.saturating_add(c);
        }
        total = total.saturating_add(s);
    }
    total
}

/// EPI on the seed `S` (the first `k` entries of `perm`), lifted in `δ`
/// order by solving each lifting problem exactly: `ξ_j` is the minimum of
/// `g(a_j + Σ_{i∈T} a_i) − g(0) − Σ_{i∈T} coef_i` over subsets `T` of the
/// earlier positions with `|T| ≤ k − 1`.
pub fn lift_epi_exact(
    f: &ConcaveOfLinear,
    k: usize,
    seed: &[usize],
    perm: &Permutation,
    cap: u128,
) -> Result<Cut> {
    let n = f.n();
    check_perm(perm, n)?;
    if k == 0 || k > n {
        return Err(GsoError::InvalidArgument(format!("cardinality cap {} must lie in 1..={}", k, n)));
    }
    let order = perm.order();
    let mut head: Vec<usize> = order[..k].to_vec();
    let mut want = seed.to_vec();
    head.sort_unstable();
    want.sort_unstable();
    want.dedup();
    if head != want {
        return Err(GsoError::InvalidArgument(
            "seed set must be the first k entries of the permutation".into(),
        ));
    }
    let budget = lifting_budget(n, k);
    if budget > cap {
        return Err(GsoError::CapExceeded {
            what: "exact lifting".into(),
            size: budget,
            cap,
        });
    }
    let g0 = f.g.eval(0.0);
    let mut coef_pos: Vec<f64> = prefix_rho(f, k, perm);
    let weights_pos: Vec<f64> = order.iter().map(|&i| f.weights[i]).collect();
    for pos in k..n {
        let aj = weights_pos[pos];
        let mut best = f64::INFINITY;
        lift_search(
            &weights_pos[..pos],
            &coef_pos,
            k - 1,
            0,
            0.0,
            0.0,
            &mut |a_sum, c_sum| {
                let v = f.g.eval(aj + a_sum) - g0 - c_sum;
                if v < best {
                    best = v;
                }
            },
        );
        coef_pos.push(best);
    }
    let mut pi = vec![0.0; n];
    for (pos, &item) in order.iter().enumerate() {
        pi[item] = coef_pos[pos];
    }
    Ok(Cut::new(
        Orientation::Epigraph,
        pi,
        g0,
        Family::Lepi,
        format!("perm={} S={} k={}", perm_tag(order), set_tag(&want), k),
    ))
}

fn lift_search(
    weights: &[f64],
    coefs: &[f64],
    slots: usize,
    start: usize,
    a_sum: f64,
    c_sum: f64,
    visit: &mut dyn FnMut(f64, f64),
) {
    visit(a_sum, c_sum);
    if slots == 0 {
        return;
    }
    for i in start..weights.len() {
        lift_search(weights, coefs, slots - 1, i + 1, a_sum + weights[i], c_sum + coefs[i], visit);
    }
}
