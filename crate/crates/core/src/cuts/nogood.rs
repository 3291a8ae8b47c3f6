use super::cut::{Cut, Family, Orientation};

/// Big-M cut for maximizing any function bounded above by `upper` over
/// binary vectors: `w ≤ value + (upper − value)·d(x, x̂)`, where
/// `d(x, x̂) = Σ_{x̂_j=1}(1 − x_j) + Σ_{x̂_j=0} x_j`. Exact at `x̂`, slack
/// everywhere else. For k-sets `x̂` is the binary block encoding, and the
/// disjointness rows keep `d ≥ 1` away from `x̂`.
pub fn nogood_cut(point: &[bool], value: f64, upper: f64, tag: &str) -> Cut {
    let m = (upper - value).max(0.0);
    let mut pi = vec![0.0; point.len()];
    let mut beta = value;
    for (j, &on) in point.iter().enumerate() {
        if on {
            pi[j] = -m;
            beta += m;
        } else {
            pi[j] = m;
        }
    }
    Cut::new(Orientation::Hypograph, pi, beta, Family::Nogood, tag)
}
