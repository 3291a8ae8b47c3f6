use super::cut::{Cut, Family, Orientation};
use crate::error::{GsoError, Result};
use crate::oracle::{KPoint, KSetOracle};

/// Default cap on `k^{n−1}`, enough for `n = 12, k = 3`.
pub const DEFAULT_XI_CAP: u128 = 177_147;

/// `ξ_i^q = min ρ_{q,i}(S)` over complete assignments `S` of `N∖{i}`.
///
/// Stops early once the oracle's declared marginal floor is reached. With a
/// floor, `cap` bounds the assignments actually visited; without one, the
/// full `k^{n−1}` count must fit.
pub fn ksub_xi_compute(f: &KSetOracle, i: usize, q: usize, cap: u128) -> Result<f64> {
    let (n, k) = (f.n(), f.k());
    if i >= n {
        return Err(GsoError::IndexOutOfRange { index: i, len: n });
    }
    if q >= k {
        return Err(GsoError::TypeOutOfRange { q, k });
    }
    let size = (k as u128).checked_pow((n - 1) as u32).unwrap_or(u128::MAX);
    let floor = f.marginal_floor();
    let too_big = || GsoError::CapExceeded {
        what: "k-submodular xi table".into(),
        size,
        cap,
    };
    if size > cap && floor.is_none() {
        return Err(too_big());
    }
    let mut visited: u128 = 0;
    let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    let mut codes = vec![0u8; n];
    for &j in &others {
        codes[j] = 1;
    }
    let mut best = f64::INFINITY;
    loop {
        visited += 1;
        if visited > cap {
            return Err(too_big());
        }
        let s = KPoint::from_codes(k, codes.clone())?;
        let rho = f.value(&s.with(i, q)) - f.value(&s);
        if rho < best {
            best = rho;
            if floor.is_some_and(|fl| best <= fl) {
                break;
            }
        }
        // odometer over the other items' types 1..=k
        let mut carry = true;
        for &j in &others {
            if codes[j] < k as u8 {
                codes[j] += 1;
                carry = false;
                break;
            }
            codes[j] = 1;
        }
        if carry {
            break;
        }
    }
    Ok(best)
}

/// Lazily filled `ξ` table for one oracle.
#[derive(Clone, Debug)]
pub struct XiTable {
    f: KSetOracle,
    cap: u128,
    cells: Vec<Option<f64>>,
}

impl XiTable {
    pub fn new(f: &KSetOracle, cap: u128) -> Self {
        XiTable {
            f: f.clone(),
            cap,
            cells: vec![None; f.n() * f.k()],
        }
    }

    pub fn get(&mut self, i: usize, q: usize) -> Result<f64> {
        let idx = q * self.f.n() + i;
        if idx >= self.cells.len() {
            return Err(GsoError::IndexOutOfRange {
                index: i,
                len: self.f.n(),
            });
        }
        if let Some(v) = self.cells[idx] {
            return Ok(v);
        }
        let v = ksub_xi_compute(&self.f, i, q, self.cap)?;
        self.cells[idx] = Some(v);
        Ok(v)
    }

    /// Full table as `xi[q][i]`.
    pub fn complete(&mut self) -> Result<Vec<Vec<f64>>> {
        let (n, k) = (self.f.n(), self.f.k());
        let mut out = vec![vec![0.0; n]; k];
        for (q, row) in out.iter_mut().enumerate() {
            for (i, cell) in row.iter_mut().enumerate() {
                *cell = self.get(i, q)?;
            }
        }
        Ok(out)
    }

    pub fn computed(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }
}

fn kset_tag(s: &KPoint) -> String {
    let parts: Vec<String> = (0..s.k())
        .map(|q| {
            let items: Vec<String> = s.component(q).iter().map(|i| (i + 1).to_string()).collect();
            format!("{{{}}}", items.join(","))
        })
        .collect();
    format!("S=({})", parts.join(","))
}

/// k-submodular inequality at `S` over variables `x_i^q` laid out as
/// `q·n + i`:
/// `w ≤ f(S) + Σ_q Σ_{i∉∪S} ρ_{q,i}(S) x_i^q + Σ_q Σ_{p≠q} Σ_{i∈S_p} ρ_{q,i}(∅̄) x_i^q
///  − Σ_q Σ_{i∈S_q} ξ_i^q (1 − x_i^q)`.
pub fn ksub_cut_generate(f: &KSetOracle, xi: &mut XiTable, s: &KPoint) -> Result<Cut> {
    let (n, k) = (f.n(), f.k());
    if s.len() != n || s.k() != k {
        return Err(GsoError::DimensionMismatch {
            expected: n,
            got: s.len(),
        });
    }
    let empty = KPoint::empty(n, k);
    let f_empty = f.value(&empty);
    let fs = f.value(s);
    let mut pi = vec![0.0; n * k];
    let mut beta = fs;
    for i in 0..n {
        match s.type_of(i) {
            None => {
                for q in 0..k {
                    pi[q * n + i] = f.value(&s.with(i, q)) - fs;
                }
            }
            Some(p) => {
                for q in 0..k {
                    if q == p {
                        let x = xi.get(i, q)?;
                        pi[q * n + i] = x;
                        beta -= x;
                    } else {
                        pi[q * n + i] = f.value(&empty.with(i, q)) - f_empty;
                    }
                }
            }
        }
    }
    Ok(Cut::new(Orientation::Hypograph, pi, beta, Family::Ksub, kset_tag(s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::submax_cut_generate;
    use crate::oracle::{SetOracle, SetPoint};

    fn weighted() -> KSetOracle {
        KSetOracle::new(KPoint::empty(3, 2), |x: &KPoint| {
            x.component_size(0) as f64 + 2.0 * x.component_size(1) as f64
        })
    }

    #[test]
    fn xi_of_weighted_count() {
        let f = weighted();
        for i in 0..3 {
            assert_eq!(ksub_xi_compute(&f, i, 0, DEFAULT_XI_CAP).unwrap(), 1.0);
            assert_eq!(ksub_xi_compute(&f, i, 1, DEFAULT_XI_CAP).unwrap(), 2.0);
        }
        assert!(matches!(ksub_xi_compute(&f, 0, 0, 2), Err(GsoError::CapExceeded { .. })));
    }

    #[test]
    fn floor_makes_cap_lazy() {
        let f = KSetOracle::builder(KPoint::empty(30, 2), |x: &KPoint| x.component_size(0) as f64)
            .marginal_floor(0.0)
            .build();
        assert_eq!(ksub_xi_compute(&f, 0, 1, 10).unwrap(), 0.0);
        assert!(matches!(ksub_xi_compute(&f, 0, 0, 10), Err(GsoError::CapExceeded { .. })));
    }

    #[test]
    fn empty_seed() {
        let f = weighted();
        let mut xi = XiTable::new(&f, DEFAULT_XI_CAP);
        let c = ksub_cut_generate(&f, &mut xi, &KPoint::empty(3, 2)).unwrap();
        assert_eq!(c.pi, vec![1.0, 1.0, 1.0, 2.0, 2.0, 2.0]);
        assert_eq!(c.beta, 0.0);
        assert_eq!(xi.computed(), 0);
    }

    #[test]
    fn k1_matches_submodular_inequality() {
        let sets = [vec![1, 2], vec![2, 3], vec![3, 4, 5], vec![1]];
        let cover = move |items: Vec<usize>| {
            let mut u: Vec<usize> = items.iter().flat_map(|&i| sets[i].clone()).collect();
            u.sort_unstable();
            u.dedup();
            u.len() as f64
        };
        let c2 = cover.clone();
        let fk = KSetOracle::new(KPoint::empty(4, 1), move |x: &KPoint| c2(x.component(0)));
        let fs = SetOracle::new(SetPoint::empty(4), move |x: &SetPoint| cover(x.items()));
        let mut xi = XiTable::new(&fk, DEFAULT_XI_CAP);
        for m in 0..16u64 {
            let sp = SetPoint::from_mask(4, m);
            let kp = KPoint::from_codes(1, sp.bits().iter().map(|&b| b as u8).collect()).unwrap();
            let a = ksub_cut_generate(&fk, &mut xi, &kp).unwrap();
            let b = submax_cut_generate(&fs, &sp).unwrap();
            assert!((a.beta - b.beta).abs() < 1e-12);
            for j in 0..4 {
                assert!((a.pi[j] - b.pi[j]).abs() < 1e-12);
            }
        }
    }
}
