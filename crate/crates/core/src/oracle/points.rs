//! Point encodings for the four oracle domains.
//!
//! Items and types are 0-based throughout the crate. A k-set stores one
//! code per item: `0` for unassigned and `q + 1` for membership in
//! component `q`.

use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{GsoError, Result};

/// A finite non-empty ground set `{0, .., n-1}` with optional labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundSet {
    n: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GsoError::InvalidArgument("ground set must be non-empty".into()));
        }
        Ok(GroundSet { n, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut g = GroundSet::new(labels.len())?;
        g.labels = Some(labels);
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("{}", i),
        }
    }
}

/// Indicator vector of a subset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetPoint {
    bits: Vec<bool>,
}

impl SetPoint {
    pub fn empty(n: usize) -> Self {
        SetPoint { bits: vec![false; n] }
    }

    pub fn full(n: usize) -> Self {
        SetPoint { bits: vec![true; n] }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        SetPoint { bits }
    }

    pub fn from_items(n: usize, items: &[usize]) -> Result<Self> {
        let mut p = SetPoint::empty(n);
        for &i in items {
            if i >= n {
                return Err(GsoError::IndexOutOfRange { index: i, len: n });
            }
            p.bits[i] = true;
        }
        Ok(p)
    }

    /// Bit `i` of `mask` is item `i`. Only valid for `n <= 64`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        SetPoint {
            bits: (0..n).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    /// Rounds a vector that is integral up to `tol`. Returns `None` if it is not.
    pub fn from_values(values: &[f64], tol: f64) -> Option<Self> {
        let mut bits = Vec::with_capacity(values.len());
        for &v in values {
            if (v - 1.0).abs() <= tol {
                bits.push(true);
            } else if v.abs() <= tol {
                bits.push(false);
            } else {
                return None;
            }
        }
        Some(SetPoint { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn insert(&mut self, i: usize) {
        self.bits[i] = true;
    }

    pub fn remove(&mut self, i: usize) {
        self.bits[i] = false;
    }

    pub fn with(&self, i: usize) -> SetPoint {
        let mut p = self.clone();
        p.bits[i] = true;
        p
    }

    pub fn without(&self, i: usize) -> SetPoint {
        let mut p = self.clone();
        p.bits[i] = false;
        p
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn items(&self) -> Vec<usize> {
        (0..self.bits.len()).filter(|&i| self.bits[i]).collect()
    }

    pub fn cardinality(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
    }
}

/// A k-set: k pairwise disjoint subsets of the ground set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KPoint {
    k: usize,
    codes: Vec<u8>,
}

impl KPoint {
    pub fn empty(n: usize, k: usize) -> Self {
        assert!((1..255).contains(&k), "k must lie in 1..255");
        KPoint {
            k,
            codes: vec![0; n],
        }
    }

    /// `codes[i] == 0` leaves item `i` unassigned, `q + 1` assigns type `q`.
    pub fn from_codes(k: usize, codes: Vec<u8>) -> Result<Self> {
        if k == 0 || k >= 255 {
            return Err(GsoError::InvalidArgument(format!("k = {} out of range", k)));
        }
        for &c in &codes {
            if c as usize > k {
                return Err(GsoError::TypeOutOfRange {
                    q: c as usize - 1,
                    k,
                });
            }
        }
        Ok(KPoint { k, codes })
    }

    /// Builds a k-set from its k indicator blocks, rejecting overlapping blocks.
    pub fn from_blocks(blocks: &[Vec<bool>]) -> Result<Self> {
        let k = blocks.len();
        if k == 0 {
            return Err(GsoError::InvalidArgument("need at least one block".into()));
        }
        let n = blocks[0].len();
        let mut p = KPoint::empty(n, k);
        for (q, b) in blocks.iter().enumerate() {
            if b.len() != n {
                return Err(GsoError::DimensionMismatch {
                    expected: n,
                    got: b.len(),
                });
            }
            for i in 0..n {
                if b[i] {
                    if p.codes[i] != 0 {
                        return Err(GsoError::AlreadyAssigned(i));
                    }
                    p.codes[i] = q as u8 + 1;
                }
            }
        }
        Ok(p)
    }

    /// Decodes the `k * n` block vector `[x^1, .., x^k]`.
    pub fn from_binary(n: usize, k: usize, values: &[f64], tol: f64) -> Option<Self> {
        if values.len() != n * k {
            return None;
        }
        let mut p = KPoint::empty(n, k);
        for q in 0..k {
            for i in 0..n {
                let v = values[q * n + i];
                if (v - 1.0).abs() <= tol {
                    if p.codes[i] != 0 {
                        return None;
                    }
                    p.codes[i] = q as u8 + 1;
                } else if v.abs() > tol {
                    return None;
                }
            }
        }
        Some(p)
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn codes(&self) -> &[u8] {
        &self.codes
    }

    /// Type of item `i`, if assigned.
    pub fn type_of(&self, i: usize) -> Option<usize> {
        match self.codes[i] {
            0 => None,
            c => Some(c as usize - 1),
        }
    }

    pub fn assign(&mut self, i: usize, q: usize) {
        self.codes[i] = q as u8 + 1;
    }

    pub fn unassign(&mut self, i: usize) {
        self.codes[i] = 0;
    }

    pub fn with(&self, i: usize, q: usize) -> KPoint {
        let mut p = self.clone();
        p.assign(i, q);
        p
    }

    pub fn blocks(&self) -> Vec<Vec<bool>> {
        (0..self.k)
            .map(|q| self.codes.iter().map(|&c| c as usize == q + 1).collect())
            .collect()
    }

    pub fn component(&self, q: usize) -> Vec<usize> {
        (0..self.codes.len())
            .filter(|&i| self.codes[i] as usize == q + 1)
            .collect()
    }

    pub fn component_size(&self, q: usize) -> usize {
        self.codes.iter().filter(|&&c| c as usize == q + 1).count()
    }

    /// The `k * n` block vector `[x^1, .., x^k]`.
    pub fn to_binary(&self) -> Vec<f64> {
        let n = self.codes.len();
        let mut out = vec![0.0; n * self.k];
        for (i, &c) in self.codes.iter().enumerate() {
            if c > 0 {
                out[(c as usize - 1) * n + i] = 1.0;
            }
        }
        out
    }
}

/// A biset `(S1, S2)` encoded as a vector in `{-1, 0, +1}^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TernaryPoint {
    vals: Vec<i8>,
}

impl TernaryPoint {
    pub fn zero(n: usize) -> Self {
        TernaryPoint { vals: vec![0; n] }
    }

    pub fn from_vals(vals: Vec<i8>) -> Result<Self> {
        for (i, &v) in vals.iter().enumerate() {
            if !(-1..=1).contains(&v) {
                return Err(GsoError::EntryOutOfRange {
                    index: i,
                    value: v as f64,
                    lo: -1.0,
                    hi: 1.0,
                });
            }
        }
        Ok(TernaryPoint { vals })
    }

    pub fn from_bisets(n: usize, s1: &[usize], s2: &[usize]) -> Result<Self> {
        let mut p = TernaryPoint::zero(n);
        for &i in s1 {
            if i >= n {
                return Err(GsoError::IndexOutOfRange { index: i, len: n });
            }
            p.vals[i] = 1;
        }
        for &i in s2 {
            if i >= n {
                return Err(GsoError::IndexOutOfRange { index: i, len: n });
            }
            if p.vals[i] != 0 {
                return Err(GsoError::AlreadyAssigned(i));
            }
            p.vals[i] = -1;
        }
        Ok(p)
    }

    pub fn from_values(values: &[f64], tol: f64) -> Option<Self> {
        let mut vals = Vec::with_capacity(values.len());
        for &v in values {
            let r = v.round();
            if (v - r).abs() > tol || !(-1.0..=1.0).contains(&r) {
                return None;
            }
            vals.push(r as i8);
        }
        Some(TernaryPoint { vals })
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn vals(&self) -> &[i8] {
        &self.vals
    }

    pub fn set(&mut self, i: usize, v: i8) {
        self.vals[i] = v;
    }

    pub fn positive(&self) -> Vec<usize> {
        (0..self.vals.len()).filter(|&i| self.vals[i] == 1).collect()
    }

    pub fn negative(&self) -> Vec<usize> {
        (0..self.vals.len()).filter(|&i| self.vals[i] == -1).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.vals.iter().map(|&v| v as f64).collect()
    }

    /// Same biset viewed as a 2-set (`+1` is type 0, `-1` is type 1).
    pub fn to_kpoint(&self) -> KPoint {
        let codes = self
            .vals
            .iter()
            .map(|&v| match v {
                1 => 1,
                -1 => 2,
                _ => 0,
            })
            .collect();
        KPoint { k: 2, codes }
    }

    pub fn from_kpoint(p: &KPoint) -> Result<Self> {
        if p.k() != 2 {
            return Err(GsoError::InvalidArgument(format!(
                "biset needs k = 2, got {}",
                p.k()
            )));
        }
        Ok(TernaryPoint {
            vals: p
                .codes()
                .iter()
                .map(|&c| match c {
                    1 => 1,
                    2 => -1,
                    _ => 0,
                })
                .collect(),
        })
    }
}

/// A point of `Z^n x R^m`; `integer_mask` marks the integral coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticePoint {
    pub vals: Vec<f64>,
    pub integer_mask: Vec<bool>,
}

impl LatticePoint {
    pub fn new(vals: Vec<f64>, integer_mask: Vec<bool>) -> Result<Self> {
        if vals.len() != integer_mask.len() {
            return Err(GsoError::DimensionMismatch {
                expected: integer_mask.len(),
                got: vals.len(),
            });
        }
        for (i, (&v, &int)) in vals.iter().zip(&integer_mask).enumerate() {
            if int && v.fract() != 0.0 {
                return Err(GsoError::InvalidArgument(format!(
                    "coordinate {} must be integral, got {}",
                    i, v
                )));
            }
        }
        Ok(LatticePoint { vals, integer_mask })
    }

    /// All coordinates continuous.
    pub fn continuous(vals: Vec<f64>) -> Self {
        let m = vals.len();
        LatticePoint {
            vals,
            integer_mask: vec![false; m],
        }
    }

    pub fn integral(vals: Vec<f64>) -> Result<Self> {
        let m = vals.len();
        LatticePoint::new(vals, vec![true; m])
    }

    pub fn dim(&self) -> usize {
        self.vals.len()
    }
}

impl PartialEq for LatticePoint {
    fn eq(&self, other: &Self) -> bool {
        self.integer_mask == other.integer_mask
            && self.vals.len() == other.vals.len()
            && self
                .vals
                .iter()
                .zip(&other.vals)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl Eq for LatticePoint {}

impl Hash for LatticePoint {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.integer_mask.hash(state);
        for v in &self.vals {
            v.to_bits().hash(state);
        }
    }
}

/// A rearrangement of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    order: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            order: (0..n).collect(),
        }
    }

    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &i in &order {
            if i >= n {
                return Err(GsoError::IndexOutOfRange { index: i, len: n });
            }
            if seen[i] {
                return Err(GsoError::InvalidArgument(format!(
                    "index {} repeated in permutation",
                    i
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { order })
    }

    /// 1-based convenience constructor, e.g. `(5, 2, 3, 1, 4, 6)`.
    pub fn from_one_based(order: &[usize]) -> Result<Self> {
        if order.contains(&0) {
            return Err(GsoError::InvalidArgument("1-based order contains 0".into()));
        }
        Permutation::new(order.iter().map(|&i| i - 1).collect())
    }

    /// Sorts indices by descending `key`, ties broken by ascending index.
    pub fn descending(key: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..key.len()).collect();
        order.sort_by(|&a, &b| key[b].total_cmp(&key[a]).then(a.cmp(&b)));
        Permutation { order }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn get(&self, pos: usize) -> usize {
        self.order[pos]
    }

    /// `position()[item]` is where `item` sits in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (p, &i) in self.order.iter().enumerate() {
            pos[i] = p;
        }
        pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kpoint_rejects_overlapping_blocks() {
        let b = vec![vec![true, false], vec![true, true]];
        assert!(matches!(
            KPoint::from_blocks(&b),
            Err(GsoError::AlreadyAssigned(0))
        ));
    }

    #[test]
    fn kpoint_binary_roundtrip() {
        let p = KPoint::from_codes(3, vec![0, 3, 1, 2]).unwrap();
        let x = p.to_binary();
        assert_eq!(x.len(), 12);
        assert_eq!(KPoint::from_binary(4, 3, &x, 1e-9).unwrap(), p);
        assert_eq!(p.component(2), vec![1]);
    }

    #[test]
    fn ternary_is_bijective_with_bisets() {
        let t = TernaryPoint::from_bisets(4, &[0, 2], &[3]).unwrap();
        assert_eq!(t.vals(), &[1, 0, 1, -1]);
        assert_eq!(t.positive(), vec![0, 2]);
        assert_eq!(t.negative(), vec![3]);
        assert_eq!(TernaryPoint::from_kpoint(&t.to_kpoint()).unwrap(), t);
        assert!(TernaryPoint::from_vals(vec![2]).is_err());
    }

    #[test]
    fn descending_breaks_ties_by_index() {
        let p = Permutation::descending(&[0.5, 1.0, 0.5, 0.0]);
        assert_eq!(p.order(), &[1, 0, 2, 3]);
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        let p = Permutation::from_one_based(&[5, 2, 3, 1, 4, 6]).unwrap();
        assert_eq!(p.order(), &[4, 1, 2, 0, 3, 5]);
        assert_eq!(p.positions()[4], 0);
    }

    #[test]
    fn lattice_point_requires_integral_masked_coordinates() {
        assert!(LatticePoint::new(vec![1.5, 2.0], vec![false, true]).is_ok());
        assert!(LatticePoint::new(vec![1.5, 2.0], vec![true, true]).is_err());
    }

    #[test]
    fn ground_set_nonempty() {
        assert!(GroundSet::new(0).is_err());
        let g = GroundSet::with_labels(vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.label(1), "b");
    }
}
