//! Empirical entropies over discretized readings tables.
//!
//! Probabilities are row frequencies and logarithms are natural. Counts are
//! summed in sorted order so results do not depend on row order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{GsoError, Result};
use crate::oracle::{BisetOracle, KPoint, KSetOracle, TernaryPoint};

/// One discretized column: cells are bin ids in `[0, bins)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub bins: u16,
    pub cells: Vec<u16>,
}

impl Column {
    pub fn new(bins: u16, cells: Vec<u16>) -> Result<Self> {
        if bins == 0 {
            return Err(GsoError::InvalidArgument("column needs at least one bin".into()));
        }
        if let Some((i, &c)) = cells.iter().enumerate().find(|(_, &c)| c >= bins) {
            return Err(GsoError::EntryOutOfRange {
                index: i,
                value: c as f64,
                lo: 0.0,
                hi: (bins - 1) as f64,
            });
        }
        Ok(Column { bins, cells })
    }

    /// Equal-width discretization of raw values into `bins` bins.
    pub fn discretize(values: &[f64], bins: u16) -> Result<Self> {
        if bins == 0 {
            return Err(GsoError::InvalidArgument("column needs at least one bin".into()));
        }
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let width = hi - lo;
        let cells = values
            .iter()
            .map(|&v| {
                if !(width > 0.0) {
                    0
                } else {
                    (((v - lo) / width * bins as f64).floor() as i64).clamp(0, bins as i64 - 1) as u16
                }
            })
            .collect();
        Column::new(bins, cells)
    }

    pub fn rows(&self) -> usize {
        self.cells.len()
    }
}

fn bit_width(bins: u16) -> u32 {
    (u16::BITS - (bins.max(2) - 1).leading_zeros()).max(1)
}

/// Empirical joint entropy of the given columns (all of equal length).
pub fn joint_entropy(cols: &[&Column]) -> f64 {
    if cols.is_empty() {
        return 0.0;
    }
    let rows = cols[0].rows();
    if rows == 0 {
        return 0.0;
    }
    let total_bits: u32 = cols.iter().map(|c| bit_width(c.bins)).sum();
    let mut counts: Vec<u64> = Vec::new();
    if total_bits <= 128 {
        let mut keys: Vec<u128> = (0..rows)
            .map(|r| {
                let mut key = 0u128;
                for c in cols {
                    key = (key << bit_width(c.bins)) | c.cells[r] as u128;
                }
                key
            })
            .collect();
        keys.sort_unstable();
        run_lengths(&keys, &mut counts);
    } else {
        let mut keys: Vec<Vec<u16>> = (0..rows)
            .map(|r| cols.iter().map(|c| c.cells[r]).collect())
            .collect();
        keys.sort_unstable();
        run_lengths(&keys, &mut counts);
    }
    entropy_from_counts(&mut counts, rows)
}

fn run_lengths<T: PartialEq>(sorted: &[T], out: &mut Vec<u64>) {
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] != sorted[start] {
            out.push((i - start) as u64);
            start = i;
        }
    }
}

fn entropy_from_counts(counts: &mut [u64], rows: usize) -> f64 {
    counts.sort_unstable();
    let r = rows as f64;
    let s: f64 = counts.iter().map(|&c| c as f64 * (c as f64).ln()).sum();
    (r.ln() - s / r).max(0.0)
}

/// Readings indexed by (location, measurement type).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct ReadingsTable {
    location_ids: Vec<String>,
    type_names: Vec<String>,
    columns: Vec<Column>,
    /// `(location, type)` of each column.
    keys: Vec<(usize, usize)>,
    index: Vec<Option<usize>>,
    rows: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawTable {
    location_ids: Vec<String>,
    type_names: Vec<String>,
    columns: Vec<RawColumn>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawColumn {
    location: usize,
    mtype: usize,
    bins: u16,
    cells: Vec<u16>,
}

impl TryFrom<RawTable> for ReadingsTable {
    type Error = GsoError;

    fn try_from(raw: RawTable) -> Result<Self> {
        let cols = raw
            .columns
            .into_iter()
            .map(|c| Ok(((c.location, c.mtype), Column::new(c.bins, c.cells)?)))
            .collect::<Result<Vec<_>>>()?;
        ReadingsTable::new(raw.location_ids, raw.type_names, cols)
    }
}

impl From<ReadingsTable> for RawTable {
    fn from(t: ReadingsTable) -> Self {
        RawTable {
            location_ids: t.location_ids,
            type_names: t.type_names,
            columns: t
                .keys
                .iter()
                .zip(t.columns)
                .map(|(&(location, mtype), c)| RawColumn {
                    location,
                    mtype,
                    bins: c.bins,
                    cells: c.cells,
                })
                .collect(),
        }
    }
}

impl ReadingsTable {
    pub fn new(
        location_ids: Vec<String>,
        type_names: Vec<String>,
        columns: Vec<((usize, usize), Column)>,
    ) -> Result<Self> {
        let nl = location_ids.len();
        let nt = type_names.len();
        if nl == 0 || nt == 0 {
            return Err(GsoError::InvalidArgument(
                "readings table needs at least one location and one type".into(),
            ));
        }
        let rows = columns.first().map(|(_, c)| c.rows()).unwrap_or(0);
        let mut index = vec![None; nl * nt];
        let mut keys = Vec::with_capacity(columns.len());
        let mut cols = Vec::with_capacity(columns.len());
        for (pos, ((l, t), c)) in columns.into_iter().enumerate() {
            if l >= nl {
                return Err(GsoError::IndexOutOfRange { index: l, len: nl });
            }
            if t >= nt {
                return Err(GsoError::TypeOutOfRange { q: t, k: nt });
            }
            if c.rows() != rows {
                return Err(GsoError::DimensionMismatch {
                    expected: rows,
                    got: c.rows(),
                });
            }
            if index[l * nt + t].is_some() {
                return Err(GsoError::InvalidArgument(format!(
                    "duplicate column for location {}, type {}",
                    location_ids[l], type_names[t]
                )));
            }
            index[l * nt + t] = Some(pos);
            keys.push((l, t));
            cols.push(c);
        }
        Ok(ReadingsTable {
            location_ids,
            type_names,
            columns: cols,
            keys,
            index,
            rows,
        })
    }

    pub fn n_locations(&self) -> usize {
        self.location_ids.len()
    }

    pub fn n_types(&self) -> usize {
        self.type_names.len()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn location_ids(&self) -> &[String] {
        &self.location_ids
    }

    pub fn type_names(&self) -> &[String] {
        &self.type_names
    }

    pub fn columns(&self) -> impl Iterator<Item = ((usize, usize), &Column)> {
        self.keys.iter().copied().zip(self.columns.iter())
    }

    pub fn column(&self, location: usize, mtype: usize) -> Result<&Column> {
        if location >= self.n_locations() || mtype >= self.n_types() {
            return Err(GsoError::MissingColumn { location, mtype });
        }
        self.index[location * self.n_types() + mtype]
            .map(|p| &self.columns[p])
            .ok_or(GsoError::MissingColumn { location, mtype })
    }

    /// Keeps only the listed locations, in the given order.
    pub fn select_locations(&self, locations: &[usize]) -> Result<Self> {
        let mut cols = Vec::new();
        for (new_l, &l) in locations.iter().enumerate() {
            for t in 0..self.n_types() {
                if let Ok(c) = self.column(l, t) {
                    cols.push(((new_l, t), c.clone()));
                }
            }
        }
        let ids = locations
            .iter()
            .map(|&l| {
                self.location_ids
                    .get(l)
                    .cloned()
                    .ok_or(GsoError::IndexOutOfRange {
                        index: l,
                        len: self.n_locations(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        ReadingsTable::new(ids, self.type_names.clone(), cols)
    }

    /// Reorders rows: row `r` of the result is row `perm[r]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.rows {
            return Err(GsoError::DimensionMismatch {
                expected: self.rows,
                got: perm.len(),
            });
        }
        let mut out = self.clone();
        for c in &mut out.columns {
            c.cells = perm.iter().map(|&r| c.cells[r]).collect();
        }
        Ok(out)
    }

    /// Joint entropy of the readings selected by `s`: type `q` at every
    /// location assigned `q`.
    pub fn entropy(&self, s: &KPoint) -> Result<f64> {
        let mut cols = Vec::new();
        for i in 0..s.len() {
            if let Some(q) = s.type_of(i) {
                cols.push(self.column(i, q)?);
            }
        }
        Ok(joint_entropy(&cols))
    }

    /// Entropy as a `k`-set oracle over all locations with `k` = number of
    /// types. Every column must be present.
    pub fn entropy_oracle(&self) -> Result<KSetOracle> {
        for l in 0..self.n_locations() {
            for t in 0..self.n_types() {
                self.column(l, t)?;
            }
        }
        let me = self.clone();
        Ok(KSetOracle::builder(
            KPoint::empty(self.n_locations(), self.n_types()),
            move |s: &KPoint| me.entropy(s).expect("columns checked at construction"),
        )
        .name("entropy")
        .marginal_floor(0.0)
        .build())
    }

    /// Latent-factor synthetic readings, discretized into `bins` equal-width
    /// bins per column. Deterministic in `seed`.
    pub fn synthetic(
        n_locations: usize,
        n_types: usize,
        n_rows: usize,
        bins: u16,
        seed: u64,
    ) -> Result<Self> {
        if bins == 0 {
            return Err(GsoError::InvalidArgument(
                "synthetic readings need positive dimensions".into(),
            ));
        }
        synthetic_raw(n_locations, n_types, n_rows, seed)?.discretize(bins)
    }
}

/// Undiscretized readings: one column of raw values per `(location, type)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RawReadings {
    pub location_ids: Vec<String>,
    pub type_names: Vec<String>,
    pub columns: Vec<((usize, usize), Vec<f64>)>,
}

impl RawReadings {
    pub fn discretize(&self, bins: u16) -> Result<ReadingsTable> {
        let cols = self
            .columns
            .iter()
            .map(|(key, v)| Ok((*key, Column::discretize(v, bins)?)))
            .collect::<Result<Vec<_>>>()?;
        ReadingsTable::new(self.location_ids.clone(), self.type_names.clone(), cols)
    }
}

/// Correlated raw readings from a three-factor latent model.
pub fn synthetic_raw(n_locations: usize, n_types: usize, n_rows: usize, seed: u64) -> Result<RawReadings> {
    if n_locations == 0 || n_types == 0 || n_rows == 0 {
        return Err(GsoError::InvalidArgument(
            "synthetic readings need positive dimensions".into(),
        ));
    }
    const FACTORS: usize = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let latent: Vec<[f64; FACTORS]> = (0..n_rows)
        .map(|_| std::array::from_fn(|_| rng.sample(StandardNormal)))
        .collect();
    let mut columns = Vec::with_capacity(n_locations * n_types);
    for l in 0..n_locations {
        for t in 0..n_types {
            let load: [f64; FACTORS] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let noise = rng.random_range(0.2..1.0);
            let raw: Vec<f64> = latent
                .iter()
                .map(|z| {
                    let e: f64 = rng.sample(StandardNormal);
                    (0..FACTORS).map(|f| load[f] * z[f]).sum::<f64>() + noise * e
                })
                .collect();
            columns.push(((l, t), raw));
        }
    }
    Ok(RawReadings {
        location_ids: (0..n_locations).map(|l| (l + 1).to_string()).collect(),
        type_names: (0..n_types).map(|t| format!("t{}", t + 1)).collect(),
        columns,
    })
}

/// Coupled-feature informativeness
/// `I(S;C) = H(S₁ ∪ S₂) − Σ_{i∈S₁} H(i | C₁) − Σ_{j∈S₂} H(j | C₂)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MutualInfo {
    pub features: Vec<Column>,
    pub class1: Column,
    pub class2: Column,
}

impl MutualInfo {
    pub fn new(features: Vec<Column>, class1: Column, class2: Column) -> Result<Self> {
        let rows = class1.rows();
        for c in features.iter().chain([&class2]) {
            if c.rows() != rows {
                return Err(GsoError::DimensionMismatch {
                    expected: rows,
                    got: c.rows(),
                });
            }
        }
        Ok(MutualInfo {
            features,
            class1,
            class2,
        })
    }

    /// Features are the type-0 columns of `table` except the two class
    /// locations; classes are the type-0 columns at `c1` and `c2`.
    pub fn from_table(table: &ReadingsTable, c1: usize, c2: usize) -> Result<Self> {
        let mut features = Vec::new();
        for l in 0..table.n_locations() {
            if l != c1 && l != c2 {
                features.push(table.column(l, 0)?.clone());
            }
        }
        MutualInfo::new(
            features,
            table.column(c1, 0)?.clone(),
            table.column(c2, 0)?.clone(),
        )
    }

    pub fn n(&self) -> usize {
        self.features.len()
    }

    /// `H(i | C) = H(i, C) − H(C)`.
    pub fn conditional(&self, i: usize, class: &Column) -> f64 {
        joint_entropy(&[&self.features[i], class]) - joint_entropy(&[class])
    }

    pub fn eval(&self, s: &TernaryPoint) -> Result<f64> {
        if s.len() != self.n() {
            return Err(GsoError::DimensionMismatch {
                expected: self.n(),
                got: s.len(),
            });
        }
        Ok(self.eval_with(s, &self.conditionals()))
    }

    fn conditionals(&self) -> (Vec<f64>, Vec<f64>) {
        (
            (0..self.n()).map(|i| self.conditional(i, &self.class1)).collect(),
            (0..self.n()).map(|i| self.conditional(i, &self.class2)).collect(),
        )
    }

    fn eval_with(&self, s: &TernaryPoint, cond: &(Vec<f64>, Vec<f64>)) -> f64 {
        let cols: Vec<&Column> = (0..self.n())
            .filter(|&i| s.vals()[i] != 0)
            .map(|i| &self.features[i])
            .collect();
        let mut v = joint_entropy(&cols);
        for (i, &x) in s.vals().iter().enumerate() {
            match x {
                1 => v -= cond.0[i],
                -1 => v -= cond.1[i],
                _ => {}
            }
        }
        v
    }

    pub fn oracle(&self) -> BisetOracle {
        let me = self.clone();
        let cond = self.conditionals();
        BisetOracle::builder(TernaryPoint::zero(self.n()), move |s: &TernaryPoint| {
            me.eval_with(s, &cond)
        })
        .name("mutual_information")
        .build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(cells: &[u16]) -> Column {
        Column::new(4, cells.to_vec()).unwrap()
    }

    #[test]
    fn uniform_two_outcomes() {
        let c = col(&[0, 1, 0, 1, 1, 0]);
        assert!((joint_entropy(&[&c]) - 2f64.ln()).abs() < 1e-12);
        assert_eq!(joint_entropy(&[]), 0.0);
    }

    #[test]
    fn duplicate_columns_add_nothing() {
        let c = col(&[0, 1, 2, 1, 1, 3]);
        assert!((joint_entropy(&[&c, &c]) - joint_entropy(&[&c])).abs() < 1e-12);
    }

    #[test]
    fn wide_keys_fall_back() {
        let c = Column::new(u16::MAX, vec![0, 1, 2, 3, 4, 5, 6, 7]).unwrap();
        let many: Vec<&Column> = std::iter::repeat_n(&c, 10).collect();
        assert!((joint_entropy(&many) - 8f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn discretize_equal_width() {
        let c = Column::discretize(&[0.0, 0.24, 0.26, 0.5, 0.99, 1.0], 4).unwrap();
        assert_eq!(c.cells, vec![0, 0, 1, 2, 3, 3]);
        let flat = Column::discretize(&[2.0, 2.0], 4).unwrap();
        assert_eq!(flat.cells, vec![0, 0]);
    }

    #[test]
    fn missing_column() {
        let t = ReadingsTable::new(
            vec!["1".into(), "2".into()],
            vec!["a".into(), "b".into()],
            vec![((0, 0), col(&[0, 1])), ((1, 0), col(&[1, 1])), ((0, 1), col(&[0, 0]))],
        )
        .unwrap();
        let s = KPoint::from_codes(2, vec![0, 2]).unwrap();
        assert!(matches!(t.entropy(&s), Err(GsoError::MissingColumn { location: 1, mtype: 1 })));
        assert!(t.entropy_oracle().is_err());
    }

    #[test]
    fn mi_of_class_copy() {
        let c1 = col(&[0, 1, 2, 1, 0, 3]);
        let c2 = col(&[1, 1, 0, 0, 1, 0]);
        let other = col(&[3, 3, 1, 0, 2, 2]);
        let mi = MutualInfo::new(vec![c1.clone(), other], c1.clone(), c2).unwrap();
        assert_eq!(mi.eval(&TernaryPoint::zero(2)).unwrap(), 0.0);
        let s = TernaryPoint::from_vals(vec![1, 0]).unwrap();
        assert!((mi.eval(&s).unwrap() - joint_entropy(&[&c1])).abs() < 1e-12);
    }

    #[test]
    fn synthetic_is_deterministic() {
        let a = ReadingsTable::synthetic(4, 2, 50, 4, 9).unwrap();
        let b = ReadingsTable::synthetic(4, 2, 50, 4, 9).unwrap();
        let c = ReadingsTable::synthetic(4, 2, 50, 4, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn serde_roundtrip() {
        let a = ReadingsTable::synthetic(3, 2, 10, 4, 1).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        let b: ReadingsTable = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
