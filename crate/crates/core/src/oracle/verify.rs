//! Exhaustive property checkers for the submodularity classes.
//!
//! Value tables are filled first, then admissible pairs are scanned in
//! parallel. `find_first` keeps the reported counterexample independent of
//! thread scheduling.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::points::{KPoint, LatticePoint, SetPoint, TernaryPoint};
use super::value::{BisetOracle, KSetOracle, LatticeOracle, SetOracle};
use crate::error::{GsoError, Result};

/// Absolute slack for every function-value inequality.
pub const VERIFY_TOL: f64 = 1e-9;

/// Default cap on the number of domain points a checker will enumerate.
pub const DEFAULT_DOMAIN_CAP: u64 = 8192;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PropertyKind {
    /// `f(X) + f(Y) >= f(X ∩ Y) + f(X ∪ Y)`.
    Submodular,
    /// `ρ_i(X) >= ρ_i(Y)` for `X ⊆ Y`, `i ∉ Y`.
    DiminishingReturns,
    Monotone,
    KSubmodular,
    Bisubmodular,
    DrLattice,
}

impl PropertyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PropertyKind::Submodular => "submodular",
            PropertyKind::DiminishingReturns => "diminishing_returns",
            PropertyKind::Monotone => "monotone",
            PropertyKind::KSubmodular => "k_submodular",
            PropertyKind::Bisubmodular => "bisubmodular",
            PropertyKind::DrLattice => "dr_lattice",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "submodular" => PropertyKind::Submodular,
            "diminishing_returns" | "diminishing-returns" => PropertyKind::DiminishingReturns,
            "monotone" => PropertyKind::Monotone,
            "k_submodular" | "k-submodular" => PropertyKind::KSubmodular,
            "bisubmodular" => PropertyKind::Bisubmodular,
            "dr_lattice" | "dr-lattice" => PropertyKind::DrLattice,
            other => return Err(GsoError::UnknownKind(other.to_string())),
        })
    }
}

/// Box `0 <= x <= upper` on which lattice oracles are checked. Integer
/// coordinates step by 1; continuous ones by `upper_i / continuous_steps`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeBox {
    pub upper: Vec<f64>,
    pub integer_mask: Vec<bool>,
    pub continuous_steps: usize,
}

impl LatticeBox {
    pub fn new(upper: Vec<f64>, integer_mask: Vec<bool>) -> Result<Self> {
        if upper.len() != integer_mask.len() {
            return Err(GsoError::DimensionMismatch {
                expected: integer_mask.len(),
                got: upper.len(),
            });
        }
        for (i, &u) in upper.iter().enumerate() {
            if !(u >= 0.0) || !u.is_finite() {
                return Err(GsoError::EntryOutOfRange {
                    index: i,
                    value: u,
                    lo: 0.0,
                    hi: f64::INFINITY,
                });
            }
        }
        Ok(LatticeBox {
            upper,
            integer_mask,
            continuous_steps: 4,
        })
    }

    fn grid(&self) -> Vec<Vec<f64>> {
        self.upper
            .iter()
            .zip(&self.integer_mask)
            .map(|(&u, &int)| {
                if int {
                    (0..=u.floor() as usize).map(|v| v as f64).collect()
                } else if u == 0.0 {
                    vec![0.0]
                } else {
                    let s = self.continuous_steps.max(1);
                    (0..=s).map(|j| u * j as f64 / s as f64).collect()
                }
            })
            .collect()
    }
}

pub enum OracleRef<'a> {
    Set(&'a SetOracle),
    KSet(&'a KSetOracle),
    Biset(&'a BisetOracle),
    Lattice(&'a LatticeOracle, &'a LatticeBox),
}

impl OracleRef<'_> {
    fn label(&self) -> &'static str {
        match self {
            OracleRef::Set(_) => "set",
            OracleRef::KSet(_) => "k-set",
            OracleRef::Biset(_) => "biset",
            OracleRef::Lattice(..) => "lattice",
        }
    }
}

/// A violating configuration: `lhs >= rhs` was expected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub points: Vec<String>,
    pub lhs: f64,
    pub rhs: f64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: expected {} >= {}",
            self.points.join(", "),
            self.lhs,
            self.rhs
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
    /// Number of domain points enumerated.
    pub domain_size: u64,
}

impl Verdict {
    fn pass(domain_size: u64) -> Self {
        Verdict {
            holds: true,
            witness: None,
            domain_size,
        }
    }

    fn fail(domain_size: u64, w: Witness) -> Self {
        Verdict {
            holds: false,
            witness: Some(w),
            domain_size,
        }
    }
}

fn cap_check(what: &str, size: u128, cap: u64) -> Result<()> {
    if size > cap as u128 {
        return Err(GsoError::CapExceeded {
            what: what.to_string(),
            size,
            cap: cap as u128,
        });
    }
    Ok(())
}

fn fmt_set(n: usize, mask: usize) -> String {
    let items: Vec<String> = (0..n)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

fn fmt_codes(codes: &[u8], k: usize) -> String {
    let parts: Vec<String> = (1..=k)
        .map(|q| {
            let items: Vec<String> = codes
                .iter()
                .enumerate()
                .filter(|(_, &c)| c as usize == q)
                .map(|(i, _)| (i + 1).to_string())
                .collect();
            format!("{{{}}}", items.join(","))
        })
        .collect();
    format!("({})", parts.join(","))
}

/// Exhaustively checks `kind` for `f`. `cap` bounds the number of domain
/// points (2^n, (k+1)^n, 3^n or the lattice grid size).
pub fn verify_property(f: OracleRef<'_>, kind: PropertyKind, cap: u64) -> Result<Verdict> {
    let unsupported = |f: &OracleRef<'_>| GsoError::UnsupportedProperty {
        property: kind.as_str(),
        oracle: f.label(),
    };
    match (&f, kind) {
        (OracleRef::Set(g), PropertyKind::Submodular) => set_submodular(g, cap),
        (OracleRef::Set(g), PropertyKind::DiminishingReturns) => set_diminishing(g, cap),
        (OracleRef::Set(g), PropertyKind::Monotone) => set_monotone(g, cap),
        (OracleRef::Set(g), PropertyKind::KSubmodular) => set_submodular(g, cap),
        (OracleRef::KSet(g), PropertyKind::KSubmodular) => {
            let t = KTable::build(g.n(), g.k(), cap, |p| g.value(p))?;
            Ok(t.k_submodular())
        }
        (OracleRef::KSet(g), PropertyKind::Bisubmodular) if g.k() == 2 => {
            let t = KTable::build(g.n(), 2, cap, |p| g.value(p))?;
            Ok(t.k_submodular())
        }
        (OracleRef::KSet(g), PropertyKind::Submodular) if g.k() == 1 => {
            let t = KTable::build(g.n(), 1, cap, |p| g.value(p))?;
            Ok(t.k_submodular())
        }
        (OracleRef::KSet(g), PropertyKind::Monotone) => {
            let t = KTable::build(g.n(), g.k(), cap, |p| g.value(p))?;
            Ok(t.monotone())
        }
        (OracleRef::Biset(g), PropertyKind::Bisubmodular | PropertyKind::KSubmodular) => {
            let t = KTable::build(g.n(), 2, cap, |p| {
                g.value(&TernaryPoint::from_kpoint(p).expect("k = 2"))
            })?;
            Ok(t.k_submodular())
        }
        (OracleRef::Biset(g), PropertyKind::Monotone) => {
            let t = KTable::build(g.n(), 2, cap, |p| {
                g.value(&TernaryPoint::from_kpoint(p).expect("k = 2"))
            })?;
            Ok(t.monotone())
        }
        (OracleRef::Lattice(g, b), PropertyKind::DrLattice) => lattice_dr(g, b, cap),
        (OracleRef::Lattice(g, b), PropertyKind::Submodular) => lattice_submodular(g, b, cap),
        (OracleRef::Lattice(g, b), PropertyKind::Monotone) => lattice_monotone(g, b, cap),
        _ => Err(unsupported(&f)),
    }
}

fn set_table(f: &SetOracle, cap: u64) -> Result<Vec<f64>> {
    let n = f.n();
    if n >= 63 {
        return Err(GsoError::CapExceeded {
            what: "set domain".into(),
            size: u128::MAX,
            cap: cap as u128,
        });
    }
    cap_check("set domain", 1u128 << n, cap)?;
    Ok((0..1usize << n)
        .into_par_iter()
        .map(|m| f.value(&SetPoint::from_mask(n, m as u64)))
        .collect())
}

fn set_submodular(f: &SetOracle, cap: u64) -> Result<Verdict> {
    let n = f.n();
    let t = set_table(f, cap)?;
    let d = t.len();
    let hit = (0..d).into_par_iter().find_first(|&a| {
        (a + 1..d).any(|b| t[a] + t[b] < t[a & b] + t[a | b] - VERIFY_TOL)
    });
    Ok(match hit {
        None => Verdict::pass(d as u64),
        Some(a) => {
            let b = (a + 1..d)
                .find(|&b| t[a] + t[b] < t[a & b] + t[a | b] - VERIFY_TOL)
                .expect("found in parallel scan");
            Verdict::fail(
                d as u64,
                Witness {
                    points: vec![format!("X={}", fmt_set(n, a)), format!("Y={}", fmt_set(n, b))],
                    lhs: t[a] + t[b],
                    rhs: t[a & b] + t[a | b],
                },
            )
        }
    })
}

fn set_diminishing(f: &SetOracle, cap: u64) -> Result<Verdict> {
    let n = f.n();
    let t = set_table(f, cap)?;
    let d = t.len();
    let check = |y: usize| -> Option<(usize, usize)> {
        let mut x = y;
        loop {
            for i in 0..n {
                if y >> i & 1 == 0 {
                    let bit = 1 << i;
                    let lhs = t[x | bit] - t[x];
                    let rhs = t[y | bit] - t[y];
                    if lhs < rhs - VERIFY_TOL {
                        return Some((x, i));
                    }
                }
            }
            if x == 0 {
                break;
            }
            x = (x - 1) & y;
        }
        None
    };
    let hit = (0..d).into_par_iter().find_first(|&y| check(y).is_some());
    Ok(match hit {
        None => Verdict::pass(d as u64),
        Some(y) => {
            let (x, i) = check(y).expect("found in parallel scan");
            let bit = 1 << i;
            Verdict::fail(
                d as u64,
                Witness {
                    points: vec![
                        format!("X={}", fmt_set(n, x)),
                        format!("Y={}", fmt_set(n, y)),
                        format!("i={}", i + 1),
                    ],
                    lhs: t[x | bit] - t[x],
                    rhs: t[y | bit] - t[y],
                },
            )
        }
    })
}

fn set_monotone(f: &SetOracle, cap: u64) -> Result<Verdict> {
    let n = f.n();
    let t = set_table(f, cap)?;
    let d = t.len();
    for x in 0..d {
        for i in 0..n {
            let y = x | 1 << i;
            if y != x && t[y] < t[x] - VERIFY_TOL {
                return Ok(Verdict::fail(
                    d as u64,
                    Witness {
                        points: vec![format!("X={}", fmt_set(n, x)), format!("Y={}", fmt_set(n, y))],
                        lhs: t[y],
                        rhs: t[x],
                    },
                ));
            }
        }
    }
    Ok(Verdict::pass(d as u64))
}

/// Values of a k-set function indexed by the base-(k+1) code of the point.
struct KTable {
    n: usize,
    k: usize,
    base: usize,
    values: Vec<f64>,
}

impl KTable {
    fn build<F>(n: usize, k: usize, cap: u64, f: F) -> Result<Self>
    where
        F: Fn(&KPoint) -> f64 + Sync,
    {
        let base = k + 1;
        let size = (base as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        cap_check("k-set domain", size, cap)?;
        let d = size as usize;
        let values = (0..d)
            .into_par_iter()
            .map(|idx| {
                let codes = decode(idx, n, base);
                f(&KPoint::from_codes(k, codes).expect("codes within range"))
            })
            .collect();
        Ok(KTable { n, k, base, values })
    }

    fn meet_join(&self, a: usize, b: usize) -> (usize, usize) {
        let (mut a, mut b) = (a, b);
        let mut meet = 0;
        let mut join = 0;
        let mut scale = 1;
        for _ in 0..self.n {
            let ca = a % self.base;
            let cb = b % self.base;
            a /= self.base;
            b /= self.base;
            let m = if ca == cb { ca } else { 0 };
            let j = if ca == 0 {
                cb
            } else if cb == 0 || cb == ca {
                ca
            } else {
                0
            };
            meet += m * scale;
            join += j * scale;
            scale *= self.base;
        }
        (meet, join)
    }

    fn k_submodular(&self) -> Verdict {
        let d = self.values.len();
        let t = &self.values;
        let bad = |a: usize, b: usize| {
            let (m, j) = self.meet_join(a, b);
            t[a] + t[b] < t[m] + t[j] - VERIFY_TOL
        };
        let hit = (0..d)
            .into_par_iter()
            .find_first(|&a| (a + 1..d).any(|b| bad(a, b)));
        match hit {
            None => Verdict::pass(d as u64),
            Some(a) => {
                let b = (a + 1..d).find(|&b| bad(a, b)).expect("found in parallel scan");
                let (m, j) = self.meet_join(a, b);
                Verdict::fail(
                    d as u64,
                    Witness {
                        points: vec![
                            format!("X={}", fmt_codes(&decode(a, self.n, self.base), self.k)),
                            format!("Y={}", fmt_codes(&decode(b, self.n, self.base), self.k)),
                        ],
                        lhs: t[a] + t[b],
                        rhs: t[m] + t[j],
                    },
                )
            }
        }
    }

    fn monotone(&self) -> Verdict {
        let d = self.values.len();
        let t = &self.values;
        for x in 0..d {
            let codes = decode(x, self.n, self.base);
            let mut scale = 1;
            for i in 0..self.n {
                if codes[i] == 0 {
                    for q in 1..=self.k {
                        let y = x + q * scale;
                        if t[y] < t[x] - VERIFY_TOL {
                            return Verdict::fail(
                                d as u64,
                                Witness {
                                    points: vec![
                                        format!("X={}", fmt_codes(&codes, self.k)),
                                        format!(
                                            "Y={}",
                                            fmt_codes(&decode(y, self.n, self.base), self.k)
                                        ),
                                    ],
                                    lhs: t[y],
                                    rhs: t[x],
                                },
                            );
                        }
                    }
                }
                scale *= self.base;
            }
        }
        Verdict::pass(d as u64)
    }
}

fn decode(mut idx: usize, n: usize, base: usize) -> Vec<u8> {
    let mut codes = Vec::with_capacity(n);
    for _ in 0..n {
        codes.push((idx % base) as u8);
        idx /= base;
    }
    codes
}

struct Grid {
    axes: Vec<Vec<f64>>,
    strides: Vec<usize>,
    values: Vec<f64>,
}

impl Grid {
    fn build(f: &LatticeOracle, b: &LatticeBox, cap: u64) -> Result<Self> {
        if b.upper.len() != f.origin().dim() {
            return Err(GsoError::DimensionMismatch {
                expected: f.origin().dim(),
                got: b.upper.len(),
            });
        }
        let axes = b.grid();
        let mut size: u128 = 1;
        for a in &axes {
            size = size.saturating_mul(a.len() as u128);
        }
        cap_check("lattice grid", size, cap)?;
        let mut strides = Vec::with_capacity(axes.len());
        let mut s = 1;
        for a in &axes {
            strides.push(s);
            s *= a.len();
        }
        let d = size as usize;
        let mask = b.integer_mask.clone();
        let values = (0..d)
            .into_par_iter()
            .map(|idx| {
                let vals = Grid::coords_of(&axes, idx);
                f.value(&LatticePoint {
                    vals,
                    integer_mask: mask.clone(),
                })
            })
            .collect();
        Ok(Grid {
            axes,
            strides,
            values,
        })
    }

    fn coords_of(axes: &[Vec<f64>], mut idx: usize) -> Vec<f64> {
        axes.iter()
            .map(|a| {
                let v = a[idx % a.len()];
                idx /= a.len();
                v
            })
            .collect()
    }

    fn digits(&self, mut idx: usize) -> Vec<usize> {
        self.axes
            .iter()
            .map(|a| {
                let v = idx % a.len();
                idx /= a.len();
                v
            })
            .collect()
    }

    fn describe(&self, idx: usize) -> String {
        let c: Vec<String> = Grid::coords_of(&self.axes, idx)
            .iter()
            .map(|v| format!("{}", v))
            .collect();
        format!("({})", c.join(","))
    }

    /// Every grid index componentwise below `y`, `y` included.
    fn below(&self, y: usize) -> Vec<usize> {
        let dy = self.digits(y);
        let mut out = vec![0usize];
        for (i, &lim) in dy.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (lim + 1));
            for &base in &out {
                for v in 0..=lim {
                    next.push(base + v * self.strides[i]);
                }
            }
            out = next;
        }
        out
    }
}

fn lattice_dr(f: &LatticeOracle, b: &LatticeBox, cap: u64) -> Result<Verdict> {
    let g = Grid::build(f, b, cap)?;
    let d = g.values.len();
    let t = &g.values;
    let dims = g.axes.len();
    let check = |y: usize| -> Option<(usize, usize)> {
        let dy = g.digits(y);
        for x in g.below(y) {
            for i in 0..dims {
                if dy[i] + 1 >= g.axes[i].len() {
                    continue;
                }
                let s = g.strides[i];
                let lhs = t[x + s] - t[x];
                let rhs = t[y + s] - t[y];
                if lhs < rhs - VERIFY_TOL {
                    return Some((x, i));
                }
            }
        }
        None
    };
    let hit = (0..d).into_par_iter().find_first(|&y| check(y).is_some());
    Ok(match hit {
        None => Verdict::pass(d as u64),
        Some(y) => {
            let (x, i) = check(y).expect("found in parallel scan");
            let s = g.strides[i];
            Verdict::fail(
                d as u64,
                Witness {
                    points: vec![
                        format!("x={}", g.describe(x)),
                        format!("y={}", g.describe(y)),
                        format!("i={}", i + 1),
                    ],
                    lhs: t[x + s] - t[x],
                    rhs: t[y + s] - t[y],
                },
            )
        }
    })
}

fn lattice_submodular(f: &LatticeOracle, b: &LatticeBox, cap: u64) -> Result<Verdict> {
    let g = Grid::build(f, b, cap)?;
    let d = g.values.len();
    let t = &g.values;
    let meet_join = |a: usize, c: usize| {
        let da = g.digits(a);
        let dc = g.digits(c);
        let mut m = 0;
        let mut j = 0;
        for i in 0..da.len() {
            m += da[i].min(dc[i]) * g.strides[i];
            j += da[i].max(dc[i]) * g.strides[i];
        }
        (m, j)
    };
    let bad = |a: usize, c: usize| {
        let (m, j) = meet_join(a, c);
        t[a] + t[c] < t[m] + t[j] - VERIFY_TOL
    };
    let hit = (0..d)
        .into_par_iter()
        .find_first(|&a| (a + 1..d).any(|c| bad(a, c)));
    Ok(match hit {
        None => Verdict::pass(d as u64),
        Some(a) => {
            let c = (a + 1..d).find(|&c| bad(a, c)).expect("found in parallel scan");
            let (m, j) = meet_join(a, c);
            Verdict::fail(
                d as u64,
                Witness {
                    points: vec![format!("x={}", g.describe(a)), format!("y={}", g.describe(c))],
                    lhs: t[a] + t[c],
                    rhs: t[m] + t[j],
                },
            )
        }
    })
}

fn lattice_monotone(f: &LatticeOracle, b: &LatticeBox, cap: u64) -> Result<Verdict> {
    let g = Grid::build(f, b, cap)?;
    let d = g.values.len();
    let t = &g.values;
    for x in 0..d {
        let dx = g.digits(x);
        for i in 0..dx.len() {
            if dx[i] + 1 < g.axes[i].len() {
                let y = x + g.strides[i];
                if t[y] < t[x] - VERIFY_TOL {
                    return Ok(Verdict::fail(
                        d as u64,
                        Witness {
                            points: vec![format!("x={}", g.describe(x)), format!("y={}", g.describe(y))],
                            lhs: t[y],
                            rhs: t[x],
                        },
                    ));
                }
            }
        }
    }
    Ok(Verdict::pass(d as u64))
}

/// Radical-inverse Halton sequence in `[0,1)^dims`.
fn halton(index: usize, dims: usize) -> Vec<f64> {
    const PRIMES: [usize; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    (0..dims)
        .map(|d| {
            let base = PRIMES[d % PRIMES.len()];
            let mut f = 1.0;
            let mut r = 0.0;
            let mut i = index;
            while i > 0 {
                f /= base as f64;
                r += f * (i % base) as f64;
                i /= base;
            }
            r
        })
        .collect()
}

pub const HESSIAN_TOL: f64 = 1e-6;

/// Checks that every Hessian entry of `f` is nonpositive (up to `tol`) at
/// `samples` quasi-random points of the box, using central differences
/// with step `step`.
pub fn hessian_dr_check(
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    lo: &[f64],
    hi: &[f64],
    samples: usize,
    step: f64,
    tol: f64,
) -> Result<Verdict> {
    if lo.len() != hi.len() {
        return Err(GsoError::DimensionMismatch {
            expected: lo.len(),
            got: hi.len(),
        });
    }
    if !(step > 0.0) {
        return Err(GsoError::InvalidArgument("step must be positive".into()));
    }
    let dims = lo.len();
    for i in 0..dims {
        if hi[i] - lo[i] <= 2.0 * step {
            return Err(GsoError::InvalidArgument(format!(
                "box side {} is too narrow for step {}",
                i + 1,
                step
            )));
        }
    }
    let eval = |x: &[f64]| -> Result<f64> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(GsoError::Numerical(format!("non-finite value at {:?}", x)))
        }
    };
    let h = step;
    for s in 0..samples {
        let u = halton(s + 1, dims);
        let x: Vec<f64> = (0..dims)
            .map(|i| lo[i] + h + u[i] * (hi[i] - lo[i] - 2.0 * h))
            .collect();
        let fx = eval(&x)?;
        for i in 0..dims {
            for j in i..dims {
                let entry = if i == j {
                    let mut p = x.clone();
                    p[i] += h;
                    let mut m = x.clone();
                    m[i] -= h;
                    (eval(&p)? - 2.0 * fx + eval(&m)?) / (h * h)
                } else {
                    let shift = |di: f64, dj: f64| {
                        let mut p = x.clone();
                        p[i] += di;
                        p[j] += dj;
                        eval(&p)
                    };
                    (shift(h, h)? - shift(h, -h)? - shift(-h, h)? + shift(-h, -h)?) / (4.0 * h * h)
                };
                if entry > tol {
                    return Ok(Verdict::fail(
                        samples as u64,
                        Witness {
                            points: vec![
                                format!("x={:?}", x),
                                format!("entry=({},{})", i + 1, j + 1),
                            ],
                            lhs: 0.0,
                            rhs: entry,
                        },
                    ));
                }
            }
        }
    }
    Ok(Verdict::pass(samples as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cut2() -> SetOracle {
        SetOracle::new(SetPoint::empty(2), |x: &SetPoint| {
            if x.contains(0) != x.contains(1) {
                1.0
            } else {
                0.0
            }
        })
    }

    #[test]
    fn modular_is_submodular() {
        let f = SetOracle::new(SetPoint::empty(4), |x: &SetPoint| {
            x.items().iter().map(|&i| i as f64 - 1.5).sum()
        });
        for k in [PropertyKind::Submodular, PropertyKind::DiminishingReturns] {
            assert!(verify_property(OracleRef::Set(&f), k, 1 << 10).unwrap().holds);
        }
    }

    #[test]
    fn graph_cut_is_not_monotone() {
        let f = cut2();
        let v = verify_property(OracleRef::Set(&f), PropertyKind::Monotone, 1024).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!(w.points, vec!["X={1}".to_string(), "Y={1,2}".to_string()]);
        assert!(verify_property(OracleRef::Set(&f), PropertyKind::Submodular, 1024).unwrap().holds);
    }

    #[test]
    fn supermodular_fails_both_forms() {
        let f = SetOracle::new(SetPoint::empty(3), |x: &SetPoint| {
            (x.cardinality() * x.cardinality()) as f64
        });
        assert!(!verify_property(OracleRef::Set(&f), PropertyKind::Submodular, 1024).unwrap().holds);
        assert!(
            !verify_property(OracleRef::Set(&f), PropertyKind::DiminishingReturns, 1024)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn cap_is_enforced() {
        let f = SetOracle::new(SetPoint::empty(5), |_| 0.0);
        assert!(matches!(
            verify_property(OracleRef::Set(&f), PropertyKind::Submodular, 16),
            Err(GsoError::CapExceeded { .. })
        ));
    }

    #[test]
    fn unsupported_pairing() {
        let f = SetOracle::new(SetPoint::empty(2), |_| 0.0);
        assert!(matches!(
            verify_property(OracleRef::Set(&f), PropertyKind::Bisubmodular, 16),
            Err(GsoError::UnsupportedProperty { .. })
        ));
    }

    #[test]
    fn meet_and_join_on_codes() {
        let t = KTable {
            n: 3,
            k: 2,
            base: 3,
            values: vec![0.0; 27],
        };
        // X = ({1},{2},{}) -> codes [1,2,0]; Y = ({2},{},{3}?) use codes [2,2,1]
        let a = 1 + 2 * 3;
        let b = 2 + 2 * 3 + 9;
        let (m, j) = t.meet_join(a, b);
        assert_eq!(decode(m, 3, 3), vec![0, 2, 0]);
        assert_eq!(decode(j, 3, 3), vec![0, 2, 1]);
    }

    #[test]
    fn weighted_count_is_k_submodular_and_monotone() {
        let f = KSetOracle::new(KPoint::empty(3, 2), |x: &KPoint| {
            x.component_size(0) as f64 + 2.0 * x.component_size(1) as f64
        });
        assert!(verify_property(OracleRef::KSet(&f), PropertyKind::KSubmodular, 1024).unwrap().holds);
        assert!(verify_property(OracleRef::KSet(&f), PropertyKind::Monotone, 1024).unwrap().holds);
    }

    #[test]
    fn hessian_examples() {
        let dr = |x: &[f64]| -x[0] * x[0] - 13.0 * x[0] * x[1] + 50.0 * x[0] + 30.0 * x[1];
        let v = hessian_dr_check(&dr, &[0.0, 0.0], &[5.0, 5.0], 64, 1e-3, HESSIAN_TOL).unwrap();
        assert!(v.holds);
        let bad = |x: &[f64]| x[0] * x[1];
        let v = hessian_dr_check(&bad, &[0.0, 0.0], &[1.0, 1.0], 8, 1e-3, HESSIAN_TOL).unwrap();
        assert!(!v.holds);
        assert!((v.witness.unwrap().rhs - 1.0).abs() < 1e-3);
    }

    #[test]
    fn lattice_checks_on_concave_sum() {
        let f = LatticeOracle::new(
            LatticePoint::integral(vec![0.0, 0.0]).unwrap(),
            |p: &LatticePoint| (p.vals[0] + p.vals[1]).sqrt(),
        );
        let b = LatticeBox::new(vec![3.0, 3.0], vec![true, true]).unwrap();
        for k in [PropertyKind::DrLattice, PropertyKind::Submodular, PropertyKind::Monotone] {
            assert!(verify_property(OracleRef::Lattice(&f, &b), k, 1024).unwrap().holds);
        }
        let g = LatticeOracle::new(
            LatticePoint::integral(vec![0.0, 0.0]).unwrap(),
            |p: &LatticePoint| p.vals[0] * p.vals[1],
        );
        assert!(
            !verify_property(OracleRef::Lattice(&g, &b), PropertyKind::DrLattice, 1024)
                .unwrap()
                .holds
        );
    }
}
