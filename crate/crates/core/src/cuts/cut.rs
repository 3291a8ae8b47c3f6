use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GsoError, Result};
use crate::milp::LinearConstraint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Extended polymatroid inequality.
    Epi,
    /// Separation inequality (equal weights, cardinality cap).
    Si,
    /// Approximate lifted inequality.
    Ali,
    /// Exactly lifted EPI.
    Lepi,
    /// Submodular (hypograph) inequality for maximization.
    Submax,
    /// k-submodular inequality.
    Ksub,
    /// Extremal poly-bimatroid inequality.
    Epbm,
    /// Mixed-integer rounding cut on a monotone forest.
    Mir,
    /// Big-M no-good cut, valid for any bounded function.
    Nogood,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Epi,
        Family::Si,
        Family::Ali,
        Family::Lepi,
        Family::Submax,
        Family::Ksub,
        Family::Epbm,
        Family::Mir,
        Family::Nogood,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Epi => "EPI",
            Family::Si => "SI",
            Family::Ali => "ALI",
            Family::Lepi => "LEPI",
            Family::Submax => "SUBMAX",
            Family::Ksub => "KSUB",
            Family::Epbm => "EPBM",
            Family::Mir => "MIR",
            Family::Nogood => "NOGOOD",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| GsoError::UnknownKind(s.to_string()))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// `w ≥ πᵀx + β`.
    Epigraph,
    /// `w ≤ πᵀx + β`.
    Hypograph,
    /// `πᵀx ≤ β`, no `w`.
    PureX,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Epigraph => "epigraph",
            Orientation::Hypograph => "hypograph",
            Orientation::PureX => "pure-x",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "epigraph" => Ok(Orientation::Epigraph),
            "hypograph" => Ok(Orientation::Hypograph),
            "pure-x" => Ok(Orientation::PureX),
            other => Err(GsoError::UnknownKind(other.to_string())),
        }
    }
}

/// A linear inequality in `(x, w)` with a unit `w` coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub orientation: Orientation,
    pub pi: Vec<f64>,
    pub beta: f64,
    pub family: Family,
    pub provenance: String,
}

impl Cut {
    pub fn new(
        orientation: Orientation,
        pi: Vec<f64>,
        beta: f64,
        family: Family,
        provenance: impl Into<String>,
    ) -> Self {
        Cut {
            orientation,
            pi,
            beta,
            family,
            provenance: provenance.into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.pi.len()
    }

    /// `πᵀx + β` (for pure-x cuts, just `πᵀx`).
    pub fn affine(&self, x: &[f64]) -> f64 {
        let dot: f64 = self.pi.iter().zip(x).map(|(p, v)| p * v).sum();
        match self.orientation {
            Orientation::PureX => dot,
            _ => dot + self.beta,
        }
    }

    /// Amount by which `(x, w)` violates the cut; nonpositive when satisfied.
    /// `w` is ignored for pure-x cuts.
    pub fn violation(&self, x: &[f64], w: f64) -> f64 {
        let a = self.affine(x);
        match self.orientation {
            Orientation::Epigraph => a - w,
            Orientation::Hypograph => w - a,
            Orientation::PureX => a - self.beta,
        }
    }

    /// The cut as a model row over variables `x_vars` (and `w_var` unless
    /// pure-x).
    pub fn to_constraint(&self, x_vars: &[usize], w_var: Option<usize>) -> Result<LinearConstraint> {
        if x_vars.len() != self.pi.len() {
            return Err(GsoError::DimensionMismatch {
                expected: self.pi.len(),
                got: x_vars.len(),
            });
        }
        let mut coeffs: Vec<(usize, f64)> = Vec::with_capacity(self.pi.len() + 1);
        match self.orientation {
            Orientation::PureX => {
                coeffs.extend(x_vars.iter().zip(&self.pi).filter(|(_, &p)| p != 0.0).map(|(&j, &p)| (j, p)));
                Ok(LinearConstraint::le(coeffs, self.beta))
            }
            o => {
                let w = w_var.ok_or_else(|| {
                    GsoError::InvalidArgument("cut needs an epigraph variable".into())
                })?;
                coeffs.push((w, 1.0));
                coeffs.extend(
                    x_vars.iter().zip(&self.pi).filter(|(_, &p)| p != 0.0).map(|(&j, &p)| (j, -p)),
                );
                Ok(if o == Orientation::Epigraph {
                    LinearConstraint::ge(coeffs, self.beta)
                } else {
                    LinearConstraint::le(coeffs, self.beta)
                })
            }
        }
    }

    /// `family; orientation; beta; pi_1 … pi_d; provenance`.
    pub fn to_line(&self) -> String {
        let pi: Vec<String> = self.pi.iter().map(|v| format!("{:?}", v)).collect();
        format!(
            "{}; {}; {:?}; {}; {}",
            self.family,
            self.orientation.as_str(),
            self.beta,
            pi.join(" "),
            self.provenance
        )
    }

    pub fn from_line(line: &str, line_no: usize) -> Result<Self> {
        let err = |m: String| GsoError::Parse {
            line: line_no,
            message: m,
        };
        let parts: Vec<&str> = line.splitn(5, ';').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(err("expected five `;`-separated fields".into()));
        }
        let family = Family::parse(parts[0]).map_err(|e| err(e.to_string()))?;
        let orientation = Orientation::parse(parts[1]).map_err(|e| err(e.to_string()))?;
        let beta: f64 = parts[2]
            .parse()
            .map_err(|_| err(format!("bad constant `{}`", parts[2])))?;
        let pi = parts[3]
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| err(format!("bad coefficient `{}`", t))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Cut::new(orientation, pi, beta, family, parts[4]))
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = String::new();
        for (j, &p) in self.pi.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let sign = if p < 0.0 { "-" } else { "+" };
            if terms.is_empty() {
                terms = format!("{}{:.6} x{}", if p < 0.0 { "-" } else { "" }, p.abs(), j + 1);
            } else {
                terms.push_str(&format!(" {} {:.6} x{}", sign, p.abs(), j + 1));
            }
        }
        if terms.is_empty() {
            terms.push('0');
        }
        match self.orientation {
            Orientation::Epigraph => write!(f, "w >= {} + {:.6}", terms, self.beta),
            Orientation::Hypograph => write!(f, "w <= {} + {:.6}", terms, self.beta),
            Orientation::PureX => write!(f, "{} <= {:.6}", terms, self.beta),
        }
    }
}

/// Ordered cut collection, deduplicated on `(family, provenance)`.
#[derive(Clone, Debug, Default)]
pub struct CutPool {
    cuts: Vec<Cut>,
    seen: HashSet<(Family, String)>,
}

impl CutPool {
    pub fn new() -> Self {
        CutPool::default()
    }

    /// Adds `cut` unless one with the same family and provenance is present.
    pub fn add(&mut self, cut: Cut) -> bool {
        if self.seen.insert((cut.family, cut.provenance.clone())) {
            self.cuts.push(cut);
            true
        } else {
            false
        }
    }

    pub fn contains(&self, family: Family, provenance: &str) -> bool {
        self.seen.contains(&(family, provenance.to_string()))
    }

    /// Merges `other` in its order; returns how many cuts were new.
    pub fn merge(&mut self, other: impl IntoIterator<Item = Cut>) -> usize {
        other.into_iter().filter(|c| self.add(c.clone())).count()
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn cuts(&self) -> &[Cut] {
        &self.cuts
    }

    pub fn counts_by_family(&self) -> BTreeMap<Family, usize> {
        let mut m = BTreeMap::new();
        for c in &self.cuts {
            *m.entry(c.family).or_insert(0) += 1;
        }
        m
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.cuts {
            s.push_str(&c.to_line());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut pool = CutPool::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            pool.add(Cut::from_line(line, i + 1)?);
        }
        Ok(pool)
    }
}

/// `perm=5,2,3` style tag with 1-based items.
pub(crate) fn perm_tag(order: &[usize]) -> String {
    let items: Vec<String> = order.iter().map(|i| (i + 1).to_string()).collect();
    items.join(",")
}

/// `{1,4}` style tag with 1-based items.
pub(crate) fn set_tag(items: &[usize]) -> String {
    let items: Vec<String> = items.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Cut {
        Cut::new(Orientation::Epigraph, vec![2.0, 1.0 / 3.0], 0.25, Family::Epi, "perm=1,2")
    }

    #[test]
    fn line_roundtrip_is_exact() {
        let c = sample();
        let back = Cut::from_line(&c.to_line(), 1).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn violation_signs() {
        let c = sample();
        assert!((c.violation(&[1.0, 0.0], 2.0) - 0.25).abs() < 1e-15);
        let h = Cut::new(Orientation::Hypograph, vec![1.0], 0.0, Family::Submax, "S={}");
        assert_eq!(h.violation(&[1.0], 3.0), 2.0);
        let m = Cut::new(Orientation::PureX, vec![-1.0, 2.5], -3.0, Family::Mir, "psi=1");
        assert_eq!(m.violation(&[0.0, 0.0], 0.0), 3.0);
    }

    #[test]
    fn pool_dedups_on_family_and_provenance() {
        let mut p = CutPool::new();
        assert!(p.add(sample()));
        assert!(!p.add(sample()));
        let mut other = sample();
        other.family = Family::Ali;
        assert!(p.add(other));
        assert_eq!(p.len(), 2);
        let back = CutPool::from_text(&p.to_text()).unwrap();
        assert_eq!(back.cuts(), p.cuts());
        assert_eq!(p.counts_by_family()[&Family::Epi], 1);
    }

    #[test]
    fn constraint_rows() {
        let c = sample();
        let row = c.to_constraint(&[0, 1], Some(2)).unwrap();
        assert_eq!(row.coeffs, vec![(2, 1.0), (0, -2.0), (1, -1.0 / 3.0)]);
        assert_eq!(row.rhs, 0.25);
        assert!(c.to_constraint(&[0, 1], None).is_err());
    }
}
