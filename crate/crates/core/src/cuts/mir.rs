use super::cut::{Cut, Family, Orientation};
use super::epi::epi_separate;
use crate::error::{GsoError, Result};
use crate::oracle::{LatticeOracle, LatticePoint, SetOracle, SetPoint};

/// Directed rooted forest over `n + m` coordinates. An arc `(p, c)` from a
/// parent to a child encodes `x_p ≤ x_c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneForest {
    parent: Vec<Option<usize>>,
    integer: Vec<bool>,
    children: Vec<Vec<usize>>,
}

impl MonotoneForest {
    pub fn new(parent: Vec<Option<usize>>, integer: Vec<bool>) -> Result<Self> {
        let v = parent.len();
        if integer.len() != v {
            return Err(GsoError::DimensionMismatch {
                expected: v,
                got: integer.len(),
            });
        }
        let mut children = vec![Vec::new(); v];
        for (c, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= v {
                    return Err(GsoError::IndexOutOfRange { index: p, len: v });
                }
                if p == c {
                    return Err(GsoError::InvalidArgument(format!("vertex {} is its own parent", c + 1)));
                }
                children[p].push(c);
            }
        }
        // every vertex must reach a root
        for start in 0..v {
            let mut cur = start;
            let mut steps = 0;
            while let Some(p) = parent[cur] {
                cur = p;
                steps += 1;
                if steps > v {
                    return Err(GsoError::InvalidArgument("monotone forest contains a cycle".into()));
                }
            }
        }
        Ok(MonotoneForest {
            parent,
            integer,
            children,
        })
    }

    /// Builds the forest from arcs `(p, c)`, 0-based.
    pub fn from_arcs(vertices: usize, arcs: &[(usize, usize)], integer: Vec<bool>) -> Result<Self> {
        let mut parent = vec![None; vertices];
        for &(p, c) in arcs {
            if c >= vertices {
                return Err(GsoError::IndexOutOfRange { index: c, len: vertices });
            }
            if parent[c].is_some() {
                return Err(GsoError::InvalidArgument(format!(
                    "vertex {} has in-degree above one",
                    c + 1
                )));
            }
            parent[c] = Some(p);
        }
        MonotoneForest::new(parent, integer)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn is_integer(&self, v: usize) -> bool {
        self.integer[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|p| (p, c)))
            .collect()
    }

    /// Descendants of `v`, excluding `v`.
    pub fn descendants(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack: Vec<usize> = self.children[v].clone();
        while let Some(c) = stack.pop() {
            out.push(c);
            stack.extend(self.children[c].iter().copied());
        }
        out.sort_unstable();
        out
    }

    fn has_integer_descendant(&self, v: usize) -> bool {
        self.descendants(v).iter().any(|&d| self.integer[d])
    }
}

/// MIR cuts `−x_c − (u_ψ − x_ψ)/(u_ψ − ⌊u_ψ⌋) ≤ −⌈u_ψ⌉` for every `ψ` with
/// fractional `u_ψ` and an integer descendant, and every integer child `c`
/// of `ψ`. With `permissive`, continuous children that have integer
/// descendants are also used; those cuts are tagged `unverified`.
pub fn mir_generate(forest: &MonotoneForest, u: &[f64], permissive: bool) -> Result<Vec<Cut>> {
    let v = forest.len();
    if u.len() != v {
        return Err(GsoError::DimensionMismatch {
            expected: v,
            got: u.len(),
        });
    }
    if let Some((i, &b)) = u.iter().enumerate().find(|(_, &b)| !(b >= 0.0) || !b.is_finite()) {
        return Err(GsoError::EntryOutOfRange {
            index: i,
            value: b,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let mut cuts = Vec::new();
    for psi in 0..v {
        let up = u[psi];
        let frac = up - up.floor();
        if frac == 0.0 || !forest.has_integer_descendant(psi) {
            continue;
        }
        for &c in forest.children(psi) {
            let certified = forest.is_integer(c);
            if !certified && !(permissive && forest.has_integer_descendant(c)) {
                continue;
            }
            let mut pi = vec![0.0; v];
            pi[c] = -1.0;
            pi[psi] = 1.0 / frac;
            let beta = -up.ceil() + up / frac;
            let tag = if certified {
                format!("psi={} child={}", psi + 1, c + 1)
            } else {
                format!("psi={} child={} unverified", psi + 1, c + 1)
            };
            cuts.push(Cut::new(Orientation::PureX, pi, beta, Family::Mir, tag));
        }
    }
    Ok(cuts)
}

/// EPI separation for a lattice oracle restricted to the unit box with all
/// coordinates integral and no monotonicity arcs.
pub fn dr_binary_cut(
    f: &LatticeOracle,
    upper: &[f64],
    forest: Option<&MonotoneForest>,
    xbar: &[f64],
) -> Result<Cut> {
    let origin = f.origin();
    let n = origin.dim();
    if upper.len() != n {
        return Err(GsoError::DimensionMismatch {
            expected: n,
            got: upper.len(),
        });
    }
    if upper.iter().any(|&b| b != 1.0) || origin.integer_mask.iter().any(|&m| !m) {
        return Err(GsoError::InvalidArgument(
            "binary reduction needs unit upper bounds on integer coordinates".into(),
        ));
    }
    if forest.is_some_and(|fr| !fr.arcs().is_empty()) {
        return Err(GsoError::InvalidArgument(
            "binary reduction does not support monotonicity arcs".into(),
        ));
    }
    let lat = f.clone();
    let mask = origin.integer_mask.clone();
    let set = SetOracle::builder(SetPoint::empty(n), move |x: &SetPoint| {
        lat.value(&LatticePoint {
            vals: x.to_f64(),
            integer_mask: mask.clone(),
        })
    })
    .name(format!("{}|binary", f.name()))
    .build();
    epi_separate(&set, xbar)
}
