use serde::{Deserialize, Serialize};

use crate::error::{GsoError, Result};
use crate::oracle::{LatticeOracle, LatticePoint};

/// Advertisement influence `f(x) = Σ_t [1 − Π_i (1 − p_it)^{x_i}]`, where
/// `x_i` is the number of ads placed on medium `i` and `p_it` the chance
/// one ad on `i` reaches target `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdInfluence {
    /// `p[i][t]`, one row per medium.
    pub p: Vec<Vec<f64>>,
}

impl AdInfluence {
    pub fn new(p: Vec<Vec<f64>>) -> Result<Self> {
        let targets = p.first().map(Vec::len).unwrap_or(0);
        for row in &p {
            if row.len() != targets {
                return Err(GsoError::DimensionMismatch {
                    expected: targets,
                    got: row.len(),
                });
            }
            for (t, &v) in row.iter().enumerate() {
                if !(0.0..1.0).contains(&v) {
                    return Err(GsoError::EntryOutOfRange {
                        index: t,
                        value: v,
                        lo: 0.0,
                        hi: 1.0,
                    });
                }
            }
        }
        Ok(AdInfluence { p })
    }

    pub fn media(&self) -> usize {
        self.p.len()
    }

    pub fn targets(&self) -> usize {
        self.p.first().map(Vec::len).unwrap_or(0)
    }

    /// Smooth evaluation at any real `x ≥ 0`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.media() {
            return Err(GsoError::DimensionMismatch {
                expected: self.media(),
                got: x.len(),
            });
        }
        if let Some((i, &v)) = x.iter().enumerate().find(|(_, &v)| !(v >= 0.0)) {
            return Err(GsoError::EntryOutOfRange {
                index: i,
                value: v,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        (0..self.targets())
            .map(|t| {
                let miss: f64 = self
                    .p
                    .iter()
                    .zip(x)
                    .map(|(row, &xi)| (1.0 - row[t]).powf(xi))
                    .product();
                1.0 - miss
            })
            .sum()
    }

    /// Oracle over integer ad counts.
    pub fn oracle(&self) -> LatticeOracle {
        let me = self.clone();
        let origin = LatticePoint::integral(vec![0.0; self.media()]).expect("zeros are integral");
        LatticeOracle::builder(origin, move |x: &LatticePoint| me.eval_unchecked(&x.vals))
            .name("ad_influence")
            .build()
    }
}
