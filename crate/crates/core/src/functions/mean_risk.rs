use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::concave::{Concave, ConcaveOfLinear};
use crate::error::{GsoError, Result};
use crate::oracle::{SetOracle, SetPoint};

/// Cardinality-constrained mean-risk selection with diagonal covariance:
/// minimize `−μᵀx + Ω √(aᵀx)` subject to `Σx ≤ k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanRiskSpec {
    pub mu: Vec<f64>,
    pub a: Vec<f64>,
    pub omega: f64,
    pub k: usize,
}

/// `Ω = Φ⁻¹(β)` for a confidence level `β ∈ (0.5, 1)`.
pub fn omega_from_confidence(beta: f64) -> Result<f64> {
    if !(beta > 0.5 && beta < 1.0) {
        return Err(GsoError::InvalidArgument(format!(
            "confidence level {} must lie in (0.5, 1)",
            beta
        )));
    }
    let normal = Normal::standard();
    Ok(normal.inverse_cdf(beta))
}

impl MeanRiskSpec {
    pub fn new(mu: Vec<f64>, a: Vec<f64>, omega: f64, k: usize) -> Result<Self> {
        if mu.len() != a.len() {
            return Err(GsoError::DimensionMismatch {
                expected: mu.len(),
                got: a.len(),
            });
        }
        if let Some((i, &v)) = a.iter().enumerate().find(|(_, &v)| !(v >= 0.0)) {
            return Err(GsoError::EntryOutOfRange {
                index: i,
                value: v,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        if !(omega >= 0.0) {
            return Err(GsoError::InvalidArgument(format!("omega {} must be nonnegative", omega)));
        }
        if k == 0 || k > mu.len() {
            return Err(GsoError::InvalidArgument(format!(
                "cardinality cap {} must lie in 1..={}",
                k,
                mu.len()
            )));
        }
        Ok(MeanRiskSpec { mu, a, omega, k })
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn eval(&self, x: &SetPoint) -> Result<f64> {
        if x.len() != self.n() {
            return Err(GsoError::DimensionMismatch {
                expected: self.n(),
                got: x.len(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &SetPoint) -> f64 {
        let mut lin = 0.0;
        let mut var = 0.0;
        for (i, &b) in x.bits().iter().enumerate() {
            if b {
                lin += self.mu[i];
                var += self.a[i];
            }
        }
        -lin + self.omega * var.sqrt()
    }

    /// The concave part `Ω √(aᵀx)`.
    pub fn risk_part(&self) -> ConcaveOfLinear {
        ConcaveOfLinear {
            weights: self.a.clone(),
            g: Concave::Scaled {
                factor: self.omega,
                inner: Box::new(Concave::Sqrt),
            },
        }
    }

    /// The modular part `−μ`.
    pub fn linear_part(&self) -> Vec<f64> {
        self.mu.iter().map(|m| -m).collect()
    }

    pub fn oracle(&self) -> SetOracle {
        let me = self.clone();
        SetOracle::builder(SetPoint::empty(self.n()), move |x: &SetPoint| me.eval_unchecked(x))
            .name("mean_risk")
            .build()
    }
}
