use serde::{Deserialize, Serialize};

use crate::error::{GsoError, Result};
use crate::oracle::{SetOracle, SetPoint};

/// Univariate concave functions used as `g` in `g(aᵀx)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Concave {
    Linear { slope: f64 },
    Sqrt,
    Log1p,
    /// `t^p` for `0 < p <= 1`.
    Power { p: f64 },
    /// Linear interpolation through `points` (sorted by `t`), extended with
    /// the outermost slopes.
    PiecewiseLinear { points: Vec<[f64; 2]> },
    Scaled { factor: f64, inner: Box<Concave> },
    Sum { terms: Vec<Concave> },
}

impl Concave {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Concave::Linear { slope } => slope * t,
            Concave::Sqrt => t.max(0.0).sqrt(),
            Concave::Log1p => t.ln_1p(),
            Concave::Power { p } => t.max(0.0).powf(*p),
            Concave::PiecewiseLinear { points } => pwl_eval(points, t),
            Concave::Scaled { factor, inner } => factor * inner.eval(t),
            Concave::Sum { terms } => terms.iter().map(|g| g.eval(t)).sum(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Concave::Power { p } if !(*p > 0.0 && *p <= 1.0) => Err(GsoError::InvalidArgument(
                format!("power exponent {} must lie in (0, 1]", p),
            )),
            Concave::PiecewiseLinear { points } => {
                if points.is_empty() {
                    return Err(GsoError::InvalidArgument("piecewise-linear g needs a point".into()));
                }
                let mut last_slope = f64::INFINITY;
                for w in points.windows(2) {
                    let dt = w[1][0] - w[0][0];
                    if !(dt > 0.0) {
                        return Err(GsoError::InvalidArgument(
                            "piecewise-linear breakpoints must increase".into(),
                        ));
                    }
                    let s = (w[1][1] - w[0][1]) / dt;
                    if s > last_slope + 1e-12 {
                        return Err(GsoError::InvalidArgument(
                            "piecewise-linear slopes must not increase".into(),
                        ));
                    }
                    last_slope = s;
                }
                Ok(())
            }
            Concave::Scaled { factor, inner } => {
                if *factor < 0.0 {
                    return Err(GsoError::InvalidArgument("scale factor must be nonnegative".into()));
                }
                inner.validate()
            }
            Concave::Sum { terms } => terms.iter().try_for_each(Concave::validate),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Concave::Linear { slope } => format!("linear({})", slope),
            Concave::Sqrt => "sqrt".into(),
            Concave::Log1p => "log1p".into(),
            Concave::Power { p } => format!("pow({})", p),
            Concave::PiecewiseLinear { points } => format!("pwl[{}]", points.len()),
            Concave::Scaled { factor, inner } => format!("{}*{}", factor, inner.name()),
            Concave::Sum { terms } => {
                let parts: Vec<String> = terms.iter().map(Concave::name).collect();
                parts.join("+")
            }
        }
    }
}

fn pwl_eval(points: &[[f64; 2]], t: f64) -> f64 {
    if points.len() == 1 {
        return points[0][1];
    }
    let seg = match points.iter().position(|p| p[0] >= t) {
        Some(0) => 0,
        Some(j) => j - 1,
        None => points.len() - 2,
    };
    let (a, b) = (points[seg], points[seg + 1]);
    a[1] + (b[1] - a[1]) * (t - a[0]) / (b[0] - a[0])
}

/// `F(x) = g(aᵀx)` with nonnegative weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcaveOfLinear {
    pub weights: Vec<f64>,
    pub g: Concave,
}

impl ConcaveOfLinear {
    pub fn new(weights: Vec<f64>, g: Concave) -> Result<Self> {
        for (i, &a) in weights.iter().enumerate() {
            if !(a >= 0.0) || !a.is_finite() {
                return Err(GsoError::EntryOutOfRange {
                    index: i,
                    value: a,
                    lo: 0.0,
                    hi: f64::INFINITY,
                });
            }
        }
        g.validate()?;
        if !g.eval(0.0).is_finite() {
            return Err(GsoError::InvalidArgument("g(0) must be finite".into()));
        }
        Ok(ConcaveOfLinear { weights, g })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
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
        let t: f64 = x
            .bits()
            .iter()
            .zip(&self.weights)
            .filter(|(&b, _)| b)
            .map(|(_, &a)| a)
            .sum();
        self.g.eval(t)
    }

    /// `g(t) - g(0)`.
    pub fn g0(&self, t: f64) -> f64 {
        self.g.eval(t) - self.g.eval(0.0)
    }

    pub fn oracle(&self) -> SetOracle {
        let me = self.clone();
        SetOracle::builder(SetPoint::empty(self.n()), move |x: &SetPoint| me.eval_unchecked(x))
            .name(format!("concave_of_linear[{}]", self.g.name()))
            .build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_weights() {
        let f = ConcaveOfLinear::new(vec![4.0, 100.0, 100.0, 100.0, 4.0, 4.0], Concave::Sqrt).unwrap();
        let x = SetPoint::from_items(6, &[1, 4]).unwrap();
        assert!((f.eval(&x).unwrap() - 104f64.sqrt()).abs() < 1e-12);
        assert_eq!(f.eval(&SetPoint::empty(6)).unwrap(), 0.0);
    }

    #[test]
    fn piecewise_linear() {
        let g = Concave::PiecewiseLinear {
            points: vec![[0.0, 0.0], [1.0, 2.0], [3.0, 3.0]],
        };
        g.validate().unwrap();
        assert_eq!(g.eval(0.5), 1.0);
        assert_eq!(g.eval(2.0), 2.5);
        assert_eq!(g.eval(5.0), 4.0);
        assert_eq!(g.eval(-1.0), -2.0);
        let bad = Concave::PiecewiseLinear {
            points: vec![[0.0, 0.0], [1.0, 1.0], [2.0, 3.0]],
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn negative_weight_rejected() {
        assert!(ConcaveOfLinear::new(vec![1.0, -1.0], Concave::Sqrt).is_err());
    }
}
