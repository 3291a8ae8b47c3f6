use serde::{Deserialize, Serialize};

use crate::error::{GsoError, Result};
use crate::oracle::{SetOracle, SetPoint};

/// `f(X) = Σ_{i∈X} a_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Modular {
    pub weights: Vec<f64>,
}

impl Modular {
    pub fn new(weights: Vec<f64>) -> Self {
        Modular { weights }
    }

    pub fn eval(&self, x: &SetPoint) -> f64 {
        x.bits()
            .iter()
            .zip(&self.weights)
            .filter(|(&b, _)| b)
            .map(|(_, &a)| a)
            .sum()
    }

    pub fn oracle(&self) -> SetOracle {
        let me = self.clone();
        SetOracle::builder(SetPoint::empty(self.weights.len()), move |x: &SetPoint| me.eval(x))
            .name("modular")
            .build()
    }
}

/// Set coverage: `|∪_{i∈X} A_i|` over a finite universe of element ids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub sets: Vec<Vec<usize>>,
}

impl Coverage {
    pub fn new(mut sets: Vec<Vec<usize>>) -> Self {
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
        }
        Coverage { sets }
    }

    pub fn n(&self) -> usize {
        self.sets.len()
    }

    pub fn eval(&self, x: &SetPoint) -> Result<f64> {
        if x.len() != self.n() {
            return Err(GsoError::DimensionMismatch {
                expected: self.n(),
                got: x.len(),
            });
        }
        Ok(self.count(x))
    }

    fn count(&self, x: &SetPoint) -> f64 {
        let mut covered: Vec<usize> = x
            .items()
            .into_iter()
            .flat_map(|i| self.sets[i].iter().copied())
            .collect();
        covered.sort_unstable();
        covered.dedup();
        covered.len() as f64
    }

    pub fn oracle(&self) -> SetOracle {
        let me = self.clone();
        SetOracle::builder(SetPoint::empty(self.n()), move |x: &SetPoint| me.count(x))
            .name("coverage")
            .build()
    }
}

/// Cut function of a capacitated digraph: total capacity of arcs leaving `X`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphCut {
    pub n: usize,
    pub arcs: Vec<(usize, usize, f64)>,
}

impl GraphCut {
    pub fn new(n: usize, arcs: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(from, to, c) in &arcs {
            if from >= n || to >= n {
                return Err(GsoError::IndexOutOfRange {
                    index: from.max(to),
                    len: n,
                });
            }
            if !(c >= 0.0) {
                return Err(GsoError::NegativeCapacity {
                    from,
                    to,
                    capacity: c,
                });
            }
        }
        Ok(GraphCut { n, arcs })
    }

    /// Each edge `{i, j}` becomes the two arcs `(i, j)` and `(j, i)`.
    pub fn undirected(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let arcs = edges
            .iter()
            .flat_map(|&(i, j, c)| [(i, j, c), (j, i, c)])
            .collect();
        GraphCut::new(n, arcs)
    }

    pub fn eval(&self, x: &SetPoint) -> Result<f64> {
        if x.len() != self.n {
            return Err(GsoError::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.cut(x))
    }

    fn cut(&self, x: &SetPoint) -> f64 {
        self.arcs
            .iter()
            .filter(|&&(i, j, _)| x.contains(i) && !x.contains(j))
            .map(|&(_, _, c)| c)
            .sum()
    }

    pub fn oracle(&self) -> SetOracle {
        let me = self.clone();
        SetOracle::builder(SetPoint::empty(self.n), move |x: &SetPoint| me.cut(x))
            .name("graph_cut")
            .build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coverage_values() {
        let c = Coverage::new(vec![vec![1, 2], vec![2, 3]]);
        assert_eq!(c.eval(&SetPoint::empty(2)).unwrap(), 0.0);
        assert_eq!(c.eval(&SetPoint::full(2)).unwrap(), 3.0);
    }

    #[test]
    fn cut_values() {
        let g = GraphCut::undirected(2, &[(0, 1, 1.0)]).unwrap();
        let vals: Vec<f64> = (0..4).map(|m| g.eval(&SetPoint::from_mask(2, m)).unwrap()).collect();
        assert_eq!(vals, vec![0.0, 1.0, 1.0, 0.0]);
        let d = GraphCut::new(2, vec![(0, 1, 1.0)]).unwrap();
        assert_eq!(d.eval(&SetPoint::from_bits(vec![true, false])).unwrap(), 1.0);
        assert_eq!(d.eval(&SetPoint::full(2)).unwrap(), 0.0);
    }

    #[test]
    fn negative_capacity() {
        assert!(matches!(
            GraphCut::new(2, vec![(0, 1, -0.5)]),
            Err(GsoError::NegativeCapacity { from: 0, to: 1, .. })
        ));
    }
}
