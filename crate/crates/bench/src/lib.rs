//! Fixed instances shared by the benchmarks.

use gso_core::apps::SensorInstance;
use gso_core::functions::{Concave, ConcaveOfLinear, MeanRiskSpec, ReadingsTable};
use gso_core::functions::random_submodular;
use gso_core::SetOracle;

pub fn submodular(n: usize) -> SetOracle {
    random_submodular(n, 7)
}

/// Weights `1..=n`, `g = √·`.
pub fn concave(n: usize) -> ConcaveOfLinear {
    ConcaveOfLinear::new((1..=n).map(|i| i as f64).collect(), Concave::Sqrt).expect("valid weights")
}

pub fn mean_risk(n: usize, k: usize) -> MeanRiskSpec {
    let mu = (0..n).map(|i| 0.1 + 0.05 * (i % 7) as f64).collect();
    let a = (0..n).map(|i| 0.02 + 0.03 * (i % 5) as f64).collect();
    MeanRiskSpec::new(mu, a, 1.645, k).expect("valid spec")
}

/// `n` locations, two types, 100 rows.
pub fn sensor(n: usize, bins: u16, caps: usize) -> SensorInstance {
    let t = ReadingsTable::synthetic(n, 2, 100, bins, 3).expect("positive dimensions");
    SensorInstance::new(t, vec![caps, caps]).expect("two caps")
}
