//! Built-in oracle catalog and seeded instance generators.

pub mod basic;
pub mod concave;
pub mod entropy;
pub mod lattice;
pub mod mean_risk;
pub mod random;

pub use basic::{Coverage, GraphCut, Modular};
pub use concave::{Concave, ConcaveOfLinear};
pub use entropy::{joint_entropy, synthetic_raw, Column, MutualInfo, RawReadings, ReadingsTable};
pub use lattice::AdInfluence;
pub use mean_risk::{omega_from_confidence, MeanRiskSpec};
pub use random::{
    gen_random_instance, random_bisubmodular, random_concave, random_ksubmodular,
    random_submodular, GenKind, GenParams, GeneratedInstance,
};
