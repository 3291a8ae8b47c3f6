//! Point types, value oracles, continuous extensions and property checks.

pub mod lovasz;
pub mod points;
pub mod value;
pub mod verify;

pub use lovasz::{convex_closure_eval, lovasz_eval, lovasz_permutation, DEFAULT_CLOSURE_CAP};
pub use points::{GroundSet, KPoint, LatticePoint, Permutation, SetPoint, TernaryPoint};
pub use value::{
    k_marginal_return, marginal_return, BisetOracle, KSetOracle, LatticeOracle, OracleBuilder,
    Point, SetOracle, ValueOracle,
};
pub use verify::{
    hessian_dr_check, verify_property, LatticeBox, OracleRef, PropertyKind, Verdict, Witness,
    DEFAULT_DOMAIN_CAP, HESSIAN_TOL, VERIFY_TOL,
};
