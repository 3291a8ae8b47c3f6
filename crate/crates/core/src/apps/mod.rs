//! Application solvers, each with an exhaustive-search baseline.

pub mod features;
pub mod portfolio;
pub mod search;
pub mod sensor;

pub use features::{feature_exhaustive, solve_feature_selection, FeatureInstance, FeatureMethod, FeatureOutcome};
pub use portfolio::{mean_risk_exhaustive, solve_mean_risk};
pub use search::{es_ccmin, es_ksets, es_sets, es_ternary, kset_count, EsResult, DEFAULT_ES_CAP};
pub use sensor::{
    for_each_placement, robust_exhaustive, sensor_exhaustive, solve_robust_coupled, solve_sensor_placement,
    RobustEs, RobustInstance, RobustOutcome, SensorInstance, SensorPlan, DEFAULT_OUTER_CAP,
};
