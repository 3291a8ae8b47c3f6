use serde::{Deserialize, Serialize};

use super::search::{es_ksets, EsResult};
use crate::dcg::{dcg_max_ksub, dcg_max_ksub_nogood, DcgConfig, DcgReport};
use crate::error::{GsoError, Result};
use crate::functions::MutualInfo;
use crate::milp::Sense;
use crate::oracle::{verify_property, KPoint, KSetOracle, OracleRef, PropertyKind};

/// Coupled feature selection: pick `S₁` (at most `caps[0]` features) and
/// disjoint `S₂` (at most `caps[1]`) to maximize `I(S; C)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureInstance {
    pub mi: MutualInfo,
    pub caps: [usize; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureMethod {
    /// k-submodular inequalities; used when the oracle passed the
    /// exhaustive 2-submodularity check.
    Ksub,
    /// No-good cuts; exact for any function.
    Nogood,
}

impl FeatureMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            FeatureMethod::Ksub => "ksub",
            FeatureMethod::Nogood => "nogood",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FeatureOutcome {
    pub selection: KPoint,
    pub value: f64,
    pub method: FeatureMethod,
    /// `Some(holds)` when the 2-submodularity check ran.
    pub checked: Option<bool>,
    pub report: DcgReport,
}

impl FeatureInstance {
    pub fn oracle(&self) -> KSetOracle {
        self.mi.oracle().as_kset()
    }

    /// `ln R`: `I(S; C) ≤ H(S) ≤ ln R` for `R` rows.
    pub fn upper_bound(&self) -> f64 {
        (self.mi.class1.rows().max(1) as f64).ln()
    }
}

/// Uses k-submodular cuts only when the oracle is verified 2-submodular
/// (needs `3ⁿ ≤ verify_cap`); otherwise falls back to no-good cuts.
pub fn solve_feature_selection(inst: &FeatureInstance, cfg: &DcgConfig, verify_cap: u64) -> Result<FeatureOutcome> {
    let f = inst.oracle();
    let n = f.n();
    let checked = if 3u128.checked_pow(n as u32).is_some_and(|s| s <= verify_cap as u128) {
        Some(verify_property(OracleRef::KSet(&f), PropertyKind::KSubmodular, verify_cap)?.holds)
    } else {
        None
    };
    let (method, report) = if checked == Some(true) {
        (FeatureMethod::Ksub, dcg_max_ksub(&f, &inst.caps, &[], cfg)?)
    } else {
        (
            FeatureMethod::Nogood,
            dcg_max_ksub_nogood(&f, inst.upper_bound(), &inst.caps, &[], cfg)?,
        )
    };
    let selection = KPoint::from_binary(n, 2, &report.x, 1e-6)
        .ok_or_else(|| GsoError::Numerical("solver returned no selection".into()))?;
    Ok(FeatureOutcome {
        selection,
        value: report.value,
        method,
        checked,
        report,
    })
}

pub fn feature_exhaustive(inst: &FeatureInstance, cap: u128) -> Result<EsResult> {
    es_ksets(&inst.oracle(), Sense::Maximize, &inst.caps, &[], cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apps::search::DEFAULT_ES_CAP;
    use crate::functions::ReadingsTable;
    use crate::oracle::DEFAULT_DOMAIN_CAP;

    fn instance(seed: u64, caps: [usize; 2]) -> FeatureInstance {
        let t = ReadingsTable::synthetic(6, 1, 60, 3, seed).unwrap();
        FeatureInstance {
            mi: MutualInfo::from_table(&t, 0, 1).unwrap(),
            caps,
        }
    }

    #[test]
    fn zero_caps() {
        let out = solve_feature_selection(&instance(1, [0, 0]), &DcgConfig::default(), DEFAULT_DOMAIN_CAP).unwrap();
        assert_eq!(out.value, 0.0);
    }

    #[test]
    fn matches_enumeration() {
        for seed in 0..4 {
            let inst = instance(seed, [2, 1]);
            let out = solve_feature_selection(&inst, &DcgConfig::default(), DEFAULT_DOMAIN_CAP).unwrap();
            let es = feature_exhaustive(&inst, DEFAULT_ES_CAP).unwrap();
            assert!(out.report.is_optimal());
            assert_eq!(out.value, es.value, "seed {}", seed);
        }
    }

    #[test]
    fn duplicate_of_class_wins_single_slot() {
        let t = ReadingsTable::synthetic(5, 1, 80, 4, 7).unwrap();
        let mut mi = MutualInfo::from_table(&t, 0, 1).unwrap();
        mi.features[2] = mi.class1.clone();
        let inst = FeatureInstance { mi, caps: [1, 0] };
        let out = solve_feature_selection(&inst, &DcgConfig::default(), DEFAULT_DOMAIN_CAP).unwrap();
        assert_eq!(out.selection.type_of(2), Some(0));
    }
}
