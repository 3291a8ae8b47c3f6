use super::search::{es_ccmin, EsResult};
use crate::dcg::{ccmin_branch_and_cut, DcgConfig, DcgReport};
use crate::error::Result;
use crate::functions::MeanRiskSpec;
use crate::milp::LinearConstraint;

/// Mean-risk selection by branch and cut on `−μᵀx + Ω√(aᵀx)`, `Σx ≤ k`.
pub fn solve_mean_risk(spec: &MeanRiskSpec, extra: &[LinearConstraint], cfg: &DcgConfig) -> Result<DcgReport> {
    let risk = spec.risk_part();
    let lin = spec.linear_part();
    ccmin_branch_and_cut(&risk, Some(&lin), spec.k, extra, cfg)
}

pub fn mean_risk_exhaustive(spec: &MeanRiskSpec, extra: &[LinearConstraint], cap: u128) -> Result<EsResult> {
    let risk = spec.risk_part();
    let lin = spec.linear_part();
    es_ccmin(&risk, Some(&lin), spec.k, extra, cap)
}
