//! End-to-end evaluation: characterize, score, size redundancy.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::characterization::characterize;
use crate::error::EngineError;
use crate::merit::{self, Metric, QuadrantPoint, QuadrantReport, RankingTable, F2_DISPLAY_FACTOR};
use crate::model::{
    validate_composite, validate_profile, CharacterizationVector, CompositeAccess,
    EvaluationResult, Param, ParamValue, PreferenceWeights, RequirementsProfile,
};
use crate::redundancy::min_redundancy;

/// Scores an already characterized vector.
pub fn evaluate_vector(
    name: &str,
    vector: CharacterizationVector,
    req: &RequirementsProfile,
    w: &PreferenceWeights,
) -> Result<EvaluationResult, EngineError> {
    let violations = validate_profile(req, w);
    if !violations.is_empty() {
        return Err(EngineError::Profile(violations));
    }
    let contributions = merit::contributions(&vector, req, w);
    let f1 = merit::f1_from(&contributions, w);
    let denominator = merit::cost_denominator(&contributions);
    let f2 = (denominator != 0.0).then(|| f1 / denominator);
    let redundancy = min_redundancy(&vector, req);
    Ok(EvaluationResult {
        name: name.to_string(),
        vector,
        contributions,
        f1,
        f2,
        f2_pct_per_keur: f2.map(|x| x * F2_DISPLAY_FACTOR),
        redundancy,
    })
}

pub fn evaluate(
    scenario: &CompositeAccess,
    req: &RequirementsProfile,
    w: &PreferenceWeights,
) -> Result<EvaluationResult, EngineError> {
    let violations = validate_composite(scenario);
    if !violations.is_empty() {
        return Err(EngineError::Invalid(violations));
    }
    let profile = validate_profile(req, w);
    if !profile.is_empty() {
        return Err(EngineError::Profile(profile));
    }
    let vector = characterize(scenario, req)?;
    evaluate_vector(&scenario.name, vector, req, w)
}

/// Quadrant input taken from evaluated results: the chosen merit figure
/// against first-year cost.
pub fn quadrant_points(results: &[EvaluationResult], metric: Metric) -> Vec<QuadrantPoint> {
    results
        .iter()
        .map(|r| QuadrantPoint {
            name: r.name.clone(),
            f: match metric {
                Metric::F1 => r.f1,
                // A missing F2 is never favorable.
                Metric::F2 => r.f2.unwrap_or(f64::NEG_INFINITY),
            },
            cost: r.vector.cost_first_year,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareReport {
    pub ranking: RankingTable,
    pub quadrant: QuadrantReport,
    /// Per-parameter values aligned with `ranking.rows`; flags as 1/0,
    /// `null` for `na` and for a payback that never happens.
    pub series: BTreeMap<Param, Vec<Option<f64>>>,
}

pub fn compare_scenarios(
    scenarios: &[CompositeAccess],
    req: &RequirementsProfile,
    w: &PreferenceWeights,
    metric: Metric,
) -> Result<CompareReport, EngineError> {
    let results = scenarios
        .iter()
        .map(|s| evaluate(s, req, w))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(compare_results(&results, metric))
}

pub fn compare_results(results: &[EvaluationResult], metric: Metric) -> CompareReport {
    let ranking = merit::compare(results, metric);
    let quadrant = merit::quadrant_classify(&quadrant_points(results, metric));
    let series = Param::ALL
        .iter()
        .map(|p| {
            let values = ranking
                .rows
                .iter()
                .map(|row| match row.vector.value(*p) {
                    ParamValue::Number(n) => Some(n),
                    ParamValue::Flag(f) => match f {
                        crate::model::TriState::True => Some(1.0),
                        crate::model::TriState::False => Some(0.0),
                        crate::model::TriState::Na => None,
                    },
                    ParamValue::Never => None,
                })
                .collect();
            (*p, values)
        })
        .collect();
    CompareReport {
        ranking,
        quadrant,
        series,
    }
}
