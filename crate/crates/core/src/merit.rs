//! Normalization, figures of merit, rankings and quadrants.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{
    CharacterizationVector, Contribution, EvaluationResult, Param, ParamValue, PreferenceWeights,
    Range, RequirementsProfile,
};
use crate::redundancy::coded_flag;

/// Percent per thousand euro for an F2 expressed as fraction per euro.
pub const F2_DISPLAY_FACTOR: f64 = 1e5;

pub fn normalize(y: f64, range: Range) -> f64 {
    (y - range.u_min) / range.width()
}

/// Numeric value of a parameter on its range's scale. Flags are coded
/// true=1, false=0, na=u_min; a payback that never happens counts as u_max.
pub fn coded_value(value: ParamValue, range: Range) -> f64 {
    match value {
        ParamValue::Number(n) => n,
        ParamValue::Flag(f) => coded_flag(f, range.u_min),
        ParamValue::Never => range.u_max,
    }
}

/// Raw numeric value for cost terms; flags count as 0/1 and `na` as 0.
fn raw_value(value: ParamValue) -> f64 {
    match value {
        ParamValue::Number(n) => n,
        ParamValue::Flag(f) => coded_flag(f, 0.0),
        ParamValue::Never => 0.0,
    }
}

/// Weighted terms for every parameter carrying a nonzero weight.
pub fn contributions(
    v: &CharacterizationVector,
    req: &RequirementsProfile,
    w: &PreferenceWeights,
) -> BTreeMap<Param, Contribution> {
    let mut out = BTreeMap::new();
    for param in Param::ALL {
        let a = w.a_weight(param);
        let b = w.b_weight(param);
        if a == 0.0 && b == 0.0 {
            continue;
        }
        let value = v.value(param);
        let performance = match req.range(param) {
            Some(range) if a != 0.0 => a * normalize(coded_value(value, range), range),
            _ => 0.0,
        };
        let cost = b * raw_value(value);
        out.insert(param, Contribution { performance, cost });
    }
    out
}

pub fn f1_from(contributions: &BTreeMap<Param, Contribution>, w: &PreferenceWeights) -> f64 {
    let total: f64 = contributions.values().map(|c| c.performance).sum();
    total / w.positive_a_sum()
}

pub fn cost_denominator(contributions: &BTreeMap<Param, Contribution>) -> f64 {
    contributions.values().map(|c| c.cost).sum()
}

/// Weighted normalized performance. May be negative or exceed 1.
pub fn f1(v: &CharacterizationVector, req: &RequirementsProfile, w: &PreferenceWeights) -> f64 {
    f1_from(&contributions(v, req, w), w)
}

/// F1 per unit of weighted cost; `None` when the cost denominator is zero.
pub fn f2(v: &CharacterizationVector, req: &RequirementsProfile, w: &PreferenceWeights) -> Option<f64> {
    let c = contributions(v, req, w);
    let denominator = cost_denominator(&c);
    (denominator != 0.0).then(|| f1_from(&c, w) / denominator)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    F1,
    F2,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::F1 => "f1",
            Metric::F2 => "f2",
        })
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "f1" => Ok(Metric::F1),
            "f2" => Ok(Metric::F2),
            other => Err(format!("unknown metric '{other}' (expected f1 or f2)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankingRow {
    pub name: String,
    pub vector: CharacterizationVector,
    pub f1: f64,
    pub f2: Option<f64>,
    pub f2_pct_per_keur: Option<f64>,
    pub r: Option<u32>,
}

impl RankingRow {
    pub fn metric(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::F1 => Some(self.f1),
            Metric::F2 => self.f2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankingTable {
    pub metric: Metric,
    pub rows: Vec<RankingRow>,
}

/// Descending by metric, ties and missing values broken by name.
pub fn compare(results: &[EvaluationResult], metric: Metric) -> RankingTable {
    let mut rows: Vec<RankingRow> = results
        .iter()
        .map(|r| RankingRow {
            name: r.name.clone(),
            vector: r.vector.clone(),
            f1: r.f1,
            f2: r.f2,
            f2_pct_per_keur: r.f2_pct_per_keur,
            r: r.redundancy.r(),
        })
        .collect();
    rows.sort_by(|x, y| {
        let by_metric = match (x.metric(metric), y.metric(metric)) {
            (Some(a), Some(b)) => b.partial_cmp(&a).unwrap_or(Ordering::Equal),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        };
        by_metric.then_with(|| x.name.cmp(&y.name))
    });
    RankingTable { metric, rows }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadrantPoint {
    pub name: String,
    pub f: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrant {
    HighPerfLowCost,
    LowPerfLowCost,
    HighPerfHighCost,
    LowPerfHighCost,
    Discarded,
}

impl Quadrant {
    pub fn label(self) -> &'static str {
        match self {
            Quadrant::HighPerfLowCost => "+ performance, - cost",
            Quadrant::LowPerfLowCost => "- performance, - cost",
            Quadrant::HighPerfHighCost => "+ performance, + cost",
            Quadrant::LowPerfHighCost => "- performance, + cost",
            Quadrant::Discarded => "discarded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadrantReport {
    /// `None` when every point was discarded.
    pub f_threshold: Option<f64>,
    pub cost_threshold: Option<f64>,
    pub assignments: BTreeMap<String, Quadrant>,
}

impl QuadrantReport {
    pub fn members(&self, quadrant: Quadrant) -> Vec<&str> {
        self.assignments
            .iter()
            .filter(|(_, q)| **q == quadrant)
            .map(|(n, _)| n.as_str())
            .collect()
    }
}

fn midpoint<I: Iterator<Item = f64> + Clone>(values: I) -> f64 {
    let lo = values.clone().fold(f64::INFINITY, f64::min);
    let hi = values.fold(f64::NEG_INFINITY, f64::max);
    lo + (hi - lo) / 2.0
}

/// Splits points at the middle of the surviving ranges. Points with
/// non-positive merit are discarded; boundaries count as favorable.
pub fn quadrant_classify(points: &[QuadrantPoint]) -> QuadrantReport {
    let survivors: Vec<&QuadrantPoint> = points.iter().filter(|p| p.f > 0.0).collect();
    let mut assignments: BTreeMap<String, Quadrant> = points
        .iter()
        .map(|p| (p.name.clone(), Quadrant::Discarded))
        .collect();
    if survivors.is_empty() {
        return QuadrantReport {
            f_threshold: None,
            cost_threshold: None,
            assignments,
        };
    }
    let f_thr = midpoint(survivors.iter().map(|p| p.f));
    let c_thr = midpoint(survivors.iter().map(|p| p.cost));
    for p in survivors {
        let quadrant = match (p.f >= f_thr, p.cost <= c_thr) {
            (true, true) => Quadrant::HighPerfLowCost,
            (false, true) => Quadrant::LowPerfLowCost,
            (true, false) => Quadrant::HighPerfHighCost,
            (false, false) => Quadrant::LowPerfHighCost,
        };
        assignments.insert(p.name.clone(), quadrant);
    }
    QuadrantReport {
        f_threshold: Some(f_thr),
        cost_threshold: Some(c_thr),
        assignments,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        let r = Range::new(30.0, 100.0);
        assert!((normalize(10.0, r) + 0.285714285714).abs() < 1e-9);
        assert_eq!(normalize(30.0, r), 0.0);
        let a = Range::new(0.9999, 0.999999);
        assert!((0.1 * normalize(0.999712, a) + 0.1898).abs() < 1e-4);
    }

    #[test]
    fn flags_code_na_as_minimum() {
        let r = Range::new(0.0, 1.0);
        assert_eq!(coded_value(ParamValue::Flag(crate::model::TriState::Na), r), 0.0);
        assert_eq!(coded_value(ParamValue::Flag(crate::model::TriState::True), r), 1.0);
        assert_eq!(coded_value(ParamValue::Never, Range::new(0.0, 5.0)), 5.0);
    }

    fn point(name: &str, f: f64, cost: f64) -> QuadrantPoint {
        QuadrantPoint {
            name: name.into(),
            f,
            cost,
        }
    }

    #[test]
    fn single_point_is_favorable() {
        let q = quadrant_classify(&[point("only", 0.3, 100.0)]);
        assert_eq!(q.assignments["only"], Quadrant::HighPerfLowCost);
    }

    #[test]
    fn all_discarded() {
        let q = quadrant_classify(&[point("a", -0.1, 10.0), point("b", 0.0, 5.0)]);
        assert_eq!(q.f_threshold, None);
        assert_eq!(q.members(Quadrant::Discarded), vec!["a", "b"]);
    }

    #[test]
    fn metric_parse() {
        assert_eq!("F2".parse::<Metric>().unwrap(), Metric::F2);
        assert!("f3".parse::<Metric>().is_err());
    }
}
