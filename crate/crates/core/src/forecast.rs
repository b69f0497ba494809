//! F2 evolution under a changing cost and detection of its saturation.

use serde::{Deserialize, Serialize};

use crate::error::EngineError;

pub const DEFAULT_EPSILON: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostPoint {
    pub year: i32,
    pub cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct F2Point {
    pub year: i32,
    pub f2: f64,
}

/// A fixed F1 and the yearly cost it is divided by.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForecastRequest {
    pub f1: f64,
    pub cost_series: Vec<CostPoint>,
    #[serde(default)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForecastReport {
    pub epsilon: f64,
    pub points: Vec<F2Point>,
    pub saturation_year: Option<i32>,
}

/// Series plus its saturation year in one pass.
pub fn forecast(f1: f64, costs: &[CostPoint], epsilon: f64) -> Result<ForecastReport, EngineError> {
    let points = f2_series(f1, costs)?;
    let saturation_year = saturation_year(&points, epsilon)?;
    Ok(ForecastReport {
        epsilon,
        points,
        saturation_year,
    })
}

/// F2 for each year with the technical profile, hence F1, held fixed.
pub fn f2_series(f1: f64, costs: &[CostPoint]) -> Result<Vec<F2Point>, EngineError> {
    costs
        .iter()
        .map(|c| {
            if c.cost > 0.0 && c.cost.is_finite() {
                Ok(F2Point {
                    year: c.year,
                    f2: f1 / c.cost,
                })
            } else {
                Err(EngineError::NonPositiveCost {
                    year: c.year,
                    cost: c.cost,
                })
            }
        })
        .collect()
}

/// First year, after the steepest rise, whose year-on-year gain drops to
/// `epsilon` times that steepest gain. `None` when F2 never rises or
/// never flattens.
pub fn saturation_year(series: &[F2Point], epsilon: f64) -> Result<Option<i32>, EngineError> {
    if series.len() < 3 {
        return Err(EngineError::TooFewPoints(series.len()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(EngineError::BadEpsilon(epsilon));
    }
    if series.windows(2).any(|w| w[1].year <= w[0].year) {
        return Err(EngineError::UnorderedYears);
    }
    let slopes: Vec<(i32, f64)> = series
        .windows(2)
        .map(|w| (w[1].year, w[1].f2 - w[0].f2))
        .collect();
    let (peak_index, peak) = slopes
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, (_, s))| {
            if *s > best.1 {
                (i, *s)
            } else {
                best
            }
        });
    if !(peak > 0.0) {
        return Ok(None);
    }
    let band = epsilon * peak;
    Ok(slopes[peak_index..]
        .iter()
        .find(|(_, s)| *s <= band)
        .map(|(year, _)| *year))
}
