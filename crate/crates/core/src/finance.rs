//! Economic outputs from yearly money vectors. Year 1 is discounted by
//! one full period.

use crate::error::EngineError;

fn net_flows(arpu: &[f64], capex: &[f64], opex: &[f64]) -> Result<Vec<f64>, EngineError> {
    for (what, v) in [("capex", capex), ("opex", opex)] {
        if v.len() != arpu.len() {
            return Err(EngineError::LengthMismatch {
                what: what.to_string(),
                got: v.len(),
                expected: arpu.len(),
            });
        }
    }
    Ok(arpu
        .iter()
        .zip(capex)
        .zip(opex)
        .map(|((a, c), o)| a - c - o)
        .collect())
}

pub fn net_cash_flow(arpu: &[f64], capex: &[f64], opex: &[f64]) -> Result<f64, EngineError> {
    Ok(net_flows(arpu, capex, opex)?.iter().sum())
}

pub fn npv(arpu: &[f64], capex: &[f64], opex: &[f64], k: f64) -> Result<f64, EngineError> {
    Ok(npv_of_flows(&net_flows(arpu, capex, opex)?, k))
}

/// Discounted sum of already-netted yearly flows.
pub fn npv_of_flows(flows: &[f64], k: f64) -> f64 {
    if k == 0.0 {
        return flows.iter().sum();
    }
    let mut factor = 1.0;
    let mut total = 0.0;
    for f in flows {
        factor *= 1.0 + k;
        total += f / factor;
    }
    total
}

pub const IRR_LOWER: f64 = -0.9999;
pub const IRR_UPPER: f64 = 10.0;
pub const IRR_TOLERANCE: f64 = 1e-6;

/// Internal rate of return, or `None` when the flows never change sign,
/// the root lies outside `(IRR_LOWER, IRR_UPPER]`, or bisection cannot
/// bring `|npv|` under `IRR_TOLERANCE` in double precision.
pub fn irr(arpu: &[f64], capex: &[f64], opex: &[f64]) -> Result<Option<f64>, EngineError> {
    Ok(irr_of_flows(&net_flows(arpu, capex, opex)?))
}

pub fn irr_of_flows(flows: &[f64]) -> Option<f64> {
    let has_pos = flows.iter().any(|f| *f > 0.0);
    let has_neg = flows.iter().any(|f| *f < 0.0);
    if !(has_pos && has_neg) {
        return None;
    }
    let (mut lo, mut hi) = (IRR_LOWER, IRR_UPPER);
    let mut f_lo = npv_of_flows(flows, lo);
    let f_hi = npv_of_flows(flows, hi);
    if f_hi.abs() < IRR_TOLERANCE {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    loop {
        let mid = 0.5 * (lo + hi);
        let f_mid = npv_of_flows(flows, mid);
        if f_mid.abs() < IRR_TOLERANCE {
            return Some(mid);
        }
        if mid <= lo || mid >= hi {
            return None;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
}

/// First whole year whose cumulative net flow is non-negative.
pub fn payback_period(arpu: &[f64], capex: &[f64], opex: &[f64]) -> Result<Option<u32>, EngineError> {
    let mut cumulative = 0.0;
    for (i, f) in net_flows(arpu, capex, opex)?.iter().enumerate() {
        cumulative += f;
        if cumulative >= 0.0 {
            return Ok(Some(i as u32 + 1));
        }
    }
    Ok(None)
}

/// Yearly operating cost implied by an element's unavailability.
pub fn estimate_opex_from_availability(capex_element: f64, availability: f64) -> f64 {
    (1.0 - availability) * capex_element
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flows(v: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let arpu: Vec<f64> = v.iter().map(|x| x.max(0.0)).collect();
        let capex: Vec<f64> = v.iter().map(|x| (-x).max(0.0)).collect();
        (arpu, capex, vec![0.0; v.len()])
    }

    #[test]
    fn zero_vectors() {
        let z = vec![0.0; 3];
        assert_eq!(net_cash_flow(&z, &z, &z).unwrap(), 0.0);
        assert_eq!(payback_period(&z, &z, &z).unwrap(), Some(1));
    }

    #[test]
    fn irr_single_period() {
        let (a, c, o) = flows(&[-100.0, 110.0]);
        // With year 1 discounted, -100/(1+k) + 110/(1+k)^2 = 0 at k = 10%.
        let r = irr(&a, &c, &o).unwrap().unwrap();
        assert!((r - 0.10).abs() < 1e-6, "{r}");
    }

    #[test]
    fn irr_two_positive_years() {
        let (a, c, o) = flows(&[-100.0, 60.0, 60.0]);
        let r = irr(&a, &c, &o).unwrap().unwrap();
        assert!((r - 0.1306623863).abs() < 1e-6, "{r}");
        assert!(npv(&a, &c, &o, r).unwrap().abs() < IRR_TOLERANCE);
    }

    #[test]
    fn irr_undefined_without_sign_change() {
        let (a, c, o) = flows(&[10.0, 20.0, 5.0]);
        assert_eq!(irr(&a, &c, &o).unwrap(), None);
    }

    #[test]
    fn payback_examples() {
        let (a, c, o) = flows(&[-100.0, 40.0, 70.0]);
        assert_eq!(payback_period(&a, &c, &o).unwrap(), Some(3));
        let (a, c, o) = flows(&[-1.0, -2.0]);
        assert_eq!(payback_period(&a, &c, &o).unwrap(), None);
    }

    #[test]
    fn opex_estimate() {
        assert!((estimate_opex_from_availability(100.0, 0.999644) - 0.0356).abs() < 1e-12);
        assert!((estimate_opex_from_availability(100.0, 0.99999) - 0.001).abs() < 1e-12);
        assert_eq!(estimate_opex_from_availability(100.0, 1.0), 0.0);
    }

    #[test]
    fn length_mismatch() {
        let err = npv(&[1.0, 2.0], &[1.0], &[0.0, 0.0], 0.01).unwrap_err();
        assert!(matches!(err, EngineError::LengthMismatch { .. }));
    }
}
