//! Minimum number R of identical aggregate-mode copies of an access that
//! meets a requirements profile.

use std::collections::BTreeMap;

use crate::model::{
    CharacterizationVector, OverallVerdict, Param, ParamVerdict, RedundancyVerdict,
    RequirementsProfile, TriState,
};

pub const R_MAX: u32 = 1000;

const SLACK: f64 = 1e-12;

fn ceil_copies(ratio: f64) -> Option<u64> {
    if !ratio.is_finite() {
        return None;
    }
    // `as` saturates, so absurd ratios still compare above R_MAX.
    Some(((ratio - SLACK).ceil() as u64).max(1))
}

/// Copies needed so the summed bandwidth reaches `target`.
/// `None` when the access carries no bandwidth at all.
pub fn min_copies_for_bandwidth(bw: f64, target: f64) -> Option<u64> {
    if target <= 0.0 || bw >= target {
        return Some(1);
    }
    if bw <= 0.0 {
        return None;
    }
    ceil_copies(target / bw)
}

/// Copies needed so the parallel availability reaches `target`.
/// `None` when `a = 0` or the target is certainty.
pub fn min_copies_for_availability(a: f64, target: f64) -> Option<u64> {
    if a >= target || a >= 1.0 {
        return Some(1);
    }
    if a <= 0.0 || target >= 1.0 {
        return None;
    }
    ceil_copies((1.0 - target).ln() / (1.0 - a).ln())
}

/// Flag coded onto the numeric scale used by ranges.
pub fn coded_flag(flag: TriState, u_min: f64) -> f64 {
    match flag {
        TriState::True => 1.0,
        TriState::False => 0.0,
        TriState::Na => u_min,
    }
}

fn copies_verdict(name: &str, copies: Option<u64>, cap_hits: &mut Vec<String>) -> ParamVerdict {
    match copies {
        None => ParamVerdict::Fails("unreachable requirement".to_string()),
        Some(r) if r > u64::from(R_MAX) => {
            cap_hits.push(name.to_string());
            ParamVerdict::Fails(format!("more than {R_MAX} copies needed"))
        }
        Some(r) => ParamVerdict::Copies(r as u32),
    }
}

/// Sizes R and checks every non-improvable parameter.
pub fn min_redundancy(v: &CharacterizationVector, req: &RequirementsProfile) -> RedundancyVerdict {
    let mut per_param: BTreeMap<String, ParamVerdict> = BTreeMap::new();
    let mut cap_hits = Vec::new();

    for (param, bw) in [(Param::BwRxAvg, v.bw_rx_avg), (Param::BwTxAvg, v.bw_tx_avg)] {
        if let Some(range) = req.ranges.get(&param) {
            let verdict = copies_verdict(
                param.as_str(),
                min_copies_for_bandwidth(bw, range.u_min),
                &mut cap_hits,
            );
            per_param.insert(param.as_str().to_string(), verdict);
        }
    }
    if let Some(range) = req.ranges.get(&Param::Availability) {
        let verdict = copies_verdict(
            Param::Availability.as_str(),
            min_copies_for_availability(v.availability, range.u_max),
            &mut cap_hits,
        );
        per_param.insert(Param::Availability.as_str().to_string(), verdict);
    }

    let check = |ok: bool, reason: String| {
        if ok {
            ParamVerdict::Complies
        } else {
            ParamVerdict::Fails(reason)
        }
    };

    // Distances only need to reach the minimum; long backhaul is no defect.
    for (param, d) in [(Param::DistToApM, v.dist_to_ap_m), (Param::DistTotalM, v.dist_total_m)] {
        if let Some(range) = req.ranges.get(&param) {
            let verdict = check(d >= range.u_min, format!("{d} m below minimum {}", range.u_min));
            per_param.insert(param.as_str().to_string(), verdict);
        }
    }
    if let Some(range) = req.range(Param::QosCapable) {
        let needed = range.u_min >= 1.0;
        let verdict = check(!needed || v.qos_capable.is_true(), "QoS required".to_string());
        per_param.insert(Param::QosCapable.as_str().to_string(), verdict);
    }
    for (param, flag) in [
        (Param::LosUserAp, v.los_user_ap),
        (Param::LosApNode, v.los_ap_node),
        (Param::LicenseNeeded, v.license_needed),
    ] {
        if let Some(range) = req.range(param) {
            let verdict = check(
                coded_flag(flag, range.u_min) <= range.u_max,
                format!("{flag} not allowed by profile"),
            );
            per_param.insert(param.as_str().to_string(), verdict);
        }
    }
    let ubiquity_ok = !req.ubiquity_required || v.ubiquity.is_true();
    per_param.insert(
        Param::Ubiquity.as_str().to_string(),
        check(ubiquity_ok, "ubiquity required".to_string()),
    );
    if let Some(range) = req.range(Param::HealthRisk) {
        let verdict = check(
            f64::from(v.health_risk) <= range.u_max,
            format!("health risk {} above {}", v.health_risk, range.u_max),
        );
        per_param.insert(Param::HealthRisk.as_str().to_string(), verdict);
    }
    per_param.insert(
        "env_support".to_string(),
        check(
            v.env_support.supports(req.target_geotype),
            format!("{:?} environment not supported", req.target_geotype),
        ),
    );

    let r = per_param
        .values()
        .filter_map(|p| match p {
            ParamVerdict::Copies(r) => Some(*r),
            _ => None,
        })
        .max()
        .unwrap_or(1);

    if let Some(range) = req.ranges.get(&Param::CostFirstYear) {
        let total = f64::from(r) * v.cost_first_year;
        let verdict = check(total <= range.u_max, format!("cost exceeded at R={r}"));
        per_param.insert(Param::CostFirstYear.as_str().to_string(), verdict);
    }

    let failures: Vec<(String, String)> = per_param
        .iter()
        .filter_map(|(k, p)| match p {
            ParamVerdict::Fails(reason) => Some((k.clone(), reason.clone())),
            _ => None,
        })
        .collect();
    let overall = if failures.is_empty() {
        OverallVerdict::Complies { r }
    } else {
        let reason = failures
            .iter()
            .map(|(k, why)| format!("{k}: {why}"))
            .collect::<Vec<_>>()
            .join("; ");
        OverallVerdict::Fails {
            blocking: failures.into_iter().map(|(k, _)| k).collect(),
            reason,
        }
    };
    RedundancyVerdict { per_param, overall }
}
