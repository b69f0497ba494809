//! Series and parallel submodels: reduce a chain, or several accesses in
//! parallel, to one equivalent characterization vector.

use crate::error::EngineError;
use crate::finance;
use crate::model::{
    AccessChain, AccessElement, Branch, BranchSource, CharacterizationVector, CompositeAccess,
    EnvSupport, PrecomputedAccess, RequirementsProfile, TriState,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Rx,
    Tx,
}

/// Bandwidth one user can count on through this element.
pub fn effective_unit_bandwidth(e: &AccessElement, direction: Direction, weather_on: bool) -> f64 {
    let (b, loss) = match direction {
        Direction::Rx => (e.bw_rx_unit, e.weather_rx_loss),
        Direction::Tx => (e.bw_tx_unit, e.weather_tx_loss),
    };
    let delta = if weather_on && e.wireless { loss } else { 0.0 };
    f64::from(e.redundancy_n) * (b - delta).max(0.0) / (f64::from(e.users) * e.concurrency)
}

pub fn element_availability(e: &AccessElement) -> f64 {
    if e.redundancy_n == 1 {
        return e.availability;
    }
    1.0 - (1.0 - e.availability).powi(e.redundancy_n as i32)
}

fn sum_series<'a, I: Iterator<Item = &'a [f64]>>(series: I, t: usize) -> Vec<f64> {
    let mut total = vec![0.0; t];
    for s in series {
        for (acc, v) in total.iter_mut().zip(s) {
            *acc += v;
        }
    }
    total
}

struct Money {
    arpu: Vec<f64>,
    capex: Vec<f64>,
    opex: Vec<f64>,
}

struct Financials {
    npv: f64,
    net_cash_flow: f64,
    payback_years: Option<u32>,
    cost_first_year: f64,
}

fn financials(m: &Money, k: f64) -> Result<Financials, EngineError> {
    Ok(Financials {
        npv: finance::npv(&m.arpu, &m.capex, &m.opex, k)?,
        net_cash_flow: finance::net_cash_flow(&m.arpu, &m.capex, &m.opex)?,
        payback_years: finance::payback_period(&m.arpu, &m.capex, &m.opex)?,
        cost_first_year: m.capex.first().copied().unwrap_or(0.0) + m.opex.first().copied().unwrap_or(0.0),
    })
}

/// Series submodel.
pub fn series_characterize(
    chain: &AccessChain,
    req: &RequirementsProfile,
) -> Result<CharacterizationVector, EngineError> {
    let elements = &chain.elements;
    let first = elements.first().ok_or(EngineError::EmptyChain)?;
    let weather_on = req.weather_enabled();

    let min_bw = |dir| {
        elements
            .iter()
            .map(|e| effective_unit_bandwidth(e, dir, weather_on))
            .fold(f64::INFINITY, f64::min)
    };
    let availability = elements.iter().map(element_availability).product();

    let ap_index = elements.iter().position(|e| e.distance_m.is_some());
    let dist_to_ap_m = ap_index
        .and_then(|i| elements[i].distance_m)
        .unwrap_or(0.0);
    let dist_total_m = elements.iter().filter_map(|e| e.distance_m).sum();
    let split = ap_index.map_or(elements.len(), |i| i + 1);
    let (user_side, node_side) = elements.split_at(split);

    let t = chain.study_period_t;
    let money = Money {
        arpu: sum_series(elements.iter().map(|e| e.arpu.as_slice()), t),
        capex: sum_series(elements.iter().map(|e| e.capex.as_slice()), t),
        opex: sum_series(elements.iter().map(|e| e.opex.as_slice()), t),
    };
    let fin = financials(&money, chain.interest_rate_k)?;

    Ok(CharacterizationVector {
        bw_rx_avg: min_bw(Direction::Rx),
        bw_tx_avg: min_bw(Direction::Tx),
        availability,
        dist_to_ap_m,
        dist_total_m,
        arpu: money.arpu,
        capex: money.capex,
        opex: money.opex,
        npv: fin.npv,
        net_cash_flow: fin.net_cash_flow,
        payback_years: fin.payback_years,
        cost_first_year: fin.cost_first_year,
        qos_capable: TriState::all(elements.iter().map(|e| e.qos_capable)),
        los_user_ap: TriState::any(user_side.iter().map(|e| e.los_needed)),
        los_ap_node: TriState::any(node_side.iter().map(|e| e.los_needed)),
        license_needed: TriState::any(elements.iter().map(|e| e.license_needed)),
        ubiquity: first.ubiquity,
        health_risk: elements.iter().map(|e| e.health_risk).max().unwrap_or(0),
        env_support: elements
            .iter()
            .fold(EnvSupport::ALL, |acc, e| acc.and(e.env_support)),
        wireless_any: elements.iter().any(|e| e.wireless),
    })
}

/// Vector of an externally characterized access, with weather losses
/// applied when enabled and the access is wireless.
pub fn precomputed_vector(
    p: &PrecomputedAccess,
    weather_on: bool,
    k: f64,
) -> Result<CharacterizationVector, EngineError> {
    let apply = weather_on && p.wireless_any;
    let loss = |bw: f64, delta: f64| if apply { (bw - delta).max(0.0) } else { bw };
    let money = Money {
        arpu: p.arpu.clone(),
        capex: p.capex.clone(),
        opex: p.opex.clone(),
    };
    let fin = financials(&money, k)?;
    Ok(CharacterizationVector {
        bw_rx_avg: loss(p.bw_rx_avg, p.weather_rx_loss),
        bw_tx_avg: loss(p.bw_tx_avg, p.weather_tx_loss),
        availability: p.availability,
        dist_to_ap_m: p.dist_to_ap_m,
        dist_total_m: p.dist_total_m,
        arpu: money.arpu,
        capex: money.capex,
        opex: money.opex,
        npv: fin.npv,
        net_cash_flow: fin.net_cash_flow,
        payback_years: fin.payback_years,
        cost_first_year: fin.cost_first_year,
        qos_capable: p.qos_capable,
        los_user_ap: p.los_user_ap,
        los_ap_node: p.los_ap_node,
        license_needed: p.license_needed,
        ubiquity: p.ubiquity,
        health_risk: p.health_risk,
        env_support: p.env_support,
        wireless_any: p.wireless_any,
    })
}

/// Parallel submodel. `branches` pairs each vector with its backup flag;
/// financial outputs are recomputed at rate `k` over the summed money.
///
/// Health risk combines by min: a user with two accesses can always
/// fall back on the lower-exposure one.
pub fn parallel_characterize(
    branches: &[(CharacterizationVector, bool)],
    k: f64,
) -> Result<CharacterizationVector, EngineError> {
    if branches.is_empty() {
        return Err(EngineError::NoBranches);
    }
    if branches.iter().all(|(_, backup)| *backup) {
        return Err(EngineError::AllBackup);
    }
    if branches.len() == 1 {
        return Ok(branches[0].0.clone());
    }
    let t = branches[0].0.arpu.len();
    for (v, _) in branches {
        for (what, s) in [("arpu", &v.arpu), ("capex", &v.capex), ("opex", &v.opex)] {
            if s.len() != t {
                return Err(EngineError::LengthMismatch {
                    what: what.to_string(),
                    got: s.len(),
                    expected: t,
                });
            }
        }
    }
    let vectors = || branches.iter().map(|(v, _)| v);
    let aggregate = || branches.iter().filter(|(_, b)| !*b).map(|(v, _)| v);

    let unavailability: f64 = vectors().map(|v| 1.0 - v.availability).product();
    let money = Money {
        arpu: sum_series(vectors().map(|v| v.arpu.as_slice()), t),
        capex: sum_series(vectors().map(|v| v.capex.as_slice()), t),
        opex: sum_series(vectors().map(|v| v.opex.as_slice()), t),
    };
    let fin = financials(&money, k)?;
    let min_of = |f: fn(&CharacterizationVector) -> f64| vectors().map(f).fold(f64::INFINITY, f64::min);

    Ok(CharacterizationVector {
        bw_rx_avg: aggregate().map(|v| v.bw_rx_avg).sum(),
        bw_tx_avg: aggregate().map(|v| v.bw_tx_avg).sum(),
        availability: 1.0 - unavailability,
        dist_to_ap_m: min_of(|v| v.dist_to_ap_m),
        dist_total_m: min_of(|v| v.dist_total_m),
        arpu: money.arpu,
        capex: money.capex,
        opex: money.opex,
        npv: fin.npv,
        net_cash_flow: fin.net_cash_flow,
        payback_years: fin.payback_years,
        cost_first_year: fin.cost_first_year,
        qos_capable: TriState::all(vectors().map(|v| v.qos_capable)),
        los_user_ap: TriState::any(vectors().map(|v| v.los_user_ap)),
        los_ap_node: TriState::any(vectors().map(|v| v.los_ap_node)),
        license_needed: TriState::any(vectors().map(|v| v.license_needed)),
        ubiquity: TriState::all(vectors().map(|v| v.ubiquity)),
        health_risk: vectors().map(|v| v.health_risk).min().unwrap_or(0),
        env_support: vectors().fold(EnvSupport::ALL, |acc, v| acc.and(v.env_support)),
        wireless_any: vectors().any(|v| v.wireless_any),
    })
}

pub fn branch_vector(
    branch: &Branch,
    req: &RequirementsProfile,
    k: f64,
) -> Result<CharacterizationVector, EngineError> {
    match &branch.source {
        BranchSource::Chain(chain) => series_characterize(chain, req),
        BranchSource::Precomputed(p) => precomputed_vector(p, req.weather_enabled(), k),
    }
}

/// Characterizes every branch, then composes them in parallel.
pub fn characterize(
    c: &CompositeAccess,
    req: &RequirementsProfile,
) -> Result<CharacterizationVector, EngineError> {
    let branches = c
        .branches
        .iter()
        .map(|b| Ok((branch_vector(b, req, c.interest_rate_k)?, b.backup_mode)))
        .collect::<Result<Vec<_>, EngineError>>()?;
    parallel_characterize(&branches, c.interest_rate_k)
}
