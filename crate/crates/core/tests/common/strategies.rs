use proptest::collection::vec;
use proptest::prelude::*;

use utem_core::{
    AccessChain, AccessElement, Branch, BranchSource, CharacterizationVector, CompositeAccess,
    EnvSupport, Geotype, Param, PreferenceWeights, Range, RequirementsProfile, TriState,
};

pub const T: usize = 3;

pub fn tri_state() -> impl Strategy<Value = TriState> {
    prop_oneof![Just(TriState::True), Just(TriState::False), Just(TriState::Na)]
}

pub fn env() -> impl Strategy<Value = EnvSupport> {
    any::<[bool; 4]>().prop_map(EnvSupport::from)
}

pub fn geotype() -> impl Strategy<Value = Geotype> {
    prop_oneof![
        Just(Geotype::DenseUrban),
        Just(Geotype::Urban),
        Just(Geotype::Suburban),
        Just(Geotype::Rural)
    ]
}

pub fn money() -> impl Strategy<Value = Vec<f64>> {
    vec(0.0..5000.0f64, T)
}

pub fn availability() -> impl Strategy<Value = f64> {
    prop_oneof![4 => 0.9..1.0f64, 1 => Just(1.0), 1 => 0.0..1.0f64]
}

pub fn element() -> impl Strategy<Value = AccessElement> {
    let technical = (
        "[a-z]{1,8}",
        0.0..1000.0f64,
        0.0..1000.0f64,
        availability(),
        proptest::option::of(0.0..50000.0f64),
        tri_state(),
        1u32..4,
        tri_state(),
        tri_state(),
        proptest::option::of(0.5..60.0f64),
    );
    let sharing = (
        1u32..50,
        0.01..=1.0f64,
        any::<bool>(),
        env(),
        0.0..2.0f64,
        0.0..2.0f64,
        tri_state(),
        0u8..=3,
        money(),
        money(),
        money(),
    );
    (technical, sharing).prop_map(
        |(
            (name, rx, tx, a, dist, qos, n, los, lic, freq),
            (users, conc, wireless, env, drx, dtx, ubiq, health, arpu, capex, opex),
        )| AccessElement {
            name,
            function: String::new(),
            bw_rx_unit: rx,
            bw_tx_unit: tx,
            availability: a,
            distance_m: dist,
            qos_capable: qos,
            redundancy_n: n,
            los_needed: los,
            license_needed: lic,
            freq_band_ghz: freq,
            users,
            concurrency: conc,
            wireless,
            env_support: env,
            weather_rx_loss: drx,
            weather_tx_loss: dtx,
            ubiquity: ubiq,
            health_risk: health,
            arpu,
            capex,
            opex,
        },
    )
}

pub fn chain() -> impl Strategy<Value = AccessChain> {
    (vec(element(), 1..6), -0.5..0.5f64).prop_map(|(elements, k)| AccessChain {
        scenario_name: "generated".into(),
        elements,
        study_period_t: T,
        interest_rate_k: k,
    })
}

pub fn composite() -> impl Strategy<Value = CompositeAccess> {
    (vec((chain(), any::<bool>()), 1..4), -0.5..0.5f64).prop_map(|(chains, k)| {
        let mut branches: Vec<Branch> = chains
            .into_iter()
            .map(|(mut c, backup)| {
                c.interest_rate_k = k;
                Branch {
                    source: BranchSource::Chain(c),
                    backup_mode: backup,
                }
            })
            .collect();
        branches[0].backup_mode = false;
        CompositeAccess {
            name: "generated".into(),
            study_period_t: T,
            interest_rate_k: k,
            branches,
        }
    })
}

pub fn vector() -> impl Strategy<Value = CharacterizationVector> {
    let technical = (
        0.0..500.0f64,
        0.0..500.0f64,
        availability(),
        0.0..50000.0f64,
        0.0..50000.0f64,
        money(),
        money(),
        money(),
    );
    let flags = (
        tri_state(),
        tri_state(),
        tri_state(),
        tri_state(),
        tri_state(),
        0u8..=3,
        env(),
        any::<bool>(),
    );
    (technical, flags).prop_map(
        |((rx, tx, a, d_ap, d_total, arpu, capex, opex), (qos, los1, los2, lic, ubiq, health, env, wireless))| {
            let cost_first_year = capex[0] + opex[0];
            CharacterizationVector {
                bw_rx_avg: rx,
                bw_tx_avg: tx,
                availability: a,
                dist_to_ap_m: d_ap.min(d_total),
                dist_total_m: d_total,
                arpu,
                capex,
                opex,
                npv: 0.0,
                net_cash_flow: 0.0,
                payback_years: None,
                cost_first_year,
                qos_capable: qos,
                los_user_ap: los1,
                los_ap_node: los2,
                license_needed: lic,
                ubiquity: ubiq,
                health_risk: health,
                env_support: env,
                wireless_any: wireless,
            }
        },
    )
}

pub fn requirements() -> impl Strategy<Value = RequirementsProfile> {
    (
        1.0..200.0f64,
        0.5..50.0f64,
        0.9..0.99999f64,
        geotype(),
        any::<[bool; 4]>(),
    )
        .prop_map(|(rx_min, tx_min, a_min, geo, flags)| {
            let mut ranges = std::collections::BTreeMap::new();
            ranges.insert(Param::BwRxAvg, Range::new(rx_min, rx_min * 4.0));
            ranges.insert(Param::BwTxAvg, Range::new(tx_min, tx_min * 4.0));
            ranges.insert(Param::Availability, Range::new(a_min, 1.0 - (1.0 - a_min) / 100.0));
            ranges.insert(Param::DistToApM, Range::new(20.0, 30000.0));
            ranges.insert(Param::DistTotalM, Range::new(20.0, 30000.0));
            ranges.insert(Param::CostFirstYear, Range::new(0.0, 12000.0));
            RequirementsProfile {
                ranges,
                target_geotype: geo,
                consider_rain: flags[0],
                consider_fog: flags[1],
                consider_snow: flags[2],
                ubiquity_required: flags[3],
            }
        })
}

pub fn weights() -> impl Strategy<Value = PreferenceWeights> {
    let params = [
        Param::BwRxAvg,
        Param::BwTxAvg,
        Param::Availability,
        Param::DistToApM,
        Param::DistTotalM,
        Param::QosCapable,
        Param::LosUserAp,
        Param::LosApNode,
        Param::LicenseNeeded,
        Param::Ubiquity,
        Param::HealthRisk,
    ];
    (0.1..5.0f64, vec(-2.0..2.0f64, params.len()), 0.1..3.0f64).prop_map(move |(first, rest, b)| {
        let mut a: std::collections::BTreeMap<Param, f64> =
            params.iter().copied().zip(rest).collect();
        // At least one positive weight keeps the profile valid.
        a.insert(Param::BwRxAvg, first);
        let b = [(Param::CostFirstYear, b)].into_iter().collect();
        PreferenceWeights::new(a, b)
    })
}
