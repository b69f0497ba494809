mod common;

use utem_core::characterization::{parallel_characterize, series_characterize};
use utem_core::finance::{irr, payback_period};
use utem_core::io::{emit_result, OutputFormat};
use utem_core::{evaluate, validate_chain, validate_profile, BranchSource, OverallVerdict, Param, ParamVerdict, TriState};

fn eval(file: &str) -> utem_core::EvaluationResult {
    evaluate(&common::scenario(file), &common::requirements(), &common::preferences()).unwrap()
}

#[test]
fn fixtures_validate() {
    for file in common::ALL_SCENARIOS {
        let c = common::scenario(file);
        for b in &c.branches {
            if let BranchSource::Chain(chain) = &b.source {
                assert!(validate_chain(chain).is_empty(), "{file}");
            }
        }
    }
    assert!(validate_profile(&common::requirements(), &common::preferences()).is_empty());
    assert!((common::preferences().positive_a_sum() - 6.1).abs() < 1e-12);
}

#[test]
fn adsl_vector() {
    let r = eval("adsl");
    let v = &r.vector;
    assert_eq!(v.bw_tx_avg, 3.0);
    assert_eq!((v.dist_to_ap_m, v.dist_total_m), (4500.0, 4500.0));
    assert_eq!(v.payback_years, Some(1));
    assert_eq!(v.qos_capable, TriState::True);
    assert_eq!(v.ubiquity, TriState::True);
    assert_eq!(v.health_risk, 1);
    let rx = r.contributions[&Param::BwRxAvg].performance;
    assert!((rx + 0.285714).abs() < 1e-6);
    assert!((r.contributions[&Param::CostFirstYear].cost - 315.03717).abs() < 1e-9);
    // Every yearly flow is positive, so no rate zeroes the NPV.
    assert_eq!(irr(&v.arpu, &v.capex, &v.opex).unwrap(), None);
    assert_eq!(payback_period(&v.arpu, &v.capex, &v.opex).unwrap(), Some(1));
}

#[test]
fn adsl_redundancy_rows() {
    let r = eval("adsl");
    let rows = &r.redundancy.per_param;
    assert_eq!(rows["bw_rx_avg"], ParamVerdict::Copies(3));
    assert_eq!(rows["bw_tx_avg"], ParamVerdict::Copies(1));
    assert_eq!(rows["availability"], ParamVerdict::Copies(2));
    assert_eq!(rows["dist_total_m"], ParamVerdict::Complies);
    assert_eq!(rows["env_support"], ParamVerdict::Complies);
    assert_eq!(rows["cost_first_year"], ParamVerdict::Complies);
    assert_eq!(r.redundancy.overall, OverallVerdict::Complies { r: 3 });
}

#[test]
fn ftth_cash_flow() {
    let v = eval("ftth").vector;
    assert!((v.net_cash_flow - 1599.53).abs() < 0.02);
    assert!((v.availability - 0.999712).abs() < 1e-6);
}

#[test]
fn wimax_shared_access_point() {
    let r = eval("wimax");
    assert!((r.vector.bw_rx_avg - 2.753846154).abs() < 1e-9);
    assert!((r.vector.bw_tx_avg - 2.764102564).abs() < 1e-9);
    assert_eq!(r.vector.dist_to_ap_m, 3000.0);
    assert_eq!(r.vector.los_user_ap, TriState::False);
    assert_eq!(r.vector.los_ap_node, TriState::True);
    assert_eq!(r.redundancy.per_param["bw_rx_avg"], ParamVerdict::Copies(11));
}

#[test]
fn element_redundancy_doubles_bandwidth() {
    let v = eval("adsl_x2").vector;
    assert_eq!(v.bw_rx_avg, 20.0);
    assert_eq!(v.bw_tx_avg, 6.0);
    assert!((v.availability - 0.999962).abs() < 1e-6);
}

#[test]
fn point_to_point_is_fully_available() {
    let r = eval("p2p_34m");
    assert_eq!(r.vector.availability, 1.0);
    assert_eq!(r.vector.bw_rx_avg, 34.0);
    assert_eq!(r.redundancy.per_param["availability"], ParamVerdict::Copies(1));
    assert_eq!(r.redundancy.r(), Some(1));
}

#[test]
fn hybrid_composition() {
    let r = eval("adsl_wifi_wimax");
    let v = &r.vector;
    assert!((v.bw_tx_avg - 3.092461538).abs() < 1e-6);
    assert_eq!(v.dist_to_ap_m, 45.0);
    assert_eq!(v.dist_total_m, 4500.0);
    assert_eq!(v.los_user_ap, TriState::True);
    assert_eq!(v.license_needed, TriState::True);
    assert_eq!(v.arpu, vec![590.54, 507.6, 507.6]);
    assert!(r.f1 < 0.0);
}

#[test]
fn two_identical_adsl_branches() {
    let req = common::requirements();
    let c = common::scenario("adsl");
    let BranchSource::Chain(chain) = &c.branches[0].source else { unreachable!() };
    let v = series_characterize(chain, &req).unwrap();
    let p = parallel_characterize(&[(v.clone(), false), (v.clone(), false)], 0.01).unwrap();
    assert_eq!(p.bw_rx_avg, 20.0);
    let expected = 1.0 - (1.0 - v.availability).powi(2);
    assert!((p.availability - expected).abs() < 1e-15);
}

#[test]
fn csv_carries_vector_rows() {
    let out = emit_result(&eval("adsl"), OutputFormat::Csv);
    assert!(out.starts_with("parameter,value\n"));
    assert!(out.lines().any(|l| l == "bw_rx_avg,10"));
    assert!(out.lines().any(|l| l == "redundancy_r,3"));
}

#[test]
fn table_shows_merit_and_r() {
    let out = emit_result(&eval("adsl"), OutputFormat::Table);
    assert!(out.contains("F1  22.50%"));
    assert!(out.contains("F2  71.43 %/K€"));
    assert!(out.contains("R = 3"));
}

#[test]
fn json_round_trips() {
    let r = eval("ftth");
    let text = emit_result(&r, OutputFormat::Json);
    let back: utem_core::EvaluationResult = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
}
