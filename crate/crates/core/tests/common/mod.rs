#![allow(dead_code)]

use std::path::PathBuf;

use utem_core::io::{parse_preferences, parse_requirements, parse_scenario};
use utem_core::{CompositeAccess, PreferenceWeights, RequirementsProfile};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn read(rel: &str) -> Vec<u8> {
    let path = data_dir().join(rel);
    std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn scenario(file: &str) -> CompositeAccess {
    parse_scenario(&read(&format!("scenarios/{file}.json"))).expect("fixture scenario parses")
}

pub fn requirements() -> RequirementsProfile {
    parse_requirements(&read("requirements/residential_30m.json")).expect("fixture requirements")
}

pub fn preferences() -> PreferenceWeights {
    parse_preferences(&read("preferences/default.json")).expect("fixture preferences")
}

pub const ALL_SCENARIOS: [&str; 9] = [
    "adsl",
    "adsl_wifi_wimax",
    "adsl_x2",
    "ftth",
    "ftth_vrouter",
    "lte",
    "p2p_34m",
    "vdsl",
    "wimax",
];

pub fn bytes(rel: &str) -> Vec<u8> {
    read(rel)
}
pub mod strategies;
