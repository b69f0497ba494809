//! Domain types shared by every engine module, plus structural validation.
//!
//! Values are plain data: once built they are never mutated by the engine,
//! so they can be shared freely across threads.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Three-valued flag used wherever an input may legitimately not apply.
///
/// `Na` is a real value, not an absent field. Serialized as the strings
/// `"true"`, `"false"` and `"na"` so it never collides with JSON booleans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    True,
    False,
    #[default]
    Na,
}

impl TriState {
    pub fn from_bool(value: bool) -> Self {
        if value {
            TriState::True
        } else {
            TriState::False
        }
    }

    /// OR over the non-`Na` operands; `Na` only when every operand is `Na`.
    pub fn any<I: IntoIterator<Item = TriState>>(values: I) -> TriState {
        let mut seen = TriState::Na;
        for v in values {
            match v {
                TriState::True => return TriState::True,
                TriState::False => seen = TriState::False,
                TriState::Na => {}
            }
        }
        seen
    }

    /// AND over the non-`Na` operands; `Na` only when every operand is `Na`.
    pub fn all<I: IntoIterator<Item = TriState>>(values: I) -> TriState {
        let mut seen = TriState::Na;
        for v in values {
            match v {
                TriState::False => return TriState::False,
                TriState::True => seen = TriState::True,
                TriState::Na => {}
            }
        }
        seen
    }

    pub fn is_true(self) -> bool {
        self == TriState::True
    }
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriState::True => "true",
            TriState::False => "false",
            TriState::Na => "na",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geotype {
    DenseUrban,
    Urban,
    Suburban,
    Rural,
}

/// Coverage environments an element (or access) can serve.
///
/// Serialized as a 4-element boolean array in the order
/// dense-urban, urban, suburban, rural.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[bool; 4]", into = "[bool; 4]")]
pub struct EnvSupport {
    pub dense_urban: bool,
    pub urban: bool,
    pub suburban: bool,
    pub rural: bool,
}

impl EnvSupport {
    pub const ALL: EnvSupport = EnvSupport {
        dense_urban: true,
        urban: true,
        suburban: true,
        rural: true,
    };

    pub fn supports(&self, geotype: Geotype) -> bool {
        match geotype {
            Geotype::DenseUrban => self.dense_urban,
            Geotype::Urban => self.urban,
            Geotype::Suburban => self.suburban,
            Geotype::Rural => self.rural,
        }
    }

    pub fn and(self, other: EnvSupport) -> EnvSupport {
        EnvSupport {
            dense_urban: self.dense_urban && other.dense_urban,
            urban: self.urban && other.urban,
            suburban: self.suburban && other.suburban,
            rural: self.rural && other.rural,
        }
    }
}

impl Default for EnvSupport {
    fn default() -> Self {
        EnvSupport::ALL
    }
}

impl From<[bool; 4]> for EnvSupport {
    fn from(v: [bool; 4]) -> Self {
        EnvSupport {
            dense_urban: v[0],
            urban: v[1],
            suburban: v[2],
            rural: v[3],
        }
    }
}

impl From<EnvSupport> for [bool; 4] {
    fn from(e: EnvSupport) -> Self {
        [e.dense_urban, e.urban, e.suburban, e.rural]
    }
}

fn one_u32() -> u32 {
    1
}

fn one_f64() -> f64 {
    1.0
}

/// One component of an access, e.g. a CPE router or a DSLAM port.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccessElement {
    pub name: String,
    #[serde(default)]
    pub function: String,
    /// Mbit/s
    pub bw_rx_unit: f64,
    /// Mbit/s
    pub bw_tx_unit: f64,
    pub availability: f64,
    /// Absent for elements that do not span a physical distance.
    #[serde(default)]
    pub distance_m: Option<f64>,
    #[serde(default)]
    pub qos_capable: TriState,
    #[serde(default = "one_u32")]
    pub redundancy_n: u32,
    #[serde(default)]
    pub los_needed: TriState,
    #[serde(default)]
    pub license_needed: TriState,
    #[serde(default)]
    pub freq_band_ghz: Option<f64>,
    #[serde(default = "one_u32")]
    pub users: u32,
    #[serde(default = "one_f64")]
    pub concurrency: f64,
    #[serde(default)]
    pub wireless: bool,
    #[serde(default)]
    pub env_support: EnvSupport,
    #[serde(default)]
    pub weather_rx_loss: f64,
    #[serde(default)]
    pub weather_tx_loss: f64,
    #[serde(default)]
    pub ubiquity: TriState,
    #[serde(default)]
    pub health_risk: u8,
    pub arpu: Vec<f64>,
    pub capex: Vec<f64>,
    pub opex: Vec<f64>,
}

/// Elements connected in series, index 0 closest to the end user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccessChain {
    pub scenario_name: String,
    pub elements: Vec<AccessElement>,
    pub study_period_t: usize,
    pub interest_rate_k: f64,
}

/// An access that was characterized elsewhere (another run, another model)
/// and enters a parallel composition as a ready-made vector.
///
/// Financial outputs are derived from the money vectors, so only the raw
/// technical and money fields are carried. The weather losses are applied
/// at composition time when the requirements enable weather effects and the
/// access is wireless.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrecomputedAccess {
    pub name: String,
    pub bw_rx_avg: f64,
    pub bw_tx_avg: f64,
    pub availability: f64,
    pub dist_to_ap_m: f64,
    pub dist_total_m: f64,
    pub arpu: Vec<f64>,
    pub capex: Vec<f64>,
    pub opex: Vec<f64>,
    #[serde(default)]
    pub qos_capable: TriState,
    #[serde(default)]
    pub los_user_ap: TriState,
    #[serde(default)]
    pub los_ap_node: TriState,
    #[serde(default)]
    pub license_needed: TriState,
    #[serde(default)]
    pub ubiquity: TriState,
    #[serde(default)]
    pub health_risk: u8,
    #[serde(default)]
    pub env_support: EnvSupport,
    #[serde(default)]
    pub wireless_any: bool,
    #[serde(default)]
    pub weather_rx_loss: f64,
    #[serde(default)]
    pub weather_tx_loss: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BranchSource {
    Chain(AccessChain),
    Precomputed(PrecomputedAccess),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub source: BranchSource,
    /// Backup branches add availability and cost but no bandwidth.
    pub backup_mode: bool,
}

/// A scenario: one or more accesses combined in parallel.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeAccess {
    pub name: String,
    pub study_period_t: usize,
    pub interest_rate_k: f64,
    pub branches: Vec<Branch>,
}

/// Equivalent technical and economic parameters of an access.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterizationVector {
    pub bw_rx_avg: f64,
    pub bw_tx_avg: f64,
    pub availability: f64,
    pub dist_to_ap_m: f64,
    pub dist_total_m: f64,
    pub arpu: Vec<f64>,
    pub capex: Vec<f64>,
    pub opex: Vec<f64>,
    pub npv: f64,
    pub net_cash_flow: f64,
    pub payback_years: Option<u32>,
    pub cost_first_year: f64,
    pub qos_capable: TriState,
    pub los_user_ap: TriState,
    pub los_ap_node: TriState,
    pub license_needed: TriState,
    pub ubiquity: TriState,
    pub health_risk: u8,
    pub env_support: EnvSupport,
    pub wireless_any: bool,
}

/// Scalar output parameters that can carry requirements and weights.
///
/// Declaration order is the presentation order used in every report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    BwRxAvg,
    BwTxAvg,
    Availability,
    DistToApM,
    DistTotalM,
    Npv,
    NetCashFlow,
    PaybackYears,
    CostFirstYear,
    QosCapable,
    LosUserAp,
    LosApNode,
    LicenseNeeded,
    Ubiquity,
    HealthRisk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    MbitPerSecond,
    Probability,
    Meters,
    Euro,
    Years,
    Flag,
    Level,
}

impl Param {
    pub const ALL: [Param; 15] = [
        Param::BwRxAvg,
        Param::BwTxAvg,
        Param::Availability,
        Param::DistToApM,
        Param::DistTotalM,
        Param::Npv,
        Param::NetCashFlow,
        Param::PaybackYears,
        Param::CostFirstYear,
        Param::QosCapable,
        Param::LosUserAp,
        Param::LosApNode,
        Param::LicenseNeeded,
        Param::Ubiquity,
        Param::HealthRisk,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Param::BwRxAvg => "bw_rx_avg",
            Param::BwTxAvg => "bw_tx_avg",
            Param::Availability => "availability",
            Param::DistToApM => "dist_to_ap_m",
            Param::DistTotalM => "dist_total_m",
            Param::Npv => "npv",
            Param::NetCashFlow => "net_cash_flow",
            Param::PaybackYears => "payback_years",
            Param::CostFirstYear => "cost_first_year",
            Param::QosCapable => "qos_capable",
            Param::LosUserAp => "los_user_ap",
            Param::LosApNode => "los_ap_node",
            Param::LicenseNeeded => "license_needed",
            Param::Ubiquity => "ubiquity",
            Param::HealthRisk => "health_risk",
        }
    }

    pub fn unit(self) -> Unit {
        match self {
            Param::BwRxAvg | Param::BwTxAvg => Unit::MbitPerSecond,
            Param::Availability => Unit::Probability,
            Param::DistToApM | Param::DistTotalM => Unit::Meters,
            Param::Npv | Param::NetCashFlow | Param::CostFirstYear => Unit::Euro,
            Param::PaybackYears => Unit::Years,
            Param::QosCapable
            | Param::LosUserAp
            | Param::LosApNode
            | Param::LicenseNeeded
            | Param::Ubiquity => Unit::Flag,
            Param::HealthRisk => Unit::Level,
        }
    }

    /// Range assumed when a requirements profile leaves a coded parameter out.
    pub fn default_range(self) -> Option<Range> {
        match self.unit() {
            Unit::Flag => Some(Range::new(0.0, 1.0)),
            Unit::Level => Some(Range::new(0.0, 3.0)),
            _ => None,
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A parameter value as read off a vector, before coding onto a range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamValue {
    Number(f64),
    Flag(TriState),
    /// No payback within the study period.
    Never,
}

impl CharacterizationVector {
    pub fn value(&self, param: Param) -> ParamValue {
        use ParamValue::{Flag, Number};
        match param {
            Param::BwRxAvg => Number(self.bw_rx_avg),
            Param::BwTxAvg => Number(self.bw_tx_avg),
            Param::Availability => Number(self.availability),
            Param::DistToApM => Number(self.dist_to_ap_m),
            Param::DistTotalM => Number(self.dist_total_m),
            Param::Npv => Number(self.npv),
            Param::NetCashFlow => Number(self.net_cash_flow),
            Param::PaybackYears => match self.payback_years {
                Some(y) => Number(f64::from(y)),
                None => ParamValue::Never,
            },
            Param::CostFirstYear => Number(self.cost_first_year),
            Param::QosCapable => Flag(self.qos_capable),
            Param::LosUserAp => Flag(self.los_user_ap),
            Param::LosApNode => Flag(self.los_ap_node),
            Param::LicenseNeeded => Flag(self.license_needed),
            Param::Ubiquity => Flag(self.ubiquity),
            Param::HealthRisk => Number(f64::from(self.health_risk)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub u_min: f64,
    pub u_max: f64,
}

impl Range {
    pub fn new(u_min: f64, u_max: f64) -> Self {
        Range { u_min, u_max }
    }

    pub fn width(&self) -> f64 {
        self.u_max - self.u_min
    }
}

/// Customer requirements: per-parameter ranges plus context flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequirementsProfile {
    pub ranges: BTreeMap<Param, Range>,
    pub target_geotype: Geotype,
    #[serde(default)]
    pub consider_rain: bool,
    #[serde(default)]
    pub consider_fog: bool,
    #[serde(default)]
    pub consider_snow: bool,
    #[serde(default)]
    pub ubiquity_required: bool,
}

impl RequirementsProfile {
    /// Explicit range, falling back to the coded default for flags and levels.
    pub fn range(&self, param: Param) -> Option<Range> {
        self.ranges
            .get(&param)
            .copied()
            .or_else(|| param.default_range())
    }

    pub fn weather_enabled(&self) -> bool {
        self.consider_rain || self.consider_fog || self.consider_snow
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PreferencesDoc {
    #[serde(default)]
    a: BTreeMap<Param, f64>,
    #[serde(default)]
    b: BTreeMap<Param, f64>,
}

/// Performance weights `a` (numerator of F1) and cost weights `b`
/// (denominator of F2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "PreferencesDoc", into = "PreferencesDoc")]
pub struct PreferenceWeights {
    a: BTreeMap<Param, f64>,
    b: BTreeMap<Param, f64>,
    positive_a_sum: f64,
}

impl PreferenceWeights {
    pub fn new(a: BTreeMap<Param, f64>, b: BTreeMap<Param, f64>) -> Self {
        let positive_a_sum = a.values().filter(|w| **w > 0.0).sum();
        PreferenceWeights {
            a,
            b,
            positive_a_sum,
        }
    }

    pub fn a(&self) -> &BTreeMap<Param, f64> {
        &self.a
    }

    pub fn b(&self) -> &BTreeMap<Param, f64> {
        &self.b
    }

    pub fn a_weight(&self, param: Param) -> f64 {
        self.a.get(&param).copied().unwrap_or(0.0)
    }

    pub fn b_weight(&self, param: Param) -> f64 {
        self.b.get(&param).copied().unwrap_or(0.0)
    }

    pub fn positive_a_sum(&self) -> f64 {
        self.positive_a_sum
    }

    /// Every `a_k` multiplied by `factor`; `b` untouched.
    pub fn scale_a(&self, factor: f64) -> Self {
        let a = self.a.iter().map(|(k, w)| (*k, w * factor)).collect();
        PreferenceWeights::new(a, self.b.clone())
    }
}

impl From<PreferencesDoc> for PreferenceWeights {
    fn from(doc: PreferencesDoc) -> Self {
        PreferenceWeights::new(doc.a, doc.b)
    }
}

impl From<PreferenceWeights> for PreferencesDoc {
    fn from(w: PreferenceWeights) -> Self {
        PreferencesDoc { a: w.a, b: w.b }
    }
}

/// Weighted terms of one parameter: `a_k * normalized(y_k)` and `b_p * y_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Contribution {
    pub performance: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "detail")]
pub enum ParamVerdict {
    /// Minimum number of aggregate copies that meets this requirement.
    Copies(u32),
    Complies,
    Fails(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum OverallVerdict {
    Complies { r: u32 },
    Fails { blocking: Vec<String>, reason: String },
}

/// Outcome of the redundancy sizing. Keys are parameter names plus
/// `env_support` for the coverage-environment check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RedundancyVerdict {
    pub per_param: BTreeMap<String, ParamVerdict>,
    pub overall: OverallVerdict,
}

impl RedundancyVerdict {
    pub fn r(&self) -> Option<u32> {
        match self.overall {
            OverallVerdict::Complies { r } => Some(r),
            OverallVerdict::Fails { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluationResult {
    pub name: String,
    pub vector: CharacterizationVector,
    pub contributions: BTreeMap<Param, Contribution>,
    pub f1: f64,
    /// Fraction per euro; `None` when the cost denominator is zero.
    pub f2: Option<f64>,
    /// `f2` in percent per thousand euro, the usual display form.
    pub f2_pct_per_keur: Option<f64>,
    pub redundancy: RedundancyVerdict,
}

/// One structural problem found by validation. `path` locates the field,
/// e.g. `branches[0].elements[2].availability`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn check_nonneg(out: &mut Vec<Violation>, path: String, value: f64) {
    if !value.is_finite() {
        out.push(Violation::new(path, "must be a finite number"));
    } else if value < 0.0 {
        out.push(Violation::new(path, format!("must be >= 0, got {value}")));
    }
}

fn check_probability(out: &mut Vec<Violation>, path: String, value: f64) {
    if !(0.0..=1.0).contains(&value) {
        out.push(Violation::new(
            path,
            format!("availability out of [0,1]: {value}"),
        ));
    }
}

fn check_series(out: &mut Vec<Violation>, prefix: &str, name: &str, series: &[f64], t: usize) {
    if series.len() != t {
        out.push(Violation::new(
            format!("{prefix}{name}"),
            format!("series length mismatch: {} values for study period {t}", series.len()),
        ));
    }
    for (i, v) in series.iter().enumerate() {
        check_nonneg(out, format!("{prefix}{name}[{i}]"), *v);
    }
}

fn check_study_period(out: &mut Vec<Violation>, prefix: &str, t: usize, k: f64) {
    if t == 0 {
        out.push(Violation::new(
            format!("{prefix}study_period_t"),
            "study period must be at least 1 year",
        ));
    }
    if !k.is_finite() || k <= -1.0 {
        out.push(Violation::new(
            format!("{prefix}interest_rate_k"),
            format!("interest rate must be finite and > -1, got {k}"),
        ));
    }
}

fn element_violations(out: &mut Vec<Violation>, prefix: &str, e: &AccessElement, t: usize) {
    check_nonneg(out, format!("{prefix}bw_rx_unit"), e.bw_rx_unit);
    check_nonneg(out, format!("{prefix}bw_tx_unit"), e.bw_tx_unit);
    check_probability(out, format!("{prefix}availability"), e.availability);
    if let Some(d) = e.distance_m {
        check_nonneg(out, format!("{prefix}distance_m"), d);
    }
    if let Some(f) = e.freq_band_ghz {
        check_nonneg(out, format!("{prefix}freq_band_ghz"), f);
    }
    if e.redundancy_n < 1 {
        out.push(Violation::new(format!("{prefix}redundancy_n"), "must be >= 1"));
    }
    if e.users < 1 {
        out.push(Violation::new(format!("{prefix}users"), "must be >= 1"));
    }
    if !(e.concurrency > 0.0 && e.concurrency <= 1.0) {
        out.push(Violation::new(
            format!("{prefix}concurrency"),
            format!("concurrency out of (0,1]: {}", e.concurrency),
        ));
    }
    check_nonneg(out, format!("{prefix}weather_rx_loss"), e.weather_rx_loss);
    check_nonneg(out, format!("{prefix}weather_tx_loss"), e.weather_tx_loss);
    if e.health_risk > 3 {
        out.push(Violation::new(
            format!("{prefix}health_risk"),
            format!("must be in 0..=3, got {}", e.health_risk),
        ));
    }
    check_series(out, prefix, "arpu", &e.arpu, t);
    check_series(out, prefix, "capex", &e.capex, t);
    check_series(out, prefix, "opex", &e.opex, t);
}

/// Every invariant violation of a chain. Empty means valid.
pub fn validate_chain(chain: &AccessChain) -> Vec<Violation> {
    let mut out = Vec::new();
    chain_violations(&mut out, "", chain);
    out
}

fn chain_violations(out: &mut Vec<Violation>, prefix: &str, chain: &AccessChain) {
    check_study_period(out, prefix, chain.study_period_t, chain.interest_rate_k);
    if chain.elements.is_empty() {
        out.push(Violation::new(
            format!("{prefix}elements"),
            "chain must contain at least one element",
        ));
    }
    for (i, e) in chain.elements.iter().enumerate() {
        let p = format!("{prefix}elements[{i}].");
        element_violations(out, &p, e, chain.study_period_t);
    }
}

fn precomputed_violations(out: &mut Vec<Violation>, prefix: &str, p: &PrecomputedAccess, t: usize) {
    check_nonneg(out, format!("{prefix}bw_rx_avg"), p.bw_rx_avg);
    check_nonneg(out, format!("{prefix}bw_tx_avg"), p.bw_tx_avg);
    check_probability(out, format!("{prefix}availability"), p.availability);
    check_nonneg(out, format!("{prefix}dist_to_ap_m"), p.dist_to_ap_m);
    check_nonneg(out, format!("{prefix}dist_total_m"), p.dist_total_m);
    check_nonneg(out, format!("{prefix}weather_rx_loss"), p.weather_rx_loss);
    check_nonneg(out, format!("{prefix}weather_tx_loss"), p.weather_tx_loss);
    if p.health_risk > 3 {
        out.push(Violation::new(
            format!("{prefix}health_risk"),
            format!("must be in 0..=3, got {}", p.health_risk),
        ));
    }
    check_series(out, prefix, "arpu", &p.arpu, t);
    check_series(out, prefix, "capex", &p.capex, t);
    check_series(out, prefix, "opex", &p.opex, t);
}

/// Validates a whole scenario: every branch plus the composition rules.
pub fn validate_composite(c: &CompositeAccess) -> Vec<Violation> {
    let mut out = Vec::new();
    check_study_period(&mut out, "", c.study_period_t, c.interest_rate_k);
    if c.branches.is_empty() {
        out.push(Violation::new("branches", "at least one branch is required"));
    } else if c.branches.iter().all(|b| b.backup_mode) {
        out.push(Violation::new(
            "branches",
            "at least one branch must be in aggregate (non-backup) mode",
        ));
    }
    for (i, b) in c.branches.iter().enumerate() {
        let prefix = format!("branches[{i}].");
        match &b.source {
            BranchSource::Chain(chain) => {
                if chain.study_period_t != c.study_period_t {
                    out.push(Violation::new(
                        format!("{prefix}study_period_t"),
                        "study period differs from the scenario's",
                    ));
                }
                chain_violations(&mut out, &prefix, chain);
            }
            BranchSource::Precomputed(p) => {
                let p_prefix = format!("{prefix}precomputed.");
                precomputed_violations(&mut out, &p_prefix, p, c.study_period_t);
            }
        }
    }
    out
}

/// Checks a requirements profile against the weights that will score it.
pub fn validate_profile(req: &RequirementsProfile, w: &PreferenceWeights) -> Vec<Violation> {
    let mut out = Vec::new();
    for (param, range) in &req.ranges {
        let path = format!("ranges.{param}");
        if !range.u_min.is_finite() || !range.u_max.is_finite() {
            out.push(Violation::new(path, "range bounds must be finite"));
        } else if range.u_min > range.u_max {
            out.push(Violation::new(
                path,
                format!("u_min {} > u_max {}", range.u_min, range.u_max),
            ));
        }
    }
    for (param, weight) in w.a() {
        if !weight.is_finite() {
            out.push(Violation::new(format!("a.{param}"), "weight must be finite"));
            continue;
        }
        if *weight == 0.0 {
            continue;
        }
        match req.range(*param) {
            None => out.push(Violation::new(
                format!("ranges.{param}"),
                "weighted parameter has no requirements range",
            )),
            Some(r) if r.width() <= 0.0 => out.push(Violation::new(
                format!("ranges.{param}"),
                "zero-width weighted range",
            )),
            Some(_) => {}
        }
    }
    if !(w.positive_a_sum() > 0.0) {
        out.push(Violation::new(
            "a",
            format!("positive_a_sum <= 0 ({})", w.positive_a_sum()),
        ));
    }
    let mut cost_unit: Option<(Param, Unit)> = None;
    for (param, weight) in w.b() {
        if !weight.is_finite() {
            out.push(Violation::new(format!("b.{param}"), "weight must be finite"));
            continue;
        }
        if *weight == 0.0 {
            continue;
        }
        match cost_unit {
            None => cost_unit = Some((*param, param.unit())),
            Some((first, unit)) if unit != param.unit() => out.push(Violation::new(
                format!("b.{param}"),
                format!("cost weights mix units: {param} vs {first}"),
            )),
            Some(_) => {}
        }
    }
    out
}
