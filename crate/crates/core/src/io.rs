//! JSON documents for scenarios, requirements, preferences and overlays,
//! and result emission as JSON, CSV or aligned text.

use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::forecast::ForecastReport;
use crate::merit::{Metric, QuadrantPoint, QuadrantReport, RankingTable};
use crate::model::{
    validate_composite, AccessChain, AccessElement, Branch, BranchSource, CharacterizationVector,
    CompositeAccess, EvaluationResult, OverallVerdict, Param, ParamValue, ParamVerdict,
    PrecomputedAccess, PreferenceWeights, RequirementsProfile, Violation,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchDocument {
    #[serde(default)]
    pub backup_mode: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<AccessElement>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precomputed: Option<PrecomputedAccess>,
}

/// On-disk scenario layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub name: String,
    pub study_period_t: usize,
    pub interest_rate_k: f64,
    pub branches: Vec<BranchDocument>,
}

impl ScenarioDocument {
    pub fn into_composite(self) -> Result<CompositeAccess, ParseError> {
        let mut violations = Vec::new();
        let mut branches = Vec::with_capacity(self.branches.len());
        for (i, b) in self.branches.into_iter().enumerate() {
            let source = match (b.elements, b.precomputed) {
                (Some(elements), None) => BranchSource::Chain(AccessChain {
                    scenario_name: self.name.clone(),
                    elements,
                    study_period_t: self.study_period_t,
                    interest_rate_k: self.interest_rate_k,
                }),
                (None, Some(p)) => BranchSource::Precomputed(p),
                _ => {
                    violations.push(Violation::new(
                        format!("branches[{i}]"),
                        "exactly one of `elements` or `precomputed` is required",
                    ));
                    continue;
                }
            };
            branches.push(Branch {
                source,
                backup_mode: b.backup_mode,
            });
        }
        if !violations.is_empty() {
            return Err(ParseError::Invalid(violations));
        }
        Ok(CompositeAccess {
            name: self.name,
            study_period_t: self.study_period_t,
            interest_rate_k: self.interest_rate_k,
            branches,
        })
    }
}

impl From<&CompositeAccess> for ScenarioDocument {
    fn from(c: &CompositeAccess) -> Self {
        ScenarioDocument {
            name: c.name.clone(),
            study_period_t: c.study_period_t,
            interest_rate_k: c.interest_rate_k,
            branches: c
                .branches
                .iter()
                .map(|b| match &b.source {
                    BranchSource::Chain(chain) => BranchDocument {
                        backup_mode: b.backup_mode,
                        elements: Some(chain.elements.clone()),
                        precomputed: None,
                    },
                    BranchSource::Precomputed(p) => BranchDocument {
                        backup_mode: b.backup_mode,
                        elements: None,
                        precomputed: Some(p.clone()),
                    },
                })
                .collect(),
        }
    }
}

/// Deserializes with the failing field path in schema errors.
pub fn from_json<T: DeserializeOwned>(document: &[u8]) -> Result<T, ParseError> {
    let mut de = serde_json::Deserializer::from_slice(document);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_data() {
            ParseError::Schema {
                path,
                message: inner.to_string(),
            }
        } else {
            ParseError::Json(inner)
        }
    })?;
    de.end()?;
    Ok(value)
}

/// Parses and validates a scenario document.
pub fn parse_scenario(document: &[u8]) -> Result<CompositeAccess, ParseError> {
    let c = from_json::<ScenarioDocument>(document)?.into_composite()?;
    let violations = validate_composite(&c);
    if !violations.is_empty() {
        return Err(ParseError::Invalid(violations));
    }
    Ok(c)
}

pub fn parse_requirements(document: &[u8]) -> Result<RequirementsProfile, ParseError> {
    from_json(document)
}

pub fn parse_preferences(document: &[u8]) -> Result<PreferenceWeights, ParseError> {
    from_json(document)
}

pub fn scenario_to_json(c: &CompositeAccess) -> String {
    let doc = ScenarioDocument::from(c);
    serde_json::to_string_pretty(&doc).expect("scenario documents always serialize")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatchField {
    Arpu,
    Capex,
    Opex,
    DistanceM,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PatchValue {
    Number(f64),
    Series(Vec<f64>),
}

/// One substituted value produced by an external model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Patch {
    pub branch: usize,
    pub element: usize,
    pub field: PatchField,
    pub value: PatchValue,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overlay {
    pub patches: Vec<Patch>,
}

pub fn parse_overlay(document: &[u8]) -> Result<Overlay, ParseError> {
    from_json(document)
}

/// Returns a copy of `scenario` with the overlay's values substituted.
pub fn import_external_outputs(
    scenario: &CompositeAccess,
    overlay: &Overlay,
) -> Result<CompositeAccess, ParseError> {
    let mut out = scenario.clone();
    let mut violations = Vec::new();
    for (i, patch) in overlay.patches.iter().enumerate() {
        let path = format!("patches[{i}]");
        let Some(branch) = out.branches.get_mut(patch.branch) else {
            violations.push(Violation::new(
                format!("{path}.branch"),
                format!("branch index {} out of range", patch.branch),
            ));
            continue;
        };
        let BranchSource::Chain(chain) = &mut branch.source else {
            violations.push(Violation::new(
                format!("{path}.branch"),
                "precomputed branches have no elements to patch",
            ));
            continue;
        };
        let Some(element) = chain.elements.get_mut(patch.element) else {
            violations.push(Violation::new(
                format!("{path}.element"),
                format!("element index {} out of range", patch.element),
            ));
            continue;
        };
        match (patch.field, &patch.value) {
            (PatchField::DistanceM, PatchValue::Number(d)) => element.distance_m = Some(*d),
            (PatchField::Arpu, PatchValue::Series(s)) => element.arpu = s.clone(),
            (PatchField::Capex, PatchValue::Series(s)) => element.capex = s.clone(),
            (PatchField::Opex, PatchValue::Series(s)) => element.opex = s.clone(),
            (field, _) => violations.push(Violation::new(
                format!("{path}.value"),
                format!("wrong value shape for {field:?}"),
            )),
        }
    }
    if !violations.is_empty() {
        return Err(ParseError::Invalid(violations));
    }
    let violations = validate_composite(&out);
    if !violations.is_empty() {
        return Err(ParseError::Invalid(violations));
    }
    Ok(out)
}

/// Precomputed merit figures, e.g. a published summary table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummaryPoint {
    pub name: String,
    pub f1: f64,
    /// Fraction per euro, like `EvaluationResult::f2`.
    pub f2: Option<f64>,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsDocument {
    pub points: Vec<SummaryPoint>,
}

impl PointsDocument {
    pub fn quadrant_points(&self, metric: Metric) -> Vec<QuadrantPoint> {
        self.points
            .iter()
            .map(|p| QuadrantPoint {
                name: p.name.clone(),
                f: match metric {
                    Metric::F1 => p.f1,
                    Metric::F2 => p.f2.unwrap_or(f64::NEG_INFINITY),
                },
                cost: p.cost,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Table,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "table" => Ok(OutputFormat::Table),
            other => Err(format!("unknown format '{other}' (expected json, csv or table)")),
        }
    }
}

/// Pretty JSON with a trailing newline, the form every JSON output uses.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("results always serialize");
    s.push('\n');
    s
}

fn csv_string(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv write");
    for r in rows {
        w.write_record(r).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv output is utf-8")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn series(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

fn value_text(v: ParamValue) -> String {
    match v {
        ParamValue::Number(n) => n.to_string(),
        ParamValue::Flag(f) => f.to_string(),
        ParamValue::Never => String::new(),
    }
}

/// `(field, value)` for every vector field, in schema order.
fn vector_fields(v: &CharacterizationVector) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    let head = [Param::BwRxAvg, Param::BwTxAvg, Param::Availability, Param::DistToApM, Param::DistTotalM];
    for p in head {
        out.push((p.to_string(), value_text(v.value(p))));
    }
    out.push(("arpu".into(), series(&v.arpu)));
    out.push(("capex".into(), series(&v.capex)));
    out.push(("opex".into(), series(&v.opex)));
    for p in &Param::ALL[5..] {
        out.push((p.to_string(), value_text(v.value(*p))));
    }
    let env: [bool; 4] = v.env_support.into();
    out.push((
        "env_support".into(),
        env.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(";"),
    ));
    out.push(("wireless_any".into(), v.wireless_any.to_string()));
    out
}

fn r_text(v: &OverallVerdict) -> String {
    match v {
        OverallVerdict::Complies { r } => r.to_string(),
        OverallVerdict::Fails { .. } => "fails".into(),
    }
}

fn verdict_text(v: &ParamVerdict) -> String {
    match v {
        ParamVerdict::Copies(r) => format!("r = {r}"),
        ParamVerdict::Complies => "complies".into(),
        ParamVerdict::Fails(why) => format!("fails ({why})"),
    }
}

fn pct(x: f64) -> String {
    format!("{:.2}%", x * 100.0)
}

fn pct_keur(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".into(), |v| format!("{v:.2} %/K€"))
}

fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (c, cell) in r.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            let pad = widths[c] - cell.chars().count();
            line.push_str(cell);
            line.push_str(&" ".repeat(pad));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn emit_result(result: &EvaluationResult, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(result),
        OutputFormat::Csv => {
            let mut rows: Vec<Vec<String>> = vector_fields(&result.vector)
                .into_iter()
                .map(|(k, v)| vec![k, v])
                .collect();
            rows.push(vec!["f1".into(), result.f1.to_string()]);
            rows.push(vec!["f2".into(), opt(result.f2)]);
            rows.push(vec!["f2_pct_per_keur".into(), opt(result.f2_pct_per_keur)]);
            rows.push(vec!["redundancy_r".into(), r_text(&result.redundancy.overall)]);
            csv_string(&["parameter".into(), "value".into()], &rows)
        }
        OutputFormat::Table => {
            let mut rows = vec![vec![
                "parameter".to_string(),
                "value".into(),
                "a*norm".into(),
                "b*y".into(),
                "redundancy".into(),
            ]];
            for (field, value) in vector_fields(&result.vector) {
                let param = Param::ALL.iter().find(|p| p.as_str() == field);
                let contribution = param.and_then(|p| result.contributions.get(p));
                let verdict = result.redundancy.per_param.get(&field);
                rows.push(vec![
                    field.clone(),
                    value,
                    contribution.map_or(String::new(), |c| format!("{:.4}", c.performance)),
                    contribution.map_or(String::new(), |c| format!("{:.2}", c.cost)),
                    verdict.map_or(String::new(), verdict_text),
                ]);
            }
            let mut out = format!("{}\n\n", result.name);
            out.push_str(&aligned(&rows));
            out.push('\n');
            let _ = writeln!(out, "F1  {}", pct(result.f1));
            let _ = writeln!(out, "F2  {}", pct_keur(result.f2_pct_per_keur));
            match &result.redundancy.overall {
                OverallVerdict::Complies { r } => {
                    let _ = writeln!(out, "R = {r}");
                }
                OverallVerdict::Fails { reason, .. } => {
                    let _ = writeln!(out, "R: fails ({reason})");
                }
            }
            out
        }
    }
}

const RANKING_HEADER: [&str; 25] = [
    "name",
    "bw_rx_avg",
    "bw_tx_avg",
    "availability",
    "dist_to_ap_m",
    "dist_total_m",
    "arpu",
    "capex",
    "opex",
    "npv",
    "net_cash_flow",
    "payback_years",
    "cost_first_year",
    "qos_capable",
    "los_user_ap",
    "los_ap_node",
    "license_needed",
    "ubiquity",
    "health_risk",
    "env_support",
    "wireless_any",
    "f1",
    "f2",
    "f2_pct_per_keur",
    "r",
];

pub fn emit_ranking(table: &RankingTable, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(table),
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|row| {
                    let mut cells = vec![row.name.clone()];
                    cells.extend(vector_fields(&row.vector).into_iter().map(|(_, v)| v));
                    cells.push(row.f1.to_string());
                    cells.push(opt(row.f2));
                    cells.push(opt(row.f2_pct_per_keur));
                    cells.push(opt(row.r));
                    cells
                })
                .collect();
            let header: Vec<String> = RANKING_HEADER.iter().map(|s| s.to_string()).collect();
            csv_string(&header, &rows)
        }
        OutputFormat::Table => {
            let mut rows = vec![vec![
                "#".to_string(),
                "name".into(),
                "F1".into(),
                "F2 (%/K€)".into(),
                "cost year 1".into(),
                "R".into(),
            ]];
            for (i, row) in table.rows.iter().enumerate() {
                rows.push(vec![
                    (i + 1).to_string(),
                    row.name.clone(),
                    pct(row.f1),
                    row.f2_pct_per_keur.map_or("n/a".into(), |v| format!("{v:.2}")),
                    format!("{:.2}", row.vector.cost_first_year),
                    row.r.map_or("fails".into(), |r| r.to_string()),
                ]);
            }
            format!("ranking by {}\n\n{}", table.metric, aligned(&rows))
        }
    }
}

pub fn emit_quadrant(report: &QuadrantReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = report
                .assignments
                .iter()
                .map(|(name, q)| vec![name.clone(), serde_json::to_value(q).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()])
                .collect();
            csv_string(&["name".into(), "quadrant".into()], &rows)
        }
        OutputFormat::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "merit threshold  {}", opt(report.f_threshold));
            let _ = writeln!(out, "cost threshold   {}", opt(report.cost_threshold));
            out.push('\n');
            let mut rows = vec![vec!["name".to_string(), "quadrant".into()]];
            for (name, q) in &report.assignments {
                rows.push(vec![name.clone(), q.label().into()]);
            }
            out.push_str(&aligned(&rows));
            out
        }
    }
}

pub fn emit_forecast(report: &ForecastReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = report
                .points
                .iter()
                .map(|p| vec![p.year.to_string(), p.f2.to_string()])
                .collect();
            csv_string(&["year".into(), "f2".into()], &rows)
        }
        OutputFormat::Table => {
            let mut rows = vec![vec!["year".to_string(), "F2 (%/K€)".into()]];
            for p in &report.points {
                rows.push(vec![p.year.to_string(), format!("{:.2}", p.f2 * crate::merit::F2_DISPLAY_FACTOR)]);
            }
            let mut out = aligned(&rows);
            let _ = writeln!(
                out,
                "\nsaturation year  {}",
                report.saturation_year.map_or("none".into(), |y| y.to_string())
            );
            out
        }
    }
}
