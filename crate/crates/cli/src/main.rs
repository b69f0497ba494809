//! `utem`: batch front-end to the evaluation engine.

mod error;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use error::CliError;
use utem_core::engine::{compare_results, quadrant_points};
use utem_core::forecast::{forecast, CostPoint, DEFAULT_EPSILON};
use utem_core::io::{self, OutputFormat, PointsDocument};
use utem_core::merit::{quadrant_classify, Metric};
use utem_core::{evaluate, CompositeAccess, EvaluationResult, OverallVerdict, PreferenceWeights, RequirementsProfile};

#[derive(Debug, Parser)]
#[command(name = "utem", version, about = "Techno-economic evaluation of network access technologies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Characterize one scenario, score it and size its redundancy.
    Evaluate(EvaluateArgs),
    /// Only the redundancy verdict of one scenario.
    Redundancy(EvaluateArgs),
    /// Rank several scenarios by F1 or F2.
    Compare(CompareArgs),
    /// Place scenarios (or precomputed points) in cost/benefit quadrants.
    Quadrant(QuadrantArgs),
    /// F2 evolution under a yearly cost series, with its saturation year.
    Predict(PredictArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Table,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Table => OutputFormat::Table,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricArg {
    F1,
    F2,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::F1 => Metric::F1,
            MetricArg::F2 => Metric::F2,
        }
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, env = "UTEM_FORMAT", default_value = "json")]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct ProfileArgs {
    #[arg(long, value_name = "FILE")]
    requirements: PathBuf,
    #[arg(long, value_name = "FILE")]
    preferences: PathBuf,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long, value_name = "FILE")]
    scenario: PathBuf,
    #[command(flatten)]
    profile: ProfileArgs,
    /// External model outputs to substitute before evaluating.
    #[arg(long, value_name = "FILE")]
    overlay: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ScenarioSet {
    #[arg(long = "scenario", value_name = "FILE")]
    scenarios: Vec<PathBuf>,
    /// Every `*.json` file in the directory, in name order.
    #[arg(long, value_name = "DIR")]
    scenarios_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    set: ScenarioSet,
    #[command(flatten)]
    profile: ProfileArgs,
    #[arg(long, value_enum, default_value = "f1")]
    metric: MetricArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct QuadrantArgs {
    #[command(flatten)]
    set: ScenarioSet,
    #[arg(long, value_name = "FILE")]
    requirements: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    preferences: Option<PathBuf>,
    /// Precomputed `{points: [{name, f1, f2, cost}]}` instead of scenarios.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["scenarios", "scenarios_dir"])]
    points: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "f1")]
    metric: MetricArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct PredictArgs {
    /// `{f1?, cost_series: [{year, cost}], epsilon?}`.
    #[arg(long, value_name = "FILE")]
    series: PathBuf,
    /// Take F1 from this scenario instead of the series file.
    #[arg(long, value_name = "FILE", requires_all = ["requirements", "preferences"])]
    scenario: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    requirements: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    preferences: Option<PathBuf>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesDocument {
    #[serde(default)]
    f1: Option<f64>,
    cost_series: Vec<CostPoint>,
    #[serde(default)]
    epsilon: Option<f64>,
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn load<T>(path: &Path, parse: fn(&[u8]) -> Result<T, utem_core::ParseError>) -> Result<T, CliError> {
    parse(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn load_profile(req: &Path, prefs: &Path) -> Result<(RequirementsProfile, PreferenceWeights), CliError> {
    Ok((load(req, io::parse_requirements)?, load(prefs, io::parse_preferences)?))
}

fn load_scenario(path: &Path, overlay: Option<&Path>) -> Result<CompositeAccess, CliError> {
    let scenario = load(path, io::parse_scenario)?;
    match overlay {
        None => Ok(scenario),
        Some(o) => {
            let overlay = load(o, io::parse_overlay)?;
            io::import_external_outputs(&scenario, &overlay).map_err(|source| CliError::Parse {
                path: o.to_path_buf(),
                source,
            })
        }
    }
}

fn scenario_paths(set: &ScenarioSet) -> Result<Vec<PathBuf>, CliError> {
    let mut paths = set.scenarios.clone();
    if let Some(dir) = &set.scenarios_dir {
        let entries = fs::read_dir(dir).map_err(|source| CliError::Read {
            path: dir.clone(),
            source,
        })?;
        let mut found: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        found.sort();
        paths.extend(found);
    }
    if paths.is_empty() {
        return Err(CliError::Input(
            "no scenarios given (use --scenario or --scenarios-dir)".into(),
        ));
    }
    Ok(paths)
}

fn evaluate_set(set: &ScenarioSet, req: &RequirementsProfile, w: &PreferenceWeights) -> Result<Vec<EvaluationResult>, CliError> {
    scenario_paths(set)?
        .iter()
        .map(|p| Ok(evaluate(&load_scenario(p, None)?, req, w)?))
        .collect()
}

/// Output text and whether the evaluation itself failed.
fn execute(command: Command) -> Result<(String, bool), CliError> {
    match command {
        Command::Evaluate(args) => {
            let result = evaluate_one(&args)?;
            let failed = matches!(result.redundancy.overall, OverallVerdict::Fails { .. });
            Ok((io::emit_result(&result, args.output.format.into()), failed))
        }
        Command::Redundancy(args) => {
            let result = evaluate_one(&args)?;
            let failed = matches!(result.redundancy.overall, OverallVerdict::Fails { .. });
            Ok((emit_verdict(&result, args.output.format.into()), failed))
        }
        Command::Compare(args) => {
            let (req, w) = load_profile(&args.profile.requirements, &args.profile.preferences)?;
            let results = evaluate_set(&args.set, &req, &w)?;
            let report = compare_results(&results, args.metric.into());
            Ok((io::emit_ranking(&report.ranking, args.output.format.into()), false))
        }
        Command::Quadrant(args) => {
            let metric: Metric = args.metric.into();
            let points = match &args.points {
                Some(path) => load(path, io::from_json::<PointsDocument>)?.quadrant_points(metric),
                None => {
                    let (Some(req), Some(prefs)) = (&args.requirements, &args.preferences) else {
                        return Err(CliError::Input(
                            "--requirements and --preferences are needed to evaluate scenarios".into(),
                        ));
                    };
                    let (req, w) = load_profile(req, prefs)?;
                    quadrant_points(&evaluate_set(&args.set, &req, &w)?, metric)
                }
            };
            let report = quadrant_classify(&points);
            Ok((io::emit_quadrant(&report, args.output.format.into()), false))
        }
        Command::Predict(args) => {
            let doc = load(&args.series, io::from_json::<SeriesDocument>)?;
            let f1 = match (&args.scenario, &args.requirements, &args.preferences) {
                (Some(s), Some(r), Some(p)) => {
                    let (req, w) = load_profile(r, p)?;
                    evaluate(&load_scenario(s, None)?, &req, &w)?.f1
                }
                _ => doc.f1.ok_or_else(|| {
                    CliError::Input("the series file has no f1 and no --scenario was given".into())
                })?,
            };
            let epsilon = args.epsilon.or(doc.epsilon).unwrap_or(DEFAULT_EPSILON);
            let report = forecast(f1, &doc.cost_series, epsilon)?;
            Ok((io::emit_forecast(&report, args.output.format.into()), false))
        }
    }
}

fn evaluate_one(args: &EvaluateArgs) -> Result<EvaluationResult, CliError> {
    let (req, w) = load_profile(&args.profile.requirements, &args.profile.preferences)?;
    let scenario = load_scenario(&args.scenario, args.overlay.as_deref())?;
    Ok(evaluate(&scenario, &req, &w)?)
}

fn emit_verdict(result: &EvaluationResult, format: OutputFormat) -> String {
    let verdict = &result.redundancy;
    match format {
        OutputFormat::Json => io::to_json(verdict),
        OutputFormat::Csv | OutputFormat::Table => {
            let sep = if format == OutputFormat::Csv { "," } else { "  " };
            let mut out = format!("parameter{sep}verdict\n");
            for (k, v) in &verdict.per_param {
                let text = match v {
                    utem_core::ParamVerdict::Copies(r) => r.to_string(),
                    utem_core::ParamVerdict::Complies => "complies".into(),
                    utem_core::ParamVerdict::Fails(why) => format!("fails: {why}"),
                };
                out.push_str(&format!("{k}{sep}{text}\n"));
            }
            match &verdict.overall {
                OverallVerdict::Complies { r } => out.push_str(&format!("R{sep}{r}\n")),
                OverallVerdict::Fails { reason, .. } => out.push_str(&format!("R{sep}fails: {reason}\n")),
            }
            out
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok((text, failed)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            ExitCode::from(if failed { 2 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
