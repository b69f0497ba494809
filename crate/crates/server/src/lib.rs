//! HTTP JSON API over the evaluation engine.
//!
//! Every route under `/api/v1` is stateless except the optional scenario
//! library. Response bodies are byte-identical to the CLI's JSON output
//! for the same documents.

mod error;
pub mod library;

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde_json::{Map, Value};
use tower_http::cors::{AllowOrigin, CorsLayer};

use utem_core::engine::compare_results;
use utem_core::forecast::{forecast, ForecastRequest, DEFAULT_EPSILON};
use utem_core::io::{self, OutputFormat};
use utem_core::merit::Metric;
use utem_core::{evaluate, ParseError};

pub use error::ApiError;
use library::{LibraryError, ScenarioLibrary};

#[derive(Debug, Clone, Default)]
pub struct AppState {
    pub library: Option<Arc<ScenarioLibrary>>,
}

/// Builds the router. `cors_origin` of `None` allows any origin.
pub fn router(state: AppState, cors_origin: Option<HeaderValue>) -> Router {
    let cors = CorsLayer::new()
        .allow_methods([Method::GET, Method::POST, Method::PUT])
        .allow_headers([header::CONTENT_TYPE])
        .allow_origin(match cors_origin {
            Some(origin) => AllowOrigin::exact(origin),
            None => AllowOrigin::any(),
        });
    Router::new()
        .route("/api/v1/health", get(health))
        .route("/api/v1/evaluate", post(handle_evaluate))
        .route("/api/v1/compare", post(handle_compare))
        .route("/api/v1/predict", post(handle_predict))
        .route("/api/v1/scenarios", get(list_scenarios))
        .route("/api/v1/scenarios/{name}", get(get_scenario).put(put_scenario))
        .layer(cors)
        .with_state(state)
}

pub(crate) fn json_body(body: String) -> impl IntoResponse {
    ([(header::CONTENT_TYPE, "application/json")], body)
}

fn object(body: &[u8], allowed: &[&str]) -> Result<Map<String, Value>, ApiError> {
    let value: Value =
        serde_json::from_slice(body).map_err(|e| ApiError::parse("", ParseError::Json(e)))?;
    let Value::Object(map) = value else {
        return Err(ApiError::bad_request("request body must be a JSON object"));
    };
    if let Some(key) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
        let mut e = ApiError::bad_request(format!("unknown field `{key}`"));
        e.violations.push(utem_core::Violation::new(key.as_str(), "unknown field"));
        return Err(e);
    }
    Ok(map)
}

fn part<T>(
    map: &Map<String, Value>,
    key: &str,
    parse: fn(&[u8]) -> Result<T, ParseError>,
) -> Result<T, ApiError> {
    let value = map.get(key).ok_or_else(|| ApiError::missing(key))?;
    parse_value(key, value, parse)
}

fn parse_value<T>(
    path: &str,
    value: &Value,
    parse: fn(&[u8]) -> Result<T, ParseError>,
) -> Result<T, ApiError> {
    let bytes = serde_json::to_vec(value).expect("JSON values serialize");
    parse(&bytes).map_err(|e| ApiError::parse(path, e))
}

async fn health(State(state): State<AppState>) -> impl IntoResponse {
    let body = serde_json::json!({
        "status": "ok",
        "service": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "engine_version": utem_core::VERSION,
        "library": state.library.is_some(),
    });
    json_body(io::to_json(&body))
}

async fn handle_evaluate(body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let map = object(&body, &["scenario", "requirements", "preferences", "overlay"])?;
    let mut scenario = part(&map, "scenario", io::parse_scenario)?;
    let req = part(&map, "requirements", io::parse_requirements)?;
    let w = part(&map, "preferences", io::parse_preferences)?;
    if let Some(value) = map.get("overlay").filter(|v| !v.is_null()) {
        let overlay = parse_value("overlay", value, io::parse_overlay)?;
        scenario = io::import_external_outputs(&scenario, &overlay)
            .map_err(|e| ApiError::parse("overlay", e))?;
    }
    let result = evaluate(&scenario, &req, &w).map_err(ApiError::engine)?;
    Ok(json_body(io::emit_result(&result, OutputFormat::Json)))
}

async fn handle_compare(body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let map = object(&body, &["scenarios", "requirements", "preferences", "metric"])?;
    let list = match map.get("scenarios") {
        Some(Value::Array(list)) => list,
        Some(_) => return Err(ApiError::bad_request("`scenarios` must be an array")),
        None => return Err(ApiError::missing("scenarios")),
    };
    if list.is_empty() {
        return Err(ApiError::bad_request("`scenarios` is empty"));
    }
    let scenarios = list
        .iter()
        .enumerate()
        .map(|(i, v)| parse_value(&format!("scenarios[{i}]"), v, io::parse_scenario))
        .collect::<Result<Vec<_>, _>>()?;
    let req = part(&map, "requirements", io::parse_requirements)?;
    let w = part(&map, "preferences", io::parse_preferences)?;
    let metric = match map.get("metric") {
        None | Some(Value::Null) => Metric::F1,
        Some(v) => parse_value("metric", v, io::from_json::<Metric>)?,
    };
    let results = scenarios
        .iter()
        .map(|s| evaluate(s, &req, &w))
        .collect::<Result<Vec<_>, _>>()
        .map_err(ApiError::engine)?;
    Ok(json_body(io::to_json(&compare_results(&results, metric))))
}

async fn handle_predict(body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let request: ForecastRequest =
        io::from_json(&body).map_err(|e| ApiError::parse("", e))?;
    let epsilon = request.epsilon.unwrap_or(DEFAULT_EPSILON);
    let report = forecast(request.f1, &request.cost_series, epsilon).map_err(|e| {
        let mut err = ApiError::engine(e);
        err.status = StatusCode::BAD_REQUEST;
        err
    })?;
    Ok(json_body(io::emit_forecast(&report, OutputFormat::Json)))
}

fn library(state: &AppState) -> Result<&ScenarioLibrary, ApiError> {
    state
        .library
        .as_deref()
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "no scenario library configured"))
}

fn library_error(e: LibraryError) -> ApiError {
    let status = match e {
        LibraryError::BadName(_) => StatusCode::BAD_REQUEST,
        LibraryError::NotFound(_) => StatusCode::NOT_FOUND,
        LibraryError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
    };
    ApiError::new(status, e.to_string())
}

async fn list_scenarios(State(state): State<AppState>) -> Result<impl IntoResponse, ApiError> {
    let names = library(&state)?.list().await.map_err(library_error)?;
    Ok(json_body(io::to_json(&serde_json::json!({ "scenarios": names }))))
}

async fn get_scenario(
    State(state): State<AppState>,
    Path(name): Path<String>,
) -> Result<Response, ApiError> {
    let bytes = library(&state)?.get(&name).await.map_err(library_error)?;
    Ok(([(header::CONTENT_TYPE, "application/json")], bytes).into_response())
}

/// Validates before storing; the stored form is the canonical document.
async fn put_scenario(
    State(state): State<AppState>,
    Path(name): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let lib = library(&state)?;
    let scenario = io::parse_scenario(&body).map_err(|e| ApiError::parse("", e))?;
    let mut document = io::scenario_to_json(&scenario);
    document.push('\n');
    let created = lib.put(&name, &document).await.map_err(library_error)?;
    let status = if created { StatusCode::CREATED } else { StatusCode::OK };
    Ok((status, json_body(document)).into_response())
}
