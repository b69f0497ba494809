use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use utem_core::engine::compare_results;
use utem_core::io::{self, OutputFormat};
use utem_core::merit::Metric;
use utem_server::library::ScenarioLibrary;
use utem_server::{router, AppState};

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn doc(rel: &str) -> Value {
    serde_json::from_slice(&std::fs::read(data(rel)).unwrap()).unwrap()
}

fn bytes(rel: &str) -> Vec<u8> {
    std::fs::read(data(rel)).unwrap()
}

fn app() -> Router {
    router(AppState::default(), None)
}

fn temp_library(tag: &str) -> (PathBuf, Router) {
    let dir = std::env::temp_dir().join(format!("utem-api-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let state = AppState {
        library: Some(Arc::new(ScenarioLibrary::new(&dir))),
    };
    (dir, router(state, None))
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<String>) -> (StatusCode, Vec<u8>) {
    let mut req = Request::builder().method(method).uri(uri);
    if body.is_some() {
        req = req.header(header::CONTENT_TYPE, "application/json");
    }
    let req = req.body(body.map(Body::from).unwrap_or_else(Body::empty)).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let body = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, body)
}

async fn post(app: &Router, uri: &str, body: &Value) -> (StatusCode, Value, Vec<u8>) {
    let (status, raw) = call(app, Method::POST, uri, Some(body.to_string())).await;
    let v = serde_json::from_slice(&raw).unwrap_or(Value::Null);
    (status, v, raw)
}

fn evaluate_body(scenario: &str) -> Value {
    json!({
        "scenario": doc(&format!("scenarios/{scenario}")),
        "requirements": doc("requirements/residential_30m.json"),
        "preferences": doc("preferences/default.json"),
    })
}

fn paths(v: &Value) -> Vec<String> {
    v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["path"].as_str().unwrap().to_string())
        .collect()
}

#[tokio::test]
async fn health_reports_version() {
    let (status, raw) = call(&app(), Method::GET, "/api/v1/health", None).await;
    assert_eq!(status, StatusCode::OK);
    let v: Value = serde_json::from_slice(&raw).unwrap();
    assert_eq!(v["status"], "ok");
    assert_eq!(v["engine_version"], utem_core::VERSION);
    assert_eq!(v["library"], false);
}

#[tokio::test]
async fn evaluate_adsl() {
    let (status, v, raw) = post(&app(), "/api/v1/evaluate", &evaluate_body("adsl.json")).await;
    assert_eq!(status, StatusCode::OK);
    assert!((v["f1"].as_f64().unwrap() - 0.2251).abs() <= 2e-4);
    assert_eq!(v["redundancy"]["overall"]["r"], 3);

    let scenario = io::parse_scenario(&bytes("scenarios/adsl.json")).unwrap();
    let req = io::parse_requirements(&bytes("requirements/residential_30m.json")).unwrap();
    let w = io::parse_preferences(&bytes("preferences/default.json")).unwrap();
    let local = utem_core::evaluate(&scenario, &req, &w).unwrap();
    assert_eq!(raw, io::emit_result(&local, OutputFormat::Json).into_bytes());
}

#[tokio::test]
async fn evaluate_with_overlay() {
    let mut body = evaluate_body("adsl.json");
    body["overlay"] = json!({"patches": [{"branch": 0, "element": 0, "field": "distance_m", "value": 900.0}]});
    let (status, v, _) = post(&app(), "/api/v1/evaluate", &body).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["vector"]["dist_to_ap_m"].as_f64(), Some(900.0));

    body["overlay"] = json!({"patches": [{"branch": 7, "element": 0, "field": "distance_m", "value": 1.0}]});
    let (status, v, _) = post(&app(), "/api/v1/evaluate", &body).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(paths(&v), ["overlay.patches[0].branch"]);
}

#[tokio::test]
async fn evaluate_missing_preferences_is_400() {
    let mut body = evaluate_body("adsl.json");
    body.as_object_mut().unwrap().remove("preferences");
    let (status, v, _) = post(&app(), "/api/v1/evaluate", &body).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(paths(&v), ["preferences"]);
}

#[tokio::test]
async fn evaluate_schema_error_has_path() {
    let mut body = evaluate_body("adsl.json");
    body["scenario"]["branches"][0]["elements"][1]["availability"] = json!("high");
    let (status, v, _) = post(&app(), "/api/v1/evaluate", &body).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(paths(&v), ["scenario.branches[0].elements[1].availability"]);

    let mut body = evaluate_body("adsl.json");
    body["scenario"]["branches"][0]["elements"][0]["availability"] = json!(1.2);
    let (status, v, _) = post(&app(), "/api/v1/evaluate", &body).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(paths(&v), ["scenario.branches[0].elements[0].availability"]);
}

#[tokio::test]
async fn evaluate_rejects_malformed_and_unknown() {
    let (status, _) = call(&app(), Method::POST, "/api/v1/evaluate", Some("{not json".into())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let mut body = evaluate_body("adsl.json");
    body["extra"] = json!(1);
    let (status, v, _) = post(&app(), "/api/v1/evaluate", &body).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(paths(&v), ["extra"]);
}

#[tokio::test]
async fn evaluate_without_positive_weights_is_422() {
    let mut body = evaluate_body("adsl.json");
    for (_, a) in body["preferences"]["a"].as_object_mut().unwrap() {
        *a = json!(-1.0);
    }
    let (status, v, _) = post(&app(), "/api/v1/evaluate", &body).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(v["error"].as_str().unwrap().contains("positive_a_sum"));
}

#[tokio::test]
async fn evaluate_zero_width_range_is_422() {
    let mut body = evaluate_body("adsl.json");
    body["requirements"]["ranges"]["bw_rx_avg"] = json!({"u_min": 30, "u_max": 30});
    let (status, _, _) = post(&app(), "/api/v1/evaluate", &body).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn repeated_posts_are_identical() {
    let body = evaluate_body("adsl_wifi_wimax.json");
    let (_, _, a) = post(&app(), "/api/v1/evaluate", &body).await;
    let (_, _, b) = post(&app(), "/api/v1/evaluate", &body).await;
    assert_eq!(a, b);
}

const CASE_A: [&str; 9] = [
    "adsl.json",
    "adsl_wifi_wimax.json",
    "adsl_x2.json",
    "ftth.json",
    "ftth_vrouter.json",
    "lte.json",
    "p2p_34m.json",
    "vdsl.json",
    "wimax.json",
];

fn compare_body(files: &[&str], metric: &str) -> Value {
    json!({
        "scenarios": files.iter().map(|f| doc(&format!("scenarios/{f}"))).collect::<Vec<_>>(),
        "requirements": doc("requirements/residential_30m.json"),
        "preferences": doc("preferences/default.json"),
        "metric": metric,
    })
}

#[tokio::test]
async fn compare_matches_engine() {
    let (status, v, raw) = post(&app(), "/api/v1/compare", &compare_body(&CASE_A, "f2")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["ranking"]["rows"].as_array().unwrap().len(), 9);
    assert_eq!(v["ranking"]["rows"][0]["name"], "FTTH-vRouter");
    for series in v["series"].as_object().unwrap().values() {
        assert_eq!(series.as_array().unwrap().len(), 9);
    }

    let req = io::parse_requirements(&bytes("requirements/residential_30m.json")).unwrap();
    let w = io::parse_preferences(&bytes("preferences/default.json")).unwrap();
    let results: Vec<_> = CASE_A
        .iter()
        .map(|f| {
            let s = io::parse_scenario(&bytes(&format!("scenarios/{f}"))).unwrap();
            utem_core::evaluate(&s, &req, &w).unwrap()
        })
        .collect();
    let local = compare_results(&results, Metric::F2);
    assert_eq!(raw, io::to_json(&local).into_bytes());
    let cli_ranking: Value = serde_json::from_str(&io::emit_ranking(&local.ranking, OutputFormat::Json)).unwrap();
    assert_eq!(v["ranking"], cli_ranking);
}

#[tokio::test]
async fn compare_single_and_empty() {
    let (status, v, _) = post(&app(), "/api/v1/compare", &compare_body(&["ftth.json"], "f1")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["ranking"]["rows"].as_array().unwrap().len(), 1);

    let (status, _, _) = post(&app(), "/api/v1/compare", &compare_body(&[], "f1")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let mut body = compare_body(&["ftth.json", "adsl.json"], "f1");
    body["scenarios"][1]["study_period_t"] = json!("three");
    let (status, v, _) = post(&app(), "/api/v1/compare", &body).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(paths(&v), ["scenarios[1].study_period_t"]);

    let body = compare_body(&["ftth.json"], "f3");
    let (status, _, _) = post(&app(), "/api/v1/compare", &body).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn predict_saturation() {
    let (status, v, raw) = post(&app(), "/api/v1/predict", &doc("forecast/ftth_cost.json")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["saturation_year"], 2015);
    let request: utem_core::forecast::ForecastRequest = io::from_json(&bytes("forecast/ftth_cost.json")).unwrap();
    let local = utem_core::forecast::forecast(request.f1, &request.cost_series, 0.1).unwrap();
    assert_eq!(raw, io::emit_forecast(&local, OutputFormat::Json).into_bytes());

    let flat = json!({"f1": 0.5, "cost_series": [
        {"year": 2010, "cost": 100.0}, {"year": 2011, "cost": 100.0}, {"year": 2012, "cost": 100.0}
    ]});
    let (status, v, _) = post(&app(), "/api/v1/predict", &flat).await;
    assert_eq!(status, StatusCode::OK);
    assert!(v["saturation_year"].is_null());

    let short = json!({"f1": 0.5, "cost_series": [{"year": 2010, "cost": 100.0}, {"year": 2011, "cost": 90.0}]});
    let (status, _, _) = post(&app(), "/api/v1/predict", &short).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let mut bad_eps = doc("forecast/ftth_cost.json");
    bad_eps["epsilon"] = json!(1.5);
    let (status, _, _) = post(&app(), "/api/v1/predict", &bad_eps).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn library_round_trip() {
    let (dir, app) = temp_library("rt");
    let (status, raw) = call(&app, Method::GET, "/api/v1/scenarios", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(serde_json::from_slice::<Value>(&raw).unwrap(), json!({"scenarios": []}));

    let ftth = String::from_utf8(bytes("scenarios/ftth.json")).unwrap();
    let (status, stored) = call(&app, Method::PUT, "/api/v1/scenarios/ftth", Some(ftth.clone())).await;
    assert_eq!(status, StatusCode::CREATED);
    let (status, _) = call(&app, Method::PUT, "/api/v1/scenarios/ftth", Some(ftth)).await;
    assert_eq!(status, StatusCode::OK);

    let (status, fetched) = call(&app, Method::GET, "/api/v1/scenarios/ftth", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(fetched, stored);
    let original = io::parse_scenario(&bytes("scenarios/ftth.json")).unwrap();
    assert_eq!(io::parse_scenario(&fetched).unwrap(), original);

    let (_, raw) = call(&app, Method::GET, "/api/v1/scenarios", None).await;
    assert_eq!(serde_json::from_slice::<Value>(&raw).unwrap(), json!({"scenarios": ["ftth"]}));
    std::fs::remove_dir_all(dir).ok();
}

#[tokio::test]
async fn library_errors() {
    let (dir, app) = temp_library("err");
    let (status, _) = call(&app, Method::GET, "/api/v1/scenarios/absent", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, Method::GET, "/api/v1/scenarios/.hidden", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, raw) = call(&app, Method::PUT, "/api/v1/scenarios/broken", Some("{\"name\": 1}".into())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(paths(&serde_json::from_slice(&raw).unwrap()), ["name"]);
    assert!(!dir.join("broken.json").exists());

    let (status, _) = call(&self::app(), Method::GET, "/api/v1/scenarios", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    std::fs::remove_dir_all(dir).ok();
}

#[tokio::test]
async fn concurrent_writes_leave_a_whole_document() {
    let (dir, app) = temp_library("race");
    let docs: Vec<String> = CASE_A
        .iter()
        .map(|f| String::from_utf8(bytes(&format!("scenarios/{f}"))).unwrap())
        .collect();
    let tasks: Vec<_> = docs
        .iter()
        .cycle()
        .take(36)
        .cloned()
        .map(|d| {
            let app = app.clone();
            tokio::spawn(async move { call(&app, Method::PUT, "/api/v1/scenarios/shared", Some(d)).await.0 })
        })
        .collect();
    for t in tasks {
        assert!(t.await.unwrap().is_success());
    }
    let (_, fetched) = call(&app, Method::GET, "/api/v1/scenarios/shared", None).await;
    let stored = io::parse_scenario(&fetched).unwrap();
    assert!(docs.iter().any(|d| io::parse_scenario(d.as_bytes()).unwrap() == stored));
    std::fs::remove_dir_all(dir).ok();
}

#[tokio::test]
async fn cors_preflight() {
    let req = Request::builder()
        .method(Method::OPTIONS)
        .uri("/api/v1/evaluate")
        .header(header::ORIGIN, "http://localhost:5173")
        .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
        .body(Body::empty())
        .unwrap();
    let resp = app().oneshot(req).await.unwrap();
    assert!(resp.status().is_success());
    assert_eq!(resp.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN], "*");
}
