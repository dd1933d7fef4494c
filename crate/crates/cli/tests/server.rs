use std::fs::File;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use quickdash_cli::server::{router, AppState};
use quickdash_core::{compile_dashboard, load_csv, parse_spec, to_ir_string, CsvOptions, DataTable};
use serde_json::Value;
use tower::ServiceExt;

const EXAMPLE_3: &str = r#"{"Sections": [
  {"Metrics": ["Sales (SUM)", "Shipping Cost (SUM)"],
   "DimensionGroups": [{"PrimaryField": "Ship Date"}, {"PrimaryField": "Ship Date", "SecondaryField": "Region"}],
   "MetricLayout": "Layer"},
  {"Metrics": ["Sales (SUM)", "Shipping Cost (SUM)"],
   "DimensionGroups": [{"PrimaryField": "Region"}, {"PrimaryField": "Region", "SecondaryField": "Category"}],
   "MetricLayout": "Repeat"}]}"#;

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/superstore.csv")
}

fn table() -> Arc<DataTable> {
    Arc::new(load_csv(File::open(fixture()).unwrap(), CsvOptions::default()).unwrap())
}

fn state(ui_dir: Option<PathBuf>) -> AppState {
    AppState { table: table(), ui_dir }
}

async fn send(state: AppState, method: &str, uri: &str, body: &str) -> (StatusCode, String, String) {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .body(Body::from(body.to_string()))
        .unwrap();
    let response = router(state).oneshot(request).await.unwrap();
    let status = response.status();
    let content_type = response
        .headers()
        .get("content-type")
        .map(|v| v.to_str().unwrap().to_string())
        .unwrap_or_default();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    (status, content_type, String::from_utf8(bytes.to_vec()).unwrap())
}

#[tokio::test]
async fn schema_endpoint_returns_table_schema() {
    let (status, content_type, body) = send(state(None), "GET", "/schema", "").await;
    assert_eq!(status, StatusCode::OK);
    assert!(content_type.starts_with("application/json"));
    let schema: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(schema, serde_json::to_value(table().schema()).unwrap());
    assert_eq!(schema["rowCount"], 100);
    let types: Vec<&str> = schema["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["type"].as_str().unwrap())
        .collect();
    assert_eq!(
        types,
        ["quantitative", "quantitative", "temporal", "categorical", "categorical"]
    );
}

#[tokio::test]
async fn preview_of_two_sections_predicts_two_and_four_cells() {
    let (status, _, body) = send(state(None), "POST", "/preview", EXAMPLE_3).await;
    assert_eq!(status, StatusCode::OK);
    let skeleton: Value = serde_json::from_str(&body).unwrap();
    let counts: Vec<u64> = skeleton["sections"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["cells"].as_array().unwrap().len() as u64)
        .collect();
    assert_eq!(counts, [2, 4]);
    assert_eq!(skeleton["sections"][0]["chartCount"], 2);
    assert_eq!(skeleton["sections"][1]["rows"], 2);
    assert_eq!(skeleton["sections"][1]["cols"], 2);
}

#[tokio::test]
async fn preview_reports_validation_problems_in_place() {
    let spec = r#"{"Sections": [{"Metrics": ["Region (SUM)"], "DimensionGroups": [["Region"]]}]}"#;
    let (status, _, body) = send(state(None), "POST", "/preview", spec).await;
    assert_eq!(status, StatusCode::OK);
    let skeleton: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(skeleton["sections"][0]["errors"][0]["path"], "Sections[0].Metrics[0]");
    assert_eq!(skeleton["sections"][0]["cells"][0]["mark"], Value::Null);
}

#[tokio::test]
async fn compile_returns_the_same_ir_as_the_library() {
    let (status, content_type, body) = send(state(None), "POST", "/compile", EXAMPLE_3).await;
    assert_eq!(status, StatusCode::OK);
    assert!(content_type.starts_with("application/json"));
    let expected = to_ir_string(
        &compile_dashboard(&parse_spec(EXAMPLE_3).unwrap(), &table())
            .unwrap()
            .doc,
    );
    assert_eq!(body, expected);
}

#[tokio::test]
async fn invalid_spec_is_422_with_the_report() {
    let spec = r#"{"Sections": [{"Metrics": ["Region (SUM)", "Profit (SUM)"], "DimensionGroups": []}]}"#;
    let (status, content_type, body) = send(state(None), "POST", "/compile", spec).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(content_type.starts_with("application/json"));
    let report: Value = serde_json::from_str(&body).unwrap();
    let errors = report["errors"].as_array().unwrap();
    assert_eq!(errors.len(), 2);
    assert_eq!(errors[0]["code"], "AggregationTypeMismatch");
    assert_eq!(errors[1]["code"], "UnknownField");
    assert_eq!(errors[1]["path"], "Sections[0].Metrics[1]");
    assert!(report["warnings"].is_array());
}

#[tokio::test]
async fn unparseable_spec_is_400() {
    for (uri, body, code) in [
        ("/compile", "{not json", "Syntax"),
        ("/preview", r#"{"Sections": [{"Metrics": []}]}"#, "MissingKey"),
        (
            "/compile",
            r#"{"Sections": [{"Metrics": [], "DimensionGroups": [["A", "B", "C"]]}]}"#,
            "GroupTooLarge",
        ),
    ] {
        let (status, _, text) = send(state(None), "POST", uri, body).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{uri} {body}");
        let error: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(error["error"], "parse");
        assert_eq!(error["code"], code);
        assert!(error["path"].is_string());
    }
}

#[tokio::test]
async fn root_without_bundle_is_json_404() {
    let (status, content_type, body) = send(state(None), "GET", "/", "").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert!(content_type.starts_with("application/json"));
    assert_eq!(serde_json::from_str::<Value>(&body).unwrap()["error"], "not_found");
}

#[tokio::test]
async fn root_serves_the_bundle_when_present() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<!doctype html><title>ui</title>").unwrap();
    std::fs::write(dir.path().join("app.js"), "console.log(1)").unwrap();
    let ui = Some(dir.path().to_path_buf());

    let (status, content_type, body) = send(state(ui.clone()), "GET", "/", "").await;
    assert_eq!(status, StatusCode::OK);
    assert!(content_type.starts_with("text/html"));
    assert!(body.contains("<title>ui</title>"));

    let (status, _, body) = send(state(ui.clone()), "GET", "/app.js", "").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, "console.log(1)");

    // API routes still win over the bundle.
    let (status, _, _) = send(state(ui), "GET", "/schema", "").await;
    assert_eq!(status, StatusCode::OK);
}
