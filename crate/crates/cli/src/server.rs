//! Local HTTP service for the authoring UI.
//!
//! The table is loaded once at startup and never changes while serving.

use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use quickdash_core::{compile_dashboard, parse_spec, preview, to_ir_string, CompileError, DataTable, ParseError};
use serde_json::json;
use tower_http::services::{ServeDir, ServeFile};

#[derive(Clone)]
pub struct AppState {
    pub table: Arc<DataTable>,
    /// Directory holding the built UI bundle, if any.
    pub ui_dir: Option<PathBuf>,
}

pub fn router(state: AppState) -> Router {
    let api = Router::new()
        .route("/schema", get(schema))
        .route("/preview", post(preview_spec))
        .route("/compile", post(compile_spec));
    let ui = state
        .ui_dir
        .as_ref()
        .filter(|dir| dir.join("index.html").is_file())
        .map(|dir| ServeDir::new(dir).fallback(ServeFile::new(dir.join("index.html"))));
    let router = match ui {
        Some(ui) => api.fallback_service(ui),
        None => api.fallback(not_found),
    };
    router.with_state(state)
}

fn json_response(status: StatusCode, body: String) -> Response {
    (
        status,
        [(header::CONTENT_TYPE, "application/json; charset=utf-8")],
        body,
    )
        .into_response()
}

fn error_response(status: StatusCode, body: serde_json::Value) -> Response {
    json_response(status, body.to_string())
}

fn parse_failure(err: &ParseError) -> Response {
    error_response(
        StatusCode::BAD_REQUEST,
        json!({"error": "parse", "code": err.code(), "path": err.path(), "message": err.to_string()}),
    )
}

fn internal(message: String) -> Response {
    tracing::error!(%message, "request failed");
    error_response(
        StatusCode::INTERNAL_SERVER_ERROR,
        json!({"error": "internal", "message": message}),
    )
}

async fn not_found() -> Response {
    error_response(
        StatusCode::NOT_FOUND,
        json!({"error": "not_found", "message": "no such endpoint and no UI bundle is being served"}),
    )
}

async fn schema(State(state): State<AppState>) -> Response {
    match serde_json::to_string(state.table.schema()) {
        Ok(body) => json_response(StatusCode::OK, body),
        Err(e) => internal(e.to_string()),
    }
}

// Spec bodies are taken as text so malformed JSON is reported as a parse error
// with our own shape rather than the extractor's.
async fn preview_spec(State(state): State<AppState>, body: String) -> Response {
    let spec = match parse_spec(&body) {
        Ok(spec) => spec,
        Err(e) => return parse_failure(&e),
    };
    let skeleton = preview(&spec, state.table.schema());
    match serde_json::to_string(&skeleton) {
        Ok(body) => json_response(StatusCode::OK, body),
        Err(e) => internal(e.to_string()),
    }
}

async fn compile_spec(State(state): State<AppState>, body: String) -> Response {
    let spec = match parse_spec(&body) {
        Ok(spec) => spec,
        Err(e) => return parse_failure(&e),
    };
    let table = Arc::clone(&state.table);
    let result = tokio::task::spawn_blocking(move || compile_dashboard(&spec, &table)).await;
    match result {
        Ok(Ok(compiled)) => json_response(StatusCode::OK, to_ir_string(&compiled.doc)),
        Ok(Err(CompileError::Validation(report))) => match serde_json::to_string(&report) {
            Ok(body) => json_response(StatusCode::UNPROCESSABLE_ENTITY, body),
            Err(e) => internal(e.to_string()),
        },
        Ok(Err(CompileError::Parse(e))) => parse_failure(&e),
        Ok(Err(e)) => internal(e.to_string()),
        Err(e) => internal(e.to_string()),
    }
}
