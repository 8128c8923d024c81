//! HTTP endpoints.

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};

use crate::api::{CreateSession, ErrorBody, FieldError, SubmitAnswers};
use crate::session::SessionError;
use crate::store::{SessionHandle, Store};

/// Frozen endpoint and payload contract served to the UI.
pub const CONTRACT: &str = include_str!("../contracts/session-api.json");

const NDJSON: &str = "application/x-ndjson";

pub enum ApiError {
    NotFound(String),
    BadBody(String),
    Session(SessionError),
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        ApiError::Session(e)
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::BadBody(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = |error: &str, message: String, fields: Vec<FieldError>| ErrorBody {
            error: error.into(),
            message,
            fields,
        };
        let (status, body) = match self {
            ApiError::NotFound(id) => (
                StatusCode::NOT_FOUND,
                body("not_found", format!("no session {id}"), vec![]),
            ),
            ApiError::BadBody(msg) => (
                StatusCode::UNPROCESSABLE_ENTITY,
                body(
                    "invalid",
                    "request body does not match the schema".into(),
                    vec![FieldError {
                        field: "body".into(),
                        message: msg,
                    }],
                ),
            ),
            ApiError::Session(SessionError::Invalid(fields)) => (
                StatusCode::UNPROCESSABLE_ENTITY,
                body("invalid", "request failed validation".into(), fields),
            ),
            ApiError::Session(SessionError::Conflict(msg)) => (StatusCode::CONFLICT, body("conflict", msg, vec![])),
            ApiError::Session(SessionError::Engine(msg)) => {
                (StatusCode::INTERNAL_SERVER_ERROR, body("engine", msg, vec![]))
            }
            ApiError::Session(SessionError::Storage(msg)) => {
                (StatusCode::INTERNAL_SERVER_ERROR, body("storage", msg, vec![]))
            }
        };
        (status, Json(body)).into_response()
    }
}

type AppState = Arc<Store>;

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/contract", get(contract))
        .route("/sessions", get(list).post(create))
        .route("/sessions/{id}", get(state))
        .route("/sessions/{id}/answers", axum::routing::post(submit))
        .route("/sessions/{id}/trace", get(trace))
        .route("/sessions/{id}/events", get(events))
        .with_state(store)
}

fn handle(store: &Store, id: &str) -> Result<Arc<SessionHandle>, ApiError> {
    store.get(id).ok_or_else(|| ApiError::NotFound(id.to_string()))
}

async fn contract() -> impl IntoResponse {
    ([(header::CONTENT_TYPE, "application/json")], CONTRACT)
}

async fn list(State(store): State<AppState>) -> impl IntoResponse {
    Json(store.list())
}

async fn create(
    State(store): State<AppState>,
    body: Result<Json<CreateSession>, JsonRejection>,
) -> Result<impl IntoResponse, ApiError> {
    let Json(req) = body?;
    let view = store.create(req)?;
    Ok((StatusCode::CREATED, Json(view)))
}

async fn state(State(store): State<AppState>, Path(id): Path<String>) -> Result<impl IntoResponse, ApiError> {
    Ok(Json(handle(&store, &id)?.view()))
}

async fn submit(
    State(store): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<SubmitAnswers>, JsonRejection>,
) -> Result<impl IntoResponse, ApiError> {
    let session = handle(&store, &id)?;
    let Json(req) = body?;
    let view = tokio::task::spawn_blocking(move || session.submit(req))
        .await
        .map_err(|e| SessionError::Engine(e.to_string()))??;
    Ok(Json(view))
}

async fn trace(State(store): State<AppState>, Path(id): Path<String>) -> Result<impl IntoResponse, ApiError> {
    let text = handle(&store, &id)?.view().trace.to_jsonl();
    Ok(([(header::CONTENT_TYPE, NDJSON)], text))
}

async fn events(State(store): State<AppState>, Path(id): Path<String>) -> Result<impl IntoResponse, ApiError> {
    let mut text = String::new();
    for e in handle(&store, &id)?.events() {
        text.push_str(&serde_json::to_string(&e).expect("events serialize"));
        text.push('\n');
    }
    Ok(([(header::CONTENT_TYPE, NDJSON)], text))
}
