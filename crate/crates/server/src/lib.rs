//! HTTP front end of the annotation pool.
//!
//! - `GET /task?rater=ID`: next tweet for the rater, or 204 when none is left.
//! - `POST /annotation`: `{tweet_id, rater, category, sentiment?}`; 201 on
//!   success, 409 for a repeated rating, 422 for anything invalid.
//! - `GET /stats`: pool progress and agreement.
//! - `GET /export`: agreed labels as JSONL, with the sentiment convention in
//!   the `x-sentiment-convention` header.
//! - `/ui`: static rating interface assets.
//!
//! All state sits behind one mutex, so task assignment and resolution are
//! serialized and a tweet is never handed twice to the same rater.

use std::path::PathBuf;
use std::sync::{Arc, Mutex, MutexGuard};

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::{header, HeaderName, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::Utc;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::services::ServeDir;

use cohort_core::annotate::{check_sentiment, Annotation, AnnotationService, SubmitError, SENTIMENT_CONVENTION};
use cohort_core::labels::{write_labeled, Category};

pub const CONVENTION_HEADER: &str = "x-sentiment-convention";

const PLACEHOLDER_UI: &str = "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>Annotation</title></head>\n<body><p>No interface assets were configured. The JSON API is available at /task, /annotation, /stats and /export.</p></body></html>\n";

#[derive(Debug, Clone, Default)]
pub struct ServerConfig {
    /// Register any rater id on first contact instead of rejecting it.
    pub open_enrollment: bool,
    /// Directory served under `/ui`.
    pub ui_dir: Option<PathBuf>,
    /// Write a compacted snapshot every this many accepted annotations.
    pub snapshot: Option<(PathBuf, usize)>,
}

pub struct AppState {
    service: Mutex<AnnotationService>,
    config: ServerConfig,
}

impl AppState {
    pub fn new(service: AnnotationService, config: ServerConfig) -> Arc<Self> {
        Arc::new(AppState {
            service: Mutex::new(service),
            config,
        })
    }

    fn lock(&self) -> MutexGuard<'_, AnnotationService> {
        // a panicked handler cannot leave the pool half-updated: every
        // mutation is a single push after validation
        self.service.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn with_service<T>(&self, f: impl FnOnce(&AnnotationService) -> T) -> T {
        f(&self.lock())
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    let ui: Router = match &state.config.ui_dir {
        Some(dir) => Router::new().fallback_service(ServeDir::new(dir).append_index_html_on_directories(true)),
        None => Router::new().fallback(get(|| async { Html(PLACEHOLDER_UI) })),
    };
    Router::new()
        .route("/task", get(next_task))
        .route("/annotation", post(submit))
        .route("/stats", get(stats))
        .route("/export", get(export))
        .with_state(state)
        .nest_service("/ui", ui)
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(json!({ "error": message.into() }))).into_response()
}

#[derive(Debug, Deserialize)]
struct TaskQuery {
    rater: String,
}

#[derive(Debug, Serialize)]
struct TaskView {
    tweet_id: u64,
    text: String,
    date: String,
}

async fn next_task(State(state): State<Arc<AppState>>, Query(q): Query<TaskQuery>) -> Response {
    let rater = q.rater.trim();
    if rater.is_empty() {
        return error(StatusCode::UNPROCESSABLE_ENTITY, "rater id is empty");
    }
    let mut svc = state.lock();
    if state.config.open_enrollment && !svc.pool().is_rater(rater) {
        svc.register_rater(rater);
    }
    match svc.next_task(rater) {
        Ok(Some(t)) => Json(TaskView {
            tweet_id: t.tweet_id,
            text: t.text,
            date: t.date.to_string(),
        })
        .into_response(),
        Ok(None) => StatusCode::NO_CONTENT.into_response(),
        Err(e @ SubmitError::UnknownRater(_)) => error(StatusCode::NOT_FOUND, e.to_string()),
        Err(e) => error(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnnotationBody {
    tweet_id: u64,
    rater: String,
    category: Category,
    #[serde(default)]
    sentiment: Option<i64>,
}

async fn submit(State(state): State<Arc<AppState>>, body: Bytes) -> Response {
    let body: AnnotationBody = match serde_json::from_slice(&body) {
        Ok(b) => b,
        Err(e) => return error(StatusCode::UNPROCESSABLE_ENTITY, format!("malformed annotation: {e}")),
    };
    let sentiment = match body.sentiment.map(check_sentiment).transpose() {
        Ok(s) => s,
        Err(e) => return error(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()),
    };
    let annotation = Annotation {
        tweet_id: body.tweet_id,
        rater: body.rater,
        category: body.category,
        sentiment,
        timestamp: Utc::now(),
    };
    let mut svc = state.lock();
    match svc.submit(annotation) {
        Ok(resolved) => {
            if let Some((path, every)) = &state.config.snapshot {
                if *every > 0 && svc.pool().history().len() % every == 0 {
                    if let Err(e) = svc.snapshot(path) {
                        log::error!("snapshot failed: {e}");
                    }
                }
            }
            (StatusCode::CREATED, Json(resolved)).into_response()
        }
        Err(e) if e.is_conflict() => error(StatusCode::CONFLICT, e.to_string()),
        Err(e @ SubmitError::Storage(_)) => error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
        Err(e) => error(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()),
    }
}

async fn stats(State(state): State<Arc<AppState>>) -> Response {
    Json(state.lock().pool().stats()).into_response()
}

async fn export(State(state): State<Arc<AppState>>) -> Response {
    let rows = state.lock().pool().export_labels();
    let mut buf = Vec::new();
    if let Err(e) = write_labeled(&rows, &mut buf) {
        return error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string());
    }
    (
        [
            (header::CONTENT_TYPE, "application/x-ndjson"),
            (HeaderName::from_static(CONVENTION_HEADER), SENTIMENT_CONVENTION),
        ],
        buf,
    )
        .into_response()
}

/// Serves until ctrl-c.
pub async fn serve(state: Arc<AppState>, addr: std::net::SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("annotation service listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
