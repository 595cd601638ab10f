//! HTTP service for the explorer. Every request fits its own model; nothing
//! is shared between requests.

use std::net::SocketAddr;
use std::path::PathBuf;

use axum::body::Bytes;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;
use tower_http::services::ServeDir;

use crate::grid::{evaluate_grid, evaluate_point, ErrorCode, GridError};

pub struct ApiError {
    status: StatusCode,
    error: GridError,
}

impl From<GridError> for ApiError {
    fn from(error: GridError) -> Self {
        let status = match error.code {
            ErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError { status, error }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": { "code": self.error.code, "message": self.error.message } });
        (self.status, Json(body)).into_response()
    }
}

fn parse<T: DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| GridError::new(ErrorCode::BadRequest, e.to_string()).into())
}

async fn run_blocking<T, F>(work: F) -> Result<Json<T>, ApiError>
where
    T: Serialize + Send + 'static,
    F: FnOnce() -> Result<T, GridError> + Send + 'static,
{
    match tokio::task::spawn_blocking(work).await {
        Ok(result) => Ok(Json(result?)),
        Err(e) => Err(GridError::new(ErrorCode::Internal, e.to_string()).into()),
    }
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") }))
}

async fn grid(body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let req = parse(&body)?;
    run_blocking(move || evaluate_grid(&req)).await
}

async fn predict(body: Bytes) -> Result<impl IntoResponse, ApiError> {
    let req = parse(&body)?;
    run_blocking(move || evaluate_point(&req)).await
}

/// Routes for the API, with optional static files served for everything
/// else.
pub fn router(static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/health", get(health))
        .route("/api/grid", post(grid))
        .route("/api/predict", post(predict));
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

pub async fn serve(addr: SocketAddr, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(static_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
