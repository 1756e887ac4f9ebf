//! Read-only JSON API over an immutable catalog.
//!
//! | Route | Body |
//! |-------|------|
//! | `GET /api/reservoirs?limit&offset` | page of reservoir records |
//! | `GET /api/reservoirs/{id}` | one record |
//! | `GET /api/search?q=` | search outcome |
//! | `GET /api/reservoirs/{id}/assessment?horizontal_km&vertical_min_head_m` | assessment report |
//! | `GET /api/reservoirs/{id}/assessment/{partner_id}/schematic?...` | schematic model |
//! | `GET /api/reservoirs/{id}/assessment/export?...&decimal_places` | CSV download |
//!
//! Documents are described by `schema/api.schema.json`. Errors are
//! `{"status", "error", "message"}` with 400, 404 or 500.

use std::collections::HashMap;
use std::io;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use pshscreen_core::{
    schematic_data, AssessError, AssessmentReport, ReservoirRecord, SchematicModel, Screener,
    SearchOutcome, Thresholds,
};
use serde::Serialize;
use tower_http::cors::CorsLayer;

use crate::export::{export_report, ExportOptions};

/// Page size when `limit` is absent.
pub const DEFAULT_LIMIT: usize = 50;

type Params = Query<HashMap<String, String>>;

#[derive(Debug, Clone, Serialize)]
pub struct ApiError {
    pub status: u16,
    pub error: &'static str,
    pub message: String,
}

impl ApiError {
    fn not_found(message: impl Into<String>) -> Self {
        Self {
            status: 404,
            error: "not-found",
            message: message.into(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self {
            status: 400,
            error: "invalid-parameter",
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self {
            status: 500,
            error: "internal",
            message: message.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

impl From<AssessError> for ApiError {
    fn from(e: AssessError) -> Self {
        match e {
            AssessError::NotFound(_) => Self::not_found(e.to_string()),
            AssessError::InvalidThresholds(_) => Self::bad_request(e.to_string()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ReservoirPage<'a> {
    pub total: usize,
    pub limit: usize,
    pub offset: usize,
    pub items: &'a [ReservoirRecord],
}

fn non_negative(params: &HashMap<String, String>, name: &str, default: f64) -> Result<f64, ApiError> {
    match params.get(name) {
        None => Ok(default),
        Some(raw) => match raw.trim().parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
            _ => Err(ApiError::bad_request(format!(
                "{name} must be a non-negative number, got {raw:?}"
            ))),
        },
    }
}

fn count(params: &HashMap<String, String>, name: &str, default: usize) -> Result<usize, ApiError> {
    match params.get(name) {
        None => Ok(default),
        Some(raw) => raw.trim().parse::<usize>().map_err(|_| {
            ApiError::bad_request(format!("{name} must be a non-negative integer, got {raw:?}"))
        }),
    }
}

/// Reads `horizontal_km` (default 1) and `vertical_min_head_m` (default 0).
pub fn thresholds_from_params(params: &HashMap<String, String>) -> Result<Thresholds, ApiError> {
    let h = non_negative(params, "horizontal_km", Thresholds::DEFAULT_HORIZONTAL_M / 1000.0)?;
    let v = non_negative(params, "vertical_min_head_m", Thresholds::DEFAULT_VERTICAL_MIN_HEAD_M)?;
    Thresholds::from_km(h, v).map_err(|e| ApiError::bad_request(e.to_string()))
}

async fn list_reservoirs(
    State(s): State<Arc<Screener>>,
    Query(params): Params,
) -> Result<Response, ApiError> {
    let limit = count(&params, "limit", DEFAULT_LIMIT)?;
    let offset = count(&params, "offset", 0)?;
    let records = s.catalog().records();
    let start = offset.min(records.len());
    let end = start.saturating_add(limit).min(records.len());
    Ok(Json(ReservoirPage {
        total: records.len(),
        limit,
        offset,
        items: &records[start..end],
    })
    .into_response())
}

async fn get_reservoir(
    State(s): State<Arc<Screener>>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    s.catalog()
        .get(&id)
        .map(|r| Json(r).into_response())
        .ok_or_else(|| ApiError::not_found(format!("no reservoir with id {id:?}")))
}

async fn search(
    State(s): State<Arc<Screener>>,
    Query(params): Params,
) -> Result<Json<SearchOutcome>, ApiError> {
    let q = params.get("q").map(String::as_str).unwrap_or("");
    s.search(q)
        .map(Json)
        .map_err(|e| ApiError::bad_request(e.to_string()))
}

fn run_assessment(
    s: &Screener,
    id: &str,
    params: &HashMap<String, String>,
) -> Result<AssessmentReport, ApiError> {
    let thresholds = thresholds_from_params(params)?;
    Ok(s.assess(id, thresholds)?)
}

async fn assessment(
    State(s): State<Arc<Screener>>,
    Path(id): Path<String>,
    Query(params): Params,
) -> Result<Json<AssessmentReport>, ApiError> {
    run_assessment(&s, &id, &params).map(Json)
}

async fn schematic(
    State(s): State<Arc<Screener>>,
    Path((id, partner)): Path<(String, String)>,
    Query(params): Params,
) -> Result<Json<SchematicModel>, ApiError> {
    let report = run_assessment(&s, &id, &params)?;
    let index = report
        .rows
        .iter()
        .position(|r| r.partner.id == partner)
        .ok_or_else(|| {
            ApiError::not_found(format!(
                "{partner:?} is not within the thresholds of {id:?}"
            ))
        })?;
    schematic_data(&report, index)
        .map(Json)
        .map_err(|e| ApiError::internal(e.to_string()))
}

async fn export(
    State(s): State<Arc<Screener>>,
    Path(id): Path<String>,
    Query(params): Params,
) -> Result<Response, ApiError> {
    let report = run_assessment(&s, &id, &params)?;
    let options = ExportOptions {
        decimal_places: count(&params, "decimal_places", ExportOptions::default().decimal_places)?,
        ..ExportOptions::default()
    };
    options
        .validate()
        .map_err(|e| ApiError::bad_request(e.to_string()))?;
    let mut body = Vec::new();
    export_report(&report, &options, &mut body).map_err(|e| ApiError::internal(e.to_string()))?;
    let safe: String = id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    let disposition = HeaderValue::from_str(&format!("attachment; filename=\"assessment-{safe}.csv\""))
        .map_err(|e| ApiError::internal(e.to_string()))?;
    Ok((
        [
            (header::CONTENT_TYPE, HeaderValue::from_static("text/csv; charset=utf-8")),
            (header::CONTENT_DISPOSITION, disposition),
        ],
        body,
    )
        .into_response())
}

async fn fallback() -> ApiError {
    ApiError::not_found("no such route")
}

/// Routes over a shared screener, with permissive CORS for the UI.
pub fn router(screener: Arc<Screener>) -> Router {
    Router::new()
        .route("/api/reservoirs", get(list_reservoirs))
        .route("/api/reservoirs/{id}", get(get_reservoir))
        .route("/api/search", get(search))
        .route("/api/reservoirs/{id}/assessment", get(assessment))
        .route("/api/reservoirs/{id}/assessment/export", get(export))
        .route(
            "/api/reservoirs/{id}/assessment/{partner_id}/schematic",
            get(schematic),
        )
        .fallback(fallback)
        .layer(CorsLayer::permissive())
        .with_state(screener)
}

/// Serves until the listener fails.
pub async fn serve(listener: tokio::net::TcpListener, screener: Screener) -> io::Result<()> {
    axum::serve(listener, router(Arc::new(screener))).await
}
