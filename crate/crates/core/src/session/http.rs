//! HTTP API over a single open project, rooted at `/api/v1`.
//!
//! Mutating requests must send the current state version in the
//! `x-state-version` header; a mismatch is rejected with 409 and has no
//! effect. Every response carries the version after the request in the same
//! header, and mutation responses also wrap their payload as
//! `{"version": n, "result": ...}`.
//!
//! Geometry and display colours are binary bodies; see [`super::geometry_bytes`]
//! and [`crate::view::VertexDisplay`].

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::{Component, Path, PathBuf};
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{CursorCommand, Project, SessionError};
use crate::annotation::{AnnotationError, BrushStroke, Delta, MarkerId, StrokeMode};
use crate::mesh::{DistanceMetric, PickHit, Ray};
use crate::view::{ChannelWindow, RenderMode};

pub const VERSION_HEADER: &str = "x-state-version";
pub const API_ROOT: &str = "/api/v1";

pub type SharedProject = Arc<RwLock<Project>>;

#[derive(Clone)]
struct AppState {
    project: SharedProject,
    web_root: Option<Arc<PathBuf>>,
}

/// An error response: status plus a JSON body `{"error": message}`.
#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = serde_json::json!({ "error": self.message, "status": self.status.as_u16() });
        (self.status, Json(body)).into_response()
    }
}

impl From<SessionError> for ApiError {
    fn from(err: SessionError) -> Self {
        let status = match &err {
            SessionError::FrameOutOfRange { .. }
            | SessionError::Annotation(AnnotationError::UnknownMarker(_))
            | SessionError::Annotation(AnnotationError::FrameOutOfRange { .. }) => StatusCode::NOT_FOUND,
            SessionError::Annotation(_) | SessionError::Mesh(_) | SessionError::View(_) => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
            SessionError::Io { .. } => StatusCode::INTERNAL_SERVER_ERROR,
            SessionError::Series(_)
            | SessionError::Markers { .. }
            | SessionError::Manifest(_)
            | SessionError::Integrity { .. } => StatusCode::UNPROCESSABLE_ENTITY,
        };
        Self::new(status, err.to_string())
    }
}

type ApiResult = Result<Response, ApiError>;

fn version_value(version: u64) -> HeaderValue {
    HeaderValue::from_str(&version.to_string()).expect("digits are a valid header value")
}

fn with_version(version: u64, response: impl IntoResponse) -> Response {
    let mut response = response.into_response();
    response.headers_mut().insert(VERSION_HEADER, version_value(version));
    response
}

#[derive(Serialize)]
struct Versioned<T> {
    version: u64,
    result: T,
}

fn parse_json<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed body: {e}")))
}

fn expected_version(headers: &HeaderMap) -> Result<u64, ApiError> {
    let value = headers
        .get(VERSION_HEADER)
        .ok_or_else(|| ApiError::bad_request(format!("missing {VERSION_HEADER} header")))?;
    value
        .to_str()
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| ApiError::bad_request(format!("bad {VERSION_HEADER} header")))
}

fn read_project(state: &AppState) -> std::sync::RwLockReadGuard<'_, Project> {
    state.project.read().unwrap_or_else(|e| e.into_inner())
}

/// Run one mutation under the write lock after the version check.
fn mutate<T: Serialize>(
    state: &AppState,
    headers: &HeaderMap,
    f: impl FnOnce(&mut Project) -> Result<T, ApiError>,
) -> ApiResult {
    let expected = expected_version(headers)?;
    let mut project = state.project.write().unwrap_or_else(|e| e.into_inner());
    if project.version() != expected {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            format!("stale state version {expected}, current is {}", project.version()),
        ));
    }
    let result = f(&mut project)?;
    let version = project.version();
    Ok(with_version(version, Json(Versioned { version, result })))
}

fn binary(version: u64, bytes: Vec<u8>) -> Response {
    with_version(version, ([(header::CONTENT_TYPE, "application/octet-stream")], bytes))
}

fn csv(version: u64, text: String) -> Response {
    with_version(version, ([(header::CONTENT_TYPE, "text/csv; charset=utf-8")], text))
}

/// Build the router. Static files are served from `web_root` for any path
/// outside the API.
pub fn router(project: SharedProject, web_root: Option<PathBuf>) -> Router {
    let state = AppState {
        project,
        web_root: web_root.map(Arc::new),
    };
    let api = Router::new()
        .route("/project", get(get_project))
        .route("/frames/{frame}/geometry", get(get_geometry))
        .route("/frames/{frame}/display", get(get_display))
        .route("/frames/{frame}/pick", post(post_pick))
        .route("/frames/{frame}/strokes", post(post_stroke))
        .route("/frames/{frame}/opacity", post(post_opacity))
        .route("/opacity/reset", post(post_opacity_reset))
        .route("/markers", post(post_marker))
        .route("/markers/{id}", delete(delete_marker))
        .route("/markers.csv", get(get_markers_csv))
        .route("/tracks.csv", get(get_tracks_csv))
        .route("/undo", post(post_undo))
        .route("/redo", post(post_redo))
        .route("/cursor", get(get_cursor).post(post_cursor))
        .route("/save", post(post_save));
    Router::new()
        .nest(API_ROOT, api)
        .fallback(static_file)
        .with_state(state)
}

async fn get_project(State(state): State<AppState>) -> Response {
    let project = read_project(&state);
    with_version(project.version(), Json(project.summary()))
}

async fn get_geometry(State(state): State<AppState>, UrlPath(frame): UrlPath<usize>) -> ApiResult {
    let project = read_project(&state);
    Ok(binary(project.version(), project.geometry(frame)?))
}

fn query_u8(query: &HashMap<String, String>, key: &str) -> Result<Option<u8>, ApiError> {
    query
        .get(key)
        .map(|v| {
            v.parse::<u8>()
                .map_err(|_| ApiError::bad_request(format!("{key} must be an integer in 0..=255")))
        })
        .transpose()
}

async fn get_display(
    State(state): State<AppState>,
    UrlPath(frame): UrlPath<usize>,
    Query(query): Query<HashMap<String, String>>,
) -> ApiResult {
    let mode = query
        .get("mode")
        .map(|m| m.parse::<RenderMode>().map_err(ApiError::bad_request))
        .transpose()?;
    let project = read_project(&state);
    let mut thresholds = project.view().thresholds;
    for (channel, window) in thresholds.iter_mut().enumerate() {
        let lo = query_u8(&query, &format!("lo{channel}"))?;
        let hi = query_u8(&query, &format!("hi{channel}"))?;
        if lo.is_some() || hi.is_some() {
            *window = ChannelWindow::new(lo.unwrap_or(window.lo()), hi.unwrap_or(window.hi()))
                .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))?;
        }
    }
    let display = project.display(frame, mode, Some(thresholds))?;
    Ok(binary(project.version(), display.into_bytes()))
}

#[derive(Serialize)]
struct PickResponse {
    hit: Option<PickHit>,
}

async fn post_pick(State(state): State<AppState>, UrlPath(frame): UrlPath<usize>, body: Bytes) -> ApiResult {
    let ray: Ray = parse_json(&body)?;
    let project = read_project(&state);
    let hit = project.pick(frame, &ray)?;
    Ok(with_version(project.version(), Json(PickResponse { hit })))
}

#[derive(Deserialize)]
struct MarkerRequest {
    frame: usize,
    pick: PickHit,
}

async fn post_marker(State(state): State<AppState>, headers: HeaderMap, body: Bytes) -> ApiResult {
    let req: MarkerRequest = parse_json(&body)?;
    mutate(&state, &headers, |p| Ok(p.place_marker(req.frame, &req.pick)?))
}

async fn delete_marker(State(state): State<AppState>, headers: HeaderMap, UrlPath(id): UrlPath<u64>) -> ApiResult {
    mutate(&state, &headers, |p| Ok(p.remove_marker(MarkerId(id))?))
}

#[derive(Deserialize)]
struct StrokeRequest {
    seed: u32,
    radius: f64,
    #[serde(default)]
    metric: DistanceMetric,
    #[serde(default)]
    mode: StrokeMode,
}

#[derive(Serialize)]
struct ChangedVertices {
    changed: Vec<u32>,
}

async fn post_stroke(
    State(state): State<AppState>,
    headers: HeaderMap,
    UrlPath(frame): UrlPath<usize>,
    body: Bytes,
) -> ApiResult {
    let req: StrokeRequest = parse_json(&body)?;
    let stroke = BrushStroke {
        frame,
        seed: req.seed,
        radius: req.radius,
        metric: req.metric,
        mode: req.mode,
    };
    mutate(&state, &headers, |p| {
        Ok(ChangedVertices {
            changed: p.apply_stroke(&stroke)?,
        })
    })
}

#[derive(Serialize)]
struct UndoResponse {
    applied: bool,
    delta: Option<Delta>,
}

async fn post_undo(State(state): State<AppState>, headers: HeaderMap) -> ApiResult {
    mutate(&state, &headers, |p| {
        let delta = p.undo();
        Ok(UndoResponse {
            applied: delta.is_some(),
            delta,
        })
    })
}

async fn post_redo(State(state): State<AppState>, headers: HeaderMap) -> ApiResult {
    mutate(&state, &headers, |p| {
        let delta = p.redo();
        Ok(UndoResponse {
            applied: delta.is_some(),
            delta,
        })
    })
}

#[derive(Deserialize)]
struct OpacityRequest {
    seed: u32,
    radius: f64,
    alpha: f32,
    #[serde(default)]
    metric: DistanceMetric,
}

async fn post_opacity(
    State(state): State<AppState>,
    headers: HeaderMap,
    UrlPath(frame): UrlPath<usize>,
    body: Bytes,
) -> ApiResult {
    let req: OpacityRequest = parse_json(&body)?;
    mutate(&state, &headers, |p| {
        Ok(ChangedVertices {
            changed: p.set_opacity(frame, req.seed, req.radius, req.alpha, req.metric)?,
        })
    })
}

async fn post_opacity_reset(State(state): State<AppState>, headers: HeaderMap) -> ApiResult {
    mutate(&state, &headers, |p| {
        p.reset_opacity();
        Ok(())
    })
}

async fn get_markers_csv(State(state): State<AppState>) -> Response {
    let project = read_project(&state);
    csv(project.version(), project.markers_csv())
}

async fn get_tracks_csv(State(state): State<AppState>, Query(query): Query<HashMap<String, String>>) -> ApiResult {
    let channel = match query.get("channel").map(String::as_str) {
        Some("0") => 0,
        Some("1") => 1,
        _ => return Err(ApiError::bad_request("channel must be 0 or 1")),
    };
    let threshold = query_u8(&query, "threshold")?.ok_or_else(|| ApiError::bad_request("threshold is required"))?;
    let project = read_project(&state);
    let table = project.tracks(channel, threshold);
    Ok(csv(project.version(), crate::analysis::export_track_csv(&table)))
}

async fn get_cursor(State(state): State<AppState>) -> Response {
    let project = read_project(&state);
    with_version(project.version(), Json(project.cursor()))
}

/// Exactly one of the fields must be set.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct CursorRequest {
    frame: Option<usize>,
    step: Option<i64>,
    play: Option<bool>,
    pause: Option<bool>,
    frame_rate: Option<f32>,
}

impl CursorRequest {
    fn command(self) -> Result<CursorCommand, ApiError> {
        let mut commands = Vec::new();
        if let Some(f) = self.frame {
            commands.push(CursorCommand::Frame(f));
        }
        if let Some(s) = self.step {
            commands.push(CursorCommand::Step(s));
        }
        match self.play {
            Some(true) => commands.push(CursorCommand::Play),
            Some(false) => commands.push(CursorCommand::Pause),
            None => {}
        }
        match self.pause {
            Some(true) => commands.push(CursorCommand::Pause),
            Some(false) => commands.push(CursorCommand::Play),
            None => {}
        }
        if let Some(r) = self.frame_rate {
            commands.push(CursorCommand::FrameRate(r));
        }
        match commands.as_slice() {
            [c] => Ok(*c),
            _ => Err(ApiError::bad_request(
                "cursor request needs exactly one of frame, step, play, pause, frame_rate",
            )),
        }
    }
}

async fn post_cursor(State(state): State<AppState>, headers: HeaderMap, body: Bytes) -> ApiResult {
    let command = parse_json::<CursorRequest>(&body)?.command()?;
    mutate(&state, &headers, |p| Ok(p.move_cursor(command)))
}

#[derive(Deserialize)]
struct SaveRequest {
    directory: PathBuf,
}

async fn post_save(State(state): State<AppState>, headers: HeaderMap, body: Bytes) -> ApiResult {
    let req: SaveRequest = parse_json(&body)?;
    mutate(&state, &headers, |p| Ok(p.save(&req.directory)?))
}

fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()) {
        Some("html") => "text/html; charset=utf-8",
        Some("js" | "mjs") => "text/javascript",
        Some("css") => "text/css",
        Some("json") => "application/json",
        Some("svg") => "image/svg+xml",
        Some("png") => "image/png",
        Some("wasm") => "application/wasm",
        _ => "application/octet-stream",
    }
}

async fn static_file(State(state): State<AppState>, uri: Uri) -> Response {
    let not_found = || ApiError::new(StatusCode::NOT_FOUND, format!("no route for {}", uri.path())).into_response();
    let Some(root) = state.web_root.as_deref() else {
        return not_found();
    };
    let relative = uri.path().trim_start_matches('/');
    let relative = if relative.is_empty() { "index.html" } else { relative };
    let relative = Path::new(relative);
    if relative.components().any(|c| !matches!(c, Component::Normal(_))) {
        return not_found();
    }
    let path = root.join(relative);
    match tokio::fs::read(&path).await {
        Ok(bytes) => ([(header::CONTENT_TYPE, content_type(&path))], bytes).into_response(),
        Err(_) => not_found(),
    }
}

/// Serve `project` on `addr` until the process receives Ctrl-C.
pub async fn serve(project: Project, addr: SocketAddr, web_root: Option<PathBuf>) -> std::io::Result<()> {
    let app = router(Arc::new(RwLock::new(project)), web_root);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}{API_ROOT}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
