//! Local HTTP sessions over diagrams: list applicable moves, apply or undo
//! one, read invariants. The JSON schema is described in `docs/api.md`.
//!
//! Requests on one session are serialized by a per-session lock; distinct
//! sessions proceed independently.

mod graph;
mod session;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, Query, State as AxState};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use handlecalc::engine::{applicable_moves, MoveOption, State};
use handlecalc::Error;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tokio::sync::Mutex;

pub use graph::{delta, render_graph, Delta, Edge, Node, RenderGraph};
pub use session::{Session, DEFAULT_WATCH};

pub const DEFAULT_PORT: u16 = 7450;

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError { status, message: message.into() }
    }
    fn not_found(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, format!("no session `{id}`"))
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) | Error::Syntax(_) => StatusCode::BAD_REQUEST,
            Error::Rejected(_) => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError::new(status, e.to_string())
    }
}

#[derive(Serialize)]
struct ErrorBody {
    error: String,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(ErrorBody { error: self.message })).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, format!("malformed body: {e}")))
}

struct Inner {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    next: AtomicU64,
    snapshot_dir: Option<PathBuf>,
}

/// Shared service state: the session table.
#[derive(Clone)]
pub struct AppState(Arc<Inner>);

impl AppState {
    pub fn new() -> Self {
        Self::build(None, vec![])
    }

    /// Sessions may be saved under `dir`; snapshots already there are
    /// loaded.
    pub fn with_snapshots(dir: PathBuf) -> std::io::Result<Self> {
        std::fs::create_dir_all(&dir)?;
        let found = Session::load_all(&dir)?;
        Ok(Self::build(Some(dir), found))
    }

    fn build(dir: Option<PathBuf>, found: Vec<Session>) -> Self {
        let next = found.iter().filter_map(|s| s.id.parse::<u64>().ok()).max().unwrap_or(0) + 1;
        let sessions = found.into_iter().map(|s| (s.id.clone(), Arc::new(Mutex::new(s)))).collect();
        AppState(Arc::new(Inner { sessions: RwLock::new(sessions), next: AtomicU64::new(next), snapshot_dir: dir }))
    }

    fn get(&self, id: &str) -> ApiResult<Arc<Mutex<Session>>> {
        self.0.sessions.read().unwrap().get(id).cloned().ok_or_else(|| ApiError::not_found(id))
    }

    fn insert(&self, s: Session) {
        self.0.sessions.write().unwrap().insert(s.id.clone(), Arc::new(Mutex::new(s)));
    }
}

impl Default for AppState {
    fn default() -> Self {
        Self::new()
    }
}

/// A session's current state as sent to clients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateView {
    pub id: String,
    /// `kirby` or `heegaard`.
    #[serde(rename = "type")]
    pub kind: String,
    pub name: String,
    /// Canonical serialization.
    pub text: String,
    pub components: usize,
    pub undo_depth: usize,
    pub graph: RenderGraph,
}

impl StateView {
    fn of(s: &Session) -> Self {
        let (kind, name) = match &s.state {
            State::Kirby(d) => ("kirby", d.name.clone()),
            State::Heegaard(h) => ("heegaard", h.name().to_string()),
        };
        StateView {
            id: s.id.clone(),
            kind: kind.into(),
            name,
            text: s.text(),
            components: s.state.diagram().components.len(),
            undo_depth: s.undo.len(),
            graph: render_graph(&s.state),
        }
    }
}

#[derive(Debug, Deserialize)]
struct CreateBody {
    diagram: String,
    watch: Option<Vec<String>>,
    #[serde(default)]
    closed: bool,
}

#[derive(Debug, Deserialize)]
struct MoveBody {
    #[serde(rename = "move")]
    line: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepView {
    pub state: StateView,
    pub delta: Delta,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MovesView {
    pub moves: Vec<MoveOption>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvariantsView {
    pub invariants: std::collections::BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
struct InvQuery {
    keys: Option<String>,
}

async fn create(AxState(app): AxState<AppState>, body: Bytes) -> ApiResult<(StatusCode, Json<StateView>)> {
    let b: CreateBody = parse_body(&body)?;
    let id = app.0.next.fetch_add(1, Ordering::SeqCst).to_string();
    let s = Session::new(id, &b.diagram, b.watch, b.closed)?;
    let view = StateView::of(&s);
    app.insert(s);
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_state(AxState(app): AxState<AppState>, Path(id): Path<String>) -> ApiResult<Json<StateView>> {
    let s = app.get(&id)?;
    let s = s.lock().await;
    Ok(Json(StateView::of(&s)))
}

async fn list_moves(AxState(app): AxState<AppState>, Path(id): Path<String>) -> ApiResult<Json<MovesView>> {
    let s = app.get(&id)?;
    let s = s.lock().await;
    Ok(Json(MovesView { moves: applicable_moves(&s.state) }))
}

async fn apply_move(AxState(app): AxState<AppState>, Path(id): Path<String>, body: Bytes) -> ApiResult<Json<StepView>> {
    let s = app.get(&id)?;
    let b: MoveBody = parse_body(&body)?;
    let mut s = s.lock().await;
    let prev = s.apply(&b.line)?;
    Ok(Json(StepView { delta: delta(&prev, &s.state), state: StateView::of(&s) }))
}

async fn undo(AxState(app): AxState<AppState>, Path(id): Path<String>) -> ApiResult<Json<StepView>> {
    let s = app.get(&id)?;
    let mut s = s.lock().await;
    match s.undo()? {
        Some(undone) => Ok(Json(StepView { delta: delta(&undone, &s.state), state: StateView::of(&s) })),
        None => Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "nothing to undo")),
    }
}

async fn invariants(
    AxState(app): AxState<AppState>,
    Path(id): Path<String>,
    Query(q): Query<InvQuery>,
) -> ApiResult<Json<InvariantsView>> {
    let s = app.get(&id)?;
    let s = s.lock().await;
    let keys: Vec<String> = match q.keys {
        Some(k) => k.split(',').map(str::trim).filter(|k| !k.is_empty()).map(String::from).collect(),
        None => s.watch.clone(),
    };
    Ok(Json(InvariantsView { invariants: s.invariants(&keys) }))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SnapshotView {
    pub path: String,
}

async fn snapshot(AxState(app): AxState<AppState>, Path(id): Path<String>) -> ApiResult<Json<SnapshotView>> {
    let s = app.get(&id)?;
    let Some(dir) = app.0.snapshot_dir.clone() else {
        return Err(ApiError::new(StatusCode::CONFLICT, "snapshots are disabled; start the service with a snapshot directory"));
    };
    let s = s.lock().await;
    let p = s.save(&dir).map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, format!("cannot write snapshot: {e}")))?;
    Ok(Json(SnapshotView { path: p.display().to_string() }))
}

pub fn router(app: AppState) -> Router {
    Router::new()
        .route("/session", post(create))
        .route("/session/{id}", get(get_state))
        .route("/session/{id}/moves", get(list_moves))
        .route("/session/{id}/move", post(apply_move))
        .route("/session/{id}/undo", post(undo))
        .route("/session/{id}/invariants", get(invariants))
        .route("/session/{id}/snapshot", post(snapshot))
        .with_state(app)
}

/// Serve on localhost until the process is stopped.
pub async fn serve(port: u16, app: AppState) -> std::io::Result<()> {
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(app)).await
}
