//! HTTP/JSON service for interactive ranking sessions, where a person in a
//! browser (or any client) answers the pairwise queries.
//!
//! | method | path | |
//! |---|---|---|
//! | `POST` | `/sessions` | create, body [`CreateRequest`] |
//! | `GET` | `/sessions/{id}` | [`SessionView`] with the weight trace |
//! | `GET` | `/sessions/{id}/query` | pending pair, [`QueryView`] |
//! | `POST` | `/sessions/{id}/answer` | `{"preferred": id}`, [`AnswerView`] |
//! | `GET` | `/sessions/{id}/ranking?k=` | top-`k` [`PatternView`]s |
//! | `POST` | `/sessions/{id}/stop` | finish early |
//! | `GET` | `/datasets` | dataset names and sizes |
//!
//! Anything else is served from the static asset directory, if configured.

mod error;
mod session;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use ahprank::{PatternCollection, PatternId};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

pub use error::SessionError;
pub use session::{
    AnswerView, CreateRequest, PatternView, QueryView, Session, SessionView, Status, TraceEntry, ANSWER_TOP_K,
};

/// Datasets by name, plus the live sessions.
#[derive(Debug, Default)]
pub struct AppState {
    datasets: HashMap<String, Arc<PatternCollection>>,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    next_id: AtomicU64,
    snapshot_dir: Option<PathBuf>,
}

impl AppState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_dataset(mut self, name: impl Into<String>, collection: PatternCollection) -> Self {
        self.datasets.insert(name.into(), Arc::new(collection));
        self
    }

    /// Finished sessions are written to `<dir>/<id>.json`.
    pub fn with_snapshots(mut self, dir: impl Into<PathBuf>) -> Self {
        self.snapshot_dir = Some(dir.into());
        self
    }

    pub fn create(&self, req: &CreateRequest) -> Result<SessionView, SessionError> {
        let name = match &req.dataset {
            Some(name) => name.clone(),
            None if self.datasets.len() == 1 => self.datasets.keys().next().cloned().expect("one dataset"),
            None => return Err(SessionError::Invalid("several datasets are loaded; name one".into())),
        };
        let collection = self
            .datasets
            .get(&name)
            .ok_or_else(|| SessionError::NotFound(format!("dataset {name}")))?;
        let id = format!("s{}", self.next_id.fetch_add(1, Ordering::Relaxed) + 1);
        let session = Session::new(id.clone(), name, Arc::clone(collection), req.learner_config())?;
        let view = session.snapshot();
        self.sessions
            .write()
            .expect("session table poisoned")
            .insert(id, Arc::new(Mutex::new(session)));
        Ok(view)
    }

    /// Runs `f` with the session locked; other sessions stay available.
    pub fn with_session<T>(
        &self,
        id: &str,
        f: impl FnOnce(&mut Session) -> Result<T, SessionError>,
    ) -> Result<T, SessionError> {
        let session = self
            .sessions
            .read()
            .expect("session table poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| SessionError::NotFound(format!("session {id}")))?;
        let mut guard = session.lock().unwrap_or_else(|e| e.into_inner());
        let was_finished = guard.status() == Status::Finished;
        let out = f(&mut guard)?;
        if !was_finished && guard.status() == Status::Finished {
            self.persist(&guard)?;
        }
        Ok(out)
    }

    fn persist(&self, session: &Session) -> Result<(), SessionError> {
        if let Some(dir) = &self.snapshot_dir {
            std::fs::create_dir_all(dir)?;
            let text = serde_json::to_vec_pretty(&session.snapshot()).map_err(ahprank::Error::from)?;
            std::fs::write(dir.join(format!("{}.json", session.id())), text)?;
        }
        Ok(())
    }
}

#[derive(Debug, Deserialize)]
struct AnswerRequest {
    preferred: PatternId,
}

#[derive(Debug, Deserialize)]
struct RankingParams {
    k: Option<usize>,
}

#[derive(Debug, Serialize)]
struct DatasetInfo {
    name: String,
    patterns: usize,
    measures: Vec<String>,
}

type Shared = Arc<AppState>;

async fn list_datasets(State(app): State<Shared>) -> Json<Vec<DatasetInfo>> {
    let mut out: Vec<DatasetInfo> = app
        .datasets
        .iter()
        .map(|(name, c)| DatasetInfo {
            name: name.clone(),
            patterns: c.len(),
            measures: c.measure_names().to_vec(),
        })
        .collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Json(out)
}

async fn create(
    State(app): State<Shared>,
    Json(req): Json<CreateRequest>,
) -> Result<(StatusCode, Json<SessionView>), SessionError> {
    Ok((StatusCode::CREATED, Json(app.create(&req)?)))
}

async fn show(State(app): State<Shared>, Path(id): Path<String>) -> Result<Json<SessionView>, SessionError> {
    app.with_session(&id, |s| Ok(s.snapshot())).map(Json)
}

async fn query(State(app): State<Shared>, Path(id): Path<String>) -> Result<Json<QueryView>, SessionError> {
    app.with_session(&id, Session::next_query).map(Json)
}

async fn answer(
    State(app): State<Shared>,
    Path(id): Path<String>,
    Json(req): Json<AnswerRequest>,
) -> Result<Json<AnswerView>, SessionError> {
    app.with_session(&id, |s| s.submit(req.preferred)).map(Json)
}

async fn ranking(
    State(app): State<Shared>,
    Path(id): Path<String>,
    Query(params): Query<RankingParams>,
) -> Result<Json<Vec<PatternView>>, SessionError> {
    let k = params.k.unwrap_or(ANSWER_TOP_K);
    if k == 0 {
        return Err(SessionError::Invalid("k must be at least 1".into()));
    }
    app.with_session(&id, |s| s.ranking(k)).map(Json)
}

async fn stop(State(app): State<Shared>, Path(id): Path<String>) -> Result<Json<SessionView>, SessionError> {
    app.with_session(&id, |s| {
        s.stop();
        Ok(s.snapshot())
    })
    .map(Json)
}

const FALLBACK_PAGE: &str = "<!doctype html>
<title>ahprank</title>
<p>No UI assets are installed. The session API lives under <code>/sessions</code>.</p>
";

async fn fallback_page() -> impl IntoResponse {
    Html(FALLBACK_PAGE)
}

/// The API routes, with `assets` (if any) served for every other path.
pub fn router(app: Arc<AppState>, assets: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/datasets", get(list_datasets))
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/query", get(query))
        .route("/sessions/{id}/answer", post(answer))
        .route("/sessions/{id}/ranking", get(ranking))
        .route("/sessions/{id}/stop", post(stop))
        .with_state(app);
    match assets {
        Some(dir) => api.fallback_service(ServeDir::new(dir).append_index_html_on_directories(true)),
        None => api.route("/", get(fallback_page)),
    }
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, app: Arc<AppState>, assets: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(app, assets)).await
}
