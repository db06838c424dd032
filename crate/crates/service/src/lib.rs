//! HTTP service that runs annotation sessions for human annotators.
//!
//! Endpoints:
//!
//! | method | path | |
//! |---|---|---|
//! | POST | `/sessions` | profile (+ optional `config` overrides) → 201 view |
//! | GET | `/sessions/{id}` | current view, for resuming |
//! | POST | `/sessions/{id}/annotations` | `{word, knows_word}` → next view |
//! | GET | `/sessions/{id}/model` | exported model once training is over |
//! | GET | `/sessions/{id}/report` | scores on the session's own test answers |
//! | GET | `/group/probability?word=w&band=b` | mean probability over a band's models |
//!
//! Views never say whether an item is a training or a test item.

pub mod config;
pub mod store;

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::{Arc, RwLock};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use perscwi::downstream::{group_complexity_probability, group_decision};
use perscwi::metrics::{baseline_all_simple, EvaluationReport};
use perscwi::model::{export_model, PersonalModel};
use perscwi::profile::{AnnotatorProfile, Proficiency};
use perscwi::session::{
    stable_prefix, Clock, Item, QueryStrategy, ReplayError, Session, SessionConfig, SessionError, SessionId, SessionResources,
};
use perscwi::Label;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;
use tokio::sync::Mutex;

pub use config::{ServeArgs, ServiceFileConfig};
use store::{IndexEntry, LogStore};

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("{0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot restore session {session}: {source}")]
    Recovery {
        session: String,
        #[source]
        source: ReplayError,
    },
}

/// What a client sees. Identical in shape for every item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiSessionView {
    pub session_id: String,
    pub item: Option<Item>,
    pub done: bool,
}

impl ApiSessionView {
    pub fn of(session: &Session) -> Self {
        ApiSessionView {
            session_id: session.id().0.clone(),
            item: session.current_item(),
            done: session.is_completed(),
        }
    }
}

/// Settings a client may change when creating a session, and only then.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub budget: Option<usize>,
    pub test_size: Option<usize>,
    pub rng_seed: Option<u64>,
    pub query_strategy: Option<QueryStrategy>,
    pub propagation: Option<bool>,
    pub neighbors: Option<usize>,
}

impl ConfigOverrides {
    pub fn apply(&self, base: &SessionConfig) -> SessionConfig {
        let mut c = *base;
        if let Some(b) = self.budget {
            c.budget = b;
        }
        if self.test_size.is_some() {
            c.test_size = self.test_size;
        }
        if let Some(q) = self.query_strategy {
            c.query_strategy = q;
        }
        if let Some(p) = self.propagation {
            c.propagation.enabled = p;
        }
        if let Some(m) = self.neighbors {
            c.propagation.neighbors = m;
        }
        c.rng_seed = self.rng_seed.unwrap_or_else(rand::random);
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationRequest {
    pub word: String,
    pub knows_word: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupProbability {
    pub word: String,
    pub band: Proficiency,
    pub probability: f64,
    pub decision: Label,
    pub models: usize,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, message: impl std::fmt::Display) -> Self {
        ApiError {
            status,
            body: json!({ "error": message.to_string() }),
        }
    }

    fn with(mut self, key: &str, value: Value) -> Self {
        self.body[key] = value;
        self
    }

    fn internal(e: impl std::fmt::Display) -> Self {
        log::error!("{e}");
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

struct Live {
    session: Session,
    /// Events already durable on disk.
    persisted: usize,
}

type Slot = Arc<Mutex<Live>>;

pub struct AppState {
    resources: Arc<SessionResources>,
    defaults: SessionConfig,
    store: LogStore,
    queryable: usize,
    sessions: RwLock<HashMap<String, Slot>>,
    bands: RwLock<BTreeMap<Proficiency, BTreeMap<String, PersonalModel>>>,
}

/// Scores a completed session's model on the session's own test answers,
/// next to the all-simple baseline. The group is the annotator's proficiency.
pub fn session_report(session: &Session) -> Result<EvaluationReport, SessionError> {
    let pool = session.resources().pool();
    let group = session.profile().map(|p| p.proficiency.as_str()).unwrap_or("unknown");
    let mut pred = Vec::new();
    let mut gold = Vec::new();
    for (word, knows) in session.test_answers() {
        let x = pool.features(word).map_err(|_| SessionError::UnknownTestWord(word.clone()))?;
        pred.push(session.model().predict(x)?);
        gold.push(Label::from_knows_word(*knows));
    }
    let mut report = EvaluationReport::new();
    if !gold.is_empty() {
        report.add("model", group, &pred, &gold).expect("equal lengths");
        report.add("all_simple", group, &baseline_all_simple(gold.len()), &gold).expect("equal lengths");
    }
    Ok(report)
}

impl AppState {
    /// Opens the data directory and restores every indexed session by
    /// replaying its log. A torn or unacknowledged tail is cut first.
    pub fn open(resources: Arc<SessionResources>, defaults: SessionConfig, data_dir: &Path) -> Result<Self, ServiceError> {
        let store = LogStore::open(data_dir)?;
        let queryable = (0..resources.pool().len()).filter(|&i| !resources.is_test_index(i)).count();
        let state = AppState {
            resources,
            defaults,
            store,
            queryable,
            sessions: RwLock::new(HashMap::new()),
            bands: RwLock::new(BTreeMap::new()),
        };
        let mut restored = 0;
        for entry in state.store.index()? {
            if state.sessions.read().expect("lock").contains_key(&entry.session_id) {
                continue;
            }
            let (events, torn) = state.store.load(&entry.session_id)?;
            let stable = stable_prefix(&events);
            if stable.is_empty() {
                log::warn!("session {} has no usable events, skipping", entry.session_id);
                continue;
            }
            if torn || stable.len() != events.len() {
                log::warn!(
                    "session {}: dropping {} unacknowledged event(s)",
                    entry.session_id,
                    events.len() - stable.len()
                );
                state.store.rewrite(&entry.session_id, stable)?;
            }
            let session = Session::replay(state.resources.clone(), stable).map_err(|source| ServiceError::Recovery {
                session: entry.session_id.clone(),
                source,
            })?;
            state.insert(session);
            restored += 1;
        }
        log::info!("restored {restored} session(s) from {}", data_dir.display());
        Ok(state)
    }

    pub fn resources(&self) -> &Arc<SessionResources> {
        &self.resources
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().expect("lock").len()
    }

    fn insert(&self, session: Session) {
        self.register_if_complete(&session);
        let id = session.id().0.clone();
        let persisted = session.events().len();
        self.sessions
            .write()
            .expect("lock")
            .insert(id, Arc::new(Mutex::new(Live { session, persisted })));
    }

    fn register_if_complete(&self, session: &Session) {
        if let (true, Some(profile)) = (session.is_completed(), session.profile()) {
            self.bands
                .write()
                .expect("lock")
                .entry(profile.proficiency)
                .or_default()
                .insert(session.id().0.clone(), session.model().clone());
        }
    }

    fn slot(&self, id: &str) -> Result<Slot, ApiError> {
        self.sessions
            .read()
            .expect("lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("no session {id:?}")))
    }

    /// Creates, persists and registers a session. Blocking.
    pub fn create_session(&self, profile: AnnotatorProfile, overrides: &ConfigOverrides) -> Result<ApiSessionView, ApiError> {
        let config = overrides.apply(&self.defaults);
        if config.budget > self.queryable {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                format!("budget {} exceeds the {} queryable words", config.budget, self.queryable),
            )
            .with("fields", json!({ "config.budget": "too large" })));
        }
        let id = SessionId::random();
        let session = Session::create(self.resources.clone(), config, profile, id.clone(), Clock::System).map_err(|e| match e {
            SessionError::InvalidConfig(_) => ApiError::new(StatusCode::BAD_REQUEST, e),
            other => ApiError::internal(other),
        })?;
        self.store.append(&id.0, session.events()).map_err(ApiError::internal)?;
        self.store
            .register(&IndexEntry {
                session_id: id.0.clone(),
                created_at: session.events()[0].timestamp,
            })
            .map_err(ApiError::internal)?;
        let view = ApiSessionView::of(&session);
        self.insert(session);
        Ok(view)
    }

    fn submit(&self, live: &mut Live, req: &AnnotationRequest) -> Result<ApiSessionView, ApiError> {
        if live.session.is_completed() {
            return Err(ApiError::new(StatusCode::GONE, "session is completed"));
        }
        match live.session.submit_annotation(&req.word, req.knows_word) {
            Ok(_) => {}
            Err(SessionError::WrongWord { .. }) => {
                let expected = live.session.current_item();
                return Err(ApiError::new(StatusCode::CONFLICT, format!("expected an answer for a different word than {:?}", req.word))
                    .with("expected", serde_json::to_value(&expected).expect("item serializes")));
            }
            Err(SessionError::Completed) => return Err(ApiError::new(StatusCode::GONE, "session is completed")),
            Err(e) => {
                self.rollback(live);
                return Err(ApiError::internal(e));
            }
        }
        let id = live.session.id().0.clone();
        if let Err(e) = self.store.append(&id, live.session.events_since(live.persisted)) {
            self.rollback(live);
            return Err(ApiError::internal(e));
        }
        live.persisted = live.session.events().len();
        self.register_if_complete(&live.session);
        Ok(ApiSessionView::of(&live.session))
    }

    /// Returns the in-memory session to its last durable state.
    fn rollback(&self, live: &mut Live) {
        match Session::replay(self.resources.clone(), &live.session.events()[..live.persisted]) {
            Ok(s) => live.session = s,
            Err(e) => log::error!("cannot roll back session {}: {e}", live.session.id()),
        }
    }

    pub fn group_probability(&self, word: &str, band: Proficiency) -> Result<GroupProbability, ApiError> {
        let bands = self.bands.read().expect("lock");
        let models: Vec<&PersonalModel> = bands.get(&band).map(|m| m.values().collect()).unwrap_or_default();
        if models.is_empty() {
            return Err(ApiError::new(StatusCode::NOT_FOUND, format!("band {band} has no models")));
        }
        let x = self
            .resources
            .pool()
            .features(word)
            .map_err(|_| ApiError::new(StatusCode::NOT_FOUND, format!("no features for {word:?}")))?;
        let p = group_complexity_probability(&models, x).map_err(ApiError::internal)?;
        Ok(GroupProbability {
            word: word.to_string(),
            band,
            probability: p,
            decision: group_decision(p),
            models: models.len(),
        })
    }
}

fn profile_field_errors(body: &Value) -> Option<Value> {
    let Some(obj) = body.as_object() else {
        return Some(json!({ "body": "expected a JSON object" }));
    };
    match obj.get("proficiency") {
        None | Some(Value::Null) => Some(json!({ "proficiency": "required" })),
        Some(Value::String(s)) if s.parse::<Proficiency>().is_ok() => None,
        Some(other) => Some(json!({ "proficiency": format!("unknown proficiency {other}") })),
    }
}

fn parse_create(mut body: Value) -> Result<(AnnotatorProfile, ConfigOverrides), ApiError> {
    let invalid = |fields: Value| ApiError::new(StatusCode::BAD_REQUEST, "invalid profile").with("fields", fields);
    if let Some(fields) = profile_field_errors(&body) {
        return Err(invalid(fields));
    }
    let overrides = match body.as_object_mut().and_then(|o| o.remove("config")) {
        None | Some(Value::Null) => ConfigOverrides::default(),
        Some(v) => serde_json::from_value(v).map_err(|e| invalid(json!({ "config": e.to_string() })))?,
    };
    if let Some(Value::String(s)) = body.get("proficiency") {
        let p: Proficiency = s.parse().expect("checked above");
        body["proficiency"] = serde_json::to_value(p).expect("proficiency serializes");
    }
    let profile = serde_json::from_value(body).map_err(|e| invalid(json!({ "profile": e.to_string() })))?;
    Ok((profile, overrides))
}

fn json_body<T>(body: Result<Json<T>, JsonRejection>) -> Result<T, ApiError> {
    body.map(|Json(v)| v).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.body_text()))
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(ApiError::internal)?
}

async fn create_session(State(state): State<Arc<AppState>>, body: Result<Json<Value>, JsonRejection>) -> Result<Response, ApiError> {
    let (profile, overrides) = parse_create(json_body(body)?)?;
    let view = blocking(move || state.create_session(profile, &overrides)).await?;
    Ok((StatusCode::CREATED, Json(view)).into_response())
}

async fn get_session(State(state): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<Json<ApiSessionView>, ApiError> {
    let slot = state.slot(&id)?;
    let live = slot.lock().await;
    Ok(Json(ApiSessionView::of(&live.session)))
}

async fn annotate(
    State(state): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<AnnotationRequest>, JsonRejection>,
) -> Result<Json<ApiSessionView>, ApiError> {
    let req = json_body(body)?;
    let slot = state.slot(&id)?;
    // one request per session at a time; the refit runs off the async workers
    let mut live = slot.lock_owned().await;
    let view = blocking(move || state.submit(&mut live, &req)).await?;
    Ok(Json(view))
}

async fn get_model(State(state): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<Response, ApiError> {
    let slot = state.slot(&id)?;
    let live = slot.lock().await;
    if !live.session.training_finished() {
        return Err(ApiError::new(StatusCode::CONFLICT, "training is not finished"));
    }
    let text = export_model(&live.session.export());
    Ok(([(header::CONTENT_TYPE, "application/json")], text).into_response())
}

async fn get_report(State(state): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> Result<Json<EvaluationReport>, ApiError> {
    let slot = state.slot(&id)?;
    let live = slot.lock().await;
    if !live.session.is_completed() {
        return Err(ApiError::new(StatusCode::CONFLICT, "session is not completed"));
    }
    Ok(Json(session_report(&live.session).map_err(ApiError::internal)?))
}

async fn group_probability(
    State(state): State<Arc<AppState>>,
    Query(params): Query<HashMap<String, String>>,
) -> Result<Json<GroupProbability>, ApiError> {
    let param = |k: &str| {
        params
            .get(k)
            .ok_or_else(|| ApiError::new(StatusCode::BAD_REQUEST, format!("missing query parameter {k:?}")))
    };
    let word = param("word")?;
    let band: Proficiency = param("band")?
        .parse()
        .map_err(|e| ApiError::new(StatusCode::NOT_FOUND, e))?;
    Ok(Json(state.group_probability(word, band)?))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/annotations", post(annotate))
        .route("/sessions/{id}/model", get(get_model))
        .route("/sessions/{id}/report", get(get_report))
        .route("/group/probability", get(group_probability))
        .with_state(state)
}

/// Loads data, restores sessions and serves until interrupted.
pub async fn serve(args: ServeArgs) -> Result<(), ServiceError> {
    let load_args = args.clone();
    let state = tokio::task::spawn_blocking(move || {
        let (resources, file) = config::load(&load_args)?;
        AppState::open(resources, file.session, &load_args.data_dir)
    })
    .await
    .map_err(|e| ServiceError::Config(e.to_string()))??;
    let listener = tokio::net::TcpListener::bind((args.host, args.port)).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(state)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
