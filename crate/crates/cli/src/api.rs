//! HTTP service over the generation engine, the world store and the model
//! database.

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::sync::{Arc, Mutex, RwLock};

use scenegen_core::export::{MetricsRow, BUNDLE_FILES};
use scenegen_core::modeldb::staging::{AnnotationUpdate, Staging, StagingError};
use scenegen_core::modeldb::{query, ModelBundle, QueryFilter};
use scenegen_core::pipeline::{run_pipeline, Engine, GenerateBody, PipelineError, WorldStore};
use scenegen_core::{
    extract_scene_graph, parse_annotation, serialize_scene_graph, CategoryMap, GenConfig, MetricsReport,
};

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self { status, code, message: message.into() }
    }

    fn bad_request(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, code, message)
    }

    fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", message)
    }

    fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "code": self.code, "message": self.message }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

/// Shared service state. The live database is swapped only by an explicit
/// rebuild; annotation edits accumulate in `staging` until then.
pub struct AppState {
    cfg: GenConfig,
    engine: RwLock<Arc<Engine>>,
    staging: Mutex<Staging>,
    store: WorldStore,
    categories: CategoryMap,
}

impl AppState {
    pub fn new(cfg: GenConfig, db: ModelBundle, store: WorldStore) -> Self {
        let staging = Staging::from_bundle(&db);
        Self {
            engine: RwLock::new(Arc::new(Engine::new(cfg.clone(), Arc::new(db)))),
            cfg,
            staging: Mutex::new(staging),
            store,
            categories: CategoryMap::default_map(),
        }
    }

    pub fn engine(&self) -> Arc<Engine> {
        self.engine.read().expect("engine lock").clone()
    }

    pub fn store(&self) -> &WorldStore {
        &self.store
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/generate", post(generate))
        .route("/api/worlds", get(list_worlds))
        .route("/api/worlds/{id}", get(world_manifest))
        .route("/api/worlds/{id}/{file}", get(world_file))
        .route("/api/db", get(db_info))
        .route("/api/db/query", post(db_query))
        .route("/api/db/annotations/{model_id}", get(get_annotation).put(put_annotation))
        .route("/api/db/rebuild", post(db_rebuild))
        .route("/api/extract", post(extract))
        .route("/api/metrics", get(metrics))
        .with_state(state)
}

fn parse_json<T: for<'de> Deserialize<'de>>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request("invalid_body", e.to_string()))
}

fn pipeline_error(e: PipelineError) -> ApiError {
    match e {
        PipelineError::InvalidRequest(m) => ApiError::bad_request("invalid_request", m),
        PipelineError::LayoutFailure(m) => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "layout_failure", m),
        PipelineError::Store(e) => ApiError::internal(e.to_string()),
    }
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ApiResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError::internal(e.to_string()))?
}

async fn generate(State(st): State<Arc<AppState>>, body: Bytes) -> ApiResult<Json<serde_json::Value>> {
    let body: GenerateBody = parse_json(&body)?;
    let engine = match &body.bundle {
        Some(path) => {
            let db = ModelBundle::read(path)
                .map_err(|e| ApiError::bad_request("invalid_bundle", format!("{}: {e}", path.display())))?;
            Arc::new(Engine::new(st.cfg.clone(), Arc::new(db)))
        }
        None => st.engine(),
    };
    let req = body.into_request().map_err(pipeline_error)?;
    let st2 = st.clone();
    let res = blocking(move || run_pipeline(&engine, &req, &st2.store).map_err(pipeline_error)).await?;
    Ok(Json(json!({
        "worldIds": res.world_ids(),
        "timings": res.timings,
        "worlds": res.worlds,
        "failures": res.failures,
    })))
}

async fn list_worlds(State(st): State<Arc<AppState>>) -> Json<Vec<String>> {
    Json(st.store.ids())
}

fn load_world(st: &AppState, id: &str) -> ApiResult<scenegen_core::WorldBundle> {
    st.store
        .get(id)
        .map_err(|e| ApiError::internal(e.to_string()))?
        .ok_or_else(|| ApiError::not_found(format!("unknown world {id:?}")))
}

async fn world_manifest(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<serde_json::Value>> {
    let w = load_world(&st, &id)?;
    let mut files: Vec<&str> = BUNDLE_FILES.to_vec();
    files.push("floorplan.svg");
    Ok(Json(json!({
        "id": w.id,
        "title": w.title(),
        "provenance": w.provenance,
        "metrics": MetricsRow::of(&w),
        "population": w.population,
        "timings": st.store.timings(&id),
        "files": files,
    })))
}

fn content_type(name: &str) -> &'static str {
    match name.rsplit('.').next() {
        Some("svg") => "image/svg+xml",
        Some("pgm") => "image/x-portable-graymap",
        Some("yaml") => "application/yaml",
        Some("json") => "application/json",
        _ => "application/octet-stream",
    }
}

async fn world_file(State(st): State<Arc<AppState>>, Path((id, file)): Path<(String, String)>) -> ApiResult<Response> {
    let name = if file == "floorplan.svg" { "world.svg" } else { file.as_str() };
    if !BUNDLE_FILES.contains(&name) {
        return Err(ApiError::not_found(format!("unknown bundle file {file:?}")));
    }
    let bytes = st.store.file(&id, name).ok_or_else(|| ApiError::not_found(format!("unknown world {id:?}")))?;
    Ok(([(header::CONTENT_TYPE, content_type(name))], bytes).into_response())
}

async fn db_info(State(st): State<Arc<AppState>>) -> Json<serde_json::Value> {
    let engine = st.engine();
    let generation = st.staging.lock().expect("staging lock").generation();
    Json(json!({
        "digest": engine.db_digest(),
        "records": engine.db.len(),
        "stagingGeneration": generation,
    }))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QueryBody {
    #[serde(default)]
    text: String,
    #[serde(default)]
    filter: QueryFilter,
    #[serde(default = "default_k")]
    k: usize,
}

fn default_k() -> usize {
    10
}

#[derive(Serialize)]
struct Hit<'a> {
    score: f64,
    #[serde(flatten)]
    record: &'a scenegen_core::ModelRecord,
}

async fn db_query(State(st): State<Arc<AppState>>, body: Bytes) -> ApiResult<Json<serde_json::Value>> {
    let q: QueryBody = parse_json(&body)?;
    let engine = st.engine();
    let hits = query(&engine.db, &q.text, &q.filter, q.k)
        .map_err(|e| ApiError::bad_request("invalid_query", e.to_string()))?;
    let hits: Vec<Hit> = hits.iter().map(|h| Hit { score: h.score, record: h.record }).collect();
    Ok(Json(json!({ "results": hits })))
}

async fn get_annotation(
    State(st): State<Arc<AppState>>,
    Path(model_id): Path<String>,
) -> ApiResult<Json<serde_json::Value>> {
    let staging = st.staging.lock().expect("staging lock");
    let m = staging.manifest(&model_id).ok_or_else(|| ApiError::not_found(format!("unknown model {model_id:?}")))?;
    Ok(Json(json!({ "manifest": m, "revision": staging.revision(&model_id) })))
}

async fn put_annotation(
    State(st): State<Arc<AppState>>,
    Path(model_id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<serde_json::Value>> {
    let update: AnnotationUpdate = parse_json(&body)?;
    let mut staging = st.staging.lock().expect("staging lock");
    let revision = staging.apply(&model_id, update).map_err(|e| match e {
        StagingError::UnknownModel(_) => ApiError::not_found(e.to_string()),
        StagingError::Conflict { .. } => ApiError::new(StatusCode::CONFLICT, "conflict", e.to_string()),
        StagingError::Invalid(_) => ApiError::bad_request("invalid_annotation", e.to_string()),
    })?;
    Ok(Json(json!({ "id": model_id, "revision": revision, "stagingGeneration": staging.generation() })))
}

async fn db_rebuild(State(st): State<Arc<AppState>>) -> ApiResult<Json<serde_json::Value>> {
    let st2 = st.clone();
    let db = blocking(move || {
        let staging = st2.staging.lock().expect("staging lock");
        staging.build().map_err(|e| ApiError::bad_request("invalid_manifest", e.to_string()))
    })
    .await?;
    let engine = Arc::new(Engine::new(st.cfg.clone(), Arc::new(db)));
    let out = json!({ "digest": engine.db_digest(), "records": engine.db.len() });
    *st.engine.write().expect("engine lock") = engine;
    Ok(Json(out))
}

async fn extract(State(st): State<Arc<AppState>>, body: Bytes) -> ApiResult<Response> {
    let seg = parse_annotation(&body).map_err(|e| ApiError::bad_request("invalid_body", e.to_string()))?;
    let g = extract_scene_graph(&seg, &st.categories)
        .map_err(|e| ApiError::bad_request("extract_failed", e.to_string()))?;
    Ok(([(header::CONTENT_TYPE, "application/json")], serialize_scene_graph(&g)).into_response())
}

#[derive(Debug, Deserialize)]
struct MetricsParams {
    ids: Option<String>,
}

async fn metrics(State(st): State<Arc<AppState>>, Query(p): Query<MetricsParams>) -> ApiResult<Response> {
    let ids: Vec<String> =
        p.ids.unwrap_or_default().split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
    if ids.is_empty() {
        return Err(ApiError::bad_request("invalid_query", "ids must name at least one world"));
    }
    let st2 = st.clone();
    let csv = blocking(move || {
        let rows =
            ids.iter().map(|id| load_world(&st2, id).map(|w| MetricsRow::of(&w))).collect::<ApiResult<Vec<_>>>()?;
        Ok(MetricsReport::from_rows(rows).to_csv())
    })
    .await?;
    Ok(([(header::CONTENT_TYPE, "text/csv")], csv).into_response())
}

pub async fn serve(state: Arc<AppState>, addr: std::net::SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}
