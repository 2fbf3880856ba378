use std::collections::BTreeMap;
use std::convert::Infallible;
use std::sync::Arc;
use std::time::Instant;

use axum::extract::{DefaultBodyLimit, FromRequest, Multipart, Path, Query, Request, State};
use axum::http::{header, StatusCode};
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use futures::stream::{self, Stream, StreamExt};
use microlab_core::bench::fps_from_durations;
use microlab_core::dataset::{POPULATION_FILE, SUBSTANCE_FILE};
use microlab_core::viz::{
    species_color, ColorScheme, FrameAssembler, MeshMode, Selection, BUILTIN_SCHEMES,
    DEFAULT_HEIGHT_SCALE, DEFAULT_SCHEME,
};
use serde::{Deserialize, Serialize};
use tokio::sync::broadcast::error::RecvError;
use tower_http::cors::CorsLayer;

use crate::error::ApiError;
use crate::session::{ImportSource, ProgressEvent, Session, SessionStatus, SessionStore};

/// Uploads up to this many bytes are accepted.
pub const MAX_UPLOAD_BYTES: usize = 512 * 1024 * 1024;

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(session_status))
        .route("/sessions/{id}/metadata", get(metadata))
        .route("/sessions/{id}/frame", get(frame))
        .route("/sessions/{id}/mesh", get(mesh))
        .route("/sessions/{id}/events", get(events))
        .route("/sessions/{id}/stats", get(stats))
        .layer(DefaultBodyLimit::max(MAX_UPLOAD_BYTES))
        .layer(CorsLayer::permissive())
        .with_state(store)
}

fn session(store: &SessionStore, id: &str) -> Result<Arc<Session>, ApiError> {
    store
        .get(id)
        .ok_or_else(|| ApiError::UnknownSession(id.to_string()))
}

fn ready(store: &SessionStore, id: &str) -> Result<(Arc<Session>, Arc<FrameAssembler>), ApiError> {
    let s = session(store, id)?;
    let a = s.assembler().map_err(ApiError::NotReady)?;
    Ok((s, a))
}

#[derive(Debug, Deserialize)]
struct CreateRequest {
    #[serde(default)]
    demo: bool,
}

async fn read_upload(mut form: Multipart) -> Result<ImportSource, ApiError> {
    let mut population = None;
    let mut substance = None;
    while let Some(field) = form
        .next_field()
        .await
        .map_err(|e| ApiError::BadRequest(e.to_string()))?
    {
        let name = field.name().unwrap_or_default().to_string();
        let file_name = field.file_name().map(str::to_string);
        let bytes = field
            .bytes()
            .await
            .map_err(|e| ApiError::BadRequest(e.to_string()))?;
        match name.as_str() {
            "population" => {
                population = Some((
                    file_name.unwrap_or_else(|| POPULATION_FILE.into()),
                    bytes.to_vec(),
                ))
            }
            "substance" => {
                substance = Some((
                    file_name.unwrap_or_else(|| SUBSTANCE_FILE.into()),
                    bytes.to_vec(),
                ))
            }
            other => {
                return Err(ApiError::BadRequest(format!(
                    "unexpected form field `{other}`"
                )))
            }
        }
    }
    match (population, substance) {
        (Some((population_name, population)), Some((substance_name, substance))) => {
            Ok(ImportSource::Upload {
                population_name,
                population,
                substance_name,
                substance,
            })
        }
        _ => Err(ApiError::BadRequest(
            "both `population` and `substance` files are required".into(),
        )),
    }
}

/// `POST /sessions` with `{"demo": true}` or a multipart form carrying
/// `population` and `substance` files. The import continues in the
/// background; follow it on the events stream.
async fn create_session(
    State(store): State<Arc<SessionStore>>,
    request: Request,
) -> Result<Response, ApiError> {
    let content_type = request
        .headers()
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .unwrap_or_default()
        .to_string();
    let source = if content_type.starts_with("multipart/form-data") {
        let form = Multipart::from_request(request, &())
            .await
            .map_err(|e| ApiError::BadRequest(e.to_string()))?;
        read_upload(form).await?
    } else {
        let Json(body) = Json::<CreateRequest>::from_request(request, &())
            .await
            .map_err(|e| ApiError::BadRequest(e.body_text()))?;
        if !body.demo {
            return Err(ApiError::BadRequest(
                "send {\"demo\": true} or a multipart file pair".into(),
            ));
        }
        ImportSource::Demo
    };

    let session = store.create();
    let worker = session.clone();
    tokio::task::spawn_blocking(move || worker.run_import(source));
    tracing::info!(session = session.id(), "import started");

    let location = format!("/sessions/{}", session.id());
    Ok((
        StatusCode::ACCEPTED,
        [(header::LOCATION, location)],
        Json(session.status()),
    )
        .into_response())
}

async fn session_status(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> Result<Json<SessionStatus>, ApiError> {
    Ok(Json(session(&store, &id)?.status()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesEntry {
    pub genotype: u32,
    pub name: String,
    pub color: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

/// Everything a viewer needs to build its controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub id: String,
    pub width: usize,
    pub height: usize,
    pub times: Vec<u32>,
    pub substances: Vec<String>,
    /// Substances with a flux column, in column order.
    pub flux_substances: Vec<String>,
    pub species: Vec<SpeciesEntry>,
    pub extremes: BTreeMap<String, Range>,
    pub schemes: Vec<ColorScheme>,
    pub default_scheme: usize,
    pub height_scale: f64,
    pub rows: usize,
}

async fn metadata(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> Result<Json<Metadata>, ApiError> {
    let (_, a) = ready(&store, &id)?;
    let pair = a.pair();
    let mut extremes = BTreeMap::new();
    for s in &pair.substances {
        if let Some((min, max)) = a.extremes(s)? {
            extremes.insert(s.clone(), Range { min, max });
        }
    }
    Ok(Json(Metadata {
        id,
        width: pair.dims.0,
        height: pair.dims.1,
        times: pair.times.clone(),
        substances: pair.substances.clone(),
        flux_substances: pair
            .substances
            .iter()
            .filter(|s| pair.flux_column(s).is_some())
            .cloned()
            .collect(),
        species: pair
            .species()
            .into_iter()
            .map(|(genotype, name)| SpeciesEntry {
                genotype,
                name,
                color: species_color(genotype).to_string(),
            })
            .collect(),
        extremes,
        schemes: BUILTIN_SCHEMES.to_vec(),
        default_scheme: DEFAULT_SCHEME,
        height_scale: DEFAULT_HEIGHT_SCALE,
        rows: pair.population.len(),
    }))
}

fn nonempty(s: Option<String>) -> Option<String> {
    s.filter(|v| !v.is_empty())
}

fn parse_mode(mode: Option<&str>) -> Result<MeshMode, ApiError> {
    mode.filter(|m| !m.is_empty())
        .map_or(Ok(MeshMode::Flat2D), |m| Ok(m.parse()?))
}

#[derive(Debug, Deserialize)]
struct FrameQuery {
    t: u32,
    substance: Option<String>,
    mode: Option<String>,
    flux: Option<String>,
    scheme: Option<usize>,
}

fn json_response(body: Vec<u8>) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], body).into_response()
}

/// `GET /sessions/{id}/frame?t=&substance=&mode=&flux=&scheme=`
async fn frame(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    Query(q): Query<FrameQuery>,
) -> Result<Response, ApiError> {
    let (session, a) = ready(&store, &id)?;
    let selection = Selection {
        substance: nonempty(q.substance),
        mode: parse_mode(q.mode.as_deref())?,
        scheme: q.scheme.unwrap_or(DEFAULT_SCHEME),
        flux_substance: nonempty(q.flux),
    };
    let start = Instant::now();
    let frame = a.assemble(q.t, &selection)?;
    let body = serde_json::to_vec(&frame).expect("frame serializes");
    session.record_frame(start.elapsed().as_secs_f64());
    Ok(json_response(body))
}

#[derive(Debug, Deserialize)]
struct MeshQuery {
    t: u32,
    substance: String,
    mode: Option<String>,
}

/// `GET /sessions/{id}/mesh?substance=&t=&mode=`
async fn mesh(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    Query(q): Query<MeshQuery>,
) -> Result<Response, ApiError> {
    let (_, a) = ready(&store, &id)?;
    let mesh = a.mesh(&q.substance, q.t, parse_mode(q.mode.as_deref())?)?;
    Ok(json_response(
        serde_json::to_vec(&mesh).expect("mesh serializes"),
    ))
}

/// Served-frame timing for the session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameTiming {
    pub frames: usize,
    pub mean_seconds: Option<f64>,
    pub fps: Option<f64>,
}

async fn stats(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> Result<Json<FrameTiming>, ApiError> {
    let durations = session(&store, &id)?.frame_durations();
    let stats = fps_from_durations(&durations).ok();
    Ok(Json(FrameTiming {
        frames: durations.len(),
        mean_seconds: stats.as_ref().map(|s| s.mean),
        fps: stats.map(|s| s.fps),
    }))
}

fn sse_event(e: &ProgressEvent) -> Event {
    Event::default()
        .event(e.phase.as_str())
        .json_data(e)
        .expect("event serializes")
}

/// `GET /sessions/{id}/events`: past events, then live ones, closing after
/// the terminal `ready` or `failed` event.
async fn events(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> Result<Sse<impl Stream<Item = Result<Event, Infallible>>>, ApiError> {
    let session = session(&store, &id)?;
    let (history, receiver) = session.subscribe();
    let finished = history.last().is_some_and(|e| e.phase.is_terminal());
    let past = stream::iter(history.iter().map(sse_event).map(Ok).collect::<Vec<_>>());
    let live = stream::unfold((receiver, finished), |(mut rx, done)| async move {
        if done {
            return None;
        }
        loop {
            match rx.recv().await {
                Ok(e) => {
                    let terminal = e.phase.is_terminal();
                    return Some((Ok(sse_event(&e)), (rx, terminal)));
                }
                Err(RecvError::Lagged(_)) => continue,
                Err(RecvError::Closed) => return None,
            }
        }
    });
    Ok(Sse::new(past.chain(live)).keep_alive(KeepAlive::default()))
}
