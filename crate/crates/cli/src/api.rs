//! HTTP surface over the repository and the form engine.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use ontoforms_core::{
    generate_form, ontology_detail, populate, prefill, update, Error, FormConfig, FormStructure, Iri,
    Minted, OntologyModel, OntologyRecord, PopulationResult, Repository, Submission,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::cors::CorsLayer;

pub const CORS_ENV: &str = "ONTOFORMS_CORS";
pub const WARNING_HEADER: &str = "x-ontoforms-warning";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code: code.to_owned(),
            message: message.into(),
            detail: None,
        }
    }

    fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad-request", message)
    }
}

impl From<Error> for ApiError {
    fn from(err: Error) -> Self {
        let message = err.to_string();
        match err {
            Error::Parse { line, column, .. } | Error::UnknownPrefix { line, column, .. } => {
                ApiError::new(StatusCode::BAD_REQUEST, "parse-error", message)
                    .with_detail(json!({ "line": line, "column": column }))
            }
            Error::UnknownClass(class) => ApiError::new(StatusCode::NOT_FOUND, "unknown-class", message)
                .with_detail(json!({ "class": class })),
            Error::UnknownIndividual(iri) => ApiError::new(StatusCode::NOT_FOUND, "not-found", message)
                .with_detail(json!({ "individual": iri })),
            Error::NotFound(_) => ApiError::new(StatusCode::NOT_FOUND, "not-found", message),
            Error::Validation { property, .. } => {
                let e = ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "validation", message);
                match property {
                    Some(p) => e.with_detail(json!({ "property": p })),
                    None => e,
                }
            }
            Error::TypeMismatch { individual, expected } => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "type-mismatch", message)
                    .with_detail(json!({ "individual": individual, "expected": expected }))
            }
            Error::MismatchedClass { .. } => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "mismatched-class", message)
            }
            Error::Model(_) => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "model-error", message),
            Error::OrphanRetractionConflict { intermediate, referrer } => {
                ApiError::new(StatusCode::CONFLICT, "conflict", message)
                    .with_detail(json!({ "intermediate": intermediate, "referrer": referrer }))
            }
            Error::Storage(_) | Error::Json(_) => {
                log::error!("{message}");
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "storage", message)
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = serde_json::to_value(&self).expect("serializable error");
        body["status"] = json!(self.status.as_u16());
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid request body: {e}")))
}

fn warning_headers<'a>(warnings: impl IntoIterator<Item = &'a String>) -> HeaderMap {
    let mut headers = HeaderMap::new();
    for w in warnings {
        if let Ok(value) = HeaderValue::from_str(w) {
            headers.append(WARNING_HEADER, value);
        }
    }
    headers
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OntologySummary {
    pub id: String,
    pub iri: Iri,
    pub name: String,
}

impl From<OntologyRecord> for OntologySummary {
    fn from(r: OntologyRecord) -> Self {
        OntologySummary {
            id: r.id,
            iri: r.iri,
            name: r.name,
        }
    }
}

#[derive(Debug, Deserialize)]
struct UploadRequest {
    name: String,
    turtle: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PopulationSummary {
    pub root_iri: Iri,
    pub minted: Vec<Minted>,
}

impl From<PopulationResult> for PopulationSummary {
    fn from(r: PopulationResult) -> Self {
        PopulationSummary {
            root_iri: r.root_iri,
            minted: r.minted,
        }
    }
}

#[derive(Debug, Deserialize)]
struct ClassQuery {
    class: Option<String>,
}

pub fn router(repo: Arc<Repository>) -> Router {
    let cors = std::env::var(CORS_ENV).map(|v| !v.eq_ignore_ascii_case("off")).unwrap_or(true);
    router_with_cors(repo, cors)
}

pub fn router_with_cors(repo: Arc<Repository>, cors: bool) -> Router {
    let app = Router::new()
        .route("/ontologies", get(list_ontologies).post(upload_ontology))
        .route("/ontologies/{id}", get(ontology_detail_handler))
        .route("/ontologies/{id}/form", get(form_handler))
        .route("/ontologies/{id}/config", get(get_config).put(put_config))
        .route("/ontologies/{id}/individuals", axum::routing::post(create_individual))
        .route(
            "/ontologies/{id}/individuals/{iri}",
            get(get_individual).put(update_individual),
        )
        .route("/ontologies/{id}/export", get(export))
        .with_state(repo);
    if cors {
        app.layer(CorsLayer::permissive())
    } else {
        app
    }
}

async fn list_ontologies(State(repo): State<Arc<Repository>>) -> Json<Vec<OntologySummary>> {
    Json(repo.list().into_iter().map(OntologySummary::from).collect())
}

async fn upload_ontology(State(repo): State<Arc<Repository>>, body: Bytes) -> ApiResult<impl IntoResponse> {
    let request: UploadRequest = parse_body(&body)?;
    let upload = repo.upload(&request.name, &request.turtle)?;
    for w in &upload.warnings {
        log::warn!("{}: {w}", upload.record.id);
    }
    Ok((
        StatusCode::CREATED,
        warning_headers(&upload.warnings),
        Json(OntologySummary::from(upload.record)),
    ))
}

async fn ontology_detail_handler(
    State(repo): State<Arc<Repository>>,
    Path(id): Path<String>,
) -> ApiResult<impl IntoResponse> {
    let model = repo.load_model(&id)?;
    Ok(Json(ontology_detail(&model)))
}

fn required_class(query: &ClassQuery) -> ApiResult<Iri> {
    query
        .class
        .as_deref()
        .map(Iri::new)
        .ok_or_else(|| ApiError::bad_request("missing 'class' query parameter"))
}

fn build_form(repo: &Repository, id: &str, model: &OntologyModel, class: &Iri) -> ApiResult<(FormStructure, Vec<String>)> {
    let config = repo.get_config(id)?;
    let generated = generate_form(model, class, &config)?;
    let warnings = generated
        .warnings
        .iter()
        .map(|w| format!("inline section for {} degraded to a selector at {}", w.property, w.context_class))
        .collect();
    Ok((generated.form, warnings))
}

async fn form_handler(
    State(repo): State<Arc<Repository>>,
    Path(id): Path<String>,
    Query(query): Query<ClassQuery>,
) -> ApiResult<impl IntoResponse> {
    let model = repo.load_model(&id)?;
    let class = required_class(&query)?;
    let (form, warnings) = build_form(&repo, &id, &model, &class)?;
    Ok((warning_headers(&warnings), Json(form)))
}

async fn get_config(State(repo): State<Arc<Repository>>, Path(id): Path<String>) -> ApiResult<Json<FormConfig>> {
    Ok(Json(repo.get_config(&id)?))
}

async fn put_config(
    State(repo): State<Arc<Repository>>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<Json<FormConfig>> {
    let config: FormConfig = parse_body(&body)?;
    let model = repo.load_model(&id)?;
    let unknown = config.unknown_references(&model);
    if !unknown.is_empty() {
        return Err(ApiError::new(
            StatusCode::NOT_FOUND,
            "not-found",
            format!("configuration names {} unknown IRI(s)", unknown.len()),
        )
        .with_detail(json!({ "iris": unknown })));
    }
    repo.put_config(&id, &config)?;
    Ok(Json(config))
}

async fn create_individual(
    State(repo): State<Arc<Repository>>,
    Path(id): Path<String>,
    Query(query): Query<ClassQuery>,
    body: Bytes,
) -> ApiResult<impl IntoResponse> {
    let submission: Submission = parse_body(&body)?;
    let class = query.class.map(Iri::new).unwrap_or_else(|| submission.chosen_class.clone());
    let config = repo.get_config(&id)?;
    let result = repo.modify_abox(&id, |model| {
        let form = generate_form(model, &class, &config)?.form;
        populate(model, &form, &submission)
    })?;
    log::info!("{id}: created {} ({} triples)", result.root_iri, result.added_triples.len());
    Ok((StatusCode::CREATED, Json(PopulationSummary::from(result))))
}

/// Class whose form frames `individual` when the caller names none: its
/// first asserted type.
fn default_class(model: &OntologyModel, individual: &Iri) -> ApiResult<Iri> {
    let ind = model
        .individuals
        .get(individual)
        .ok_or_else(|| Error::UnknownIndividual(individual.clone()))?;
    ind.types
        .first()
        .cloned()
        .ok_or_else(|| Error::UnknownIndividual(individual.clone()).into())
}

async fn get_individual(
    State(repo): State<Arc<Repository>>,
    Path((id, iri)): Path<(String, String)>,
    Query(query): Query<ClassQuery>,
) -> ApiResult<Json<Submission>> {
    let model = repo.load_model(&id)?;
    let individual = Iri::new(iri);
    let class = match query.class {
        Some(c) => Iri::new(c),
        None => default_class(&model, &individual)?,
    };
    let (form, _) = build_form(&repo, &id, &model, &class)?;
    Ok(Json(prefill(&model, &form, &individual)?))
}

async fn update_individual(
    State(repo): State<Arc<Repository>>,
    Path((id, iri)): Path<(String, String)>,
    Query(query): Query<ClassQuery>,
    body: Bytes,
) -> ApiResult<Json<PopulationSummary>> {
    let submission: Submission = parse_body(&body)?;
    let individual = Iri::new(iri);
    let class = query.class.map(Iri::new).unwrap_or_else(|| submission.chosen_class.clone());
    let config = repo.get_config(&id)?;
    let result = repo.modify_abox(&id, |model| {
        let form = generate_form(model, &class, &config)?.form;
        update(model, &form, &individual, &submission)
    })?;
    log::info!(
        "{id}: updated {} (+{} -{})",
        result.root_iri,
        result.added_triples.len(),
        result.removed_triples.len()
    );
    Ok(Json(PopulationSummary::from(result)))
}

async fn export(State(repo): State<Arc<Repository>>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    let text = repo.export(&id)?;
    Ok(([(header::CONTENT_TYPE, "text/turtle; charset=utf-8")], text))
}
