//! REST interface under `/api/v1`.
//!
//! Authentication is `Authorization: Bearer <token>` from `POST /auth/login`.
//! Writes to existing documents carry the revision they replace (`rev` in
//! the body, or `?rev=` on DELETE); a mismatch answers 409 with the
//! current revision. Errors are `{"error": {"code", "message", ...}}`.

mod handlers;

use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{DefaultBodyLimit, FromRequest, FromRequestParts, Query, Request};
use axum::http::header::AUTHORIZATION;
use axum::http::request::Parts;
use axum::http::StatusCode;
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::de::DeserializeOwned;

use crate::error::{ApiError, ApiResult};
use crate::service::Service;

#[derive(Clone)]
pub struct AppState {
    pub service: Arc<Service>,
}

pub fn router(service: Arc<Service>) -> Router {
    use handlers::*;
    let limit = service.config().max_upload_bytes;
    let project = Router::new()
        .route("/", get(get_project).put(update_project).delete(delete_project))
        .route("/members", get(list_members).post(add_member))
        .route("/members/{user_id}", put(set_member).delete(remove_member))
        .route("/entries", get(list_entries).post(create_entry))
        .route("/entries/{entry_id}", get(get_entry).put(update_entry).delete(delete_entry))
        .route("/texts", get(list_texts).post(create_text))
        .route("/texts/{text_id}", get(get_text).put(update_text).delete(delete_text))
        .route("/texts/{text_id}/utterances", get(list_utterances).post(append_utterance))
        .route(
            "/texts/{text_id}/utterances/{utt_id}",
            get(get_utterance).put(update_utterance).delete(delete_utterance),
        )
        .route("/media", get(list_media).post(upload_media))
        .route("/gloss/suggest", post(suggest))
        .route("/gloss/retrain", post(retrain))
        .route("/gloss/predictions", post(import_predictions))
        .route("/gloss/model", get(model_info))
        .route("/export", get(export))
        .route("/import", post(import))
        .route("/sketch", get(sketch))
        .route("/dictionary", get(dictionary))
        .route("/linkset", get(get_linkset).put(put_linkset));
    let api = Router::new()
        .route("/auth/login", post(login))
        .route("/auth/logout", post(logout))
        .route("/auth/me", get(me))
        .route("/projects", get(list_projects).post(create_project))
        .nest("/projects/{project_id}", project)
        .route("/media/{sha256}", get(get_media));
    Router::new()
        .nest("/api/v1", api)
        .fallback(|| async { ApiError::not_found("route") })
        .layer(DefaultBodyLimit::max(limit))
        .with_state(AppState { service })
}

/// The bearer token of the request; its absence is a 401.
pub struct Bearer(pub String);

impl<S: Send + Sync> FromRequestParts<S> for Bearer {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, _: &S) -> Result<Self, Self::Rejection> {
        parts
            .headers
            .get(AUTHORIZATION)
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.strip_prefix("Bearer "))
            .map(|t| t.trim())
            .filter(|t| !t.is_empty())
            .map(|t| Bearer(t.to_owned()))
            .ok_or_else(ApiError::unauthenticated)
    }
}

/// JSON body whose rejections use the API error shape.
pub struct Body<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequest<S> for Body<T> {
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        match Json::<T>::from_request(req, state).await {
            Ok(Json(v)) => Ok(Body(v)),
            Err(rejection) => Err(json_rejection(rejection)),
        }
    }
}

fn json_rejection(r: JsonRejection) -> ApiError {
    let status = r.status();
    let code = if status == StatusCode::UNPROCESSABLE_ENTITY { "invalid" } else { "bad_request" };
    ApiError::new(status, code, r.body_text())
}

/// Query string whose rejections use the API error shape.
pub struct Params<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequestParts<S> for Params<T> {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, Self::Rejection> {
        Query::<T>::from_request_parts(parts, state)
            .await
            .map(|Query(v)| Params(v))
            .map_err(|r: QueryRejection| ApiError::bad_request(r.body_text()))
    }
}

/// Runs store-bound work off the async executor.
pub(crate) async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ApiResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError::internal(e.to_string()))?
}
