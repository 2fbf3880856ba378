use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use microlab_core::viz::VizError;
use serde_json::json;
use thiserror::Error;

use crate::session::Phase;

#[derive(Debug, Error)]
pub enum ApiError {
    #[error("no session {0}")]
    UnknownSession(String),
    #[error("session is {} and not ready", .0.as_str())]
    NotReady(Phase),
    #[error("{0}")]
    BadRequest(String),
    #[error(transparent)]
    Viz(#[from] VizError),
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::UnknownSession(_) => StatusCode::NOT_FOUND,
            ApiError::NotReady(_) => StatusCode::CONFLICT,
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::Viz(VizError::UnknownTime(_) | VizError::UnknownSubstance(_)) => {
                StatusCode::NOT_FOUND
            }
            ApiError::Viz(_) => StatusCode::BAD_REQUEST,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            ApiError::UnknownSession(_) => "unknown_session",
            ApiError::NotReady(_) => "not_ready",
            ApiError::BadRequest(_) => "bad_request",
            ApiError::Viz(VizError::UnknownTime(_)) => "unknown_time",
            ApiError::Viz(VizError::UnknownSubstance(_)) => "unknown_substance",
            ApiError::Viz(_) => "bad_request",
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = Json(json!({ "error": self.kind(), "message": self.to_string() }));
        (self.status(), body).into_response()
    }
}
