use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("{0} not found")]
    NotFound(String),
    #[error("{0}")]
    Conflict(String),
    #[error("session {0} is finished")]
    Gone(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] ahprank::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl SessionError {
    pub fn status(&self) -> StatusCode {
        match self {
            SessionError::NotFound(_) => StatusCode::NOT_FOUND,
            SessionError::Conflict(_) => StatusCode::CONFLICT,
            SessionError::Gone(_) => StatusCode::GONE,
            SessionError::Invalid(_) | SessionError::Core(ahprank::Error::InvalidArgument(_)) => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
            SessionError::Core(_) | SessionError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for SessionError {
    fn into_response(self) -> Response {
        (self.status(), Json(json!({ "error": self.to_string() }))).into_response()
    }
}
