use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use life_core::glosser::GlosserError;
use life_core::ingest::IngestError;
use life_core::linkeddata::LinkedDataError;
use life_core::store::StoreError;
use life_core::ValidationReport;
use serde_json::{json, Map, Value};

/// An error as reported to API clients: `{"error": {"code", "message", ...}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    /// Extra members of the error object, such as `current_rev`.
    pub details: Map<String, Value>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> ApiError {
        ApiError { status, code, message: message.into(), details: Map::new() }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> ApiError {
        self.details.insert(key.to_owned(), value.into());
        self
    }

    pub fn unauthenticated() -> ApiError {
        ApiError::new(StatusCode::UNAUTHORIZED, "unauthenticated", "missing, invalid or expired token")
    }

    pub fn invalid_credentials() -> ApiError {
        ApiError::new(StatusCode::UNAUTHORIZED, "invalid_credentials", "invalid username or password")
    }

    pub fn forbidden() -> ApiError {
        ApiError::new(StatusCode::FORBIDDEN, "forbidden", "your role in this project does not allow this action")
    }

    pub fn not_found(what: &str) -> ApiError {
        ApiError::new(StatusCode::NOT_FOUND, "not_found", format!("{what} not found"))
    }

    pub fn bad_request(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    pub fn conflict(current: Option<String>) -> ApiError {
        let e = ApiError::new(StatusCode::CONFLICT, "conflict", "the document was changed by someone else");
        e.with("current_rev", current.map_or(Value::Null, Value::String))
    }

    pub fn unprocessable(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid", message)
    }

    pub fn validation(report: &ValidationReport) -> ApiError {
        let first = report.errors().next().map_or_else(String::new, |i| format!("{}: {}", i.path, i.message));
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "validation_failed", first)
            .with("issues", serde_json::to_value(&report.issues).expect("issues serialize"))
    }

    pub fn internal(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }

    pub fn body(&self) -> Value {
        let mut error = Map::new();
        error.insert("code".into(), json!(self.code));
        error.insert("message".into(), json!(self.message));
        error.extend(self.details.clone());
        json!({ "error": error })
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({}): {}", self.status.as_u16(), self.code, self.message)
    }
}

impl std::error::Error for ApiError {}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        if self.status.is_server_error() {
            tracing::error!(code = self.code, "{}", self.message);
        }
        (self.status, Json(self.body())).into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> ApiError {
        match e {
            StoreError::StaleRevision { current } => ApiError::conflict(current),
            StoreError::NotFound => ApiError::not_found("document"),
            StoreError::InvalidFilter(m) => ApiError::bad_request(m),
            StoreError::EmptyBlob => ApiError::unprocessable("upload is empty"),
            other => ApiError::internal(other.to_string()),
        }
    }
}

impl From<IngestError> for ApiError {
    fn from(e: IngestError) -> ApiError {
        let err = ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "parse_error", e.to_string());
        match &e {
            IngestError::ContentBeforeFirstRecord { line, column }
            | IngestError::TierMisalignment { line, column, .. }
            | IngestError::UnknownLineMarker { line, column, .. }
            | IngestError::MalformedToken { line, column, .. } => err.with("line", *line).with("column", *column),
            IngestError::MissingTier { line, .. } | IngestError::DuplicateTier { line, .. } => err.with("line", *line),
            IngestError::SchemaViolation { pointer, .. } => err.with("pointer", pointer.clone()),
            IngestError::CsvShape { row, .. } | IngestError::CsvValue { row, .. } => err.with("row", *row),
            IngestError::EmptyInput => err,
        }
    }
}

impl From<GlosserError> for ApiError {
    fn from(e: GlosserError) -> ApiError {
        let err = ApiError::unprocessable(e.to_string());
        match e {
            GlosserError::SchemaViolation { line, .. } => err.with("line", line),
            _ => err,
        }
    }
}

impl From<LinkedDataError> for ApiError {
    fn from(e: LinkedDataError) -> ApiError {
        ApiError::unprocessable(e.to_string())
    }
}

pub type ApiResult<T> = Result<T, ApiError>;
