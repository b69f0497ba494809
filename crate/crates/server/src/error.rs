use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use serde::Serialize;
use utem_core::{EngineError, ParseError, Violation};

#[derive(Debug, Serialize)]
struct ErrorBody<'a> {
    error: &'a str,
    violations: &'a [Violation],
}

/// An error reply: status, message and the offending field paths.
#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub message: String,
    pub violations: Vec<Violation>,
}

impl ApiError {
    pub fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
            violations: Vec::new(),
        }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, message)
    }

    pub fn missing(field: &str) -> Self {
        let mut e = Self::bad_request(format!("missing field `{field}`"));
        e.violations.push(Violation::new(field, "required"));
        e
    }

    /// A document error, with paths re-rooted under `prefix`.
    pub fn parse(prefix: &str, e: ParseError) -> Self {
        let violations = e
            .violations()
            .into_iter()
            .map(|v| {
                let path = match (prefix.is_empty(), v.path.is_empty()) {
                    (true, _) => v.path,
                    (false, true) => prefix.to_string(),
                    (false, false) => format!("{prefix}.{}", v.path),
                };
                Violation::new(path, v.message)
            })
            .collect();
        ApiError {
            status: StatusCode::BAD_REQUEST,
            message: e.to_string(),
            violations,
        }
    }

    /// Evaluation failures: unusable profiles and degenerate inputs are 422,
    /// structural problems are 400.
    pub fn engine(e: EngineError) -> Self {
        let (status, violations) = match &e {
            EngineError::Invalid(v) => (StatusCode::BAD_REQUEST, v.clone()),
            EngineError::Profile(v) => (StatusCode::UNPROCESSABLE_ENTITY, v.clone()),
            _ => (StatusCode::UNPROCESSABLE_ENTITY, Vec::new()),
        };
        ApiError {
            status,
            message: e.to_string(),
            violations,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            error: &self.message,
            violations: &self.violations,
        };
        (self.status, crate::json_body(utem_core::io::to_json(&body))).into_response()
    }
}
