//! Stateless HTTP service over the decision engine.
//!
//! Every analysis endpoint takes a [`Request`](ffdecide_core::payload::Request)
//! JSON body and answers with the same document the command line prints for
//! `--format structured`. Failures map to 400 (bad input, with the offending
//! field path), 413 (problem above the size limits), 422 (well-formed input
//! with no defined result) and 500.

use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::time::Instant;

use axum::body::Bytes;
use axum::extract::DefaultBodyLimit;
use axum::http::{header, HeaderName, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use ffdecide_core::payload::{self, parse_request, Request};
use ffdecide_core::{Error, ErrorKind, Exec};
use serde::Serialize;
use tower_http::cors::{AllowOrigin, CorsLayer};

pub const DEFAULT_PORT: u16 = 8080;
pub const ELAPSED_HEADER: &str = "x-ffdecide-elapsed-ms";
const BODY_LIMIT: usize = 16 * 1024 * 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub bind: IpAddr,
    pub port: u16,
    /// Browser origins allowed by CORS; `*` allows any.
    pub allowed_origins: Vec<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            bind: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: DEFAULT_PORT,
            allowed_origins: vec!["http://localhost:5173".into()],
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error("invalid {var} value `{value}`")]
    Env { var: &'static str, value: String },
    #[error("invalid allowed origin `{0}`")]
    Origin(String),
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Config {
    /// Applies `FFDECIDE_PORT` and `FFDECIDE_BIND` on top of `self`.
    pub fn with_env(self) -> Result<Self, ServeError> {
        self.with_vars(|k| std::env::var(k).ok())
    }

    pub fn with_vars(mut self, var: impl Fn(&str) -> Option<String>) -> Result<Self, ServeError> {
        if let Some(v) = var("FFDECIDE_PORT") {
            self.port = v.trim().parse().map_err(|_| ServeError::Env {
                var: "FFDECIDE_PORT",
                value: v.clone(),
            })?;
        }
        if let Some(v) = var("FFDECIDE_BIND") {
            self.bind = v.trim().parse().map_err(|_| ServeError::Env {
                var: "FFDECIDE_BIND",
                value: v.clone(),
            })?;
        }
        Ok(self)
    }

    pub fn addr(&self) -> SocketAddr {
        SocketAddr::new(self.bind, self.port)
    }

    fn cors(&self) -> Result<CorsLayer, ServeError> {
        let origin = if self.allowed_origins.iter().any(|o| o == "*") {
            AllowOrigin::any()
        } else {
            let list = self
                .allowed_origins
                .iter()
                .map(|o| HeaderValue::from_str(o).map_err(|_| ServeError::Origin(o.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            AllowOrigin::list(list)
        };
        Ok(CorsLayer::new()
            .allow_origin(origin)
            .allow_methods([Method::GET, Method::POST])
            .allow_headers([header::CONTENT_TYPE])
            .expose_headers([HeaderName::from_static(ELAPSED_HEADER)]))
    }
}

#[derive(Serialize)]
struct ErrorBody {
    error: ErrorDetail,
}

#[derive(Serialize)]
struct ErrorDetail {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
    message: String,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::Schema { .. } => "schema",
        _ => match e.kind() {
            ErrorKind::Invalid => "validation",
            ErrorKind::Degenerate => "degenerate",
            ErrorKind::TooLarge => "too_large",
        },
    }
}

pub fn status_for(e: &Error) -> StatusCode {
    match e.kind() {
        ErrorKind::Invalid => StatusCode::BAD_REQUEST,
        ErrorKind::Degenerate => StatusCode::UNPROCESSABLE_ENTITY,
        ErrorKind::TooLarge => StatusCode::PAYLOAD_TOO_LARGE,
    }
}

fn json(status: StatusCode, body: String, started: Instant) -> Response {
    let elapsed = format!("{:.3}", started.elapsed().as_secs_f64() * 1e3);
    (
        status,
        [
            (
                header::CONTENT_TYPE,
                HeaderValue::from_static("application/json"),
            ),
            (
                HeaderName::from_static(ELAPSED_HEADER),
                HeaderValue::from_str(&elapsed).expect("ascii digits"),
            ),
        ],
        body,
    )
        .into_response()
}

fn failure(
    status: StatusCode,
    kind: &'static str,
    path: Option<String>,
    message: String,
    started: Instant,
) -> Response {
    let body = ErrorBody {
        error: ErrorDetail {
            kind,
            path,
            message,
        },
    };
    json(status, payload::to_json(&body), started)
}

fn engine_failure(e: &Error, started: Instant) -> Response {
    failure(
        status_for(e),
        error_kind(e),
        e.path().map(String::from),
        e.to_string(),
        started,
    )
}

/// Parses the body, runs `compute` off the async executor and renders the
/// outcome.
async fn run<T, F>(body: Bytes, compute: F) -> Response
where
    T: Serialize + Send + 'static,
    F: FnOnce(&Request) -> ffdecide_core::Result<T> + Send + 'static,
{
    let started = Instant::now();
    let req = match parse_request(&body) {
        Ok(r) => r,
        Err(e) => return engine_failure(&e, started),
    };
    match tokio::task::spawn_blocking(move || compute(&req).map(|v| payload::to_json(&v))).await {
        Ok(Ok(body)) => json(StatusCode::OK, body, started),
        Ok(Err(e)) => engine_failure(&e, started),
        Err(join) => {
            tracing::error!(error = %join, "evaluation task failed");
            failure(
                StatusCode::INTERNAL_SERVER_ERROR,
                "internal",
                None,
                "evaluation failed unexpectedly".into(),
                started,
            )
        }
    }
}

async fn evaluate(body: Bytes) -> Response {
    run(body, |r| payload::evaluate_payload(r, Exec::default())).await
}

async fn sweep(body: Bytes) -> Response {
    run(body, |r| payload::sweep_payload(r, Exec::default())).await
}

async fn perturb(body: Bytes) -> Response {
    run(body, |r| payload::perturb_payload(r, Exec::default())).await
}

async fn compare_entropy(body: Bytes) -> Response {
    run(body, |r| payload::compare_payload(r, Exec::default())).await
}

async fn cases() -> Response {
    let started = Instant::now();
    match payload::cases_payload() {
        Ok(c) => json(StatusCode::OK, payload::to_json(&c), started),
        Err(e) => engine_failure(&e, started),
    }
}

async fn default_scale() -> Response {
    json(
        StatusCode::OK,
        payload::to_json(&payload::scale_payload()),
        Instant::now(),
    )
}

async fn not_found() -> Response {
    failure(
        StatusCode::NOT_FOUND,
        "not_found",
        None,
        "no such endpoint".into(),
        Instant::now(),
    )
}

pub fn router(config: &Config) -> Result<Router, ServeError> {
    Ok(Router::new()
        .route("/api/v1/evaluate", post(evaluate))
        .route("/api/v1/sweep", post(sweep))
        .route("/api/v1/perturb", post(perturb))
        .route("/api/v1/compare-entropy", post(compare_entropy))
        .route("/api/v1/cases", get(cases))
        .route("/api/v1/scales/default", get(default_scale))
        .fallback(not_found)
        .layer(DefaultBodyLimit::max(BODY_LIMIT))
        .layer(config.cors()?))
}

/// Serves until SIGINT or SIGTERM, then drains in-flight requests.
pub async fn serve(config: Config) -> Result<(), ServeError> {
    let app = router(&config)?;
    let addr = config.addr();
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|source| ServeError::Bind { addr, source })?;
    tracing::info!(%addr, "listening");
    axum::serve(listener, app)
        .with_graceful_shutdown(shutdown())
        .await?;
    Ok(())
}

async fn shutdown() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = term => {},
    }
    tracing::info!("shutting down");
}
