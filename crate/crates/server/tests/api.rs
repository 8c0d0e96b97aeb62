use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use ffdecide_core::payload::{self, Request as ApiRequest};
use ffdecide_core::problem::TURKIYE_CASE;
use ffdecide_core::{builtin_case, Exec};
use ffdecide_server::{router, Config, ELAPSED_HEADER};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> Router {
    router(&Config::default()).unwrap()
}

async fn send(
    app: Router,
    method: Method,
    uri: &str,
    body: Option<String>,
) -> (StatusCode, axum::http::HeaderMap, String) {
    let mut req = Request::builder().method(method).uri(uri);
    if body.is_some() {
        req = req.header(header::CONTENT_TYPE, "application/json");
    }
    let req = req
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let res = app.oneshot(req).await.unwrap();
    let status = res.status();
    let headers = res.headers().clone();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, headers, String::from_utf8(bytes.to_vec()).unwrap())
}

async fn post(uri: &str, body: Value) -> (StatusCode, Value) {
    let (status, headers, text) = send(app(), Method::POST, uri, Some(body.to_string())).await;
    assert_eq!(headers[header::CONTENT_TYPE], "application/json");
    assert!(headers.contains_key(ELAPSED_HEADER));
    (status, serde_json::from_str(&text).unwrap())
}

#[tokio::test]
async fn evaluate_builtin_case() {
    let (status, body) = post(
        "/api/v1/evaluate",
        json!({"case": TURKIYE_CASE, "alpha": 0.5}),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["ranking"].as_array().unwrap().len(), 7);
    assert_eq!(body["marcos"]["f_u"].as_array().unwrap().len(), 7);
    assert!(body.get("intermediate").is_none());

    let (_, full) = post(
        "/api/v1/evaluate",
        json!({"case": TURKIYE_CASE, "intermediate": true}),
    )
    .await;
    assert_eq!(full["intermediate"]["scores"].as_array().unwrap().len(), 7);
}

#[tokio::test]
async fn out_of_range_alpha_names_the_field() {
    let (status, body) = post(
        "/api/v1/evaluate",
        json!({"case": TURKIYE_CASE, "alpha": 1.5}),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"]["path"], "alpha");
}

#[tokio::test]
async fn malformed_bodies_are_bad_requests() {
    let (status, _, text) = send(
        app(),
        Method::POST,
        "/api/v1/evaluate",
        Some("{not json".into()),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(text.contains("\"parse\""));

    let (status, body) = post(
        "/api/v1/evaluate",
        json!({"case": TURKIYE_CASE, "aggregator": "median"}),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"]["kind"], "schema");
    assert_eq!(body["error"]["path"], "aggregator");

    let mut doc: Value = serde_json::from_str(&ffdecide_core::save_problem(
        &builtin_case(TURKIYE_CASE).unwrap(),
    ))
    .unwrap();
    doc["evaluations"][2][6][5] = json!("XX");
    let (status, body) = post("/api/v1/evaluate", json!({"problem": doc})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"]["path"], "problem.evaluations[2][6][5]");

    let (status, body) = post(
        "/api/v1/sweep",
        json!({"case": TURKIYE_CASE, "alpha_grid": "0:2:0.5"}),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"]["path"], "alpha_grid[3]");

    let (status, body) = post(
        "/api/v1/perturb",
        json!({"case": TURKIYE_CASE, "delta": 1.0}),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"]["path"], "delta");
}

#[tokio::test]
async fn degenerate_problems_are_unprocessable() {
    // every judgment on the diagonal: all entropies are 1
    let mut p = builtin_case(TURKIYE_CASE).unwrap();
    for e in &mut p.evaluations {
        for row in e.iter_mut() {
            row.iter_mut().for_each(|t| *t = "M".into());
        }
    }
    let body = serde_json::to_value(ApiRequest::for_problem(&p)).unwrap();
    let (status, body) = post("/api/v1/evaluate", body).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"]["kind"], "degenerate");
}

#[tokio::test]
async fn oversized_problems_are_rejected() {
    let mut p = builtin_case(TURKIYE_CASE).unwrap();
    for i in 0..60 {
        p.alternatives.push(ffdecide_core::problem::Alternative {
            id: format!("X{i}"),
            name: format!("extra {i}"),
        });
        for e in &mut p.evaluations {
            let row = e[0].clone();
            e.push(row);
        }
    }
    let body = serde_json::to_value(ApiRequest::for_problem(&p)).unwrap();
    let (status, body) = post("/api/v1/evaluate", body).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
    assert_eq!(body["error"]["kind"], "too_large");
}

#[tokio::test]
async fn catalogue_endpoints() {
    let (status, _, text) = send(app(), Method::GET, "/api/v1/cases", None).await;
    assert_eq!(status, StatusCode::OK);
    let cases: Value = serde_json::from_str(&text).unwrap();
    assert!(cases["cases"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"] == TURKIYE_CASE));

    let (status, _, text) = send(app(), Method::GET, "/api/v1/scales/default", None).await;
    assert_eq!(status, StatusCode::OK);
    let scale: Value = serde_json::from_str(&text).unwrap();
    let terms: Vec<&str> = scale["scale"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["term"].as_str().unwrap())
        .collect();
    assert_eq!(terms, ["AI", "VI", "I", "M", "L", "VL", "U"]);

    let (status, _, _) = send(app(), Method::GET, "/api/v1/nothing", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn responses_equal_engine_payloads() {
    let req = ApiRequest {
        intermediate: true,
        alpha_grid: Some(payload::GridSpec::Spec("0:1:0.25".into())),
        delta: Some(0.2),
        ..ApiRequest::for_case(TURKIYE_CASE)
    };
    let body = serde_json::to_string(&req).unwrap();
    let exec = Exec::Sequential;
    let expected = [
        (
            "/api/v1/evaluate",
            payload::to_json(&payload::evaluate_payload(&req, exec).unwrap()),
        ),
        (
            "/api/v1/sweep",
            payload::to_json(&payload::sweep_payload(&req, exec).unwrap()),
        ),
        (
            "/api/v1/perturb",
            payload::to_json(&payload::perturb_payload(&req, exec).unwrap()),
        ),
        (
            "/api/v1/compare-entropy",
            payload::to_json(&payload::compare_payload(&req, exec).unwrap()),
        ),
    ];
    for (uri, want) in expected {
        let (status, _, got) = send(app(), Method::POST, uri, Some(body.clone())).await;
        assert_eq!(status, StatusCode::OK, "{uri}");
        assert_eq!(got, want, "{uri}");
    }
}

#[tokio::test]
async fn concurrent_identical_requests_are_byte_identical() {
    let body = json!({"case": TURKIYE_CASE, "alpha": 0.3, "entropy_model": "linear"}).to_string();
    let app = app();
    let tasks: Vec<_> = (0..16)
        .map(|_| {
            let app = app.clone();
            let body = body.clone();
            tokio::spawn(async move {
                send(app, Method::POST, "/api/v1/evaluate", Some(body))
                    .await
                    .2
            })
        })
        .collect();
    let mut bodies = Vec::new();
    for t in tasks {
        bodies.push(t.await.unwrap());
    }
    assert!(bodies.iter().all(|b| *b == bodies[0]));
}

#[tokio::test]
async fn cors_preflight() {
    let req = Request::builder()
        .method(Method::OPTIONS)
        .uri("/api/v1/evaluate")
        .header(header::ORIGIN, "http://localhost:5173")
        .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
        .body(Body::empty())
        .unwrap();
    let res = app().oneshot(req).await.unwrap();
    assert_eq!(
        res.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN],
        "http://localhost:5173"
    );

    let req = Request::builder()
        .method(Method::OPTIONS)
        .uri("/api/v1/evaluate")
        .header(header::ORIGIN, "http://evil.example")
        .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
        .body(Body::empty())
        .unwrap();
    let res = app().oneshot(req).await.unwrap();
    assert!(!res
        .headers()
        .contains_key(header::ACCESS_CONTROL_ALLOW_ORIGIN));
}

#[tokio::test]
async fn serves_over_tcp_and_shuts_down() {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let (tx, rx) = tokio::sync::oneshot::channel::<()>();
    let server = tokio::spawn(async move {
        axum::serve(listener, app())
            .with_graceful_shutdown(async {
                let _ = rx.await;
            })
            .await
    });
    use tokio::io::{AsyncReadExt, AsyncWriteExt};
    let mut stream = tokio::net::TcpStream::connect(addr).await.unwrap();
    stream
        .write_all(b"GET /api/v1/cases HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n")
        .await
        .unwrap();
    let mut out = String::new();
    stream.read_to_string(&mut out).await.unwrap();
    assert!(out.starts_with("HTTP/1.1 200"));
    assert!(out.contains(TURKIYE_CASE));
    tx.send(()).unwrap();
    server.await.unwrap().unwrap();
}
