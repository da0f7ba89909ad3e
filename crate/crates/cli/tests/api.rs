use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use std::sync::Arc;
use tower::ServiceExt;

use scenegen_cli::{router, AppState};
use scenegen_core::export::{parse_pgm, FREE, OCCUPIED, UNKNOWN};
use scenegen_core::modeldb::defaults::default_bundle;
use scenegen_core::{GenConfig, WorldStore};

fn app(dir: &std::path::Path) -> axum::Router {
    router(Arc::new(AppState::new(GenConfig::default(), default_bundle(), WorldStore::new(dir))))
}

async fn call(app: &axum::Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Vec<u8>) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    (status, res.into_body().collect().await.unwrap().to_bytes().to_vec())
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap()
}

#[tokio::test]
async fn generate_is_deterministic_and_files_are_served() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path());
    let body = json!({ "prompt": "generate me 5 difficulty levels of a hospital environment", "seed": 1 });
    let (s1, b1) = call(&app, "POST", "/api/generate", Some(body.clone())).await;
    let (s2, b2) = call(&app, "POST", "/api/generate", Some(body)).await;
    assert_eq!((s1, s2), (StatusCode::OK, StatusCode::OK));
    let (r1, r2) = (json(&b1), json(&b2));
    assert_eq!(r1["worldIds"], r2["worldIds"]);
    let ids = r1["worldIds"].as_array().unwrap();
    assert_eq!(ids.len(), 5);
    assert!(r1["timings"]["total"].as_f64().unwrap() > 0.0);

    let id = ids[0].as_str().unwrap();
    let (s, m) = call(&app, "GET", &format!("/api/worlds/{id}"), None).await;
    assert_eq!(s, StatusCode::OK);
    let m = json(&m);
    assert_eq!(m["id"], id);
    assert_eq!(m["provenance"]["context"], "hospital");

    let (s, pgm) = call(&app, "GET", &format!("/api/worlds/{id}/map.pgm"), None).await;
    assert_eq!(s, StatusCode::OK);
    let (_, _, px) = parse_pgm(&pgm).unwrap();
    assert!(px.iter().all(|v| [OCCUPIED, UNKNOWN, FREE].contains(v)));

    for f in ["floorplan.svg", "map.yaml", "scenario.yaml"] {
        let (s, b) = call(&app, "GET", &format!("/api/worlds/{id}/{f}"), None).await;
        assert_eq!(s, StatusCode::OK, "{f}");
        assert!(!b.is_empty());
    }

    let ids_q: Vec<&str> = ids.iter().map(|v| v.as_str().unwrap()).collect();
    let (s, csv) = call(&app, "GET", &format!("/api/metrics?ids={}", ids_q.join(",")), None).await;
    assert_eq!(s, StatusCode::OK);
    let csv = String::from_utf8(csv).unwrap();
    assert!(
        csv.starts_with("world_id,level,rooms,leaf_rooms,assets,edges,diameter,pedestrians,no_match_count,unfit_count")
    );
    assert_eq!(csv.lines().filter(|l| ids_q.iter().any(|id| l.starts_with(id))).count(), 5);
}

#[tokio::test]
async fn errors_carry_code_and_message() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path());
    let unknown = "0".repeat(64);
    for uri in [format!("/api/worlds/{unknown}"), format!("/api/worlds/{unknown}/map.pgm"), "/api/worlds/nope".into()] {
        let (s, b) = call(&app, "GET", &uri, None).await;
        assert_eq!(s, StatusCode::NOT_FOUND, "{uri}");
        let e = json(&b);
        assert_eq!(e["code"], "not_found");
        assert!(e["message"].is_string());
    }
    let (s, b) = call(&app, "POST", "/api/generate", Some(json!({ "prompt": "x", "graph": {} }))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(json(&b)["code"], "invalid_request");
    let (s, _) = call(&app, "POST", "/api/generate", Some(json!({ "bogus": 1 }))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, _) = call(&app, "GET", &format!("/api/metrics?ids={unknown}"), None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    let (s, _) = call(&app, "GET", "/api/metrics", None).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn query_returns_full_records_within_filters() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path());
    let (s, b) =
        call(&app, "POST", "/api/db/query", Some(json!({ "text": "", "filter": { "color": "red" }, "k": 500 }))).await;
    assert_eq!(s, StatusCode::OK);
    let rows = json(&b)["results"].as_array().unwrap().clone();
    assert!(!rows.is_empty());
    let ids: Vec<&str> = rows.iter().map(|r| r["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    for r in &rows {
        assert!(r["color_materials"].as_array().unwrap().iter().any(|cm| cm[0] == "red"));
        assert!(r["footprint_hull"].is_array());
    }
    let (s, _) = call(&app, "POST", "/api/db/query", Some(json!({ "text": "" }))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn annotation_edits_apply_after_rebuild() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path());
    let id = default_bundle().records()[0].id.clone();
    let (_, before) = call(&app, "GET", "/api/db", None).await;
    let before = json(&before);

    let edit = json!({ "expected_revision": 0, "description": "zebra striped quokka" });
    let (s, b) = call(&app, "PUT", &format!("/api/db/annotations/{id}"), Some(edit.clone())).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(json(&b)["revision"], 1);
    let (s, b) = call(&app, "PUT", &format!("/api/db/annotations/{id}"), Some(edit)).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(json(&b)["code"], "conflict");
    let (s, _) = call(&app, "PUT", "/api/db/annotations/no-such-model", Some(json!({}))).await;
    assert_eq!(s, StatusCode::NOT_FOUND);

    let q = json!({ "text": "zebra striped quokka", "k": 1 });
    let (_, b) = call(&app, "POST", "/api/db/query", Some(q.clone())).await;
    assert_ne!(json(&b)["results"][0]["description"], "zebra striped quokka");

    let (s, b) = call(&app, "POST", "/api/db/rebuild", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_ne!(json(&b)["digest"], before["digest"]);
    let (_, b) = call(&app, "POST", "/api/db/query", Some(q)).await;
    assert_eq!(json(&b)["results"][0]["id"], id.as_str());
}

#[tokio::test]
async fn extract_returns_a_scene_graph() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path());
    let seg = json!({
        "rooms": [
            { "id": "a", "category": "office", "polygon": [[0, 0], [4, 0], [4, 3], [0, 3]] },
            { "id": "b", "category": "kitchen", "polygon": [[4, 0], [8, 0], [8, 3], [4, 3]] }
        ],
        "assets": [{ "category": "chair", "box": { "min": [1, 1], "max": [1.5, 1.5] } }],
        "doorways": [
            { "segment": [[4, 1], [4, 1.9]], "width": 0.9 },
            { "segment": [[0, 1], [0, 1.9]], "width": 0.9 }
        ]
    });
    let (s, b) = call(&app, "POST", "/api/extract", Some(seg)).await;
    assert_eq!(s, StatusCode::OK, "{}", String::from_utf8_lossy(&b));
    let g = scenegen_core::parse_scene_graph(&b).unwrap();
    assert_eq!(g.rooms().len(), 2);
    assert_eq!(g.edges().len(), 1);
    let (s, _) = call(&app, "POST", "/api/extract", Some(json!({ "rooms": 3 }))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
}
