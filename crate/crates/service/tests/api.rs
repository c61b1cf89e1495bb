use axum::body::Body;
use axum::http::{Request, StatusCode};
use handlecalc::engine::fixtures_root;
use handlecalc_service::{router, AppState, MovesView, StateView, StepView};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &AppState, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = router(app.clone()).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, v)
}

fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixtures_root().join(name)).unwrap()
}

async fn create(app: &AppState, name: &str, closed: bool) -> StateView {
    let (st, v) = call(app, "POST", "/session", Some(json!({"diagram": fixture(name), "closed": closed}))).await;
    assert_eq!(st, StatusCode::CREATED, "{v}");
    serde_json::from_value(v).unwrap()
}

async fn moves(app: &AppState, id: &str) -> MovesView {
    let (st, v) = call(app, "GET", &format!("/session/{id}/moves"), None).await;
    assert_eq!(st, StatusCode::OK);
    serde_json::from_value(v).unwrap()
}

#[tokio::test]
async fn empty_session_has_no_components() {
    let app = AppState::new();
    let (st, v) = call(&app, "POST", "/session", Some(json!({"diagram": "diagram nothing\n"}))).await;
    assert_eq!(st, StatusCode::CREATED);
    assert_eq!(v["components"], 0);
    assert_eq!(v["graph"]["nodes"].as_array().unwrap().len(), 0);
    let id = v["id"].as_str().unwrap();
    let (st, again) = call(&app, "GET", &format!("/session/{id}"), None).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(again, v);
}

#[tokio::test]
async fn cancelling_12_pair_is_listed_once() {
    let app = AppState::new();
    let s = create(&app, "cancel12.ddc", false).await;
    let m = moves(&app, &s.id).await;
    let pairs: Vec<_> = m.moves.iter().filter(|m| m.kind == "Pair12Annihilate").collect();
    assert_eq!(pairs.len(), 1, "{:?}", m.moves);
    let (st, v) = call(&app, "POST", &format!("/session/{}/move", s.id), Some(json!({"move": pairs[0].line}))).await;
    assert_eq!(st, StatusCode::OK, "{v}");
    let step: StepView = serde_json::from_value(v).unwrap();
    assert_eq!(step.state.components, 0);
    assert!(step.delta.removed.contains(&"D".to_string()) && step.delta.removed.contains(&"K".to_string()));
}

#[tokio::test]
async fn cancelling_23_pair_keeps_invariants() {
    let app = AppState::new();
    let s = create(&app, "cancel23.ddc", true).await;
    let inv_uri = format!("/session/{}/invariants?keys=h0,h1,h2,h3,h4,pi1ab,chi", s.id);
    let (_, before) = call(&app, "GET", &inv_uri, None).await;
    let line = moves(&app, &s.id).await.moves.into_iter().find(|m| m.kind == "Pair23Annihilate").unwrap().line;
    let (st, v) = call(&app, "POST", &format!("/session/{}/move", s.id), Some(json!({"move": line}))).await;
    assert_eq!(st, StatusCode::OK, "{v}");
    assert_eq!(v["state"]["components"], 0);
    let (_, after) = call(&app, "GET", &inv_uri, None).await;
    assert_eq!(before, after);
}

#[tokio::test]
async fn apply_then_undo_is_byte_identical() {
    let app = AppState::new();
    for name in ["mazur.ddc", "cancel12.ddc", "wu.hgd", "cobordism.hgd", "spun_trefoil.ddc"] {
        let s = create(&app, name, false).await;
        for m in moves(&app, &s.id).await.moves {
            let (st, v) = call(&app, "POST", &format!("/session/{}/move", s.id), Some(json!({"move": m.line}))).await;
            assert_eq!(st, StatusCode::OK, "{name}: {} -> {v}", m.line);
            let (st, v) = call(&app, "POST", &format!("/session/{}/undo", s.id), None).await;
            assert_eq!(st, StatusCode::OK);
            let back: StepView = serde_json::from_value(v).unwrap();
            assert_eq!(back.state.text, s.text, "{name}: {}", m.line);
            assert_eq!(back.state.undo_depth, 0);
        }
    }
}

#[tokio::test]
async fn errors_have_their_status() {
    let app = AppState::new();
    let (st, _) = call(&app, "GET", "/session/999", None).await;
    assert_eq!(st, StatusCode::NOT_FOUND);
    let (st, _) = call(&app, "POST", "/session", Some(json!({"text": "x"}))).await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
    let s = create(&app, "mazur.ddc", false).await;
    let uri = format!("/session/{}/move", s.id);
    let (st, v) = call(&app, "POST", &uri, Some(json!({"move": "kirby pair12 annihilate k=K d=D"}))).await;
    assert_eq!(st, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(v["error"].as_str().unwrap().contains("exactly once"), "{v}");
    let (st, _) = call(&app, "POST", &uri, Some(json!({"move": "kirby frobnicate"}))).await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
    let (st, _) = call(&app, "POST", &uri, Some(json!(["not", "an", "object"]))).await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
    let (st, _) = call(&app, "POST", &format!("/session/{}/undo", s.id), None).await;
    assert_eq!(st, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn render_graph_lists_records() {
    let app = AppState::new();
    let s = create(&app, "mazur.ddc", false).await;
    let kinds: Vec<&str> = s.graph.edges.iter().map(|e| e.kind.as_str()).collect();
    assert_eq!(kinds.iter().filter(|k| **k == "crossing").count(), 2);
    assert_eq!(kinds.iter().filter(|k| **k == "piercing").count(), 3);
    let k = s.graph.nodes.iter().find(|n| n.id == "K").unwrap();
    assert_eq!(k.framing, Some(0));
    assert_eq!(k.slots.len(), 7);
    let h = create(&app, "wu.hgd", false).await;
    let sides: Vec<_> = h.graph.nodes.iter().filter(|n| n.kind == "component").map(|n| n.side.clone().unwrap()).collect();
    assert!(sides.contains(&"alpha".to_string()) && sides.contains(&"beta".to_string()));
}

#[tokio::test]
async fn snapshots_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let app = AppState::with_snapshots(dir.path().to_path_buf()).unwrap();
    let s = create(&app, "cancel12.ddc", false).await;
    let line = moves(&app, &s.id).await.moves[0].line.clone();
    call(&app, "POST", &format!("/session/{}/move", s.id), Some(json!({"move": line}))).await;
    let (st, _) = call(&app, "POST", &format!("/session/{}/snapshot", s.id), None).await;
    assert_eq!(st, StatusCode::OK);
    let reloaded = AppState::with_snapshots(dir.path().to_path_buf()).unwrap();
    let (st, v) = call(&reloaded, "GET", &format!("/session/{}", s.id), None).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(v["undo_depth"], 1);
    let (_, v) = call(&reloaded, "POST", &format!("/session/{}/undo", s.id), None).await;
    assert_eq!(v["state"]["text"], s.text);
    let (st, _) = call(&AppState::new(), "POST", "/session/1/snapshot", None).await;
    assert_eq!(st, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn distinct_sessions_are_independent() {
    let app = AppState::new();
    let a = create(&app, "cancel12.ddc", false).await;
    let b = create(&app, "cancel12.ddc", false).await;
    assert_ne!(a.id, b.id);
    let line = moves(&app, &a.id).await.moves[0].line.clone();
    call(&app, "POST", &format!("/session/{}/move", a.id), Some(json!({"move": line}))).await;
    let (_, v) = call(&app, "GET", &format!("/session/{}", b.id), None).await;
    assert_eq!(v["text"], b.text);
}
