mod common;

use std::collections::BTreeSet;

use common::{current_word, knows, small_resources, Server};
use perscwi::model::import_model_for;
use perscwi::session::{read_events, EventKind, Session};
use perscwi_service::session_report;
use serde_json::{json, Value};

fn shape(v: &Value) -> BTreeSet<String> {
    let mut keys = BTreeSet::new();
    if let Some(obj) = v.as_object() {
        for (k, inner) in obj {
            keys.insert(k.clone());
            for sub in shape(inner) {
                keys.insert(format!("{k}.{sub}"));
            }
        }
    }
    keys
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn profile_validation_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let server = Server::start(small_resources(), dir.path()).await;

    let (status, body) = server.post("/sessions", json!({ "first_language": "Greek" })).await;
    assert_eq!(status, 400);
    assert_eq!(body["fields"]["proficiency"], "required");
    let (status, body) = server.post("/sessions", json!({ "proficiency": "expert" })).await;
    assert_eq!(status, 400);
    assert!(body["fields"]["proficiency"].is_string());
    let (status, _) = server.post("/sessions", json!({ "proficiency": "advanced", "age": "12" })).await;
    assert_eq!(status, 400);
    let (status, _) = server
        .post("/sessions", json!({ "proficiency": "advanced", "config": { "budget": 100000 } }))
        .await;
    assert_eq!(status, 400);
    let (status, _) = server
        .post("/sessions", json!({ "proficiency": "advanced", "config": { "colour": 1 } }))
        .await;
    assert_eq!(status, 400);

    let view = server.create(json!({ "proficiency": "Near Native", "hours_reading_weekly": "10-20" })).await;
    assert_eq!(view["item"]["item_number"], 1);
    assert_eq!(view["item"]["total_items"], 23 + 12);
    assert_eq!(view["done"], false);

    let view = server
        .create(json!({ "proficiency": "intermediate", "config": { "budget": 5, "test_size": 2 } }))
        .await;
    assert_eq!(view["item"]["total_items"], 7);
    let (status, _) = server.get("/sessions/0123456789abcdef/model").await;
    assert_eq!(status, 404);
    let (status, _) = server.answer("nope", "word", true).await;
    assert_eq!(status, 404);
    server.kill().await;
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn bundled_defaults_give_45_items() {
    let dir = tempfile::tempdir().unwrap();
    let resources = tokio::task::spawn_blocking(|| perscwi::dataset::Dataset::bundled().unwrap().resources)
        .await
        .unwrap();
    let server = Server::start(resources, dir.path()).await;
    let view = server.create(json!({ "proficiency": "advanced" })).await;
    assert_eq!(view["item"]["item_number"], 1);
    assert_eq!(view["item"]["total_items"], 45);
    server.kill().await;
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn full_session_never_leaks_phase() {
    let dir = tempfile::tempdir().unwrap();
    let resources = small_resources();
    let server = Server::start(resources.clone(), dir.path()).await;
    let mut view = server.create(json!({ "proficiency": "advanced" })).await;
    let id = view["session_id"].as_str().unwrap().to_string();
    let first_shape = shape(&view);
    let mut numbers = Vec::new();
    let mut frozen: Option<String> = None;
    while let Some(word) = current_word(&view) {
        assert_eq!(shape(&view), first_shape, "view shape changed at {view}");
        let n = view["item"]["item_number"].as_u64().unwrap();
        numbers.push(n);
        let (status, model) = server.get(&format!("/sessions/{id}/model")).await;
        if n <= 23 {
            assert_eq!(status, 409);
        } else {
            // training is over: the export is fixed from here on
            assert_eq!(status, 200);
            match &frozen {
                Some(f) => assert_eq!(f, &model),
                None => frozen = Some(model),
            }
        }
        let (status, _) = server.get(&format!("/sessions/{id}/report")).await;
        assert_eq!(status, 409);
        let (status, next) = server.answer(&id, &word, knows(&word)).await;
        assert_eq!(status, 200, "{next}");
        view = next;
    }
    assert_eq!(numbers, (1..=35).collect::<Vec<_>>());
    assert_eq!(view["done"], true);
    assert!(view["item"].is_null());
    assert_eq!(shape(&view), BTreeSet::from(["session_id".into(), "item".into(), "done".into()]));

    let (status, _) = server.answer(&id, "anything", true).await;
    assert_eq!(status, 410);
    let (_, model) = server.get(&format!("/sessions/{id}/model")).await;
    assert_eq!(Some(&model), frozen.as_ref());
    let record = import_model_for(&model, resources.pool().stats()).unwrap();
    assert_eq!(record.session_id.as_deref(), Some(id.as_str()));
    assert_eq!(record.model.version, 24);

    // the report equals metrics recomputed offline from the event log
    let (status, report) = server.get(&format!("/sessions/{id}/report")).await;
    assert_eq!(status, 200);
    let report: perscwi::metrics::EvaluationReport = serde_json::from_str(&report).unwrap();
    let log = std::fs::read(dir.path().join("sessions").join(format!("{id}.jsonl"))).unwrap();
    let events = read_events(log.as_slice()).unwrap();
    let offline = Session::replay(resources.clone(), &events).unwrap();
    assert_eq!(report, session_report(&offline).unwrap());
    let cell = report.cell("model", "advanced").unwrap();
    assert_eq!(cell.test_size, 12);
    assert!(report.cell("all_simple", "advanced").is_some());
    server.kill().await;
}

/// Answers the test items with the frozen model's own predictions (or their
/// opposite) and checks the report.
async fn report_for_agreeing(server: &Server, resources: &perscwi::session::SessionResources, agree: bool) -> perscwi::metrics::EvaluationReport {
    let mut view = server.create(json!({ "proficiency": "intermediate" })).await;
    let id = view["session_id"].as_str().unwrap().to_string();
    let mut model = None;
    while let Some(word) = current_word(&view) {
        let n = view["item"]["item_number"].as_u64().unwrap();
        let answer = if n <= 23 {
            knows(&word)
        } else {
            let m = match &model {
                Some(m) => m,
                None => {
                    let (_, text) = server.get(&format!("/sessions/{id}/model")).await;
                    model.insert(import_model_for(&text, resources.pool().stats()).unwrap().model)
                }
            };
            let predicted_simple = !m.predict(resources.pool().features(&word).unwrap()).unwrap().is_complex();
            predicted_simple == agree
        };
        view = server.answer(&id, &word, answer).await.1;
    }
    let (_, text) = server.get(&format!("/sessions/{id}/report")).await;
    serde_json::from_str(&text).unwrap()
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn report_extremes() {
    let dir = tempfile::tempdir().unwrap();
    let resources = small_resources();
    let server = Server::start(resources.clone(), dir.path()).await;
    let good = report_for_agreeing(&server, &resources, true).await;
    let cell = good.cell("model", "intermediate").unwrap();
    assert_eq!(cell.f_score, 1.0);
    assert_eq!(cell.confusion.fp + cell.confusion.fn_, 0);
    let bad = report_for_agreeing(&server, &resources, false).await;
    let cell = bad.cell("model", "intermediate").unwrap();
    assert_eq!(cell.f_complex, 0.0);
    assert_eq!(cell.confusion.tp + cell.confusion.tn, 0);
    server.kill().await;
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn duplicate_submit_is_rejected_with_next_word() {
    let dir = tempfile::tempdir().unwrap();
    let server = Server::start(small_resources(), dir.path()).await;
    let view = server.create(json!({ "proficiency": "advanced" })).await;
    let id = view["session_id"].as_str().unwrap().to_string();
    let word = current_word(&view).unwrap();
    let (status, next) = server.answer(&id, &word, true).await;
    assert_eq!(status, 200);
    let (status, body) = server.answer(&id, &word, true).await;
    assert_eq!(status, 409);
    assert_eq!(body["expected"], next["item"]);
    let (status, resumed) = server.get(&format!("/sessions/{id}")).await;
    assert_eq!(status, 200);
    assert_eq!(serde_json::from_str::<Value>(&resumed).unwrap(), next);
    let (status, _) = server
        .client
        .post(server.url(&format!("/sessions/{id}/annotations")))
        .body("not json")
        .header("content-type", "application/json")
        .send()
        .await
        .map(|r| (r.status().as_u16(), ()))
        .unwrap();
    assert_eq!(status, 400);
    server.kill().await;
}

#[tokio::test(flavor = "multi_thread", worker_threads = 8)]
async fn concurrent_submits_accept_exactly_one() {
    let dir = tempfile::tempdir().unwrap();
    let server = std::sync::Arc::new(Server::start(small_resources(), dir.path()).await);
    let mut view = server.create(json!({ "proficiency": "advanced", "config": { "budget": 6, "test_size": 3 } })).await;
    let id = view["session_id"].as_str().unwrap().to_string();
    let mut steps = 0;
    while let Some(word) = current_word(&view) {
        let tasks: Vec<_> = (0..8)
            .map(|_| {
                let (server, id, word) = (server.clone(), id.clone(), word.clone());
                tokio::spawn(async move { server.answer(&id, &word, knows(&word)).await })
            })
            .collect();
        let mut accepted = Vec::new();
        for t in tasks {
            let (status, body) = t.await.unwrap();
            match status {
                200 => accepted.push(body),
                409 | 410 => {}
                other => panic!("unexpected status {other}: {body}"),
            }
        }
        assert_eq!(accepted.len(), 1, "step {steps}");
        view = accepted.pop().unwrap();
        steps += 1;
    }
    assert_eq!(steps, 9);
    let log = std::fs::read(dir.path().join("sessions").join(format!("{id}.jsonl"))).unwrap();
    let events = read_events(log.as_slice()).unwrap();
    for (i, e) in events.iter().enumerate() {
        assert_eq!(e.sequence_no, i as u64);
    }
    let answers = events.iter().filter(|e| matches!(e.kind, EventKind::AnnotationReceived { .. })).count();
    assert_eq!(answers, 9);
}
