mod common;

use std::io::Write;

use common::{current_word, knows, small_resources, Server};
use perscwi::downstream::group_complexity_probability;
use perscwi::model::import_model_for;
use perscwi::session::{read_events, write_events, Session};
use serde_json::{json, Value};

fn log_path(dir: &std::path::Path, id: &str) -> std::path::PathBuf {
    dir.join("sessions").join(format!("{id}.jsonl"))
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn restart_restores_sessions_and_cuts_torn_tails() {
    let dir = tempfile::tempdir().unwrap();
    let resources = small_resources();
    let server = Server::start(resources.clone(), dir.path()).await;

    let a = server.create(json!({ "proficiency": "advanced" })).await;
    let a_id = a["session_id"].as_str().unwrap().to_string();
    let mut view = a;
    for _ in 0..5 {
        let word = current_word(&view).unwrap();
        view = server.answer(&a_id, &word, knows(&word)).await.1;
    }
    let a_view = view;

    let mut b_view = server.create(json!({ "proficiency": "near_native", "config": { "budget": 3, "test_size": 2 } })).await;
    let b_id = b_view["session_id"].as_str().unwrap().to_string();
    while let Some(word) = current_word(&b_view) {
        b_view = server.answer(&b_id, &word, knows(&word)).await.1;
    }
    server.kill().await;

    let a_log = std::fs::read(log_path(dir.path(), &a_id)).unwrap();
    let b_log = std::fs::read(log_path(dir.path(), &b_id)).unwrap();

    // A crash during the next step of session a: the answer and the
    // propagation were written, the refit was not, and the last line is torn.
    let events = read_events(a_log.as_slice()).unwrap();
    let mut ahead = Session::replay(resources.clone(), &events).unwrap();
    let word = ahead.current_query().unwrap().to_string();
    ahead.submit_annotation(&word, true).unwrap();
    let tail = ahead.events_since(events.len());
    let mut f = std::fs::OpenOptions::new().append(true).open(log_path(dir.path(), &a_id)).unwrap();
    write_events(&mut f, &tail[..2]).unwrap();
    let torn = serde_json::to_string(&tail[2]).unwrap();
    f.write_all(&torn.as_bytes()[..torn.len() / 2]).unwrap();
    drop(f);

    let server = Server::start(resources.clone(), dir.path()).await;
    let (status, text) = server.get(&format!("/sessions/{a_id}")).await;
    assert_eq!(status, 200);
    assert_eq!(serde_json::from_str::<Value>(&text).unwrap(), a_view);
    assert_eq!(std::fs::read(log_path(dir.path(), &a_id)).unwrap(), a_log);
    let (_, text) = server.get(&format!("/sessions/{b_id}")).await;
    assert_eq!(serde_json::from_str::<Value>(&text).unwrap(), b_view);
    assert_eq!(std::fs::read(log_path(dir.path(), &b_id)).unwrap(), b_log);

    // the restored session carries on and its log still replays cleanly
    let mut view = a_view;
    while let Some(word) = current_word(&view) {
        let (status, next) = server.answer(&a_id, &word, knows(&word)).await;
        assert_eq!(status, 200);
        view = next;
    }
    server.kill().await;
    let log = std::fs::read(log_path(dir.path(), &a_id)).unwrap();
    let events = read_events(log.as_slice()).unwrap();
    assert!(Session::replay(resources, &events).unwrap().is_completed());
}

async fn complete(server: &Server, band: &str, flip: bool) -> String {
    let mut view = server.create(json!({ "proficiency": band, "config": { "budget": 4, "test_size": 2 } })).await;
    let id = view["session_id"].as_str().unwrap().to_string();
    while let Some(word) = current_word(&view) {
        view = server.answer(&id, &word, knows(&word) ^ flip).await.1;
    }
    id
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn group_probability_averages_band_models() {
    let dir = tempfile::tempdir().unwrap();
    let resources = small_resources();
    let server = Server::start(resources.clone(), dir.path()).await;
    let word = resources.pool().entries()[3].word.clone();
    let query = |band: &str, w: &str| format!("/group/probability?word={w}&band={band}");

    let (status, _) = server.get(&query("advanced", &word)).await;
    assert_eq!(status, 404);
    let (status, _) = server.get(&query("wizard", &word)).await;
    assert_eq!(status, 404);
    let (status, _) = server.get("/group/probability?word=x").await;
    assert_eq!(status, 400);

    let first = complete(&server, "advanced", false).await;
    let (_, text) = server.get(&format!("/sessions/{first}/model")).await;
    let m1 = import_model_for(&text, resources.pool().stats()).unwrap().model;
    let (status, body) = server.get(&query("advanced", &word)).await;
    assert_eq!(status, 200);
    let body: Value = serde_json::from_str(&body).unwrap();
    let own = m1.predict_proba(resources.pool().features(&word).unwrap()).unwrap();
    assert_eq!(body["probability"].as_f64().unwrap(), own);
    assert_eq!(body["models"], 1);
    let (status, _) = server.get(&query("advanced", "not-a-word")).await;
    assert_eq!(status, 404);

    let second = complete(&server, "advanced", true).await;
    let (_, text) = server.get(&format!("/sessions/{second}/model")).await;
    let m2 = import_model_for(&text, resources.pool().stats()).unwrap().model;
    let (_, body) = server.get(&query("advanced", &word)).await;
    let body: Value = serde_json::from_str(&body).unwrap();
    let offline = group_complexity_probability(&[&m1, &m2], resources.pool().features(&word).unwrap()).unwrap();
    assert!((body["probability"].as_f64().unwrap() - offline).abs() < 1e-15);
    assert_eq!(body["decision"], if offline > 0.5 { "complex" } else { "simple" });
    assert_eq!(body["models"], 2);
    let (status, _) = server.get(&query("intermediate", &word)).await;
    assert_eq!(status, 404);
    server.kill().await;

    // completed sessions rejoin their band after a restart
    let server = Server::start(resources.clone(), dir.path()).await;
    let (_, after) = server.get(&query("advanced", &word)).await;
    let after: Value = serde_json::from_str(&after).unwrap();
    assert_eq!(after["models"], 2);
    assert!((after["probability"].as_f64().unwrap() - offline).abs() < 1e-15);
    server.kill().await;
}
