//! Starts the service in-process on the bundled data and walks one session
//! through the HTTP API, answering as a simulated annotator would.
//!
//! cargo run --release -p perscwi-service --example annotate_over_http

use std::sync::Arc;

use perscwi::dataset::Dataset;
use perscwi::session::SessionConfig;
use perscwi::simulation::{Oracle, OracleSpec, ThresholdOracle};
use perscwi_service::{router, AppState};
use serde_json::{json, Value};

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let data_dir = dir.path().to_path_buf();
    let data = tokio::task::spawn_blocking(Dataset::bundled).await??;
    let resources = data.resources.clone();
    let state = tokio::task::spawn_blocking(move || AppState::open(resources, SessionConfig::default(), &data_dir)).await??;
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
    let base = format!("http://{}", listener.local_addr()?);
    tokio::spawn(async move { axum::serve(listener, router(Arc::new(state))).await });
    println!("service on {base}, logs in {}", dir.path().display());

    let client = reqwest::Client::new();
    let mut view: Value = client
        .post(format!("{base}/sessions"))
        .json(&json!({ "proficiency": "advanced", "first_language": "Greek" }))
        .send()
        .await?
        .json()
        .await?;
    let id = view["session_id"].as_str().unwrap_or_default().to_string();
    println!("POST /sessions -> {view}");

    let mut oracle = Oracle::new(
        OracleSpec::threshold(ThresholdOracle::frequency_cut(0.0, 0.05)),
        data.resources.pool(),
        None,
        11,
    )?;
    while let Some(word) = view["item"]["word"].as_str().map(str::to_string) {
        let knows = oracle.answer(&word)?;
        view = client
            .post(format!("{base}/sessions/{id}/annotations"))
            .json(&json!({ "word": word, "knows_word": knows }))
            .send()
            .await?
            .json()
            .await?;
    }
    println!("session {id} done");

    let model = client.get(format!("{base}/sessions/{id}/model")).send().await?.text().await?;
    println!("GET /model -> {} bytes", model.len());
    let report: Value = client.get(format!("{base}/sessions/{id}/report")).send().await?.json().await?;
    println!("GET /report -> {report}");
    let word = &data.resources.pool().entries()[100].word;
    let group: Value = client
        .get(format!("{base}/group/probability?word={word}&band=advanced"))
        .send()
        .await?
        .json()
        .await?;
    println!("GET /group/probability -> {group}");
    Ok(())
}
