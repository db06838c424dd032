#![allow(dead_code)]

use std::path::Path;
use std::sync::Arc;

use perscwi::clustering::build_clusters;
use perscwi::lexicon::{binarize_seed_label, pool_from_records};
use perscwi::session::{SessionConfig, SessionResources};
use perscwi::synthetic::{generate, SyntheticConfig};
use perscwi_service::{router, AppState};
use serde_json::{json, Value};
use tokio::task::JoinHandle;

/// 600 pool words, 40 seeds, 12 test words, k = 4.
pub fn small_resources() -> Arc<SessionResources> {
    let data = generate(&SyntheticConfig {
        pool_size: 600,
        graded_pool_words: 450,
        graded_extra_words: 30,
        seed_count: 40,
        test_count: 12,
        seed: 77,
    });
    let pool = pool_from_records(data.records, "service-small".into()).unwrap();
    let clusters = build_clusters(&pool, 4).unwrap();
    let seeds = data
        .seeds
        .iter()
        .map(|(w, v)| (w.clone(), binarize_seed_label(i64::from(*v), 1).unwrap()))
        .collect();
    Arc::new(SessionResources::new(pool, clusters, seeds, data.test_words).unwrap())
}

pub struct Server {
    pub base: String,
    pub client: reqwest::Client,
    handle: JoinHandle<()>,
}

impl Server {
    pub async fn start(resources: Arc<SessionResources>, dir: &Path) -> Server {
        let dir = dir.to_path_buf();
        let state = tokio::task::spawn_blocking(move || AppState::open(resources, SessionConfig::default(), &dir).unwrap())
            .await
            .unwrap();
        let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
        let base = format!("http://{}", listener.local_addr().unwrap());
        let handle = tokio::spawn(async move {
            axum::serve(listener, router(Arc::new(state))).await.unwrap();
        });
        Server {
            base,
            client: reqwest::Client::new(),
            handle,
        }
    }

    /// Kills the server without any shutdown work.
    pub async fn kill(self) {
        self.handle.abort();
        let _ = self.handle.await;
    }

    pub fn url(&self, path: &str) -> String {
        format!("{}{path}", self.base)
    }

    pub async fn post(&self, path: &str, body: Value) -> (u16, Value) {
        let r = self.client.post(self.url(path)).json(&body).send().await.unwrap();
        let status = r.status().as_u16();
        (status, r.json().await.unwrap_or(Value::Null))
    }

    pub async fn get(&self, path: &str) -> (u16, String) {
        let r = self.client.get(self.url(path)).send().await.unwrap();
        (r.status().as_u16(), r.text().await.unwrap())
    }

    pub async fn create(&self, body: Value) -> Value {
        let (status, view) = self.post("/sessions", body).await;
        assert_eq!(status, 201, "{view}");
        view
    }

    pub async fn answer(&self, id: &str, word: &str, knows: bool) -> (u16, Value) {
        self.post(&format!("/sessions/{id}/annotations"), json!({ "word": word, "knows_word": knows }))
            .await
    }
}

/// A fixed, word-dependent answer.
pub fn knows(word: &str) -> bool {
    word.bytes().map(u32::from).sum::<u32>() % 3 != 0
}

pub fn current_word(view: &Value) -> Option<String> {
    view["item"]["word"].as_str().map(str::to_string)
}
