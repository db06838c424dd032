use std::net::{IpAddr, Ipv4Addr};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::Args;
use perscwi::clustering::{build_clusters, ClusterCache, ClusterIndex, DEFAULT_K};
use perscwi::dataset::bundled_paths;
use perscwi::lexicon::{ingest_pool, PoolSchema};
use perscwi::session::{read_seed_file, read_word_list, SessionConfig, SessionResources};
use serde::{Deserialize, Serialize};

use crate::ServiceError;

/// Server flags. Each one can also be set through the environment variable
/// shown in `--help`; flags win over the environment. Data paths default to
/// the bundled synthetic dataset.
#[derive(Debug, Clone, Args)]
pub struct ServeArgs {
    #[arg(long, env = "PERSCWI_PORT", default_value_t = 8080)]
    pub port: u16,
    #[arg(long, env = "PERSCWI_HOST", default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
    pub host: IpAddr,
    /// Raw pool TSV.
    #[arg(long, env = "PERSCWI_POOL")]
    pub pool: Option<PathBuf>,
    /// Cluster index file; built and written there if missing.
    #[arg(long, env = "PERSCWI_CLUSTERS")]
    pub clusters: Option<PathBuf>,
    /// Seed TSV of (word, complexity votes).
    #[arg(long, env = "PERSCWI_SEED_DATA")]
    pub seed_data: Option<PathBuf>,
    /// Test word list.
    #[arg(long, env = "PERSCWI_TEST_SET")]
    pub test_set: Option<PathBuf>,
    /// Event logs and the cluster cache live here.
    #[arg(long, env = "PERSCWI_DATA_DIR", default_value = "perscwi-data")]
    pub data_dir: PathBuf,
    /// TOML with `k`, `vote_threshold` and a `[session]` table of defaults.
    #[arg(long, env = "PERSCWI_CONFIG")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceFileConfig {
    pub k: usize,
    pub vote_threshold: u32,
    pub session: SessionConfig,
}

impl Default for ServiceFileConfig {
    fn default() -> Self {
        ServiceFileConfig {
            k: DEFAULT_K,
            vote_threshold: 1,
            session: SessionConfig::default(),
        }
    }
}

impl ServiceFileConfig {
    pub fn load(path: &Path) -> Result<Self, ServiceError> {
        let text = std::fs::read_to_string(path).map_err(|e| ServiceError::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| ServiceError::Config(format!("{}: {e}", path.display())))
    }
}

fn load_err(what: &str, e: impl std::fmt::Display) -> ServiceError {
    ServiceError::Config(format!("{what}: {e}"))
}

/// Loads the shared read-only session resources named by `args`.
pub fn load_resources(args: &ServeArgs, file: &ServiceFileConfig) -> Result<SessionResources, ServiceError> {
    let bundled = bundled_paths();
    let pool_path = args.pool.clone().unwrap_or(bundled.pool);
    let pool = ingest_pool(&pool_path, &PoolSchema::default()).map_err(|e| load_err("pool", e))?;
    let clusters = match &args.clusters {
        Some(path) if path.exists() => {
            log::info!("loading clusters from {}", path.display());
            ClusterIndex::load_for(path, &pool).map_err(|e| load_err("clusters", e))?
        }
        Some(path) => {
            log::info!("building clusters into {}", path.display());
            let index = build_clusters(&pool, file.k).map_err(|e| load_err("clusters", e))?;
            index.save(path).map_err(|e| load_err("clusters", e))?;
            index
        }
        None => {
            let cache = ClusterCache::new(args.data_dir.join("clusters"));
            let (index, outcome) = cache.get_or_build(&pool, file.k).map_err(|e| load_err("clusters", e))?;
            log::info!("cluster cache: {outcome:?}");
            index
        }
    };
    let seeds = read_seed_file(&args.seed_data.clone().unwrap_or(bundled.seeds), file.vote_threshold)
        .map_err(|e| load_err("seed data", e))?;
    let tests = read_word_list(&args.test_set.clone().unwrap_or(bundled.test_words)).map_err(|e| load_err("test set", e))?;
    SessionResources::new(pool, clusters, seeds, tests).map_err(|e| load_err("resources", e))
}

pub fn load(args: &ServeArgs) -> Result<(Arc<SessionResources>, ServiceFileConfig), ServiceError> {
    let file = match &args.config {
        Some(p) => ServiceFileConfig::load(p)?,
        None => ServiceFileConfig::default(),
    };
    Ok((Arc::new(load_resources(args, &file)?), file))
}
