//! Loading a full set of study inputs: pool, clusters, seeds, test words and
//! an optional graded lexicon.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::clustering::{build_clusters, ClusterCache, ClusterIndex};
use crate::lexicon::{ingest_pool, GradedLexicon, Pool, PoolSchema};
use crate::session::{read_seed_file, read_word_list, SessionResources};
use crate::simulation::{DataPaths, SimulationError};

pub struct Dataset {
    pub resources: Arc<SessionResources>,
    pub graded: Option<GradedLexicon>,
}

/// Directory holding the bundled synthetic dataset.
pub fn bundled_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

/// Paths of the bundled dataset.
pub fn bundled_paths() -> DataPaths {
    let dir = bundled_dir();
    DataPaths {
        pool: dir.join(crate::synthetic::POOL_FILE),
        seeds: dir.join(crate::synthetic::SEED_FILE),
        test_words: dir.join(crate::synthetic::TEST_FILE),
        graded: Some(dir.join(crate::synthetic::GRADED_FILE)),
        k: crate::clustering::DEFAULT_K,
        vote_threshold: 1,
    }
}

fn config_err(e: impl std::fmt::Display) -> SimulationError {
    SimulationError::Config(e.to_string())
}

impl Dataset {
    /// Loads everything; clusters come from `cache` when given, else are built.
    pub fn load(paths: &DataPaths, cache: Option<&ClusterCache>) -> Result<Self, SimulationError> {
        let pool = ingest_pool(&paths.pool, &PoolSchema::default()).map_err(config_err)?;
        let clusters = match cache {
            Some(c) => c.get_or_build(&pool, paths.k).map_err(config_err)?.0,
            None => build_clusters(&pool, paths.k).map_err(config_err)?,
        };
        Self::assemble(pool, clusters, paths)
    }

    pub fn assemble(pool: Pool, clusters: ClusterIndex, paths: &DataPaths) -> Result<Self, SimulationError> {
        let seeds = read_seed_file(&paths.seeds, paths.vote_threshold)?;
        let tests = read_word_list(&paths.test_words)?;
        let graded = match &paths.graded {
            Some(p) => Some(GradedLexicon::read(p).map_err(config_err)?),
            None => None,
        };
        let resources = SessionResources::new(pool, clusters, seeds, tests)?;
        Ok(Dataset {
            resources: Arc::new(resources),
            graded,
        })
    }

    /// The bundled synthetic dataset.
    pub fn bundled() -> Result<Self, SimulationError> {
        Self::load(&bundled_paths(), None)
    }
}
