//! Agglomerative pre-clustering of the pool and neighbor lookup.
//!
//! Clusters are built bottom-up with Ward linkage on Euclidean distance in
//! normalized feature space, using the nearest-neighbor-chain algorithm
//! (O(n²·d) time, O(n·d) memory). Cluster ids are ordered by descending mean
//! of the first feature, so with the standard feature order cluster 0 holds
//! the most frequent words.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{GradedLexicon, Pool, WordEntry};

pub const CACHE_FORMAT_VERSION: u32 = 1;
pub const DEFAULT_K: usize = 7;
/// Vote histograms have one bin per vote value 0..=10; larger values land in the last bin.
pub const VOTE_BINS: usize = 11;

#[derive(Debug, Error)]
pub enum ClusterError {
    #[error("k must be at least 2, got {0}")]
    KTooSmall(usize),
    #[error("k = {k} exceeds pool size {pool}")]
    KTooLarge { k: usize, pool: usize },
    #[error("non-finite feature for {0:?}")]
    NonFinite(String),
    #[error("m must be at least 1")]
    ZeroNeighbors,
    #[error("anchor {0:?} has no cluster assignment")]
    Unassigned(String),
    #[error("no candidate neighbors in scope for {0:?}")]
    EmptyScope(String),
    #[error("cluster cache is bound to pool {found}, expected {expected}")]
    HashMismatch { expected: String, found: String },
    #[error("cluster cache: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, ClusterError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Linkage {
    Ward,
}

impl Linkage {
    pub fn as_str(self) -> &'static str {
        match self {
            Linkage::Ward => "ward",
        }
    }
}

/// Where label propagation looks for neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    #[default]
    SameCluster,
    WholePool,
}

/// A flat partition of one pool into `k` clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterIndex {
    k: usize,
    linkage: Linkage,
    pool_hash: String,
    words: Vec<String>,
    assignment: Vec<usize>,
    lookup: HashMap<String, usize>,
}

impl ClusterIndex {
    fn new(k: usize, linkage: Linkage, pool_hash: String, words: Vec<String>, assignment: Vec<usize>) -> Self {
        let lookup = words.iter().cloned().zip(assignment.iter().copied()).collect();
        ClusterIndex {
            k,
            linkage,
            pool_hash,
            words,
            assignment,
            lookup,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn linkage(&self) -> Linkage {
        self.linkage
    }

    pub fn pool_hash(&self) -> &str {
        &self.pool_hash
    }

    pub fn cluster_of(&self, word: &str) -> Option<usize> {
        self.lookup.get(word).copied()
    }

    /// Assignment in pool order.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    /// Members of one cluster, in pool order.
    pub fn members(&self, cluster: usize) -> Vec<&str> {
        self.words
            .iter()
            .zip(&self.assignment)
            .filter(|(_, &c)| c == cluster)
            .map(|(w, _)| w.as_str())
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn check_pool(&self, pool: &Pool) -> Result<()> {
        if self.pool_hash != pool.content_hash() {
            return Err(ClusterError::HashMismatch {
                expected: pool.content_hash().to_string(),
                found: self.pool_hash.clone(),
            });
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "format_version\t{CACHE_FORMAT_VERSION}").unwrap();
        writeln!(s, "pool_hash\t{}", self.pool_hash).unwrap();
        writeln!(s, "k\t{}", self.k).unwrap();
        writeln!(s, "linkage\t{}", self.linkage.as_str()).unwrap();
        writeln!(s, "---").unwrap();
        for (w, c) in self.words.iter().zip(&self.assignment) {
            writeln!(s, "{w}\t{c}").unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let mut header = HashMap::new();
        for line in lines.by_ref() {
            if line == "---" {
                break;
            }
            let (key, value) = line
                .split_once('\t')
                .ok_or_else(|| ClusterError::Format(format!("bad header line {line:?}")))?;
            header.insert(key.to_string(), value.to_string());
        }
        let field = |name: &str| {
            header
                .get(name)
                .cloned()
                .ok_or_else(|| ClusterError::Format(format!("missing header {name}")))
        };
        let version: u32 = field("format_version")?
            .parse()
            .map_err(|_| ClusterError::Format("bad format_version".into()))?;
        if version != CACHE_FORMAT_VERSION {
            return Err(ClusterError::Format(format!("unsupported format_version {version}")));
        }
        let k: usize = field("k")?
            .parse()
            .map_err(|_| ClusterError::Format("bad k".into()))?;
        let linkage = match field("linkage")?.as_str() {
            "ward" => Linkage::Ward,
            other => return Err(ClusterError::Format(format!("unknown linkage {other}"))),
        };
        let pool_hash = field("pool_hash")?;
        let mut words = Vec::new();
        let mut assignment = Vec::new();
        for line in lines {
            let (w, c) = line
                .split_once('\t')
                .ok_or_else(|| ClusterError::Format(format!("bad assignment line {line:?}")))?;
            let c: usize = c
                .parse()
                .map_err(|_| ClusterError::Format(format!("bad cluster id in {line:?}")))?;
            if c >= k {
                return Err(ClusterError::Format(format!("cluster id {c} >= k")));
            }
            words.push(w.to_string());
            assignment.push(c);
        }
        Ok(ClusterIndex::new(k, linkage, pool_hash, words, assignment))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    /// Loads a cached index, refusing one built for a different pool.
    pub fn load_for(path: &Path, pool: &Pool) -> Result<Self> {
        let index = Self::parse(&std::fs::read_to_string(path)?)?;
        index.check_pool(pool)?;
        if index.words.len() != pool.len()
            || index.words.iter().zip(pool.entries()).any(|(w, e)| *w != e.word)
        {
            return Err(ClusterError::Format("cached words do not match pool".into()));
        }
        Ok(index)
    }
}

/// Builds a `k`-cluster Ward partition of the pool.
pub fn build_clusters(pool: &Pool, k: usize) -> Result<ClusterIndex> {
    let entries = pool.entries();
    if k < 2 {
        return Err(ClusterError::KTooSmall(k));
    }
    if k > entries.len() {
        return Err(ClusterError::KTooLarge {
            k,
            pool: entries.len(),
        });
    }
    for e in entries {
        if e.features.iter().any(|v| !v.is_finite()) {
            return Err(ClusterError::NonFinite(e.word.clone()));
        }
    }
    let d = pool.dim();
    let points: Vec<f64> = entries.iter().flat_map(|e| e.features.iter().copied()).collect();
    let keys: Vec<&str> = entries.iter().map(|e| e.word.as_str()).collect();
    let assignment = ward_partition(&points, d, &keys, k);
    Ok(ClusterIndex::new(
        k,
        Linkage::Ward,
        pool.content_hash().to_string(),
        entries.iter().map(|e| e.word.clone()).collect(),
        assignment,
    ))
}

#[derive(Debug, Clone, Copy)]
struct Merge {
    a: usize,
    b: usize,
    cost: f64,
}

/// Increase in within-cluster sum of squares caused by merging two clusters.
#[inline]
fn ward_cost(ca: &[f64], na: f64, cb: &[f64], nb: f64) -> f64 {
    let sq: f64 = ca.iter().zip(cb).map(|(x, y)| (x - y) * (x - y)).sum();
    na * nb / (na + nb) * sq
}

/// Full Ward dendrogram via the nearest-neighbor chain. Each merge records one
/// original point from each side.
fn ward_merges(points: &[f64], d: usize, keys: &[&str]) -> Vec<Merge> {
    let n = keys.len();
    let mut centroid = points.to_vec();
    let mut size = vec![1.0f64; n];
    // Smallest member word of each cluster, as an index into `keys`.
    let mut key = (0..n).collect::<Vec<_>>();
    let mut active: Vec<usize> = (0..n).collect();
    let mut pos: Vec<usize> = (0..n).collect();
    let mut chain: Vec<usize> = Vec::with_capacity(n);
    let mut merges = Vec::with_capacity(n.saturating_sub(1));

    while active.len() > 1 {
        if chain.is_empty() {
            chain.push(active[0]);
        }
        let a = *chain.last().unwrap();
        let prev = chain.len().checked_sub(2).map(|i| chain[i]);
        let ca = &centroid[a * d..(a + 1) * d];
        let mut best = usize::MAX;
        let mut best_cost = f64::INFINITY;
        for &c in &active {
            if c == a {
                continue;
            }
            let cost = ward_cost(ca, size[a], &centroid[c * d..(c + 1) * d], size[c]);
            if cost < best_cost || (cost == best_cost && keys[key[c]] < keys[key[best]]) {
                best = c;
                best_cost = cost;
            }
        }
        // Preferring the previous chain element on ties guarantees termination.
        if let Some(p) = prev {
            let cost_p = ward_cost(ca, size[a], &centroid[p * d..(p + 1) * d], size[p]);
            if cost_p <= best_cost {
                best = p;
                best_cost = cost_p;
            }
        }
        if Some(best) == prev {
            chain.pop();
            chain.pop();
            let (keep, gone) = (a.min(best), a.max(best));
            merges.push(Merge {
                a: keep,
                b: gone,
                cost: best_cost,
            });
            let (nk, ng) = (size[keep], size[gone]);
            let total = nk + ng;
            for j in 0..d {
                centroid[keep * d + j] = (nk * centroid[keep * d + j] + ng * centroid[gone * d + j]) / total;
            }
            size[keep] = total;
            if keys[key[gone]] < keys[key[keep]] {
                key[keep] = key[gone];
            }
            let p = pos[gone];
            active.swap_remove(p);
            if p < active.len() {
                pos[active[p]] = p;
            }
        } else {
            chain.push(best);
        }
    }
    merges
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Cuts the Ward dendrogram at `k` clusters and numbers them by descending
/// mean of the first coordinate (ties by smallest member key).
pub fn ward_partition(points: &[f64], d: usize, keys: &[&str], k: usize) -> Vec<usize> {
    let n = keys.len();
    let mut merges = ward_merges(points, d, keys);
    // Stable: children always precede parents on equal cost.
    merges.sort_by(|x, y| x.cost.total_cmp(&y.cost));
    let mut parent: Vec<usize> = (0..n).collect();
    for m in merges.iter().take(n - k) {
        let ra = find(&mut parent, m.a);
        let rb = find(&mut parent, m.b);
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let mut groups: HashMap<usize, (f64, usize, usize)> = HashMap::new();
    for (i, &r) in roots.iter().enumerate() {
        let g = groups.entry(r).or_insert((0.0, 0, i));
        g.0 += if d > 0 { points[i * d] } else { 0.0 };
        g.1 += 1;
        if keys[i] < keys[g.2] {
            g.2 = i;
        }
    }
    let mut order: Vec<(usize, f64, usize)> = groups
        .into_iter()
        .map(|(root, (sum, count, min_key))| (root, sum / count as f64, min_key))
        .collect();
    order.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| keys[x.2].cmp(keys[y.2])));
    let id: HashMap<usize, usize> = order.iter().enumerate().map(|(i, (root, _, _))| (*root, i)).collect();
    roots.iter().map(|r| id[r]).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Neighbor {
    pub index: usize,
    pub word: String,
    pub distance: f64,
}

/// The `m` entries nearest to `anchor` (anchor excluded) in ascending
/// distance, ties broken by word.
pub fn nearest_in_pool(anchor: &WordEntry, pool: &[WordEntry], m: usize, scope: Scope) -> Result<Vec<Neighbor>> {
    nearest_filtered(anchor, pool, m, scope, |_| true)
}

/// As [`nearest_in_pool`], restricted to entries accepted by `keep`.
pub fn nearest_filtered<F>(anchor: &WordEntry, pool: &[WordEntry], m: usize, scope: Scope, keep: F) -> Result<Vec<Neighbor>>
where
    F: Fn(&WordEntry) -> bool,
{
    if m == 0 {
        return Err(ClusterError::ZeroNeighbors);
    }
    let cluster = match scope {
        Scope::SameCluster => Some(
            anchor
                .cluster_id
                .ok_or_else(|| ClusterError::Unassigned(anchor.word.clone()))?,
        ),
        Scope::WholePool => None,
    };
    let mut candidates: Vec<(f64, usize)> = pool
        .iter()
        .enumerate()
        .filter(|(_, e)| e.word != anchor.word)
        .filter(|(_, e)| cluster.is_none() || e.cluster_id == cluster)
        .filter(|(_, e)| keep(e))
        .map(|(i, e)| {
            let sq: f64 = e
                .features
                .iter()
                .zip(&anchor.features)
                .map(|(x, y)| (x - y) * (x - y))
                .sum();
            (sq, i)
        })
        .collect();
    if candidates.is_empty() {
        return Err(ClusterError::EmptyScope(anchor.word.clone()));
    }
    let cmp = |x: &(f64, usize), y: &(f64, usize)| x.0.total_cmp(&y.0).then_with(|| pool[x.1].word.cmp(&pool[y.1].word));
    if candidates.len() > m {
        candidates.select_nth_unstable_by(m - 1, cmp);
        candidates.truncate(m);
    }
    candidates.sort_by(cmp);
    Ok(candidates
        .into_iter()
        .map(|(sq, i)| Neighbor {
            index: i,
            word: pool[i].word.clone(),
            distance: sq.sqrt(),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Built,
}

/// Directory of cluster indexes keyed by `(pool_hash, k, linkage)`.
#[derive(Debug, Clone)]
pub struct ClusterCache {
    dir: PathBuf,
}

impl ClusterCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ClusterCache { dir: dir.into() }
    }

    pub fn path_for(&self, pool_hash: &str, k: usize, linkage: Linkage) -> PathBuf {
        self.dir
            .join(format!("{}-k{}-{}.clusters", pool_hash, k, linkage.as_str()))
    }

    pub fn get_or_build(&self, pool: &Pool, k: usize) -> Result<(ClusterIndex, CacheOutcome)> {
        let path = self.path_for(pool.content_hash(), k, Linkage::Ward);
        if path.exists() {
            return Ok((ClusterIndex::load_for(&path, pool)?, CacheOutcome::Hit));
        }
        let index = build_clusters(pool, k)?;
        std::fs::create_dir_all(&self.dir)?;
        index.save(&path)?;
        Ok((index, CacheOutcome::Built))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterSummary {
    pub cluster: usize,
    pub size: usize,
    /// Members also present in the graded lexicon.
    pub graded_overlap: usize,
    /// Mean per-level frequency (A1..C1) over `graded_overlap` members.
    pub mean_level_frequency: [f64; 5],
    pub vote_histogram: [u64; VOTE_BINS],
    pub vote_count: usize,
    pub mean_votes: f64,
    /// Set when the cluster has no graded or no vote-bearing members.
    pub empty_intersection: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterDiagnostics {
    pub clusters: Vec<ClusterSummary>,
    pub graded_overlap: usize,
    pub missing_from_graded: usize,
    pub missing_votes: usize,
}

pub fn cluster_diagnostics(index: &ClusterIndex, graded: &GradedLexicon, votes: &HashMap<String, u32>) -> ClusterDiagnostics {
    let mut clusters: Vec<ClusterSummary> = (0..index.k())
        .map(|c| ClusterSummary {
            cluster: c,
            size: 0,
            graded_overlap: 0,
            mean_level_frequency: [0.0; 5],
            vote_histogram: [0; VOTE_BINS],
            vote_count: 0,
            mean_votes: 0.0,
            empty_intersection: false,
        })
        .collect();
    let mut vote_sums = vec![0u64; index.k()];
    let (mut missing_graded, mut missing_votes) = (0, 0);
    for (word, &c) in index.words().iter().zip(index.assignment()) {
        let s = &mut clusters[c];
        s.size += 1;
        match graded.get(word) {
            Some(f) => {
                s.graded_overlap += 1;
                for (acc, v) in s.mean_level_frequency.iter_mut().zip(f) {
                    *acc += v;
                }
            }
            None => missing_graded += 1,
        }
        match votes.get(word) {
            Some(&v) => {
                s.vote_histogram[(v as usize).min(VOTE_BINS - 1)] += 1;
                s.vote_count += 1;
                vote_sums[c] += u64::from(v);
            }
            None => missing_votes += 1,
        }
    }
    for (s, sum) in clusters.iter_mut().zip(vote_sums) {
        if s.graded_overlap > 0 {
            for v in s.mean_level_frequency.iter_mut() {
                *v /= s.graded_overlap as f64;
            }
        }
        if s.vote_count > 0 {
            s.mean_votes = sum as f64 / s.vote_count as f64;
        }
        s.empty_intersection = s.graded_overlap == 0 || s.vote_count == 0;
    }
    let graded_overlap = clusters.iter().map(|s| s.graded_overlap).sum();
    ClusterDiagnostics {
        clusters,
        graded_overlap,
        missing_from_graded: missing_graded,
        missing_votes,
    }
}

impl ClusterDiagnostics {
    /// Mean graded frequency per level, one row per cluster.
    pub fn write_level_frequencies<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "cluster,n,graded_overlap,A1,A2,B1,B2,C1")?;
        for s in &self.clusters {
            let f = &s.mean_level_frequency;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                s.cluster + 1,
                s.size,
                s.graded_overlap,
                f[0],
                f[1],
                f[2],
                f[3],
                f[4]
            )?;
        }
        Ok(())
    }

    /// Vote histogram as long-form density rows.
    pub fn write_vote_histogram<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "cluster,n,mean_votes,votes,count,density")?;
        for s in &self.clusters {
            for (v, &count) in s.vote_histogram.iter().enumerate() {
                let density = if s.vote_count > 0 {
                    count as f64 / s.vote_count as f64
                } else {
                    0.0
                };
                writeln!(out, "{},{},{},{},{},{}", s.cluster + 1, s.size, s.mean_votes, v, count, density)?;
            }
        }
        Ok(())
    }
}
