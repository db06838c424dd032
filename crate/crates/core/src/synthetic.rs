//! Seeded generator for the bundled desk-scale dataset.
//!
//! Each pseudo-word has a latent difficulty `δ ~ N(0, 1)`. Frequency falls
//! with `δ`, length and CEFR level rise with it, and the psycholinguistic
//! ratings carry weaker, noisier signal with missing cells. Seed votes mimic a
//! ten-annotator shared-task label.

use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::lexicon::{pool_from_records, write_pool_tsv, RawLexiconRecord};
use crate::session::write_seed_tsv;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticConfig {
    pub pool_size: usize,
    /// Pool words that also appear in the graded lexicon.
    pub graded_pool_words: usize,
    /// Graded words with no pool entry.
    pub graded_extra_words: usize,
    pub seed_count: usize,
    pub test_count: usize,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            pool_size: 7476,
            graded_pool_words: 6000,
            graded_extra_words: 600,
            seed_count: 150,
            test_count: 22,
            seed: 20210801,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub records: Vec<RawLexiconRecord>,
    pub difficulty: Vec<f64>,
    pub graded: Vec<(String, [f64; 5])>,
    pub seeds: Vec<(String, u32)>,
    pub test_words: Vec<String>,
}

const ONSETS: [&str; 24] = [
    "b", "c", "d", "f", "g", "h", "j", "k", "l", "m", "n", "p", "r", "s", "t", "v", "w", "z", "br", "ch", "st", "tr", "pl", "gr",
];
const VOWELS: [&str; 8] = ["a", "e", "i", "o", "u", "ai", "ea", "ou"];
const CODAS: [&str; 8] = ["", "", "n", "r", "s", "t", "l", "m"];

fn pseudo_word(rng: &mut ChaCha8Rng, target_len: usize) -> String {
    let mut w = String::new();
    while w.len() < target_len {
        w.push_str(ONSETS[rng.random_range(0..ONSETS.len())]);
        w.push_str(VOWELS[rng.random_range(0..VOWELS.len())]);
        w.push_str(CODAS[rng.random_range(0..CODAS.len())]);
    }
    w.truncate(target_len);
    w
}

fn unique_word(rng: &mut ChaCha8Rng, target_len: usize, used: &mut HashSet<String>) -> String {
    let mut len = target_len;
    let mut attempts = 0;
    loop {
        let w = pseudo_word(rng, len);
        if used.insert(w.clone()) {
            return w;
        }
        attempts += 1;
        if attempts % 8 == 0 {
            len += 1;
        }
    }
}

fn round_to(v: f64, places: i32) -> f64 {
    let s = 10f64.powi(places);
    (v * s).round() / s
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Per-level frequencies peaking at `level` (0 = A1 .. 4 = C1).
fn level_profile(level: usize, base: f64, rng: &mut ChaCha8Rng) -> [f64; 5] {
    let mut out = [0.0; 5];
    for (j, slot) in out.iter_mut().enumerate() {
        let d = j as f64 - level as f64;
        // Words keep appearing above their level, rarely below it.
        let spread = if d >= 0.0 { 1.6 } else { 0.6 };
        let jitter = 0.85 + 0.3 * rng.random::<f64>();
        *slot = round_to(base * (-d * d / spread).exp() * jitter, 2);
    }
    let peak = base * 1.2;
    out[level] = round_to(peak.max(0.01), 2);
    out
}

pub fn generate(config: &SyntheticConfig) -> SyntheticData {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let std_normal = Normal::new(0.0, 1.0).unwrap();
    let n = config.pool_size;
    let mut used = HashSet::new();
    let mut records = Vec::with_capacity(n);
    let mut difficulty = Vec::with_capacity(n);
    let mut log_freq = Vec::with_capacity(n);
    for _ in 0..n {
        let delta: f64 = std_normal.sample(&mut rng);
        let len = (6.0 + 1.5 * delta + 0.8 * std_normal.sample(&mut rng)).round().clamp(2.0, 16.0) as usize;
        let word = unique_word(&mut rng, len, &mut used);
        let lf = 5.0 - 1.6 * delta + 0.5 * std_normal.sample(&mut rng);
        let frequency = lf.exp().round().max(1.0);
        let familiarity = (rng.random::<f64>() >= 0.2)
            .then(|| (500.0 - 80.0 * delta + 50.0 * std_normal.sample(&mut rng)).round().clamp(100.0, 700.0));
        let conc_raw = 3.0 - 0.4 * delta + 0.9 * std_normal.sample(&mut rng);
        let concreteness = (rng.random::<f64>() >= 0.25).then(|| round_to(conc_raw.clamp(1.0, 5.0), 2));
        let imageability = (rng.random::<f64>() >= 0.25).then(|| {
            (100.0 * (0.7 * conc_raw + 0.3 * (3.0 - 0.3 * delta) + 0.6 * std_normal.sample(&mut rng)))
                .round()
                .clamp(100.0, 700.0)
        });
        let votes = Binomial::new(10, sigmoid(2.0 * (delta - 1.0))).unwrap().sample(&mut rng) as u32;
        let mut r = RawLexiconRecord::new(&word, frequency);
        r.familiarity = familiarity;
        r.concreteness = concreteness;
        r.imageability = imageability;
        r.seed_complexity_votes = Some(votes);
        log_freq.push((frequency + 1.0).ln());
        records.push(r);
        difficulty.push(delta);
    }

    let test_words = pick_test_words(&records, config.test_count);
    let test_set: HashSet<&str> = test_words.iter().map(String::as_str).collect();

    let mut graded = Vec::new();
    for i in sample(&mut rng, n, config.graded_pool_words.min(n)).into_vec() {
        let level = (2.0 + 1.2 * difficulty[i] + 0.7 * std_normal.sample(&mut rng)).round().clamp(0.0, 4.0) as usize;
        let base = (log_freq[i] - 3.0).exp() * 10.0;
        graded.push((records[i].word.clone(), level_profile(level, base, &mut rng)));
    }
    for _ in 0..config.graded_extra_words {
        let delta: f64 = std_normal.sample(&mut rng);
        let len = (6.0 + 1.5 * delta).round().clamp(2.0, 16.0) as usize;
        let word = unique_word(&mut rng, len, &mut used);
        let level = (2.0 + 1.2 * delta + 0.7 * std_normal.sample(&mut rng)).round().clamp(0.0, 4.0) as usize;
        let base = (2.0 - 1.6 * delta).exp() * 10.0;
        graded.push((word, level_profile(level, base, &mut rng)));
    }
    graded.sort_by(|a, b| a.0.cmp(&b.0));

    let candidates: Vec<usize> = (0..n).filter(|&i| !test_set.contains(records[i].word.as_str())).collect();
    let mut seeds: Vec<(String, u32)> = sample(&mut rng, candidates.len(), config.seed_count.min(candidates.len()))
        .into_iter()
        .map(|j| {
            let r = &records[candidates[j]];
            (r.word.clone(), r.seed_complexity_votes.unwrap_or(0))
        })
        .collect();
    seeds.sort();

    SyntheticData {
        records,
        difficulty,
        graded,
        seeds,
        test_words,
    }
}

/// Words at evenly spaced log-frequency values between the 2nd and 98th
/// percentiles, so the list spans easy to hard words like a CEFR-stratified
/// test set. Near each target value the most prototypical word is taken: the
/// one whose other normalized features sit closest to the local average,
/// with no missing ratings.
fn pick_test_words(records: &[RawLexiconRecord], count: usize) -> Vec<String> {
    let pool = pool_from_records(records.to_vec(), String::new()).expect("generated records are valid");
    let z: Vec<&[f64]> = pool.entries().iter().map(|e| e.features.as_slice()).collect();
    let complete = |i: usize| {
        let r = &records[i];
        r.familiarity.is_some() && r.concreteness.is_some() && r.imageability.is_some()
    };
    let n = records.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| z[a][0].total_cmp(&z[b][0]).then_with(|| records[a].word.cmp(&records[b].word)));
    let lo_value = z[order[n / 50]][0];
    let hi_value = z[order[n - 1 - n / 50]][0];
    let half_window = (n / 300).max(1);
    let d = pool.dim();
    let mut words = Vec::with_capacity(count);
    for j in 0..count {
        let t = if count > 1 { j as f64 / (count - 1) as f64 } else { 0.5 };
        let target = lo_value + t * (hi_value - lo_value);
        let center = order.partition_point(|&i| z[i][0] < target).min(n - 1);
        let lo = center.saturating_sub(half_window);
        let hi = (center + half_window + 1).min(n);
        let mut mean = vec![0.0; d];
        for &i in &order[lo..hi] {
            for (m, v) in mean.iter_mut().zip(z[i]) {
                *m += v / (hi - lo) as f64;
            }
        }
        let atypicality = |i: usize| -> f64 {
            let spread: f64 = (1..d).map(|k| (z[i][k] - mean[k]).powi(2)).sum();
            spread + (z[i][0] - target).powi(2)
        };
        let pick = order[lo..hi]
            .iter()
            .copied()
            .filter(|&i| complete(i))
            .min_by(|&a, &b| atypicality(a).total_cmp(&atypicality(b)).then_with(|| records[a].word.cmp(&records[b].word)))
            .unwrap_or(order[center]);
        words.push(records[pick].word.clone());
    }
    words
}

pub const POOL_FILE: &str = "pool.tsv";
pub const GRADED_FILE: &str = "graded.tsv";
pub const SEED_FILE: &str = "seed.tsv";
pub const TEST_FILE: &str = "test_words.txt";

pub fn write_graded_tsv<W: Write>(mut out: W, graded: &[(String, [f64; 5])]) -> std::io::Result<()> {
    writeln!(out, "word\tA1\tA2\tB1\tB2\tC1")?;
    for (w, f) in graded {
        writeln!(out, "{w}\t{}\t{}\t{}\t{}\t{}", f[0], f[1], f[2], f[3], f[4])?;
    }
    Ok(())
}

/// Writes pool, graded lexicon, seeds and test words into `dir`.
pub fn write_dataset(data: &SyntheticData, dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut pool = Vec::new();
    write_pool_tsv(&mut pool, &data.records).map_err(|e| std::io::Error::other(e.to_string()))?;
    std::fs::write(dir.join(POOL_FILE), pool)?;
    let mut graded = Vec::new();
    write_graded_tsv(&mut graded, &data.graded)?;
    std::fs::write(dir.join(GRADED_FILE), graded)?;
    let mut seeds = Vec::new();
    write_seed_tsv(&mut seeds, &data.seeds)?;
    std::fs::write(dir.join(SEED_FILE), seeds)?;
    let mut tests = String::from("# held-out test words, one per line\n");
    for w in &data.test_words {
        tests.push_str(w);
        tests.push('\n');
    }
    std::fs::write(dir.join(TEST_FILE), tests)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_generation_is_deterministic() {
        let c = SyntheticConfig {
            pool_size: 400,
            graded_pool_words: 300,
            graded_extra_words: 20,
            seed_count: 30,
            test_count: 10,
            seed: 3,
        };
        let a = generate(&c);
        assert_eq!(a, generate(&c));
        assert_eq!(a.records.len(), 400);
        assert_eq!(a.graded.len(), 320);
        assert_eq!(a.test_words.len(), 10);
        let words: HashSet<&str> = a.records.iter().map(|r| r.word.as_str()).collect();
        assert_eq!(words.len(), 400);
        assert!(a.test_words.iter().all(|w| words.contains(w.as_str())));
        assert!(a.seeds.iter().all(|(w, _)| !a.test_words.contains(w)));
        let tests: HashSet<&String> = a.test_words.iter().collect();
        assert_eq!(tests.len(), 10);
    }
}
