//! Offline workflows behind the `perscwi` binary.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use perscwi::clustering::{build_clusters, cluster_diagnostics, ClusterIndex, DEFAULT_K};
use perscwi::dataset::{bundled_paths, Dataset};
use perscwi::downstream::{complex_counts_by_level, group_complexity_probability, predict_proficiency, write_scores};
use perscwi::lexicon::{ingest_pool, write_diagnostics, GradedLexicon, Pool, PoolSchema, FEATURE_NAMES};
use perscwi::metrics::{
    baseline_all_simple, baseline_frequency, baseline_group_average, sweep_frequency_threshold, EvaluationReport,
    LabelledTestSet,
};
use perscwi::model::{export_model, import_model_for, ModelRecord, PersonalModel};
use perscwi::profile::Proficiency;
use perscwi::session::read_word_list;
use perscwi::simulation::{proficiency_band_study, strategy_study, StudyConfig};
use perscwi::synthetic::{generate, write_dataset, SyntheticConfig, POOL_FILE};

#[derive(Debug, Parser)]
#[command(name = "perscwi", version, about = "Personalized complex word identification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ingest a raw pool TSV into normalized artifacts.
    Ingest(IngestArgs),
    /// Build (or reuse) the cluster index of a pool.
    Cluster(ClusterArgs),
    /// Run the simulation studies described by a TOML config.
    Simulate(SimulateArgs),
    /// Score models and baselines on annotator test sets.
    Eval(EvalArgs),
    /// Score words with one model, or the mean of several.
    Predict(PredictArgs),
    /// Per-band complex-word counts and proficiency prediction.
    Proficiency(ProficiencyArgs),
    /// Run the annotation HTTP service.
    Serve(perscwi_service::ServeArgs),
    /// Write a synthetic dataset.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub pool: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Pool TSV, or a directory written by `ingest`.
    #[arg(long)]
    pub pool: PathBuf,
    #[arg(long, default_value_t = DEFAULT_K, value_parser = parse_k)]
    pub k: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Write per-cluster level frequencies and vote histograms into this directory.
    #[arg(long)]
    pub diagnostics: Option<PathBuf>,
    /// Graded lexicon for the diagnostics.
    #[arg(long)]
    pub graded: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub study: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides the study seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// `<annotator>.json` model exports.
    #[arg(long)]
    pub models: PathBuf,
    /// `<annotator>.tsv` labelled test sets.
    #[arg(long)]
    pub tests: PathBuf,
    /// TSV of `annotator<TAB>proficiency`.
    #[arg(long)]
    pub groups: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Pool the models were trained on; defaults to the bundled one.
    #[arg(long)]
    pub pool: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Model export; repeat to average several models.
    #[arg(long = "model", required = true)]
    pub models: Vec<PathBuf>,
    #[arg(long)]
    pub words: PathBuf,
    #[arg(long)]
    pub pool: Option<PathBuf>,
    /// CSV output; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProficiencyArgs {
    /// Directory with one subdirectory of model exports per band.
    #[arg(long)]
    pub models: PathBuf,
    #[arg(long)]
    pub graded: PathBuf,
    #[arg(long)]
    pub pool: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub pool_size: Option<usize>,
}

fn parse_k(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(k) if k >= 2 => Ok(k),
        Ok(k) => Err(format!("k must be at least 2, got {k}")),
        Err(e) => Err(e.to_string()),
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest(a) => ingest(&a),
        Command::Cluster(a) => cluster(&a),
        Command::Simulate(a) => simulate(&a),
        Command::Eval(a) => eval(&a),
        Command::Predict(a) => predict(&a),
        Command::Proficiency(a) => proficiency(&a),
        Command::Serve(a) => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(perscwi_service::serve(a))?;
            Ok(())
        }
        Command::Synth(a) => synth(&a),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn pool_file(path: &Path) -> PathBuf {
    if path.is_dir() {
        path.join(POOL_FILE)
    } else {
        path.to_path_buf()
    }
}

fn load_pool(path: Option<&Path>) -> Result<Pool> {
    let path = path.map(pool_file).unwrap_or_else(|| bundled_paths().pool);
    ingest_pool(&path, &PoolSchema::default()).with_context(|| format!("{}", path.display()))
}

fn ingest(a: &IngestArgs) -> Result<()> {
    let pool = load_pool(Some(&a.pool))?;
    fs::create_dir_all(&a.out)?;
    fs::copy(&a.pool, a.out.join(POOL_FILE))?;
    let mut w = create(&a.out.join("normalized.tsv"))?;
    write!(w, "word")?;
    for name in &pool.stats().feature_names {
        write!(w, "\t{name}")?;
    }
    writeln!(w)?;
    for e in pool.entries() {
        write!(w, "{}", e.word)?;
        for v in &e.features {
            write!(w, "\t{v}")?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    let mut w = create(&a.out.join("stats.json"))?;
    serde_json::to_writer_pretty(&mut w, pool.stats())?;
    writeln!(w)?;
    w.flush()?;
    let mut w = create(&a.out.join("diagnostics.jsonl"))?;
    write_diagnostics(&mut w, pool.diagnostics())?;
    w.flush()?;
    log::info!(
        "ingested {} words, {} of {} features kept, {} diagnostics",
        pool.len(),
        pool.dim(),
        FEATURE_NAMES.len(),
        pool.diagnostics().len()
    );
    Ok(())
}

fn cluster(a: &ClusterArgs) -> Result<()> {
    let pool = load_pool(Some(&a.pool))?;
    let index = match ClusterIndex::load_for(&a.out, &pool) {
        Ok(index) if index.k() == a.k => {
            log::info!("cache hit: {} already holds k={} for this pool", a.out.display(), a.k);
            index
        }
        _ => {
            let index = build_clusters(&pool, a.k)?;
            if let Some(dir) = a.out.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            index.save(&a.out)?;
            log::info!("built k={} clusters into {}", a.k, a.out.display());
            index
        }
    };
    log::info!("cluster sizes {:?}", index.sizes());
    if let Some(dir) = &a.diagnostics {
        let graded = match &a.graded {
            Some(p) => GradedLexicon::read(p)?,
            None => GradedLexicon::from_entries(Vec::new())?,
        };
        let votes: HashMap<String, u32> = pool
            .records()
            .iter()
            .filter_map(|r| r.seed_complexity_votes.map(|v| (r.word.clone(), v)))
            .collect();
        let diag = cluster_diagnostics(&index, &graded, &votes);
        let mut w = create(&dir.join("cluster_levels.csv"))?;
        diag.write_level_frequencies(&mut w)?;
        w.flush()?;
        let mut w = create(&dir.join("cluster_votes.csv"))?;
        diag.write_vote_histogram(&mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn export_dir(dir: &Path, name: &str, record: &ModelRecord) -> Result<()> {
    let mut w = create(&dir.join(format!("{name}.json")))?;
    w.write_all(export_model(record).as_bytes())?;
    w.flush()?;
    Ok(())
}

fn simulate(a: &SimulateArgs) -> Result<()> {
    let mut config = StudyConfig::load(&a.study)?;
    if let Some(seed) = a.seed {
        config.seed = seed;
    }
    if config.strategies.is_none() && config.bands.is_none() {
        bail!("study {} has neither [strategies] nor [bands]", a.study.display());
    }
    let data = Dataset::load(&config.data, None)?;
    fs::create_dir_all(&a.out)?;
    if let Some(s) = &config.strategies {
        log::info!("strategy study: {} oracles x {:?}", s.oracles, s.strategies);
        let study = strategy_study(
            data.resources.clone(),
            data.graded.as_ref(),
            &s.oracle,
            &s.strategies,
            s.oracles,
            &config.session,
            config.seed,
        )?;
        study.write_summary_csv(create(&a.out.join("strategy_summary.csv"))?)?;
        study.write_runs_csv(create(&a.out.join("strategy_runs.csv"))?)?;
        for sum in &study.summaries {
            log::info!("{}: F {:.3} kappa {:.3}", sum.strategy, sum.mean_f, sum.mean_kappa);
        }
    }
    if let Some(b) = &config.bands {
        let graded = data.graded.as_ref().context("band study needs data.graded")?;
        log::info!("band study: {} models per band", b.models_per_band);
        let study = proficiency_band_study(
            data.resources.clone(),
            graded,
            &b.bands,
            b.models_per_band,
            b.noise_rate,
            &config.session,
            config.seed,
        )?;
        study.write_csv(create(&a.out.join("band_counts.csv"))?)?;
        let mut per_band: BTreeMap<Proficiency, usize> = BTreeMap::new();
        for m in &study.models {
            let i = per_band.entry(m.proficiency).or_default();
            let mut record = ModelRecord::new(m.model.clone());
            record.seen_words = m.seen_words.clone();
            export_dir(&a.out.join("models").join(m.proficiency.as_str()), &format!("{i:03}"), &record)?;
            *i += 1;
        }
        let report = predict_proficiency(&study.c1_samples(), 5)?;
        write_proficiency(&a.out.join("proficiency.csv"), &report)?;
    }
    Ok(())
}

fn write_proficiency(path: &Path, r: &perscwi::downstream::ProficiencyReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["metric", "value"])?;
    w.write_record(["weighted_precision", &format!("{:.4}", r.weighted_precision)])?;
    w.write_record(["macro_precision", &format!("{:.4}", r.macro_precision)])?;
    w.write_record(["accuracy", &format!("{:.4}", r.accuracy)])?;
    w.write_record(["folds", &r.folds.to_string()])?;
    w.flush()?;
    log::info!("proficiency prediction: weighted precision {:.3}", r.weighted_precision);
    Ok(())
}

/// Files in `dir` with extension `ext`, sorted by name, keyed by file stem.
fn files_by_stem(dir: &Path, ext: &str) -> Result<BTreeMap<String, PathBuf>> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path.extension().and_then(|e| e.to_str()) == Some(ext) {
            let stem = path.file_stem().and_then(|s| s.to_str()).context("non-UTF-8 file name")?;
            out.insert(stem.to_string(), path);
        }
    }
    Ok(out)
}

fn read_model(path: &Path, pool: &Pool) -> Result<ModelRecord> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    import_model_for(&text, pool.stats()).with_context(|| format!("{}", path.display()))
}

fn read_groups(path: &Path) -> Result<HashMap<String, Proficiency>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (who, band) = line
            .split_once('\t')
            .with_context(|| format!("{} line {}: expected annotator<TAB>proficiency", path.display(), i + 1))?;
        if i == 0 && who == "annotator" {
            continue;
        }
        let band = band
            .parse()
            .map_err(|e: String| anyhow::anyhow!("{} line {}: {e}", path.display(), i + 1))?;
        out.insert(who.trim().to_string(), band);
    }
    Ok(out)
}

fn eval(a: &EvalArgs) -> Result<()> {
    let pool = load_pool(a.pool.as_deref())?;
    let groups = read_groups(&a.groups)?;
    let models = files_by_stem(&a.models, "json")?;
    let mut sets = Vec::new();
    for (who, path) in files_by_stem(&a.tests, "tsv")? {
        let text = fs::read_to_string(&path)?;
        sets.push(LabelledTestSet::parse(who, &text).with_context(|| format!("{}", path.display()))?);
    }
    if sets.is_empty() {
        bail!("no test sets in {}", a.tests.display());
    }
    let group_of = |who: &str| groups.get(who).map(|p| p.as_str()).unwrap_or("unknown");
    let frequency: HashMap<String, f64> = pool.records().iter().map(|r| (r.word.clone(), r.frequency)).collect();
    let mut report = EvaluationReport::new();
    let mut scored = 0;
    for target in &sets {
        let Some(model_path) = models.get(&target.annotator) else {
            log::warn!("no model for annotator {}", target.annotator);
            continue;
        };
        let model = read_model(model_path, &pool)?.model;
        let group = group_of(&target.annotator);
        let words = target.words();
        let gold = target.gold();
        let mut pred = Vec::with_capacity(words.len());
        for w in &words {
            let x = pool.features(w).with_context(|| format!("test word {w:?} of {}", target.annotator))?;
            pred.push(model.predict(x)?);
        }
        report.add("model", group, &pred, &gold)?;
        report.add("all_simple", group, &baseline_all_simple(gold.len()), &gold)?;
        let peers: Vec<LabelledTestSet> = sets.iter().filter(|s| group_of(&s.annotator) == group).cloned().collect();
        report.add("group_average", group, &baseline_group_average(&peers, target).labels, &gold)?;
        let others: Vec<LabelledTestSet> = sets.iter().filter(|s| s.annotator != target.annotator).cloned().collect();
        let t = sweep_frequency_threshold(&frequency, &others);
        report.add("frequency", group, &baseline_frequency(&frequency, t, &words), &gold)?;
        scored += 1;
    }
    if scored == 0 {
        bail!("no annotator has both a model and a test set");
    }
    report.write_csv(create(&a.out)?)?;
    log::info!("scored {scored} annotator(s) in {} group(s)", report.groups.len());
    Ok(())
}

fn predict(a: &PredictArgs) -> Result<()> {
    let pool = load_pool(a.pool.as_deref())?;
    let models: Vec<PersonalModel> = a.models.iter().map(|p| read_model(p, &pool).map(|r| r.model)).collect::<Result<_>>()?;
    let refs: Vec<&PersonalModel> = models.iter().collect();
    let words = read_word_list(&a.words)?;
    let mut rows = Vec::with_capacity(words.len());
    for w in words {
        let x = pool.features(&w).with_context(|| format!("word {w:?}"))?;
        let p = group_complexity_probability(&refs, x)?;
        rows.push((w, p));
    }
    match &a.out {
        Some(path) => write_scores(create(path)?, &rows)?,
        None => write_scores(io::stdout().lock(), &rows)?,
    }
    Ok(())
}

fn proficiency(a: &ProficiencyArgs) -> Result<()> {
    let pool = load_pool(a.pool.as_deref())?;
    let graded = GradedLexicon::read(&a.graded)?;
    let mut samples = Vec::new();
    let mut counts: BTreeMap<Proficiency, Vec<[usize; 5]>> = BTreeMap::new();
    let mut dirs = Vec::new();
    for entry in fs::read_dir(&a.models).with_context(|| format!("reading {}", a.models.display()))? {
        let dir = entry?.path();
        if dir.is_dir() {
            dirs.push(dir);
        }
    }
    // fold assignment follows input order
    dirs.sort();
    for dir in dirs {
        let name = dir.file_name().and_then(|n| n.to_str()).unwrap_or_default().to_string();
        let band: Proficiency = name.parse().map_err(|e: String| anyhow::anyhow!("{}: {e}", dir.display()))?;
        for path in files_by_stem(&dir, "json")?.values() {
            let record = read_model(path, &pool)?;
            let exclude: HashSet<String> = record.seen_words.iter().cloned().collect();
            let c = complex_counts_by_level(&record.model, &graded, &pool, &exclude)?;
            samples.push((c[4] as f64, band));
            counts.entry(band).or_default().push(c);
        }
    }
    if samples.is_empty() {
        bail!("no models under {}", a.models.display());
    }
    fs::create_dir_all(&a.out)?;
    let mut w = csv::Writer::from_writer(create(&a.out.join("band_counts.csv"))?);
    w.write_record(["band", "models", "A1", "A2", "B1", "B2", "C1"])?;
    for (band, rows) in &counts {
        let mut rec = vec![band.title().to_string(), rows.len().to_string()];
        for level in 0..5 {
            let mean = rows.iter().map(|r| r[level] as f64).sum::<f64>() / rows.len() as f64;
            rec.push(format!("{mean:.1}"));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    let report = predict_proficiency(&samples, a.folds)?;
    write_proficiency(&a.out.join("proficiency.csv"), &report)
}

fn synth(a: &SynthArgs) -> Result<()> {
    let mut config = SyntheticConfig::default();
    if let Some(s) = a.seed {
        config.seed = s;
    }
    if let Some(n) = a.pool_size {
        let scale = n as f64 / config.pool_size as f64;
        config.pool_size = n;
        config.graded_pool_words = ((config.graded_pool_words as f64 * scale) as usize).min(n);
        config.graded_extra_words = (config.graded_extra_words as f64 * scale) as usize;
        config.seed_count = config.seed_count.min(n / 4);
        config.test_count = config.test_count.min(n / 4);
    }
    let data = generate(&config);
    write_dataset(&data, &a.out)?;
    log::info!("wrote {} pool words to {}", data.records.len(), a.out.display());
    Ok(())
}

/// One-line rendering of an error chain.
pub fn error_line(e: &anyhow::Error) -> String {
    format!("{e:#}").replace('\n', " ")
}
