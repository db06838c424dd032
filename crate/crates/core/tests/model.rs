mod common;

use perscwi::lexicon::PoolStatistics;
use perscwi::model::{
    export_model, fit, fit_from, gradient, gradient_at, import_model, import_model_for, objective, FitConfig, LabelSource,
    LabeledInstance, ModelError, ModelRecord,
};
use perscwi::Label;
use proptest::prelude::*;

fn stats(d: usize) -> PoolStatistics {
    PoolStatistics {
        feature_names: (0..d).map(|i| format!("f{i}")).collect(),
        mean: vec![0.0; d],
        std: vec![1.0; d],
        pool_size: 10,
        content_hash: "h".into(),
    }
}

fn data_strategy(d: usize) -> impl Strategy<Value = Vec<LabeledInstance>> {
    prop::collection::vec((prop::collection::vec(-3.0f64..3.0, d), any::<bool>(), 0.1f64..2.0), 2..50).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (x, y, w))| {
                let mut inst = LabeledInstance::new(format!("w{i}"), x, Label::complex_if(y), LabelSource::Direct);
                inst.weight = w;
                inst
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gradient_matches_central_differences(
        (data, params) in (1usize..6).prop_flat_map(|d| (data_strategy(d), prop::collection::vec(-2.0f64..2.0, d + 1))),
        lambda in 0.0f64..3.0,
    ) {
        let g = gradient_at(&data, &params, lambda);
        let h = 1e-5;
        let mut err = 0.0;
        let mut scale = 0.0;
        for j in 0..params.len() {
            let mut p = params.clone();
            p[j] += h;
            let up = objective(&data, &p, lambda);
            p[j] -= 2.0 * h;
            let down = objective(&data, &p, lambda);
            let fd = (up - down) / (2.0 * h);
            err += (g[j] - fd).powi(2);
            scale += fd * fd;
        }
        prop_assert!(err.sqrt() / scale.sqrt().max(1e-3) < 1e-5);
    }

    #[test]
    fn fit_is_independent_of_initialization(
        (data, init) in (1usize..5).prop_flat_map(|d| (data_strategy(d), prop::collection::vec(-4.0f64..4.0, d + 1))),
    ) {
        prop_assume!(data.iter().any(|i| i.label != data[0].label));
        let d = init.len() - 1;
        let config = FitConfig::default();
        let (a, ta) = fit_from(&data, &stats(d), &config, &vec![0.0; d + 1]).unwrap();
        let (b, _) = fit_from(&data, &stats(d), &config, &init).unwrap();
        for (x, y) in a.params().iter().zip(b.params()) {
            prop_assert!((x - y).abs() < 1e-6, "{x} vs {y}");
        }
        prop_assert!(ta.gradient_norm <= 1e-6);
        // losses never increase beyond rounding
        for w in ta.losses.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9 * w[0].abs().max(1.0));
        }
    }
}

#[test]
fn converged_gradient_is_small() {
    let s = common::small(11);
    let data = s.resources.seed_instances().to_vec();
    assert_eq!(data.len(), 40);
    let m = fit(&data, s.resources.pool().stats(), &FitConfig::default()).unwrap();
    let g = gradient(&data, &m);
    assert!(g.iter().map(|v| v * v).sum::<f64>().sqrt() < 1e-8);
    assert!(!m.degenerate);
    assert_eq!(m.trained_on.seed, 40);
}

#[test]
fn single_class_gives_prior_model() {
    let data: Vec<_> = (0..4)
        .map(|i| LabeledInstance::new(format!("w{i}"), vec![i as f64, 1.0], Label::Complex, LabelSource::Direct))
        .collect();
    let m = fit(&data, &stats(2), &FitConfig::default()).unwrap();
    assert!(m.degenerate);
    assert_eq!(m.weights, vec![0.0, 0.0]);
    // (4 + 1) / (4 + 2)
    assert!((m.predict_proba(&[3.0, -1.0]).unwrap() - 5.0 / 6.0).abs() < 1e-12);
    assert!(matches!(fit(&[], &stats(2), &FitConfig::default()), Err(ModelError::Empty)));
}

#[test]
fn export_roundtrip_is_bit_exact() {
    let s = common::small(12);
    let data = s.resources.seed_instances().to_vec();
    let m = fit(&data, s.resources.pool().stats(), &FitConfig::default()).unwrap();
    let mut record = ModelRecord::new(m);
    record.session_id = Some("abc".into());
    record.seen_words = vec!["x".into()];
    let text = export_model(&record);
    let back = import_model(&text).unwrap();
    assert_eq!(back, record);
    assert_eq!(export_model(&back), text);
    assert!(import_model_for(&text, s.resources.pool().stats()).is_ok());
}

#[test]
fn import_refuses_other_dimension() {
    let m = fit(
        &[
            LabeledInstance::new("a", vec![0.0, 1.0], Label::Simple, LabelSource::Direct),
            LabeledInstance::new("b", vec![1.0, 0.0], Label::Complex, LabelSource::Direct),
        ],
        &stats(2),
        &FitConfig::default(),
    )
    .unwrap();
    let text = export_model(&ModelRecord::new(m));
    assert!(matches!(import_model_for(&text, &stats(3)), Err(ModelError::DimensionMismatch { .. })));
    let renamed = PoolStatistics {
        feature_names: vec!["x".into(), "y".into()],
        ..stats(2)
    };
    assert!(matches!(import_model_for(&text, &renamed), Err(ModelError::FeatureMismatch(_))));
    let bumped = text.replace("\"format_version\": 1", "\"format_version\": 9");
    assert!(matches!(import_model(&bumped), Err(ModelError::VersionMismatch(9))));
}

#[test]
fn scoring_checks_dimension() {
    let m = perscwi::model::PersonalModel::untrained(stats(2), 1.0);
    assert!(m.predict_proba(&[1.0]).is_err());
    assert_eq!(m.predict(&[1.0, 2.0]).unwrap(), Label::from_probability(0.5));
}
