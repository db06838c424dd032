use std::collections::HashMap;

use perscwi::metrics::{
    baseline_all_simple, baseline_external, baseline_frequency, baseline_group_average, baseline_group_average_with,
    cohen_kappa, f_score, f_scores, macro_f, prf, read_predictions, sweep_frequency_threshold, write_predictions, Confusion,
    EvaluationReport, LabelledTestSet, MetricsError,
};
use perscwi::Label;
use proptest::prelude::*;

fn labels(bits: &[u8]) -> Vec<Label> {
    bits.iter().map(|b| Label::complex_if(*b == 1)).collect()
}

fn set(annotator: &str, items: &[(&str, u8)]) -> LabelledTestSet {
    LabelledTestSet::new(annotator, items.iter().map(|(w, b)| (w.to_string(), Label::complex_if(*b == 1))).collect()).unwrap()
}

#[test]
fn f_examples() {
    let gold = labels(&[1, 0, 1, 0, 0]);
    assert_eq!(f_score(&gold, &gold).unwrap(), 1.0);
    assert_eq!(macro_f(&gold, &gold).unwrap(), 1.0);
    let c = Confusion {
        tp: 3,
        fp: 1,
        fn_: 2,
        tn: 0,
    };
    let (p, r, f) = prf(&c);
    assert_eq!((p, r), (0.75, 0.6));
    assert!((f - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(prf(&Confusion { tp: 0, fp: 2, fn_: 3, tn: 1 }).2, 0.0);
    assert!(matches!(f_score(&gold, &gold[..2]), Err(MetricsError::LengthMismatch { .. })));
}

#[test]
fn kappa_examples() {
    let c = Confusion {
        tp: 20,
        fn_: 5,
        fp: 10,
        tn: 15,
    };
    assert!((perscwi::metrics::kappa_from_confusion(&c).value - 0.4).abs() < 1e-12);
    let seq = labels(&[0, 1, 1, 0]);
    assert_eq!(cohen_kappa(&seq, &seq).unwrap().value, 1.0);

    let simple = baseline_all_simple(4);
    let k = cohen_kappa(&simple, &simple).unwrap();
    assert!(k.degenerate);
    assert_eq!(k.value, 1.0);
    let k = cohen_kappa(&simple, &labels(&[1, 1, 1, 1])).unwrap();
    assert!(k.degenerate);
    assert_eq!(k.value, 0.0);
    assert!(cohen_kappa(&simple, &labels(&[0, 1, 0, 0])).unwrap().degenerate);
}

#[test]
fn all_simple_baseline() {
    let gold = labels(&[0, 0, 0, 1]);
    let pred = baseline_all_simple(4);
    assert_eq!(pred, labels(&[0, 0, 0, 0]));
    let c = Confusion::from_labels(&pred, &gold).unwrap();
    let f = f_scores(&c);
    assert_eq!(f.complex, 0.0);
    assert!((f.micro_f - 0.75).abs() < 1e-12);
    assert!((f.simple - 2.0 * 0.75 / 1.75).abs() < 1e-12);
}

#[test]
fn group_average_threshold_is_strict() {
    let target = set("t", &[("w", 0)]);
    let group = |complex: usize| -> Vec<LabelledTestSet> {
        (0..10)
            .map(|i| set(&format!("a{i}"), &[("w", u8::from(i < complex))]))
            .collect()
    };
    assert_eq!(baseline_group_average(&group(2), &target).labels, vec![Label::Complex]);
    assert_eq!(baseline_group_average(&group(1), &target).labels, vec![Label::Simple]);
    assert_eq!(baseline_group_average(&group(0), &target).labels, vec![Label::Simple]);
}

#[test]
fn group_average_leaves_target_out_and_flags_unannotated() {
    let target = set("t", &[("w", 1), ("lonely", 1)]);
    let group = vec![target.clone(), set("a", &[("w", 0)])];
    let p = baseline_group_average(&group, &target);
    assert_eq!(p.labels, vec![Label::Simple, Label::Simple]);
    assert_eq!(p.unannotated, vec!["lonely".to_string()]);
    let p = baseline_group_average_with(&group, &target, 0.1, false);
    assert_eq!(p.labels[0], Label::Complex);
}

#[test]
fn frequency_baseline_and_sweep() {
    let freq: HashMap<String, f64> = [("a", 1.0), ("b", 5.0), ("c", 50.0), ("d", 500.0), ("e", 5000.0)]
        .iter()
        .map(|(w, f)| (w.to_string(), *f))
        .collect();
    let words = ["a", "b", "c", "d", "e", "unknown"];
    assert!(baseline_frequency(&freq, 0.0, &words[..5]).iter().all(|l| *l == Label::Simple));
    assert!(baseline_frequency(&freq, f64::INFINITY, &words).iter().all(|l| *l == Label::Complex));
    assert_eq!(baseline_frequency(&freq, 0.5, &["unknown"]), vec![Label::Complex]);

    for cut in [3.0, 20.0, 100.0, 1000.0] {
        let items: Vec<(&str, u8)> = words[..5].iter().map(|w| (*w, u8::from(freq[*w] < cut))).collect();
        let annotator = set("x", &items);
        let t = sweep_frequency_threshold(&freq, std::slice::from_ref(&annotator));
        let pred = baseline_frequency(&freq, t, &annotator.words());
        assert_eq!(macro_f(&pred, &annotator.gold()).unwrap(), 1.0, "cut {cut} recovered {t}");
    }
}

#[test]
fn external_predictions_roundtrip() {
    let preds = vec![("alpha".to_string(), Label::Complex), ("beta".to_string(), Label::Simple)];
    let mut buf = Vec::new();
    write_predictions(&mut buf, &preds).unwrap();
    let map = read_predictions(buf.as_slice()).unwrap();
    assert_eq!(baseline_external(&map, &["beta", "alpha"]).unwrap(), vec![Label::Simple, Label::Complex]);
    assert!(baseline_external(&map, &["gamma"]).is_err());
}

#[test]
fn test_set_words_unique_and_roundtrip() {
    assert!(LabelledTestSet::new("a", vec![("w".into(), Label::Simple), ("w".into(), Label::Complex)]).is_err());
    let s = set("a", &[("x", 1), ("y", 0)]);
    let mut buf = Vec::new();
    s.write(&mut buf).unwrap();
    let back = LabelledTestSet::parse("a", std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(back.items, s.items);
}

#[test]
fn report_cells_pool_and_sum() {
    let mut r = EvaluationReport::new();
    r.add("model", "advanced", &labels(&[1, 0, 1]), &labels(&[1, 0, 0])).unwrap();
    r.add("model", "advanced", &labels(&[0, 0]), &labels(&[1, 0])).unwrap();
    r.add("all_simple", "advanced", &labels(&[0, 0]), &labels(&[1, 0])).unwrap();
    let cell = r.cell("model", "advanced").unwrap();
    let c = cell.confusion;
    assert_eq!(c.tp + c.fp + c.fn_ + c.tn, cell.test_size);
    assert_eq!(cell.test_size, 5);
    let mut csv = Vec::new();
    r.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("panel,system,advanced"));
    assert!(text.lines().any(|l| l.starts_with("test_size")));
}

fn pair() -> impl Strategy<Value = (Vec<Label>, Vec<Label>)> {
    (1usize..80).prop_flat_map(|n| {
        (
            prop::collection::vec(any::<bool>().prop_map(Label::complex_if), n),
            prop::collection::vec(any::<bool>().prop_map(Label::complex_if), n),
        )
    })
}

proptest! {
    #[test]
    fn kappa_bounded_symmetric_relabel_invariant((a, b) in pair()) {
        let k = cohen_kappa(&a, &b).unwrap().value;
        prop_assert!((-1.0..=1.0).contains(&k));
        prop_assert!((k - cohen_kappa(&b, &a).unwrap().value).abs() < 1e-12);
        let fa: Vec<Label> = a.iter().map(|l| l.flipped()).collect();
        let fb: Vec<Label> = b.iter().map(|l| l.flipped()).collect();
        prop_assert!((k - cohen_kappa(&fa, &fb).unwrap().value).abs() < 1e-12);
    }

    #[test]
    fn f_bounded_and_macro_is_class_mean((a, b) in pair()) {
        let c = Confusion::from_labels(&a, &b).unwrap();
        let f = f_scores(&c);
        for v in [f.complex, f.simple, f.macro_f, f.micro_f] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        let both = c.tp + c.fp + c.fn_ > 0 && c.tn + c.fp + c.fn_ > 0;
        if both {
            prop_assert!((f.macro_f - (f.complex + f.simple) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_annotator_group_reproduces_labels(bits in prop::collection::vec(any::<bool>(), 1..30), threshold in 0.0f64..0.99) {
        let items: Vec<(String, Label)> = bits.iter().enumerate().map(|(i, b)| (format!("w{i}"), Label::complex_if(*b))).collect();
        let s = LabelledTestSet::new("solo", items).unwrap();
        let p = baseline_group_average_with(std::slice::from_ref(&s), &s, threshold, false);
        prop_assert_eq!(p.labels, s.gold());
    }
}
