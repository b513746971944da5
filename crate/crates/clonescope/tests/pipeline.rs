use std::collections::{BTreeMap, BTreeSet};

use clonescope::dataset::{Dataset, Manifest};
use clonescope::pipeline::{
    evaluate, predict_pipeline, prepare_training, train_pipeline, Ablation, CascadeVariant, Classifier,
    ClassifierModel, PairPrediction, PipelineConfig, TrainOutcome,
};
use clonescope::synthetic::generate_synthetic;
use clonescope::Error;
use clonescope_core::metrics::EvaluationReport;
use clonescope_core::{AccountProfile, Date};

fn small() -> Dataset {
    generate_synthetic(100, 20, 200, 7).unwrap()
}

fn train(ds: &Dataset, config: &PipelineConfig) -> TrainOutcome {
    train_pipeline(ds, config, None).unwrap()
}

#[test]
fn full_config_trains_a_cascade() {
    let outcome = train(&small(), &PipelineConfig::default());
    let ClassifierModel::Cascade(model) = &outcome.bundle.classifier else { panic!("expected a cascade") };
    assert!(!model.levels.is_empty());
    assert!(!model.validation_history.is_empty());
    assert!(model.validation_history.iter().all(|v| v.is_finite()));
    assert_eq!(model.input_dim, 10 + 2 * 64);
    assert_eq!(outcome.summary.input_dim, 138);
    assert!(outcome.summary.graph_recall >= 0.95);
}

#[test]
fn ablation_dimensions() {
    let ds = small();
    for (ablation, dim) in [(Ablation::Gc, 2), (Ablation::Account, 10), (Ablation::Wgcca, 16), (Ablation::Full, 26)] {
        let config = PipelineConfig { ablation, latent_dim: 8, ..PipelineConfig::default() };
        let prepared = prepare_training(&ds, &config, None).unwrap();
        assert_eq!(prepared.inputs.cols(), dim, "{ablation:?}");
        let uses_embeddings = matches!(ablation, Ablation::Full | Ablation::Wgcca);
        assert_eq!(prepared.featurizer.embedding.is_some(), uses_embeddings);
    }
}

#[test]
fn split_is_stratified_and_disjoint() {
    let ds = small();
    let prepared = prepare_training(&ds, &PipelineConfig::default(), None).unwrap();
    let train: BTreeSet<usize> = prepared.train_rows.iter().copied().collect();
    let test: BTreeSet<usize> = prepared.test_rows.iter().copied().collect();
    assert!(train.is_disjoint(&test));
    assert_eq!(train.len() + test.len(), prepared.pairs.len());
    let positives = |rows: &BTreeSet<usize>| rows.iter().filter(|&&i| prepared.labels[i] == 1).count();
    let total = positives(&train) + positives(&test);
    assert_eq!(positives(&test), (0.2 * total as f64).round() as usize);
    assert_eq!(test.len() - positives(&test), (0.2 * (prepared.pairs.len() - total) as f64).round() as usize);

    let outcome = prepared.fit(Classifier::RandomForest { n_trees: 10 }).unwrap();
    let held_out: BTreeSet<_> = outcome.bundle.split.test.iter().collect();
    assert!(outcome.bundle.split.train.iter().all(|p| !held_out.contains(p)));
    assert!(outcome.test_predictions.iter().all(|p| held_out.contains(&p.pair)));
}

#[test]
fn training_data_replays_bit_for_bit() {
    let ds = small();
    let outcome = train(&ds, &PipelineConfig::default());
    let replay = predict_pipeline(&outcome.bundle, &ds, None).unwrap();
    assert_eq!(replay.len(), outcome.summary.candidate_pairs);
    let by_pair: BTreeMap<_, _> = replay.iter().map(|p| (p.pair.clone(), p)).collect();
    for p in &outcome.test_predictions {
        let r = by_pair[&p.pair];
        assert_eq!(r.probability.to_bits(), p.probability.to_bits());
        assert_eq!(r.label, p.label);
    }
    assert!(replay.iter().all(|p| (0.0..=1.0).contains(&p.probability)));
    assert!(replay.iter().all(|p| p.label == u8::from(p.probability > 0.5)));
}

#[test]
fn identical_twins_are_flagged() {
    let ds = small();
    let outcome = train(&ds, &PipelineConfig::default());
    let (victim, _) = &ds.labels[0];
    let template = ds.accounts.iter().find(|a| &a.id == victim).unwrap();
    let twin = |id: &str| AccountProfile { id: id.into(), ..template.clone() };
    let fresh = Dataset::new(vec![twin("twin_a"), twin("twin_b")], vec![], vec![], ds.manifest.clone()).unwrap();
    let predictions = predict_pipeline(&outcome.bundle, &fresh, None).unwrap();
    assert_eq!(predictions.len(), 1);
    assert!(predictions[0].probability > 0.5, "{predictions:?}");
}

#[test]
fn no_candidate_pairs_gives_no_predictions() {
    let ds = small();
    let outcome = train_pipeline(&ds, &PipelineConfig { ablation: Ablation::Account, ..Default::default() }, None).unwrap();
    let d = Date::new(2020, 1, 1).unwrap();
    let lonely = Dataset::new(
        vec![AccountProfile::new("x", "qwerty", "Alpha Beta", d), AccountProfile::new("y", "zzz_top", "Omega", d)],
        vec![],
        vec![],
        Manifest::default(),
    )
    .unwrap();
    assert!(predict_pipeline(&outcome.bundle, &lonely, None).unwrap().is_empty());
}

#[test]
fn unrecoverable_labels_are_an_error() {
    let d = Date::new(2020, 1, 1).unwrap();
    let accounts = vec![
        AccountProfile::new("a", "jane_doe", "Jane Doe", d),
        AccountProfile::new("b", "jane_doe1", "Jane Doe", d),
        AccountProfile::new("c", "xq_kappa", "Kappa Q", d),
    ];
    let ds = Dataset::new(accounts, vec![], vec![("a".into(), "c".into())], Manifest::default()).unwrap();
    let err = train_pipeline(&ds, &PipelineConfig::default(), None).unwrap_err();
    assert!(matches!(err, Error::NoLabeledPairs));
    assert_eq!(err.to_string(), "graph recovered no labeled pairs; lower delta");
}

#[test]
fn invalid_configuration_is_rejected() {
    let ds = small();
    let bad = [
        PipelineConfig { delta: 0.0, ..Default::default() },
        PipelineConfig { view_weights: vec![0.5, 0.5], ..Default::default() },
        PipelineConfig { view_weights: vec![-1.0, 0.5, 0.5, 0.5], ..Default::default() },
        PipelineConfig { folds: 1, ..Default::default() },
        PipelineConfig { latent_dim: 0, ..Default::default() },
    ];
    for config in bad {
        assert!(train_pipeline(&ds, &config, None).is_err(), "{config:?}");
    }
}

#[test]
fn external_post_vectors() {
    let ds = small();
    let vectors: BTreeMap<String, Vec<f64>> = ds
        .accounts
        .iter()
        .enumerate()
        .map(|(i, a)| (a.id.clone(), vec![(i % 7) as f64, a.posts.len() as f64, 1.0]))
        .collect();
    let config = PipelineConfig { latent_dim: 8, ..Default::default() };
    let outcome = train_pipeline(&ds, &config, Some(&vectors)).unwrap();
    let again = predict_pipeline(&outcome.bundle, &ds, None).unwrap();
    assert_eq!(again.len(), outcome.summary.candidate_pairs);

    let template = ds.accounts[0].clone();
    let twin = |id: &str| AccountProfile { id: id.into(), ..template.clone() };
    let fresh = Dataset::new(vec![twin("new_a"), twin("new_b")], vec![], vec![], ds.manifest.clone()).unwrap();
    assert!(matches!(predict_pipeline(&outcome.bundle, &fresh, None), Err(Error::Config(_))));
    assert_eq!(predict_pipeline(&outcome.bundle, &fresh, Some(&vectors)).unwrap().len(), 1);
}

#[test]
fn cascade_variants_train() {
    let ds = small();
    let prepared = prepare_training(&ds, &PipelineConfig { latent_dim: 8, ..Default::default() }, None).unwrap();
    for variant in [CascadeVariant::Default, CascadeVariant::Rf, CascadeVariant::Ert, CascadeVariant::Lr] {
        let outcome = prepared.fit(Classifier::Cascade { variant }).unwrap();
        assert_eq!(outcome.test_predictions.len(), prepared.test_rows.len());
    }
}

#[test]
fn evaluation_counts() {
    let pair = |a: &str, b: &str| (a.to_string(), b.to_string());
    let pred = |a: &str, b: &str, label: u8| PairPrediction { pair: pair(a, b), probability: f64::from(label), label };
    let truth: BTreeSet<_> = [pair("a", "b"), pair("c", "d"), pair("e", "f")].into();
    let report = evaluate(&[pred("a", "b", 1), pred("c", "d", 0), pred("x", "y", 1), pred("p", "q", 0)], &truth);
    assert_eq!(report, EvaluationReport::from_counts(1, 1, 2, 1));
    let none = evaluate(&[pred("x", "y", 0)], &truth);
    assert_eq!((none.precision, none.recall, none.f1), (0.0, 0.0, 0.0));
}
