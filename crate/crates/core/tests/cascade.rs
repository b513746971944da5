use clonescope_core::cascade::{predict_cascade, train_cascade, train_cascade_with_trace, CascadeConfig};
use clonescope_core::linalg::Matrix;
use clonescope_core::Error;
use clonescope_oracles as oracle;
use rand::Rng;

fn noisy(seed: u64, n: usize) -> (Matrix, Vec<u8>) {
    let mut rng = oracle::rng(seed);
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for _ in 0..n {
        let r: Vec<f64> = (0..5).map(|_| rng.random()).collect();
        let score = r[0] + r[1] * r[2] + 0.3 * (rng.random::<f64>() - 0.5);
        y.push(u8::from(score > 0.75));
        rows.push(r);
    }
    (Matrix::from_rows(&rows), y)
}

fn separable(n: usize) -> (Matrix, Vec<u8>) {
    let rows: Vec<[f64; 2]> = (0..n).map(|i| [if i % 2 == 0 { 0.1 } else { 0.9 }, (i % 7) as f64 / 7.0]).collect();
    let y = (0..n).map(|i| (i % 2) as u8).collect();
    (Matrix::from_rows(&rows), y)
}

fn quick(config: CascadeConfig) -> CascadeConfig {
    use clonescope_core::cascade::LearnerSpec;
    let learners = config
        .learners
        .into_iter()
        .map(|l| match l {
            LearnerSpec::RandomForest { seed, .. } => LearnerSpec::RandomForest { n_trees: 10, seed },
            LearnerSpec::ExtraTrees { seed, .. } => LearnerSpec::ExtraTrees { n_trees: 10, seed },
            other => other,
        })
        .collect();
    CascadeConfig { learners, ..config }
}

#[test]
fn second_level_sees_eight_extra_columns() {
    let (x, y) = noisy(1, 150);
    let config = quick(CascadeConfig { max_levels: 3, improvement_tolerance: 0.0, ..CascadeConfig::default() });
    let (model, trace) = train_cascade_with_trace(&x, &y, &config).unwrap();
    assert!(trace.input_dims.len() >= 2, "only {} level grown", trace.input_dims.len());
    assert_eq!(trace.input_dims[0], 5);
    assert!(trace.input_dims[1..].iter().all(|&d| d == 5 + 8));
    for (l, level) in model.levels.iter().enumerate() {
        assert_eq!(model.level_input_dim(l), trace.input_dims[l]);
        assert_eq!(level.fold_models.len(), 4);
        assert!(level.fold_models.iter().all(|m| m.len() == 5));
    }
}

#[test]
fn augmented_features_come_from_models_that_never_saw_the_row() {
    let (x, y) = noisy(2, 60);
    let config = quick(CascadeConfig { max_levels: 1, ..CascadeConfig::default() });
    let (model, trace) = train_cascade_with_trace(&x, &y, &config).unwrap();
    for learners in &trace.levels {
        for t in learners {
            for (i, &f) in t.source_fold.iter().enumerate() {
                assert!(!t.fold_training_rows[f].contains(&i));
            }
        }
    }
    // Replaying the retained fold models reproduces the recorded augmentations.
    for (j, t) in trace.levels[0].iter().enumerate() {
        for (i, &row) in trace.training_rows.iter().enumerate() {
            let single = Matrix::from_rows(&[x.row(row)]);
            let p = model.levels[0].fold_models[j][t.source_fold[i]].predict_proba(&single).unwrap();
            assert_eq!(p[0], t.out_of_fold[i]);
        }
    }
    let training: std::collections::BTreeSet<_> = trace.training_rows.iter().collect();
    assert!(trace.validation_rows.iter().all(|r| !training.contains(r)));
}

#[test]
fn growth_is_capped_and_keeps_the_best_level() {
    let (x, y) = noisy(3, 150);
    let one = train_cascade(&x, &y, &quick(CascadeConfig { max_levels: 1, ..CascadeConfig::default() })).unwrap();
    assert_eq!((one.levels.len(), one.stop_level, one.levels_grown), (1, 1, 1));
    for cap in [2, 4] {
        let config = quick(CascadeConfig { max_levels: cap, improvement_tolerance: 0.0, ..CascadeConfig::default() });
        let m = train_cascade(&x, &y, &config).unwrap();
        assert!(m.levels_grown <= cap && m.stop_level <= m.levels_grown);
        assert_eq!(m.validation_history.len(), m.levels.len());
        let best = m.validation_history.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(*m.validation_history.last().unwrap(), best);
    }
}

#[test]
fn separable_data_is_learned_in_one_level() {
    let (x, y) = separable(50);
    let m = train_cascade(&x, &y, &quick(CascadeConfig::default())).unwrap();
    assert_eq!(m.validation_history[0], 1.0);
    assert_eq!(m.stop_level, 1);
    assert!(m.levels_grown <= 2);
    let (_, labels) = predict_cascade(&m, &x).unwrap();
    assert_eq!(labels, y);
}

#[test]
fn homogeneous_variants_train_and_predict() {
    let (x, y) = noisy(4, 100);
    for config in [CascadeConfig::all_random_forest(), CascadeConfig::all_extra_trees(), CascadeConfig::all_logistic()] {
        let config = quick(CascadeConfig { max_levels: 2, ..config });
        let m = train_cascade(&x, &y, &config).unwrap();
        let (p, labels) = predict_cascade(&m, &x).unwrap();
        assert_eq!(labels.len(), 100);
        assert!(p.iter().all(|r| (r[0] + r[1] - 1.0).abs() < 1e-9));
    }
}

#[test]
fn deterministic_for_a_seed() {
    let (x, y) = noisy(5, 80);
    let config = quick(CascadeConfig { max_levels: 2, seed: 9, ..CascadeConfig::default() });
    assert_eq!(train_cascade(&x, &y, &config).unwrap(), train_cascade(&x, &y, &config).unwrap());
}

#[test]
fn rejects_bad_training_sets() {
    let x = Matrix::from_rows(&[[0.0], [1.0], [2.0]]);
    assert_eq!(train_cascade(&x, &[1, 1, 1], &CascadeConfig::default()).unwrap_err(), Error::DegenerateLabels);
    assert_eq!(
        train_cascade(&x, &[0, 1, 1], &CascadeConfig::default()).unwrap_err(),
        Error::TooFewSamples { needed: 5, got: 3 }
    );
}
