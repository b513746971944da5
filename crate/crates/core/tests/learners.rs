use clonescope_core::learners::{
    logistic_gradient, logistic_loss, predict_proba_forest, predict_proba_logistic, train_forest,
    train_logistic_with_history, DecisionTree, ForestKind, LogisticParams, MaxFeatures, TreeParams,
};
use clonescope_core::linalg::Matrix;
use clonescope_core::seed;
use clonescope_oracles as oracle;
use proptest::prelude::*;
use rand::Rng;

fn random_dataset(seed: u64, n: usize, d: usize, grid: u32) -> (Vec<Vec<f64>>, Vec<u8>) {
    let mut rng = oracle::rng(seed);
    let x: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| f64::from(rng.random_range(0..grid))).collect()).collect();
    let mut y: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
    y[0] = 0;
    y[1] = 1;
    (x, y)
}

#[test]
fn root_split_matches_exhaustive_gini() {
    let params = TreeParams { max_features: MaxFeatures::All, ..TreeParams::default() };
    let mut checked = 0;
    for s in 0..50u64 {
        let mut rng = oracle::rng(1000 + s);
        let n = rng.random_range(4..=30);
        let d = rng.random_range(1..=3);
        let (x, y) = random_dataset(s, n, d, 8);
        let m = Matrix::from_rows(&x);
        let rows: Vec<usize> = (0..n).collect();
        let tree = DecisionTree::fit(&m, &y, &rows, &params, &mut seed::rng(s));
        assert_eq!(tree.root_split(), oracle::best_gini_split(&x, &y), "dataset {s}");
        checked += usize::from(tree.root_split().is_some());
    }
    assert!(checked > 40);
}

#[test]
fn gradient_matches_finite_differences() {
    let (x, y) = random_dataset(7, 25, 4, 1000);
    let x: Vec<Vec<f64>> = x.into_iter().map(|r| r.into_iter().map(|v| v / 1000.0).collect()).collect();
    let m = Matrix::from_rows(&x);
    let mut rng = oracle::rng(8);
    for _ in 0..20 {
        let params: Vec<f64> = (0..5).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let l2 = 0.05;
        let (gw, gb) = logistic_gradient(&params[..4], params[4], &m, &y, l2);
        let numeric = oracle::finite_difference(|p| logistic_loss(&p[..4], p[4], &m, &y, l2), &params, 1e-5);
        let analytic: Vec<f64> = gw.into_iter().chain([gb]).collect();
        for (a, n) in analytic.iter().zip(&numeric) {
            assert!((a - n).abs() <= 1e-5 * a.abs().max(n.abs()).max(1e-3), "{a} vs {n}");
        }
    }
}

#[test]
fn logistic_loss_decreases_every_epoch() {
    for s in 0..5 {
        let (x, y) = random_dataset(s, 40, 3, 10);
        let x: Vec<Vec<f64>> = x.into_iter().map(|r| r.into_iter().map(|v| v / 10.0).collect()).collect();
        let (_, history) = train_logistic_with_history(&Matrix::from_rows(&x), &y, &LogisticParams::default()).unwrap();
        assert_eq!(history.len(), 500);
        for w in history.windows(2) {
            assert!(w[1] <= w[0], "{} > {}", w[1], w[0]);
        }
    }
}

#[test]
fn forests_fit_separable_data_and_repeat_exactly() {
    let mut rng = oracle::rng(3);
    let x: Vec<Vec<f64>> = (0..60)
        .map(|i| {
            let x0 = if i % 2 == 0 { rng.random::<f64>() * 0.4 } else { 0.6 + rng.random::<f64>() * 0.4 };
            vec![x0, rng.random(), rng.random()]
        })
        .collect();
    let y: Vec<u8> = x.iter().map(|r| u8::from(r[0] > 0.5)).collect();
    let m = Matrix::from_rows(&x);
    for kind in [ForestKind::RandomForest, ForestKind::ExtraTrees] {
        let model = train_forest(&m, &y, kind, 50, 11).unwrap();
        assert_eq!(model.trees.len(), 50);
        let p = predict_proba_forest(&model, &m).unwrap();
        let labels: Vec<u8> = p.iter().map(|r| u8::from(r[1] > 0.5)).collect();
        assert_eq!(labels, y, "{kind:?}");
        assert_eq!(model, train_forest(&m, &y, kind, 50, 11).unwrap());
    }
}

#[test]
fn extra_trees_ignore_row_order() {
    let mut rng = oracle::rng(12);
    let x: Vec<Vec<f64>> = (0..40).map(|_| vec![rng.random(), rng.random(), rng.random()]).collect();
    let y: Vec<u8> = x.iter().map(|r| u8::from(r[0] + r[1] > 1.0)).collect();
    let perm: Vec<usize> = (0..40).rev().collect();
    let xp: Vec<Vec<f64>> = perm.iter().map(|&i| x[i].clone()).collect();
    let yp: Vec<u8> = perm.iter().map(|&i| y[i]).collect();
    let a = train_forest(&Matrix::from_rows(&x), &y, ForestKind::ExtraTrees, 20, 4).unwrap();
    let b = train_forest(&Matrix::from_rows(&xp), &yp, ForestKind::ExtraTrees, 20, 4).unwrap();
    let probe = Matrix::from_rows(&x);
    assert_eq!(predict_proba_forest(&a, &probe).unwrap(), predict_proba_forest(&b, &probe).unwrap());
}

fn valid(rows: &[[f64; 2]]) -> bool {
    rows.iter().all(|p| p[0] >= 0.0 && p[1] >= 0.0 && (p[0] + p[1] - 1.0).abs() <= 1e-9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn outputs_are_distributions(seed in 0u64..10_000, n in 6usize..40, d in 1usize..5) {
        let (x, y) = random_dataset(seed, n, d, 20);
        let m = Matrix::from_rows(&x);
        let probe = Matrix::from_rows(&random_dataset(seed + 1, 10, d, 25).0);
        for kind in [ForestKind::RandomForest, ForestKind::ExtraTrees] {
            let f = train_forest(&m, &y, kind, 5, seed).unwrap();
            prop_assert!(valid(&predict_proba_forest(&f, &probe).unwrap()));
        }
        let (lr, _) = train_logistic_with_history(&m, &y, &LogisticParams { epochs: 50, ..Default::default() }).unwrap();
        let p = predict_proba_logistic(&lr, &probe).unwrap();
        prop_assert!(valid(&p));
        prop_assert!(p.iter().all(|r| r[0] + r[1] == 1.0));
    }
}
