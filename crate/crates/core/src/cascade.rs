//! Deep-forest cascade. Each level trains every learner with stratified
//! k-fold cross-validation; the out-of-fold class distributions are
//! appended to the original input to form the next level's input.
//! Growth stops once held-out accuracy no longer improves and the model
//! keeps the best level.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::{
    predict_proba_forest, predict_proba_logistic, train_forest, train_logistic, validate_training_data,
    ForestKind, ForestModel, LogisticModel, LogisticParams,
};
use crate::linalg::Matrix;
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LearnerSpec {
    RandomForest { n_trees: usize, seed: u64 },
    ExtraTrees { n_trees: usize, seed: u64 },
    Logistic { params: LogisticParams },
}

impl LearnerSpec {
    pub fn random_forest(seed: u64) -> Self {
        LearnerSpec::RandomForest { n_trees: DEFAULT_TREES, seed }
    }

    pub fn extra_trees(seed: u64) -> Self {
        LearnerSpec::ExtraTrees { n_trees: DEFAULT_TREES, seed }
    }

    pub fn logistic() -> Self {
        LearnerSpec::Logistic { params: LogisticParams::default() }
    }

    fn fit(&self, x: &Matrix, y: &[u8], stream: u64) -> Result<FittedLearner> {
        let positives = y.iter().filter(|&&v| v == 1).count();
        if positives == 0 || positives == y.len() {
            let p1 = if positives == 0 { 0.0 } else { 1.0 };
            return Ok(FittedLearner::Constant { distribution: [1.0 - p1, p1] });
        }
        Ok(match *self {
            LearnerSpec::RandomForest { n_trees, seed } => {
                FittedLearner::Forest(train_forest(x, y, ForestKind::RandomForest, n_trees, seed::derive(stream, seed))?)
            }
            LearnerSpec::ExtraTrees { n_trees, seed } => {
                FittedLearner::Forest(train_forest(x, y, ForestKind::ExtraTrees, n_trees, seed::derive(stream, seed))?)
            }
            LearnerSpec::Logistic { params } => FittedLearner::Logistic(train_logistic(x, y, &params)?),
        })
    }
}

pub const DEFAULT_TREES: usize = 50;

/// A trained fold model. `Constant` stands in when a fold's training part
/// holds a single class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "model", rename_all = "snake_case")]
pub enum FittedLearner {
    Forest(ForestModel),
    Logistic(LogisticModel),
    Constant { distribution: [f64; 2] },
}

impl FittedLearner {
    pub fn predict_proba(&self, x: &Matrix) -> Result<Vec<[f64; 2]>> {
        match self {
            FittedLearner::Forest(m) => predict_proba_forest(m, x),
            FittedLearner::Logistic(m) => predict_proba_logistic(m, x),
            FittedLearner::Constant { distribution } => Ok(vec![*distribution; x.rows()]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeConfig {
    pub learners: Vec<LearnerSpec>,
    pub folds: usize,
    pub max_levels: usize,
    pub improvement_tolerance: f64,
    pub validation_fraction: f64,
    pub seed: u64,
}

impl Default for CascadeConfig {
    fn default() -> Self {
        Self {
            learners: vec![
                LearnerSpec::random_forest(1),
                LearnerSpec::random_forest(2),
                LearnerSpec::extra_trees(3),
                LearnerSpec::logistic(),
            ],
            folds: 5,
            max_levels: 20,
            improvement_tolerance: 1e-3,
            validation_fraction: 0.2,
            seed: 0,
        }
    }
}

impl CascadeConfig {
    /// Four random forests with distinct seeds.
    pub fn all_random_forest() -> Self {
        Self { learners: (1..=4).map(LearnerSpec::random_forest).collect(), ..Self::default() }
    }

    pub fn all_extra_trees() -> Self {
        Self { learners: (1..=4).map(LearnerSpec::extra_trees).collect(), ..Self::default() }
    }

    pub fn all_logistic() -> Self {
        Self { learners: vec![LearnerSpec::logistic(); 4], ..Self::default() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.learners.is_empty() {
            return Err(Error::InvalidParameter("cascade needs at least one learner".into()));
        }
        if self.folds < 2 {
            return Err(Error::InvalidParameter(format!("folds must be >= 2, got {}", self.folds)));
        }
        if self.max_levels == 0 {
            return Err(Error::InvalidParameter("max_levels must be >= 1".into()));
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "validation_fraction {} outside (0, 1)",
                self.validation_fraction
            )));
        }
        if !(self.improvement_tolerance >= 0.0 && self.improvement_tolerance.is_finite()) {
            return Err(Error::InvalidParameter("improvement_tolerance must be finite and >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeLevel {
    /// `fold_models[j][f]` is learner `j` trained without fold `f`.
    pub fold_models: Vec<Vec<FittedLearner>>,
    pub folds: usize,
}

impl CascadeLevel {
    /// Per learner, the mean of its fold models' outputs.
    fn learner_outputs(&self, x: &Matrix) -> Result<Vec<Vec<[f64; 2]>>> {
        self.fold_models
            .iter()
            .map(|models| {
                let mut acc = vec![[0.0; 2]; x.rows()];
                for m in models {
                    for (a, p) in acc.iter_mut().zip(m.predict_proba(x)?) {
                        a[0] += p[0];
                        a[1] += p[1];
                    }
                }
                let k = models.len() as f64;
                Ok(acc.into_iter().map(|a| [a[0] / k, a[1] / k]).collect())
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeModel {
    pub levels: Vec<CascadeLevel>,
    pub input_dim: usize,
    pub stop_level: usize,
    /// Held-out accuracy of each retained level.
    pub validation_history: Vec<f64>,
    /// Levels trained before stopping, including discarded ones.
    pub levels_grown: usize,
    pub config: CascadeConfig,
}

impl CascadeModel {
    pub fn augmented_width(&self) -> usize {
        2 * self.config.learners.len()
    }

    /// Input width seen by level `level` (0-based).
    pub fn level_input_dim(&self, level: usize) -> usize {
        if level == 0 {
            self.input_dim
        } else {
            self.input_dim + self.augmented_width()
        }
    }
}

/// Fold bookkeeping for one learner at one level, expressed in indices
/// of the cascade's internal training rows.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldTrace {
    /// Training rows seen by each fold model.
    pub fold_training_rows: Vec<Vec<usize>>,
    /// For each training row, the fold model that produced its augmented features.
    pub source_fold: Vec<usize>,
    /// The augmented features themselves, one distribution per training row.
    pub out_of_fold: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeTrace {
    /// Original-row index of each internal training row.
    pub training_rows: Vec<usize>,
    pub validation_rows: Vec<usize>,
    /// `levels[l][j]` traces learner `j` at level `l` (all grown levels).
    pub levels: Vec<Vec<FoldTrace>>,
    /// Input width of every grown level.
    pub input_dims: Vec<usize>,
}

fn argmax(p: &[f64; 2]) -> u8 {
    u8::from(p[1] > p[0])
}

fn mean_over_learners(outputs: &[Vec<[f64; 2]>], n: usize) -> Vec<[f64; 2]> {
    let l = outputs.len() as f64;
    (0..n)
        .map(|i| {
            let (a, b) = outputs.iter().fold((0.0, 0.0), |(a, b), o| (a + o[i][0], b + o[i][1]));
            [a / l, b / l]
        })
        .collect()
}

fn select_rows(x: &Matrix, rows: &[usize]) -> Matrix {
    let mut out = Matrix::zeros(rows.len(), x.cols());
    for (o, &r) in rows.iter().enumerate() {
        out.row_mut(o).copy_from_slice(x.row(r));
    }
    out
}

/// `[x | augmented]` row by row.
fn augment(x: &Matrix, outputs: &[Vec<[f64; 2]>]) -> Matrix {
    let extra = 2 * outputs.len();
    let mut out = Matrix::zeros(x.rows(), x.cols() + extra);
    for i in 0..x.rows() {
        let row = out.row_mut(i);
        row[..x.cols()].copy_from_slice(x.row(i));
        for (j, o) in outputs.iter().enumerate() {
            row[x.cols() + 2 * j] = o[i][0];
            row[x.cols() + 2 * j + 1] = o[i][1];
        }
    }
    out
}

fn class_indices(y: &[u8], rows: &[usize]) -> [Vec<usize>; 2] {
    let mut by_class = [Vec::new(), Vec::new()];
    for &r in rows {
        by_class[usize::from(y[r])].push(r);
    }
    by_class
}

/// Stratified hold-out: each class contributes `round(fraction · count)`
/// rows, capped so that at least one row of the class stays in training.
fn stratified_split(y: &[u8], fraction: f64, rng: &mut seed::Rng) -> (Vec<usize>, Vec<usize>) {
    let all: Vec<usize> = (0..y.len()).collect();
    let mut train = Vec::new();
    let mut validation = Vec::new();
    for mut members in class_indices(y, &all) {
        members.shuffle(rng);
        let take = (libm::round(fraction * members.len() as f64) as usize).min(members.len().saturating_sub(1));
        validation.extend_from_slice(&members[..take]);
        train.extend_from_slice(&members[take..]);
    }
    train.sort_unstable();
    validation.sort_unstable();
    (train, validation)
}

/// Fold id per position of `y`; each class is dealt round-robin after a
/// shuffle, continuing the rotation across classes.
fn stratified_folds(y: &[u8], folds: usize, rng: &mut seed::Rng) -> Vec<usize> {
    let all: Vec<usize> = (0..y.len()).collect();
    let mut assignment = vec![0; y.len()];
    let mut next = 0;
    for mut members in class_indices(y, &all) {
        members.shuffle(rng);
        for r in members {
            assignment[r] = next % folds;
            next += 1;
        }
    }
    assignment
}

pub fn train_cascade(x: &Matrix, y: &[u8], config: &CascadeConfig) -> Result<CascadeModel> {
    train_cascade_with_trace(x, y, config).map(|(m, _)| m)
}

pub fn train_cascade_with_trace(x: &Matrix, y: &[u8], config: &CascadeConfig) -> Result<(CascadeModel, CascadeTrace)> {
    config.validate()?;
    validate_training_data(x, y)?;
    if x.rows() < config.folds {
        return Err(Error::TooFewSamples { needed: config.folds, got: x.rows() });
    }

    let (train_rows, validation_rows) =
        stratified_split(y, config.validation_fraction, &mut seed::rng(seed::derive_str(config.seed, "validation")));
    let y_train: Vec<u8> = train_rows.iter().map(|&r| y[r]).collect();
    let y_val: Vec<u8> = validation_rows.iter().map(|&r| y[r]).collect();
    let x_train = select_rows(x, &train_rows);
    let x_val = select_rows(x, &validation_rows);
    let n = train_rows.len();
    let folds = config.folds.min(n);

    let mut levels: Vec<CascadeLevel> = Vec::new();
    let mut history: Vec<f64> = Vec::new();
    let mut level_traces = Vec::new();
    let mut input_dims = Vec::new();
    let mut best: Option<(usize, f64)> = None;
    let mut input_train = x_train.clone();
    let mut input_val = x_val.clone();

    for level in 0..config.max_levels {
        let level_seed = seed::derive(config.seed, level as u64);
        input_dims.push(input_train.cols());
        let assignment = stratified_folds(&y_train, folds, &mut seed::rng(seed::derive_str(level_seed, "folds")));
        let fold_rows: Vec<(Vec<usize>, Vec<usize>)> = (0..folds)
            .map(|f| (0..n).partition(|&i| assignment[i] != f))
            .collect();

        let mut fold_models = Vec::with_capacity(config.learners.len());
        let mut oof_outputs = Vec::with_capacity(config.learners.len());
        let mut traces = Vec::with_capacity(config.learners.len());
        for (j, learner) in config.learners.iter().enumerate() {
            let learner_stream = seed::derive(level_seed, j as u64);
            let mut oof = vec![[0.0; 2]; n];
            let mut models = Vec::with_capacity(folds);
            for (f, (fit_rows, held_out)) in fold_rows.iter().enumerate() {
                let fx = select_rows(&input_train, fit_rows);
                let fy: Vec<u8> = fit_rows.iter().map(|&i| y_train[i]).collect();
                let model = learner.fit(&fx, &fy, seed::derive(learner_stream, f as u64))?;
                let preds = model.predict_proba(&select_rows(&input_train, held_out))?;
                for (&i, p) in held_out.iter().zip(preds) {
                    oof[i] = p;
                }
                models.push(model);
            }
            traces.push(FoldTrace {
                fold_training_rows: fold_rows.iter().map(|(fit, _)| fit.clone()).collect(),
                source_fold: assignment.clone(),
                out_of_fold: oof.clone(),
            });
            fold_models.push(models);
            oof_outputs.push(oof);
        }
        let trained = CascadeLevel { fold_models, folds };

        // Held-out rows are scored with the fold-averaged models; with no
        // held-out rows the out-of-fold predictions stand in.
        let (val_outputs, accuracy) = if validation_rows.is_empty() {
            let mean = mean_over_learners(&oof_outputs, n);
            (Vec::new(), accuracy_of(&mean, &y_train))
        } else {
            let outs = trained.learner_outputs(&input_val)?;
            let mean = mean_over_learners(&outs, input_val.rows());
            let acc = accuracy_of(&mean, &y_val);
            (outs, acc)
        };

        levels.push(trained);
        history.push(accuracy);
        level_traces.push(traces);

        let improved = best.is_none_or(|(_, b)| accuracy > b + config.improvement_tolerance);
        if improved {
            best = Some((level, accuracy));
        } else {
            break;
        }
        input_train = augment(&x_train, &oof_outputs);
        if !validation_rows.is_empty() {
            input_val = augment(&x_val, &val_outputs);
        }
    }

    let levels_grown = levels.len();
    let (best_level, _) = best.expect("at least one level is trained");
    levels.truncate(best_level + 1);
    history.truncate(best_level + 1);
    let model = CascadeModel {
        stop_level: levels.len(),
        levels,
        input_dim: x.cols(),
        validation_history: history,
        levels_grown,
        config: config.clone(),
    };
    let trace = CascadeTrace { training_rows: train_rows, validation_rows, levels: level_traces, input_dims };
    Ok((model, trace))
}

fn accuracy_of(probs: &[[f64; 2]], y: &[u8]) -> f64 {
    let correct = probs.iter().zip(y).filter(|(p, &t)| argmax(p) == t).count();
    correct as f64 / y.len() as f64
}

/// Class distributions and hard labels (ties go to class 0).
pub fn predict_cascade(model: &CascadeModel, x: &Matrix) -> Result<(Vec<[f64; 2]>, Vec<u8>)> {
    if x.cols() != model.input_dim {
        return Err(Error::DimensionMismatch { expected: model.input_dim, actual: x.cols() });
    }
    let mut input = x.clone();
    let mut probs = Vec::new();
    for (l, level) in model.levels.iter().enumerate() {
        let outputs = level.learner_outputs(&input)?;
        if l + 1 == model.levels.len() {
            probs = mean_over_learners(&outputs, x.rows());
        } else {
            input = augment(x, &outputs);
        }
    }
    let labels = probs.iter().map(argmax).collect();
    Ok((probs, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tie_goes_to_class_zero() {
        let constant = FittedLearner::Constant { distribution: [0.5, 0.5] };
        let model = CascadeModel {
            levels: vec![CascadeLevel { fold_models: vec![vec![constant.clone()]; 4], folds: 1 }],
            input_dim: 3,
            stop_level: 1,
            validation_history: vec![0.5],
            levels_grown: 1,
            config: CascadeConfig::default(),
        };
        let (p, labels) = predict_cascade(&model, &Matrix::zeros(2, 3)).unwrap();
        assert_eq!(p, vec![[0.5, 0.5]; 2]);
        assert_eq!(labels, vec![0, 0]);
        assert!(matches!(predict_cascade(&model, &Matrix::zeros(1, 2)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn stratified_split_keeps_both_classes() {
        let y: Vec<u8> = (0..50).map(|i| u8::from(i % 10 == 0)).collect();
        let (train, val) = stratified_split(&y, 0.2, &mut seed::rng(1));
        assert_eq!(train.len() + val.len(), 50);
        assert_eq!(val.iter().filter(|&&r| y[r] == 1).count(), 1);
        assert_eq!(train.iter().filter(|&&r| y[r] == 1).count(), 4);
    }

    #[test]
    fn folds_are_balanced_per_class() {
        let y: Vec<u8> = (0..40).map(|i| u8::from(i < 10)).collect();
        let a = stratified_folds(&y, 5, &mut seed::rng(4));
        for f in 0..5 {
            let pos = (0..40).filter(|&i| a[i] == f && y[i] == 1).count();
            let all = (0..40).filter(|&i| a[i] == f).count();
            assert_eq!((pos, all), (2, 8));
        }
    }

    #[test]
    fn config_validation() {
        let bad = CascadeConfig { folds: 1, ..CascadeConfig::default() };
        assert!(bad.validate().is_err());
        let bad = CascadeConfig { learners: vec![], ..CascadeConfig::default() };
        assert!(bad.validate().is_err());
        assert!(CascadeConfig::default().validate().is_ok());
    }
}
