//! Base learners of the cascade: CART trees, random forests, extremely
//! randomized trees and logistic regression. All predict a two-column
//! class distribution `[P(y = 0), P(y = 1)]` per row.

mod forest;
mod logistic;
mod tree;

pub use forest::{predict_proba_forest, train_forest, ForestKind, ForestModel};
pub use logistic::{
    logistic_gradient, logistic_loss, predict_proba_logistic, train_logistic, train_logistic_with_history,
    LogisticModel, LogisticParams,
};
pub use tree::{DecisionTree, MaxFeatures, SplitMode, TreeNode, TreeParams};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Checks shape, label values, finiteness and that both classes occur.
pub fn validate_training_data(x: &Matrix, y: &[u8]) -> Result<()> {
    if x.rows() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.rows(), actual: y.len() });
    }
    if y.len() < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: y.len() });
    }
    if let Some(bad) = y.iter().find(|&&v| v > 1) {
        return Err(Error::InvalidParameter(alloc::format!("label {bad} is not binary")));
    }
    check_finite(x)?;
    let positives = y.iter().filter(|&&v| v == 1).count();
    if positives == 0 || positives == y.len() {
        return Err(Error::DegenerateLabels);
    }
    Ok(())
}

pub(crate) fn check_finite(x: &Matrix) -> Result<()> {
    for i in 0..x.rows() {
        if let Some(col) = x.row(i).iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: i, col });
        }
    }
    Ok(())
}

pub(crate) fn check_width(x: &Matrix, expected: usize) -> Result<()> {
    if x.cols() != expected {
        return Err(Error::DimensionMismatch { expected, actual: x.cols() });
    }
    Ok(())
}
