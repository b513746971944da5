use alloc::vec::Vec;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::tree::{DecisionTree, MaxFeatures, SplitMode, TreeParams};
use super::{check_width, validate_training_data};
use crate::error::Result;
use crate::linalg::Matrix;
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForestKind {
    /// Bootstrap samples, best Gini split among √d candidate features.
    RandomForest,
    /// Full sample, one random threshold per candidate feature.
    ExtraTrees,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub kind: ForestKind,
    pub trees: Vec<DecisionTree>,
    pub n_trees: usize,
    pub max_features: MaxFeatures,
    pub seed: u64,
    pub n_features: usize,
}

/// Tree `t` draws from its own generator seeded by `(seed, t)`.
pub fn train_forest(x: &Matrix, y: &[u8], kind: ForestKind, n_trees: usize, seed: u64) -> Result<ForestModel> {
    validate_training_data(x, y)?;
    if n_trees == 0 {
        return Err(crate::Error::InvalidParameter("forest needs at least one tree".into()));
    }
    let params = TreeParams {
        split: match kind {
            ForestKind::RandomForest => SplitMode::Best,
            ForestKind::ExtraTrees => SplitMode::Random,
        },
        ..TreeParams::default()
    };
    let n = x.rows();
    let all_rows: Vec<usize> = (0..n).collect();
    let trees = (0..n_trees)
        .map(|t| {
            let mut rng = seed::rng(seed::derive(seed, t as u64));
            let rows = match kind {
                ForestKind::RandomForest => (0..n).map(|_| rng.random_range(0..n)).collect(),
                ForestKind::ExtraTrees => all_rows.clone(),
            };
            DecisionTree::fit(x, y, &rows, &params, &mut rng)
        })
        .collect();
    Ok(ForestModel { kind, trees, n_trees, max_features: params.max_features, seed, n_features: x.cols() })
}

/// Mean of the per-tree leaf distributions.
pub fn predict_proba_forest(model: &ForestModel, x: &Matrix) -> Result<Vec<[f64; 2]>> {
    check_width(x, model.n_features)?;
    let k = model.trees.len() as f64;
    Ok((0..x.rows())
        .map(|i| {
            let row = x.row(i);
            let mut acc = [0.0; 2];
            for tree in &model.trees {
                let p = tree.predict_row(row);
                acc[0] += p[0];
                acc[1] += p[1];
            }
            [acc[0] / k, acc[1] / k]
        })
        .collect())
}
