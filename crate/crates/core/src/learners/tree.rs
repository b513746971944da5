use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::seed::Rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum TreeNode {
    Split { feature: usize, threshold: f64, left: usize, right: usize },
    Leaf { distribution: [f64; 2] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitMode {
    /// Exhaustive search over midpoints of consecutive distinct values.
    Best,
    /// One uniform threshold per candidate feature between its node min and max.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MaxFeatures {
    Sqrt,
    All,
    Count(usize),
}

impl MaxFeatures {
    pub fn resolve(&self, n_features: usize) -> usize {
        let m = match *self {
            MaxFeatures::Sqrt => libm::floor(libm::sqrt(n_features as f64)) as usize,
            MaxFeatures::All => n_features,
            MaxFeatures::Count(c) => c,
        };
        m.clamp(1, n_features.max(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    pub split: SplitMode,
    pub max_features: MaxFeatures,
    pub max_depth: usize,
    pub min_samples_split: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self { split: SplitMode::Best, max_features: MaxFeatures::Sqrt, max_depth: 25, min_samples_split: 2 }
    }
}

/// Gini purity `Σ_child Σ_c count_c² / n_child` kept as an exact fraction;
/// larger is better and equals `n − n·weighted_gini`.
#[derive(Debug, Clone, Copy)]
struct Purity {
    num: u128,
    den: u128,
}

impl Purity {
    fn of(left: [u64; 2], right: [u64; 2]) -> Self {
        let sq = |c: [u64; 2]| u128::from(c[0]) * u128::from(c[0]) + u128::from(c[1]) * u128::from(c[1]);
        let nl = u128::from(left[0] + left[1]);
        let nr = u128::from(right[0] + right[1]);
        Self { num: sq(left) * nr + sq(right) * nl, den: nl * nr }
    }

    fn cmp(&self, other: &Purity) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    feature: usize,
    threshold: f64,
    purity: Purity,
}

impl Candidate {
    /// Higher purity wins; ties go to the lower feature index, then the lower threshold.
    fn beats(&self, other: &Candidate) -> bool {
        match self.purity.cmp(&other.purity) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => (self.feature, self.threshold) < (other.feature, other.threshold),
        }
    }
}

/// Binary classification tree stored as a node arena; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
    pub n_features: usize,
}

fn class_counts(y: &[u8], rows: &[usize]) -> [u64; 2] {
    let mut c = [0u64; 2];
    for &r in rows {
        c[usize::from(y[r])] += 1;
    }
    c
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid >= hi {
        lo
    } else {
        mid
    }
}

impl DecisionTree {
    /// Grows a tree on `rows` (indices into `x`, repeats allowed for
    /// bootstrap samples). Labels must be 0 or 1.
    pub fn fit(x: &Matrix, y: &[u8], rows: &[usize], params: &TreeParams, rng: &mut Rng) -> Self {
        let mut tree = DecisionTree { nodes: Vec::new(), n_features: x.cols() };
        let mtry = params.max_features.resolve(x.cols());
        let mut features: Vec<usize> = (0..x.cols()).collect();
        let mut scratch: Vec<(f64, u8)> = Vec::with_capacity(rows.len());

        tree.nodes.push(TreeNode::Leaf { distribution: [0.0; 2] });
        let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(0, rows.to_vec(), 0)];
        while let Some((slot, node_rows, depth)) = stack.pop() {
            let counts = class_counts(y, &node_rows);
            let total = (counts[0] + counts[1]) as f64;
            let leaf = TreeNode::Leaf {
                distribution: if total > 0.0 {
                    [counts[0] as f64 / total, counts[1] as f64 / total]
                } else {
                    [0.5, 0.5]
                },
            };
            let pure = counts[0] == 0 || counts[1] == 0;
            if pure || node_rows.len() < params.min_samples_split || depth >= params.max_depth {
                tree.nodes[slot] = leaf;
                continue;
            }

            features.shuffle(rng);
            let mut best: Option<Candidate> = None;
            let mut examined = 0;
            for &f in features.iter() {
                if examined == mtry {
                    break;
                }
                let (lo, hi) = node_rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &r| {
                    let v = x[(r, f)];
                    (lo.min(v), hi.max(v))
                });
                if !(lo < hi) {
                    continue;
                }
                examined += 1;
                let candidate = match params.split {
                    SplitMode::Best => best_threshold(x, y, &node_rows, f, &mut scratch),
                    SplitMode::Random => {
                        let mut t = lo + rng.random::<f64>() * (hi - lo);
                        if t >= hi {
                            t = lo;
                        }
                        let mut left = [0u64; 2];
                        let mut right = [0u64; 2];
                        for &r in &node_rows {
                            let side = if x[(r, f)] <= t { &mut left } else { &mut right };
                            side[usize::from(y[r])] += 1;
                        }
                        Candidate { feature: f, threshold: t, purity: Purity::of(left, right) }
                    }
                };
                if best.as_ref().is_none_or(|b| candidate.beats(b)) {
                    best = Some(candidate);
                }
            }

            let Some(split) = best else {
                tree.nodes[slot] = leaf;
                continue;
            };
            let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
                node_rows.iter().partition(|&&r| x[(r, split.feature)] <= split.threshold);
            let left = tree.nodes.len();
            tree.nodes.push(TreeNode::Leaf { distribution: [0.0; 2] });
            let right = tree.nodes.len();
            tree.nodes.push(TreeNode::Leaf { distribution: [0.0; 2] });
            tree.nodes[slot] = TreeNode::Split { feature: split.feature, threshold: split.threshold, left, right };
            stack.push((right, right_rows, depth + 1));
            stack.push((left, left_rows, depth + 1));
        }
        tree
    }

    pub fn predict_row(&self, row: &[f64]) -> [f64; 2] {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                TreeNode::Leaf { distribution } => return *distribution,
                TreeNode::Split { feature, threshold, left, right } => {
                    at = if row[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    /// Root `(feature, threshold)`, or `None` for a single-leaf tree.
    pub fn root_split(&self) -> Option<(usize, f64)> {
        match self.nodes.first()? {
            TreeNode::Split { feature, threshold, .. } => Some((*feature, *threshold)),
            TreeNode::Leaf { .. } => None,
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], at: usize) -> usize {
            match &nodes[at] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

fn best_threshold(x: &Matrix, y: &[u8], rows: &[usize], feature: usize, scratch: &mut Vec<(f64, u8)>) -> Candidate {
    scratch.clear();
    scratch.extend(rows.iter().map(|&r| (x[(r, feature)], y[r])));
    scratch.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let total = class_counts(y, rows);
    let mut left = [0u64; 2];
    let mut best: Option<Candidate> = None;
    for i in 0..scratch.len() - 1 {
        left[usize::from(scratch[i].1)] += 1;
        let (v, next) = (scratch[i].0, scratch[i + 1].0);
        if v == next {
            continue;
        }
        let right = [total[0] - left[0], total[1] - left[1]];
        let c = Candidate { feature, threshold: midpoint(v, next), purity: Purity::of(left, right) };
        if best.as_ref().is_none_or(|b| c.purity.cmp(&b.purity) == Ordering::Greater) {
            best = Some(c);
        }
    }
    best.expect("feature has at least two distinct values")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    #[test]
    fn two_points_random_split() {
        let x = Matrix::from_rows(&[[0.0], [1.0]]);
        let y = [0u8, 1];
        let params = TreeParams { split: SplitMode::Random, ..Default::default() };
        let tree = DecisionTree::fit(&x, &y, &[0, 1], &params, &mut seed::rng(3));
        assert_eq!(tree.nodes.len(), 3);
        assert_eq!(tree.predict_row(&[0.0]), [1.0, 0.0]);
        assert_eq!(tree.predict_row(&[1.0]), [0.0, 1.0]);
    }

    #[test]
    fn midpoint_threshold() {
        let x = Matrix::from_rows(&[[1.0], [2.0], [4.0], [8.0]]);
        let y = [0u8, 0, 1, 1];
        let tree = DecisionTree::fit(&x, &y, &[0, 1, 2, 3], &TreeParams::default(), &mut seed::rng(0));
        assert_eq!(tree.root_split(), Some((0, 3.0)));
        assert_eq!(tree.depth(), 1);
    }

    #[test]
    fn constant_features_give_leaf() {
        let x = Matrix::from_rows(&[[1.0], [1.0]]);
        let tree = DecisionTree::fit(&x, &[0, 1], &[0, 1], &TreeParams::default(), &mut seed::rng(0));
        assert_eq!(tree.root_split(), None);
        assert_eq!(tree.predict_row(&[5.0]), [0.5, 0.5]);
    }

    #[test]
    fn depth_cap() {
        let rows: Vec<[f64; 1]> = (0..64).map(|i| [i as f64]).collect();
        let y: Vec<u8> = (0..64).map(|i| (i % 2) as u8).collect();
        let x = Matrix::from_rows(&rows);
        let idx: Vec<usize> = (0..64).collect();
        let params = TreeParams { max_depth: 3, ..Default::default() };
        let tree = DecisionTree::fit(&x, &y, &idx, &params, &mut seed::rng(0));
        assert!(tree.depth() <= 3);
    }
}
