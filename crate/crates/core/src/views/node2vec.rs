use alloc::format;
use alloc::vec::Vec;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::interaction::InteractionGraph;
use crate::error::{Error, Result};
use crate::seed;

/// Walk and skip-gram settings for network-view embeddings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Node2VecConfig {
    /// Return parameter `p`: weight `1/p` for stepping back to the previous node.
    pub return_p: f64,
    /// In-out parameter `q`: weight `1/q` for moving away from the previous node.
    pub in_out_q: f64,
    pub walks_per_node: usize,
    pub walk_length: usize,
    pub dimension: usize,
    pub window: usize,
    pub negative_samples: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for Node2VecConfig {
    fn default() -> Self {
        Self {
            return_p: 0.5,
            in_out_q: 2.0,
            walks_per_node: 10,
            walk_length: 15,
            dimension: 128,
            window: 5,
            negative_samples: 5,
            epochs: 5,
            learning_rate: 0.025,
            seed: 0,
        }
    }
}

impl Node2VecConfig {
    pub fn validate(&self) -> Result<()> {
        let positive_real = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
            }
        };
        positive_real("return_p", self.return_p)?;
        positive_real("in_out_q", self.in_out_q)?;
        positive_real("learning_rate", self.learning_rate)?;
        for (name, v) in [
            ("walks_per_node", self.walks_per_node),
            ("walk_length", self.walk_length),
            ("dimension", self.dimension),
            ("window", self.window),
            ("negative_samples", self.negative_samples),
            ("epochs", self.epochs),
        ] {
            if v == 0 {
                return Err(Error::InvalidParameter(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

/// Normalized second-order transition distribution from `current` given
/// that the walk arrived from `previous`. Entries follow the neighbor order.
pub fn transition_probabilities(
    graph: &InteractionGraph,
    previous: usize,
    current: usize,
    return_p: f64,
    in_out_q: f64,
) -> Vec<(usize, f64)> {
    let mut weights: Vec<(usize, f64)> = graph
        .neighbors(current)
        .iter()
        .map(|&next| (next, step_weight(graph, previous, next, return_p, in_out_q)))
        .collect();
    let total: f64 = weights.iter().map(|w| w.1).sum();
    if total > 0.0 {
        weights.iter_mut().for_each(|w| w.1 /= total);
    }
    weights
}

fn step_weight(graph: &InteractionGraph, previous: usize, next: usize, p: f64, q: f64) -> f64 {
    if next == previous {
        1.0 / p
    } else if graph.has_edge(previous, next) {
        1.0
    } else {
        1.0 / q
    }
}

fn sample_index<R: rand::Rng>(rng: &mut R, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return i;
        }
    }
    weights.len() - 1
}

/// Biased second-order random walks, `walks_per_node` per node in node
/// order. Each node's walks use their own generator seeded from the
/// global seed and the node id, so the output does not depend on
/// scheduling. Walks stop early at nodes without neighbors.
pub fn node2vec_walks(graph: &InteractionGraph, config: &Node2VecConfig) -> Vec<Vec<usize>> {
    let mut walks = Vec::with_capacity(graph.node_count() * config.walks_per_node);
    let mut weights = Vec::new();
    for start in 0..graph.node_count() {
        let mut rng = seed::rng(seed::derive_str(config.seed, &graph.nodes()[start]));
        for _ in 0..config.walks_per_node {
            let mut walk = Vec::with_capacity(config.walk_length);
            walk.push(start);
            while walk.len() < config.walk_length {
                let current = walk[walk.len() - 1];
                let neighbors = graph.neighbors(current);
                if neighbors.is_empty() {
                    break;
                }
                let next = if walk.len() == 1 {
                    neighbors[rng.random_range(0..neighbors.len())]
                } else {
                    let previous = walk[walk.len() - 2];
                    weights.clear();
                    weights.extend(neighbors.iter().map(|&n| {
                        step_weight(graph, previous, n, config.return_p, config.in_out_q)
                    }));
                    neighbors[sample_index(&mut rng, &weights)]
                };
                walk.push(next);
            }
            walks.push(walk);
        }
    }
    walks
}
