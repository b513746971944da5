//! Candidate graph: accounts joined by an edge when their usernames or
//! screen names are at least `delta`-similar under Jaro–Winkler.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::AccountProfile;
use crate::text::{jaro_winkler_chars, JaroWinklerParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphConfig {
    delta: f64,
    pub jw_params: JaroWinklerParams,
}

impl GraphConfig {
    pub fn new(delta: f64, jw_params: JaroWinklerParams) -> Result<Self> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidParameter(format!("delta {delta} outside (0, 1]")));
        }
        Ok(Self { delta, jw_params })
    }

    pub fn with_delta(delta: f64) -> Result<Self> {
        Self::new(delta, JaroWinklerParams::default())
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

impl Default for GraphConfig {
    fn default() -> Self {
        Self { delta: 0.8, jw_params: JaroWinklerParams::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeScores {
    pub username_sim: f64,
    pub screen_name_sim: f64,
}

/// Undirected graph; each edge is keyed by its `(min_id, max_id)` pair.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CandidateGraph {
    nodes: BTreeSet<String>,
    edges: BTreeMap<(String, String), EdgeScores>,
}

impl CandidateGraph {
    pub fn new<I: IntoIterator<Item = String>>(nodes: I) -> Self {
        Self { nodes: nodes.into_iter().collect(), edges: BTreeMap::new() }
    }

    /// Inserts an edge; self-loops are ignored and `(b, a)` is stored as `(a, b)`.
    pub fn insert_edge(&mut self, a: &str, b: &str, scores: EdgeScores) {
        if a == b {
            return;
        }
        self.nodes.insert(a.into());
        self.nodes.insert(b.into());
        self.edges.insert(canonical_pair(a, b), scores);
    }

    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeMap<(String, String), EdgeScores> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn scores(&self, a: &str, b: &str) -> Option<EdgeScores> {
        self.edges.get(&canonical_pair(a, b)).copied()
    }

    pub fn contains_edge(&self, a: &str, b: &str) -> bool {
        self.scores(a, b).is_some()
    }
}

pub fn canonical_pair(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.into(), b.into())
    } else {
        (b.into(), a.into())
    }
}

/// Names are compared case-insensitively after trimming whitespace.
pub fn name_key(name: &str) -> Vec<char> {
    name.trim().chars().flat_map(char::to_lowercase).collect()
}

/// Jaro–Winkler on name keys; an empty key on either side scores 0.
pub fn name_similarity(a: &[char], b: &[char], params: &JaroWinklerParams) -> f64 {
    if a.is_empty() || b.is_empty() {
        0.0
    } else {
        jaro_winkler_chars(a, b, params)
    }
}

pub fn check_unique_ids(accounts: &[AccountProfile]) -> Result<()> {
    let mut seen = BTreeSet::new();
    let mut dups = BTreeSet::new();
    for acc in accounts {
        if !seen.insert(acc.id.as_str()) {
            dups.insert(acc.id.clone());
        }
    }
    if dups.is_empty() {
        Ok(())
    } else {
        Err(Error::DuplicateIds(dups.into_iter().collect()))
    }
}

/// All-pairs construction, O(n²) Jaro–Winkler evaluations.
pub fn build_candidate_graph(accounts: &[AccountProfile], config: &GraphConfig) -> Result<CandidateGraph> {
    check_unique_ids(accounts)?;
    let keys: Vec<(Vec<char>, Vec<char>)> = accounts
        .iter()
        .map(|a| (name_key(&a.username), name_key(&a.screen_name)))
        .collect();
    let mut graph = CandidateGraph::new(accounts.iter().map(|a| a.id.clone()));
    for i in 0..accounts.len() {
        for j in (i + 1)..accounts.len() {
            let username_sim = name_similarity(&keys[i].0, &keys[j].0, &config.jw_params);
            let screen_name_sim = name_similarity(&keys[i].1, &keys[j].1, &config.jw_params);
            if username_sim >= config.delta || screen_name_sim >= config.delta {
                graph.insert_edge(
                    &accounts[i].id,
                    &accounts[j].id,
                    EdgeScores { username_sim, screen_name_sim },
                );
            }
        }
    }
    Ok(graph)
}

/// Edges as `(min_id, max_id)`, sorted lexicographically.
pub fn candidate_pairs(graph: &CandidateGraph) -> Vec<(String, String)> {
    graph.edges.keys().cloned().collect()
}
