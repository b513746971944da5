use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Follower,
    Friend,
}

impl EdgeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeKind::Follower => "follower",
            EdgeKind::Friend => "friend",
        }
    }
}

impl core::str::FromStr for EdgeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "follower" => Ok(EdgeKind::Follower),
            "friend" => Ok(EdgeKind::Friend),
            other => Err(Error::InvalidParameter(alloc::format!("unknown edge kind {other:?}"))),
        }
    }
}

/// Undirected interaction network over a fixed node list. Adjacency lists
/// hold node indices in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionGraph {
    pub kind: EdgeKind,
    nodes: Vec<String>,
    adjacency: Vec<Vec<usize>>,
}

impl InteractionGraph {
    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Builds directly from index pairs; used by tests and generators.
    pub fn from_index_edges(kind: EdgeKind, nodes: Vec<String>, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for &(a, b) in edges {
            if a != b {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Self { kind, nodes, adjacency }
    }
}

/// Keeps edges of `kind`, collapsing duplicates and both orientations,
/// dropping self-loops. Every edge endpoint must be one of `nodes`.
pub fn build_interaction_graph<S: AsRef<str>>(
    nodes: &[String],
    edges: &[(S, S, EdgeKind)],
    kind: EdgeKind,
) -> Result<InteractionGraph> {
    let index: BTreeMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let lookup = |id: &str| index.get(id).copied().ok_or_else(|| Error::UnknownAccount(id.into()));
    let mut pairs = Vec::new();
    for (a, b, k) in edges {
        let ia = lookup(a.as_ref())?;
        let ib = lookup(b.as_ref())?;
        if *k == kind {
            pairs.push((ia, ib));
        }
    }
    Ok(InteractionGraph::from_index_edges(kind, nodes.to_vec(), &pairs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| String::from(*s)).collect()
    }

    #[test]
    fn filters_by_kind() {
        let g = build_interaction_graph(
            &ids(&["a", "b", "c"]),
            &[("a", "b", EdgeKind::Friend)],
            EdgeKind::Follower,
        )
        .unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn collapses_orientation_and_duplicates() {
        let g = build_interaction_graph(
            &ids(&["a", "b"]),
            &[("a", "b", EdgeKind::Follower), ("b", "a", EdgeKind::Follower)],
            EdgeKind::Follower,
        )
        .unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
    }

    #[test]
    fn drops_self_loops() {
        let g = build_interaction_graph(&ids(&["a"]), &[("a", "a", EdgeKind::Friend)], EdgeKind::Friend)
            .unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn unknown_id_is_named() {
        let err = build_interaction_graph(&ids(&["a"]), &[("a", "ghost", EdgeKind::Friend)], EdgeKind::Friend)
            .unwrap_err();
        assert_eq!(err, Error::UnknownAccount("ghost".into()));
    }
}
