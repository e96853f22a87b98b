use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::nodes::NodeSet;

/// Undirected single-weight graph, the output of every aggregation scheme.
///
/// Weights are finite and strictly positive; zero-weight edges never get
/// stored so degree sums stay unambiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    nodes: Arc<NodeSet>,
    edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    pub fn new(nodes: Arc<NodeSet>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut kept = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if u >= nodes.len() || v >= nodes.len() {
                return Err(Error::UnknownNode(u.max(v).to_string()));
            }
            if u == v {
                return Err(Error::SelfLoop(nodes.id(u).to_string()));
            }
            if !w.is_finite() {
                return Err(Error::NonFiniteWeight(w));
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight(w));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge(
                    nodes.id(u).to_string(),
                    nodes.id(v).to_string(),
                ));
            }
            if w > 0.0 {
                kept.push((u, v, w));
            }
        }
        Ok(Graph { nodes, edges: kept })
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn from_checked(nodes: Arc<NodeSet>, edges: Vec<(usize, usize, f64)>) -> Self {
        Graph { nodes, edges }
    }

    pub fn nodes(&self) -> &Arc<NodeSet> {
        &self.nodes
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n_nodes()];
        for &(u, v, w) in &self.edges {
            d[u] += w;
            d[v] += w;
        }
        d
    }

    /// Every edge weight multiplied by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Result<Graph> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        Ok(Graph {
            nodes: Arc::clone(&self.nodes),
            edges: self.edges.iter().map(|&(u, v, w)| (u, v, w * factor)).collect(),
        })
    }

    /// Weighted neighbor lists.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n_nodes()];
        for &(u, v, w) in &self.edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        adj
    }
}
