//! Graphs whose edges carry one nonnegative weight per edge type, and the
//! aggregation schemes that reduce them to single-weight [`Graph`]s.

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nodes::NodeSet;

/// Aggregation coefficients, one per edge type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidParameter("weight vector is empty".into()));
        }
        if let Some(&bad) = alpha.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite weight {bad}")));
        }
        Ok(WeightVector(alpha))
    }

    /// Unit coordinate vector `e_t` in dimension `k`.
    pub fn unit(k: usize, t: usize) -> Self {
        let mut a = vec![0.0; k];
        a[t] = 1.0;
        WeightVector(a)
    }

    /// Projection onto the unit sphere.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("cannot normalise a zero vector".into()));
        }
        Ok(WeightVector(self.0.iter().map(|a| a / norm).collect()))
    }

    pub fn scaled(&self, c: f64) -> Self {
        WeightVector(self.0.iter().map(|a| a * c).collect())
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    fn dot(&self, w: &[f64]) -> f64 {
        self.0.iter().zip(w).map(|(a, x)| a * x).sum()
    }
}

/// Undirected graph with `k` edge types; every stored edge has a `k`-vector of
/// nonnegative weights with at least one positive component.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiGraph {
    nodes: Arc<NodeSet>,
    edge_types: Vec<String>,
    endpoints: Vec<(usize, usize)>,
    // row-major, `k` entries per edge
    weights: Vec<f64>,
}

/// Borrowed view of one stored edge.
#[derive(Debug, Clone, Copy)]
pub struct EdgeRef<'a> {
    pub u: usize,
    pub v: usize,
    pub w: &'a [f64],
}

impl MultiGraph {
    /// Validates every invariant. Edges whose weights are all zero are dropped.
    pub fn new(
        nodes: Arc<NodeSet>,
        edge_types: Vec<String>,
        edges: Vec<(usize, usize, Vec<f64>)>,
    ) -> Result<Self> {
        let k = edge_types.len();
        if k == 0 {
            return Err(Error::InvalidParameter("at least one edge type is required".into()));
        }
        let mut names = HashSet::new();
        for t in &edge_types {
            if !names.insert(t.as_str()) {
                return Err(Error::InvalidParameter(format!("duplicate edge type `{t}`")));
            }
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut endpoints = Vec::with_capacity(edges.len());
        let mut weights = Vec::with_capacity(edges.len() * k);
        for (u, v, w) in edges {
            check_edge(&nodes, k, u, v, &w)?;
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge(
                    nodes.id(u).to_string(),
                    nodes.id(v).to_string(),
                ));
            }
            if w.iter().any(|&x| x > 0.0) {
                endpoints.push((u, v));
                weights.extend_from_slice(&w);
            }
        }
        Ok(MultiGraph {
            nodes,
            edge_types,
            endpoints,
            weights,
        })
    }

    pub fn nodes(&self) -> &Arc<NodeSet> {
        &self.nodes
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_edges(&self) -> usize {
        self.endpoints.len()
    }

    /// Number of edge types.
    pub fn k(&self) -> usize {
        self.edge_types.len()
    }

    pub fn edge_types(&self) -> &[String] {
        &self.edge_types
    }

    pub fn type_index(&self, name: &str) -> Result<usize> {
        self.edge_types
            .iter()
            .position(|t| t == name)
            .ok_or_else(|| Error::UnknownEdgeType(name.to_string()))
    }

    pub fn edge(&self, e: usize) -> EdgeRef<'_> {
        let k = self.k();
        let (u, v) = self.endpoints[e];
        EdgeRef {
            u,
            v,
            w: &self.weights[e * k..(e + 1) * k],
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeRef<'_>> + '_ {
        (0..self.n_edges()).map(move |e| self.edge(e))
    }

    pub(crate) fn endpoints(&self) -> &[(usize, usize)] {
        &self.endpoints
    }

    pub(crate) fn raw_weights(&self) -> &[f64] {
        &self.weights
    }

    /// Rebuilds the graph with new per-edge weight vectors, in stored edge order.
    pub fn with_weights<F>(&self, mut f: F) -> Result<MultiGraph>
    where
        F: FnMut(usize, &[f64]) -> Vec<f64>,
    {
        let edges = self
            .edges()
            .enumerate()
            .map(|(e, r)| (r.u, r.v, f(e, r.w)))
            .collect();
        MultiGraph::new(Arc::clone(&self.nodes), self.edge_types.clone(), edges)
    }

    /// `count` copies of edge type `t`, named `<t>_<i>`.
    pub fn replicate_type(&self, t: usize, count: usize) -> Result<MultiGraph> {
        if t >= self.k() {
            return Err(Error::UnknownEdgeType(t.to_string()));
        }
        if count == 0 {
            return Err(Error::InvalidParameter("replica count must be positive".into()));
        }
        let name = &self.edge_types[t];
        let types = (0..count).map(|i| format!("{name}_{i}")).collect();
        let edges = self
            .edges()
            .filter(|r| r.w[t] > 0.0)
            .map(|r| (r.u, r.v, vec![r.w[t]; count]))
            .collect();
        MultiGraph::new(Arc::clone(&self.nodes), types, edges)
    }

    /// L2 norm of each edge type's weight column.
    pub fn type_norms(&self) -> Vec<f64> {
        let k = self.k();
        let mut sq = vec![0.0; k];
        for e in self.weights.chunks_exact(k) {
            for (s, w) in sq.iter_mut().zip(e) {
                *s += w * w;
            }
        }
        sq.into_iter().map(f64::sqrt).collect()
    }

    /// Divides every edge type by its L2 norm.
    pub fn normalize_edge_types(&self) -> Result<MultiGraph> {
        if self.n_edges() == 0 {
            return Err(Error::EmptyGraph);
        }
        let norms = self.type_norms();
        if let Some(t) = norms.iter().position(|&n| n == 0.0) {
            return Err(Error::ZeroEdgeType(self.edge_types[t].clone()));
        }
        let k = self.k();
        let weights = self
            .weights
            .chunks_exact(k)
            .flat_map(|e| e.iter().zip(&norms).map(|(w, n)| w / n))
            .collect();
        Ok(MultiGraph {
            nodes: Arc::clone(&self.nodes),
            edge_types: self.edge_types.clone(),
            endpoints: self.endpoints.clone(),
            weights,
        })
    }

    /// Composite weight `alpha . w` per edge. Negative composites are truncated
    /// to zero (and dropped) when `clamp_negative` is set, and are an error
    /// otherwise.
    pub fn aggregate_linear(&self, alpha: &WeightVector, clamp_negative: bool) -> Result<Graph> {
        self.check_alpha(alpha)?;
        let mut edges = Vec::with_capacity(self.n_edges());
        for r in self.edges() {
            let c = alpha.dot(r.w);
            if c > 0.0 {
                edges.push((r.u, r.v, c));
            } else if c < 0.0 && !clamp_negative {
                return Err(Error::NegativeComposite {
                    u: self.nodes.id(r.u).to_string(),
                    v: self.nodes.id(r.v).to_string(),
                    value: c,
                });
            }
        }
        Ok(Graph::from_checked(Arc::clone(&self.nodes), edges))
    }

    /// Single edge type `t` as a graph.
    pub fn extract_type(&self, t: usize) -> Result<Graph> {
        if t >= self.k() {
            return Err(Error::UnknownEdgeType(t.to_string()));
        }
        Ok(self.combine(|w| w[t]))
    }

    /// Edges endorsed by both types, weighted by the product of the two weights.
    pub fn aggregate_product(&self, type_a: &str, type_b: &str) -> Result<Graph> {
        let a = self.type_index(type_a)?;
        let b = self.type_index(type_b)?;
        Ok(self.combine(|w| w[a] * w[b]))
    }

    /// Edges present in either type, weighted by the larger of the two weights.
    pub fn aggregate_union(&self, type_a: &str, type_b: &str) -> Result<Graph> {
        let a = self.type_index(type_a)?;
        let b = self.type_index(type_b)?;
        Ok(self.combine(|w| w[a].max(w[b])))
    }

    pub(crate) fn check_alpha(&self, alpha: &WeightVector) -> Result<()> {
        if alpha.dim() != self.k() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                found: alpha.dim(),
            });
        }
        Ok(())
    }

    fn combine(&self, f: impl Fn(&[f64]) -> f64) -> Graph {
        let edges = self
            .edges()
            .filter_map(|r| {
                let c = f(r.w);
                (c > 0.0).then_some((r.u, r.v, c))
            })
            .collect();
        Graph::from_checked(Arc::clone(&self.nodes), edges)
    }
}

fn check_edge(nodes: &NodeSet, k: usize, u: usize, v: usize, w: &[f64]) -> Result<()> {
    if u >= nodes.len() || v >= nodes.len() {
        return Err(Error::UnknownNode(u.max(v).to_string()));
    }
    if u == v {
        return Err(Error::SelfLoop(nodes.id(u).to_string()));
    }
    if w.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: w.len(),
        });
    }
    for &x in w {
        if !x.is_finite() {
            return Err(Error::NonFiniteWeight(x));
        }
        if x < 0.0 {
            return Err(Error::NegativeWeight(x));
        }
    }
    Ok(())
}
