use std::borrow::Cow;
use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::nodes::{same_order, NodeSet};

/// A partition of a node set.
///
/// Labels are canonical: contiguous integers `0..K` assigned in order of first
/// appearance along the node order, so two clusterings over the same node
/// order describe the same partition exactly when their label vectors are
/// equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    nodes: Arc<NodeSet>,
    labels: Vec<usize>,
    n_clusters: usize,
}

impl Clustering {
    pub fn from_labels<L: Hash + Eq>(nodes: Arc<NodeSet>, labels: &[L]) -> Result<Self> {
        if labels.len() != nodes.len() {
            return Err(Error::NodeSetMismatch(format!(
                "{} labels for {} nodes",
                labels.len(),
                nodes.len()
            )));
        }
        let mut remap: HashMap<&L, usize> = HashMap::new();
        let canonical = labels
            .iter()
            .map(|l| {
                let next = remap.len();
                *remap.entry(l).or_insert(next)
            })
            .collect();
        Ok(Clustering {
            nodes,
            labels: canonical,
            n_clusters: remap.len(),
        })
    }

    pub fn singletons(nodes: Arc<NodeSet>) -> Self {
        let n = nodes.len();
        Clustering {
            nodes,
            labels: (0..n).collect(),
            n_clusters: n,
        }
    }

    pub fn single_cluster(nodes: Arc<NodeSet>) -> Self {
        let n = nodes.len();
        Clustering {
            nodes,
            labels: vec![0; n],
            n_clusters: usize::from(n > 0),
        }
    }

    /// Builds a clustering from explicit groups of node indices; every node must
    /// appear in exactly one group.
    pub fn from_groups(nodes: Arc<NodeSet>, groups: &[Vec<usize>]) -> Result<Self> {
        let mut raw = vec![usize::MAX; nodes.len()];
        for (g, members) in groups.iter().enumerate() {
            for &v in members {
                if v >= raw.len() {
                    return Err(Error::UnknownNode(v.to_string()));
                }
                if raw[v] != usize::MAX {
                    return Err(Error::NodeSetMismatch(format!(
                        "node `{}` appears in two groups",
                        nodes.id(v)
                    )));
                }
                raw[v] = g;
            }
        }
        if let Some(v) = raw.iter().position(|&l| l == usize::MAX) {
            return Err(Error::NodeSetMismatch(format!(
                "node `{}` is not assigned",
                nodes.id(v)
            )));
        }
        Clustering::from_labels(nodes, &raw)
    }

    pub fn nodes(&self) -> &Arc<NodeSet> {
        &self.nodes
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_of(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn n_clusters(&self) -> usize {
        self.n_clusters
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_clusters];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Member node indices of each cluster, in label order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_clusters];
        for (v, &l) in self.labels.iter().enumerate() {
            out[l].push(v);
        }
        out
    }

    /// Re-expresses this clustering over `target`'s node order.
    pub fn aligned_to(&self, target: &Arc<NodeSet>) -> Result<Clustering> {
        if same_order(&self.nodes, target) {
            return Ok(Clustering {
                nodes: Arc::clone(target),
                labels: self.labels.clone(),
                n_clusters: self.n_clusters,
            });
        }
        if !self.nodes.same_members(target) {
            return Err(Error::NodeSetMismatch(format!(
                "clustering covers {} nodes, target has {} (or members differ)",
                self.nodes.len(),
                target.len()
            )));
        }
        let raw: Vec<usize> = target
            .iter()
            .map(|id| self.labels[self.nodes.index_of(id).expect("checked membership")])
            .collect();
        Clustering::from_labels(Arc::clone(target), &raw)
    }

    /// Borrows `self` when it already uses `target`'s node order.
    pub(crate) fn over<'a>(&'a self, target: &Arc<NodeSet>) -> Result<Cow<'a, Clustering>> {
        if same_order(&self.nodes, target) {
            Ok(Cow::Borrowed(self))
        } else {
            self.aligned_to(target).map(Cow::Owned)
        }
    }

    /// Borrows `other` when it already shares this node order, aligns otherwise.
    pub(crate) fn align_other<'a>(&self, other: &'a Clustering) -> Result<Cow<'a, Clustering>> {
        if same_order(&self.nodes, &other.nodes) {
            Ok(Cow::Borrowed(other))
        } else {
            other.aligned_to(&self.nodes).map(Cow::Owned)
        }
    }

    /// True when both describe the same partition, ignoring label names.
    pub fn same_partition(&self, other: &Clustering) -> bool {
        match self.align_other(other) {
            Ok(o) => o.labels == self.labels,
            Err(_) => false,
        }
    }

    /// Partition whose cells are the nonempty intersections of both clusterings.
    pub fn product(&self, other: &Clustering) -> Result<Clustering> {
        let other = self.align_other(other)?;
        let pairs: Vec<(usize, usize)> = self
            .labels
            .iter()
            .copied()
            .zip(other.labels.iter().copied())
            .collect();
        Clustering::from_labels(Arc::clone(&self.nodes), &pairs)
    }

    /// Cluster labels keyed by node identifier, in node order.
    pub fn assignments(&self) -> impl Iterator<Item = (&str, usize)> {
        self.nodes.iter().zip(self.labels.iter().copied())
    }
}
