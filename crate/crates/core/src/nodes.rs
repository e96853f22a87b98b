use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered set of opaque node identifiers, shared by graphs and clusterings.
#[derive(Debug, Clone)]
pub struct NodeSet {
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

impl NodeSet {
    pub fn new(ids: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateNode(id.clone()));
            }
        }
        Ok(NodeSet { ids, index })
    }

    /// Nodes named `0`, `1`, ..., `n-1`.
    pub fn numbered(n: usize) -> Self {
        let ids: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let index = ids.iter().cloned().zip(0..).collect();
        NodeSet { ids, index }
    }

    pub fn shared(self) -> Arc<NodeSet> {
        Arc::new(self)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.ids.iter().map(String::as_str)
    }

    /// Same members, possibly in a different order.
    pub fn same_members(&self, other: &NodeSet) -> bool {
        self.len() == other.len() && self.ids.iter().all(|id| other.index.contains_key(id))
    }
}

impl PartialEq for NodeSet {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids
    }
}

impl Eq for NodeSet {}

pub(crate) fn same_order(a: &Arc<NodeSet>, b: &Arc<NodeSet>) -> bool {
    Arc::ptr_eq(a, b) || a.ids == b.ids
}
