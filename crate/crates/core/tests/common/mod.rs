#![allow(dead_code)]

use std::sync::Arc;

use polyedge::clustering::Clustering;
use polyedge::community::modularity;
use polyedge::graph::Graph;
use polyedge::nodes::NodeSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn graph(n: usize, edges: &[(usize, usize, f64)]) -> Graph {
    Graph::new(NodeSet::numbered(n).shared(), edges.to_vec()).unwrap()
}

pub fn two_triangles() -> Graph {
    graph(
        6,
        &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0), (2, 3, 1.0)],
    )
}

/// Two 4-cliques joined by one edge.
pub fn two_cliques() -> Graph {
    let mut e = Vec::new();
    for base in [0, 4] {
        for i in 0..4 {
            for j in i + 1..4 {
                e.push((base + i, base + j, 1.0));
            }
        }
    }
    e.push((3, 4, 1.0));
    graph(8, &e)
}

/// Every set partition of `0..n` as restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    // `k` labels are in use; the next node joins one of them or opens label `k`
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=k {
            cur.push(l);
            rec(n, k.max(l + 1), cur, out);
            cur.pop();
        }
    }
    assert!(n > 0 && n <= 8, "exhaustive search is limited to 8 nodes");
    let mut out = Vec::new();
    rec(n, 0, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Modularity-optimal partition by brute force; first maximum in enumeration order.
pub fn best_partition(g: &Graph) -> (Clustering, f64) {
    let mut best: Option<(Clustering, f64)> = None;
    for labels in all_partitions(g.n_nodes()) {
        let c = Clustering::from_labels(Arc::clone(g.nodes()), &labels).unwrap();
        let q = modularity(g, &c).unwrap();
        if best.as_ref().is_none_or(|b| q > b.1 + 1e-12) {
            best = Some((c, q));
        }
    }
    best.unwrap()
}

pub fn random_clustering(nodes: &Arc<NodeSet>, max_k: usize, rng: &mut ChaCha8Rng) -> Clustering {
    let k = rng.random_range(1..=max_k);
    let labels: Vec<usize> = (0..nodes.len()).map(|_| rng.random_range(0..k)).collect();
    Clustering::from_labels(Arc::clone(nodes), &labels).unwrap()
}

/// Random weighted graph on `n` nodes with at least one edge.
pub fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                e.push((u, v, rng.random_range(0.1..3.0)));
            }
        }
    }
    if e.is_empty() {
        e.push((0, 1, 1.0));
    }
    graph(n, &e)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
