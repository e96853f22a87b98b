//! Weighted modularity and greedy agglomerative modularity maximisation.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Arc;

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Anything that turns a single-weight graph into a clustering.
pub trait Clusterer: Sync {
    fn cluster(&self, g: &Graph) -> Result<Clustering>;
}

impl<F> Clusterer for F
where
    F: Fn(&Graph) -> Result<Clustering> + Sync,
{
    fn cluster(&self, g: &Graph) -> Result<Clustering> {
        self(g)
    }
}

/// The default clusterer, [`cluster_greedy_modularity`].
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyModularity;

impl Clusterer for GreedyModularity {
    fn cluster(&self, g: &Graph) -> Result<Clustering> {
        cluster_greedy_modularity(g)
    }
}

/// Clusters `g`, falling back to all singletons when it has no edges.
/// The flag reports the fallback.
pub fn cluster_or_singletons(g: &Graph, clusterer: &dyn Clusterer) -> Result<(Clustering, bool)> {
    if g.n_edges() == 0 {
        return Ok((Clustering::singletons(Arc::clone(g.nodes())), true));
    }
    Ok((clusterer.cluster(g)?, false))
}

/// Newman weighted modularity,
/// `Q = sum_c [ in_c / m - (deg_c / 2m)^2 ]`,
/// with `in_c` the internal edge weight of cluster `c` and `deg_c` the summed
/// weighted degree of its members.
pub fn modularity(g: &Graph, c: &Clustering) -> Result<f64> {
    let c = c.over(g.nodes())?;
    let m = g.total_weight();
    if m <= 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let k = c.n_clusters();
    let mut internal = vec![0.0; k];
    let mut degree = vec![0.0; k];
    for &(u, v, w) in g.edges() {
        let (cu, cv) = (c.label_of(u), c.label_of(v));
        degree[cu] += w;
        degree[cv] += w;
        if cu == cv {
            internal[cu] += w;
        }
    }
    let two_m = 2.0 * m;
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(i, d)| i / m - (d / two_m) * (d / two_m))
        .sum())
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    gain: f64,
    a: usize,
    b: usize,
    version_a: u32,
    version_b: u32,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // Max-heap on gain; ties go to the lexicographically smallest (a, b).
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| (other.a, other.b).cmp(&(self.a, self.b)))
    }
}

/// Clauset-Newman-Moore style agglomeration.
///
/// Starts from singletons and repeatedly merges the adjacent pair of clusters
/// with the largest modularity gain, continuing through negative gains until no
/// adjacent pair remains. Returns the partition with the highest modularity
/// seen along the way. A merged cluster keeps the smaller id, and gain ties are
/// broken by the smallest `(min id, max id)` pair, so the result is
/// deterministic. Isolated nodes stay singletons.
pub fn cluster_greedy_modularity(g: &Graph) -> Result<Clustering> {
    if g.n_edges() == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = g.n_nodes();
    let m = g.total_weight();
    let scale = 1.0 / (2.0 * m * m);

    let mut degree = g.degrees();
    let mut links: Vec<HashMap<usize, f64>> = vec![HashMap::new(); n];
    for &(u, v, w) in g.edges() {
        *links[u].entry(v).or_insert(0.0) += w;
        *links[v].entry(u).or_insert(0.0) += w;
    }
    let mut version = vec![0u32; n];
    let mut alive = vec![true; n];

    let gain = |w: f64, da: f64, db: f64| w / m - da * db * scale;

    let mut heap = BinaryHeap::with_capacity(g.n_edges() * 2);
    for &(u, v, _) in g.edges() {
        let (a, b) = (u.min(v), u.max(v));
        heap.push(Candidate {
            gain: gain(links[a][&b], degree[a], degree[b]),
            a,
            b,
            version_a: 0,
            version_b: 0,
        });
    }

    let two_m = 2.0 * m;
    let mut q: f64 = -degree.iter().map(|d| (d / two_m) * (d / two_m)).sum::<f64>();
    let mut best_q = q;
    let mut best_len = 0;
    let mut merges: Vec<(usize, usize)> = Vec::new();

    while let Some(c) = heap.pop() {
        let (a, b) = (c.a, c.b);
        if !alive[a] || !alive[b] || version[a] != c.version_a || version[b] != c.version_b {
            continue;
        }
        q += c.gain;
        merges.push((a, b));
        if q > best_q {
            best_q = q;
            best_len = merges.len();
        }

        alive[b] = false;
        degree[a] += degree[b];
        version[a] += 1;
        let absorbed = std::mem::take(&mut links[b]);
        links[a].remove(&b);
        for (&x, &w) in &absorbed {
            if x == a {
                continue;
            }
            links[x].remove(&b);
            *links[x].entry(a).or_insert(0.0) += w;
            *links[a].entry(x).or_insert(0.0) += w;
        }
        for (&x, &w) in &links[a] {
            let (lo, hi) = (a.min(x), a.max(x));
            heap.push(Candidate {
                gain: gain(w, degree[a], degree[x]),
                a: lo,
                b: hi,
                version_a: version[lo],
                version_b: version[hi],
            });
        }
    }

    let mut parent: Vec<usize> = (0..n).collect();
    for &(a, b) in &merges[..best_len] {
        parent[b] = a;
    }
    // a merge target always has a smaller id than the absorbed cluster, so one
    // ascending pass resolves every chain
    let mut root = vec![0; n];
    for v in 0..n {
        root[v] = if parent[v] == v { v } else { root[parent[v]] };
    }
    Clustering::from_labels(Arc::clone(g.nodes()), &root)
}

/// Literal double-sum evaluation of weighted modularity,
/// `(1/2m) sum_ij [e_ij - d_i d_j / 2m] delta(c_i, c_j)`, over a dense
/// adjacency matrix.
///
/// Quadratic in the node count and capped at 64 nodes; it exists to check
/// [`modularity`] against an independent route.
pub fn modularity_oracle(g: &Graph, c: &Clustering) -> Result<f64> {
    const CAP: usize = 64;
    let n = g.n_nodes();
    if n > CAP {
        return Err(Error::LimitExceeded(format!(
            "modularity oracle is limited to {CAP} nodes, graph has {n}"
        )));
    }
    let c = c.over(g.nodes())?;
    let mut e = vec![vec![0.0; n]; n];
    for &(u, v, w) in g.edges() {
        e[u][v] = w;
        e[v][u] = w;
    }
    let d: Vec<f64> = e.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = d.iter().sum();
    if two_m <= 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if c.label_of(i) == c.label_of(j) {
                total += e[i][j] - d[i] * d[j] / two_m;
            }
        }
    }
    Ok(total / two_m)
}
