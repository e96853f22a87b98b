//! Clusterings of clusterings.
//!
//! Weight vectors are sampled on the unit sphere, each aggregate is clustered,
//! and the resulting ensemble is itself clustered on a complete graph whose edge
//! weights are inverse VI distances. Each dominant meta-cluster is summarised by
//! a consensus clustering, and the consensus clusterings are ordered so that
//! each prefix carries as much joint information as possible.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::clustering::Clustering;
use crate::community::{cluster_or_singletons, Clusterer};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::{entropy, product_partition, setwise_information, vi_matrix};
use crate::multigraph::{MultiGraph, WeightVector};
use crate::nodes::NodeSet;
use crate::rng::rng;

/// Largest input for [`OrderMode::Exact`].
pub const EXACT_ORDER_CAP: usize = 8;

/// Meta-clusters smaller than this fraction of the ensemble are dropped.
pub const MIN_META_FRACTION: f64 = 0.03;

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleEntry {
    pub alpha: WeightVector,
    pub clustering: Clustering,
    /// Set when the aggregate had no edges and the clustering fell back to
    /// singletons.
    pub warning: Option<String>,
}

/// Clusterings of one graph under many weight vectors, over a shared node order.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    nodes: Arc<NodeSet>,
    entries: Vec<EnsembleEntry>,
}

impl Ensemble {
    /// Aligns every clustering to `nodes`.
    pub fn new(nodes: Arc<NodeSet>, entries: Vec<EnsembleEntry>) -> Result<Self> {
        let entries = entries
            .into_iter()
            .map(|e| {
                Ok(EnsembleEntry {
                    clustering: e.clustering.aligned_to(&nodes)?,
                    ..e
                })
            })
            .collect::<Result<_>>()?;
        Ok(Ensemble { nodes, entries })
    }

    /// Entries with placeholder weight vectors; for ensembles that did not
    /// come from sampling.
    pub fn from_clusterings(cs: &[Clustering]) -> Result<Self> {
        let first = cs
            .first()
            .ok_or_else(|| Error::InvalidParameter("ensemble needs at least one clustering".into()))?;
        Ensemble::new(
            Arc::clone(first.nodes()),
            cs.iter()
                .map(|c| EnsembleEntry {
                    alpha: WeightVector::unit(1, 0),
                    clustering: c.clone(),
                    warning: None,
                })
                .collect(),
        )
    }

    pub fn nodes(&self) -> &Arc<NodeSet> {
        &self.nodes
    }

    pub fn entries(&self) -> &[EnsembleEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn clusterings(&self) -> Vec<&Clustering> {
        self.entries.iter().map(|e| &e.clustering).collect()
    }

    pub fn warnings(&self) -> Vec<(usize, &str)> {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.warning.as_deref().map(|w| (i, w)))
            .collect()
    }
}

/// `n` unit vectors with i.i.d. `U(-1, 1)` components before normalisation.
pub fn sample_alphas(k: usize, n: usize, seed: u64) -> Result<Vec<WeightVector>> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidParameter("dimension and sample count must be positive".into()));
    }
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let raw: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
        if let Ok(w) = WeightVector::new(raw).and_then(|w| w.normalized()) {
            out.push(w);
        }
    }
    Ok(out)
}

/// Clusters the clamped linear aggregate for every weight vector.
pub fn sample_clustering_space(
    g: &MultiGraph,
    alphas: &[WeightVector],
    clusterer: &dyn Clusterer,
) -> Result<Ensemble> {
    if alphas.is_empty() {
        return Err(Error::InvalidParameter("no weight vectors to sample".into()));
    }
    let one = |alpha: &WeightVector| -> Result<EnsembleEntry> {
        let agg = g.aggregate_linear(alpha, true)?;
        let (clustering, empty) = cluster_or_singletons(&agg, clusterer)?;
        Ok(EnsembleEntry {
            alpha: alpha.clone(),
            clustering,
            warning: empty.then(|| "aggregate has zero total weight; all singletons".to_string()),
        })
    };
    #[cfg(feature = "parallel")]
    let entries: Vec<EnsembleEntry> = {
        use rayon::prelude::*;
        alphas.par_iter().map(one).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let entries: Vec<EnsembleEntry> = alphas.iter().map(one).collect::<Result<_>>()?;
    Ensemble::new(Arc::clone(g.nodes()), entries)
}

/// `0.01 ln n` for an `n`-node universe (`n >= 2`).
pub fn meta_delta(n_nodes: usize) -> f64 {
    0.01 * (n_nodes.max(2) as f64).ln()
}

/// Complete graph over ensemble indices, `w_ij = 1 / (d_VI(c_i, c_j) + delta)`.
pub fn build_meta_graph(e: &Ensemble) -> Result<Graph> {
    let all: Vec<usize> = (0..e.len()).collect();
    build_from_matrix(e.nodes.len(), &vi_matrix(&e.clusterings())?, &all)
}

// Meta graph over the entries `keep` of a full distance matrix; node ids are
// the ensemble indices.
fn build_from_matrix(n_nodes: usize, d: &[Vec<f64>], keep: &[usize]) -> Result<Graph> {
    let m = keep.len();
    if m < 2 {
        return Err(Error::InvalidParameter("meta graph needs at least two clusterings".into()));
    }
    let delta = meta_delta(n_nodes);
    let mut edges = Vec::with_capacity(m * (m - 1) / 2);
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate().skip(a + 1) {
            edges.push((a, b, 1.0 / (d[i][j] + delta)));
        }
    }
    let ids = keep.iter().map(|i| i.to_string()).collect();
    Graph::new(NodeSet::new(ids)?.shared(), edges)
}

/// Clusters the meta graph; the result partitions ensemble indices.
pub fn metacluster(e: &Ensemble, clusterer: &dyn Clusterer) -> Result<Clustering> {
    clusterer.cluster(&build_meta_graph(e)?)
}

/// Cluster-based similarity partitioning: clusters the [`co_occurrence_graph`].
pub fn cspa_consensus(cs: &[&Clustering], clusterer: &dyn Clusterer) -> Result<Clustering> {
    Ok(cluster_or_singletons(&co_occurrence_graph(cs)?, clusterer)?.0)
}

/// Graph over the first clustering's nodes whose edge weights count how many
/// inputs put both endpoints in the same cluster.
pub fn co_occurrence_graph(cs: &[&Clustering]) -> Result<Graph> {
    let first = *cs
        .first()
        .ok_or_else(|| Error::InvalidParameter("consensus needs at least one clustering".into()))?;
    let mut counts: HashMap<(usize, usize), f64> = HashMap::new();
    for c in cs {
        let c = first.align_other(c)?;
        for members in c.clusters() {
            for (i, &u) in members.iter().enumerate() {
                for &v in &members[i + 1..] {
                    *counts.entry((u.min(v), u.max(v))).or_insert(0.0) += 1.0;
                }
            }
        }
    }
    let mut edges: Vec<(usize, usize, f64)> = counts.into_iter().map(|((u, v), w)| (u, v, w)).collect();
    edges.sort_unstable_by_key(|&(u, v, _)| (u, v));
    Graph::new(Arc::clone(first.nodes()), edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderMode {
    /// Greedy on the set-wise information of the growing prefix.
    Exact,
    /// Farthest-point ordering on pairwise VI.
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ordering {
    /// Input indices in selection order.
    pub order: Vec<usize>,
    /// Set-wise information of each prefix of `order`.
    pub scores: Vec<f64>,
}

/// Orders clusterings so that early prefixes carry the most information.
///
/// Exact mode (at most [`EXACT_ORDER_CAP`] inputs) adds, at every step, the
/// clustering that maximises the set-wise information of the prefix. Greedy
/// mode starts from the pair at maximal VI distance and then adds the
/// clustering farthest (in minimum VI) from those chosen. Ties go to the lower
/// index. Both report prefix set-wise information as scores.
pub fn order_representatives(cs: &[&Clustering], mode: OrderMode) -> Result<Ordering> {
    let m = cs.len();
    if m == 0 {
        return Err(Error::InvalidParameter("nothing to order".into()));
    }
    let order = match mode {
        OrderMode::Exact => {
            if m > EXACT_ORDER_CAP {
                return Err(Error::LimitExceeded(format!(
                    "exact ordering is limited to {EXACT_ORDER_CAP} clusterings, got {m}; use greedy mode"
                )));
            }
            let mut order: Vec<usize> = Vec::with_capacity(m);
            let mut left: Vec<usize> = (0..m).collect();
            while !left.is_empty() {
                let mut best: Option<(usize, f64)> = None;
                for (pos, &i) in left.iter().enumerate() {
                    let mut prefix: Vec<&Clustering> = order.iter().map(|&j| cs[j]).collect();
                    prefix.push(cs[i]);
                    let s = setwise_information(&prefix)?;
                    if best.is_none_or(|b| s > b.1) {
                        best = Some((pos, s));
                    }
                }
                let (pos, _) = best.expect("left is nonempty");
                order.push(left.remove(pos));
            }
            order
        }
        OrderMode::Greedy => greedy_order(cs)?,
    };
    let mut scores = Vec::with_capacity(m);
    let mut prefix = Vec::with_capacity(m);
    for &i in &order {
        prefix.push(cs[i]);
        scores.push(if prefix.len() == 1 {
            entropy(cs[i])
        } else {
            setwise_information(&prefix)?
        });
    }
    Ok(Ordering { order, scores })
}

fn greedy_order(cs: &[&Clustering]) -> Result<Vec<usize>> {
    let m = cs.len();
    if m == 1 {
        return Ok(vec![0]);
    }
    let d = vi_matrix(cs)?;
    let mut seed = (0, 1);
    for i in 0..m {
        for j in i + 1..m {
            if d[i][j] > d[seed.0][seed.1] {
                seed = (i, j);
            }
        }
    }
    let mut order = vec![seed.0, seed.1];
    let mut nearest: Vec<f64> = (0..m).map(|i| d[i][seed.0].min(d[i][seed.1])).collect();
    let mut used = vec![false; m];
    used[seed.0] = true;
    used[seed.1] = true;
    while order.len() < m {
        let next = (0..m)
            .filter(|&i| !used[i])
            .fold(None, |best: Option<usize>, i| match best {
                Some(b) if nearest[b] >= nearest[i] => Some(b),
                _ => Some(i),
            })
            .expect("some index is unused");
        used[next] = true;
        order.push(next);
        for i in 0..m {
            nearest[i] = nearest[i].min(d[i][next]);
        }
    }
    Ok(order)
}

/// Leaf order of an average-linkage dendrogram over pairwise VI, so that
/// similar clusterings sit next to each other when the VI matrix is displayed.
pub fn seriate(e: &Ensemble) -> Result<Vec<usize>> {
    seriate_matrix(&vi_matrix(&e.clusterings())?)
}

/// [`seriate`] for a precomputed symmetric distance matrix.
pub fn seriate_matrix(d: &[Vec<f64>]) -> Result<Vec<usize>> {
    let m = d.len();
    if m <= 2 {
        return Ok((0..m).collect());
    }
    let mut condensed = Vec::with_capacity(m * (m - 1) / 2);
    for (i, row) in d.iter().enumerate() {
        if row.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: row.len(),
            });
        }
        condensed.extend_from_slice(&row[i + 1..]);
    }
    let dendrogram = kodama::linkage(&mut condensed, m, kodama::Method::Average);
    let steps = dendrogram.steps();
    let mut order = Vec::with_capacity(m);
    let mut stack = vec![m + steps.len() - 1];
    while let Some(node) = stack.pop() {
        if node < m {
            order.push(node);
        } else {
            let s = &steps[node - m];
            stack.push(s.cluster2);
            stack.push(s.cluster1);
        }
    }
    Ok(order)
}

/// Node groups (index lists, size >= 2) that every clustering keeps together:
/// the non-singleton cells of the product partition, ordered by first member.
pub fn invariant_groups(e: &Ensemble) -> Result<Vec<Vec<usize>>> {
    if e.is_empty() {
        return Err(Error::InvalidParameter("empty ensemble".into()));
    }
    let product = product_partition(&e.clusterings())?;
    Ok(product.clusters().into_iter().filter(|c| c.len() >= 2).collect())
}

/// Output of [`run_metaclustering`].
#[derive(Debug, Clone, Serialize)]
pub struct MetaClusteringReport {
    /// Partition of the meta-clustered entries; node ids are ensemble indices.
    #[serde(serialize_with = "crate::metaclustering::assignment")]
    pub meta_partition: Clustering,
    /// Entries left out of meta-clustering because their aggregate was empty.
    pub excluded: Vec<usize>,
    /// Consensus clusterings of the retained meta-clusters, in ordering order.
    #[serde(skip)]
    pub representatives: Vec<Clustering>,
    /// Meta-cluster label behind each representative.
    pub representative_sources: Vec<usize>,
    pub ordering_scores: Vec<f64>,
    pub ordering_mode: OrderMode,
    /// Ensemble indices in dendrogram leaf order.
    pub seriation: Vec<usize>,
    /// Meta-cluster labels dropped as too small, with their sizes.
    pub dropped: Vec<(usize, usize)>,
    #[serde(skip)]
    pub vi_matrix: Vec<Vec<f64>>,
}

fn assignment<S: serde::Serializer>(c: &Clustering, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(c.len()))?;
    for (id, label) in c.assignments() {
        map.serialize_entry(id, &label)?;
    }
    map.end()
}

pub(crate) fn labels_only<S: serde::Serializer>(c: &Clustering, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(c.labels())
}

/// Meta-clusters, consensus representatives, their ordering and a seriation.
///
/// Entries whose aggregate had no edges are left out of meta-clustering
/// unless fewer than two entries would remain. Meta-clusters below
/// [`MIN_META_FRACTION`] of the ensemble are dropped (the largest one is
/// always kept). Ordering uses exact mode when there are at most
/// [`EXACT_ORDER_CAP`] representatives unless `mode` says otherwise.
pub fn run_metaclustering(
    e: &Ensemble,
    clusterer: &dyn Clusterer,
    mode: Option<OrderMode>,
) -> Result<MetaClusteringReport> {
    let d = vi_matrix(&e.clusterings())?;
    let mut keep: Vec<usize> = (0..e.len()).filter(|&i| e.entries[i].warning.is_none()).collect();
    if keep.len() < 2 {
        keep = (0..e.len()).collect();
    }
    let excluded: Vec<usize> = (0..e.len()).filter(|i| keep.binary_search(i).is_err()).collect();
    let meta = clusterer.cluster(&build_from_matrix(e.nodes.len(), &d, &keep)?)?;
    let sizes = meta.sizes();
    let min_size = (MIN_META_FRACTION * e.len() as f64).ceil() as usize;
    let largest = (0..sizes.len()).max_by_key(|&l| (sizes[l], std::cmp::Reverse(l))).unwrap_or(0);

    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for (label, &size) in sizes.iter().enumerate() {
        if size >= min_size || label == largest {
            kept.push(label);
        } else {
            dropped.push((label, size));
        }
    }
    let members = meta.clusters();
    let consensus: Vec<Clustering> = kept
        .iter()
        .map(|&l| {
            let cs: Vec<&Clustering> = members[l].iter().map(|&i| &e.entries[keep[i]].clustering).collect();
            cspa_consensus(&cs, clusterer)
        })
        .collect::<Result<_>>()?;

    let mode = mode.unwrap_or(if consensus.len() <= EXACT_ORDER_CAP {
        OrderMode::Exact
    } else {
        OrderMode::Greedy
    });
    let refs: Vec<&Clustering> = consensus.iter().collect();
    let ordering = order_representatives(&refs, mode)?;
    Ok(MetaClusteringReport {
        representatives: ordering.order.iter().map(|&i| consensus[i].clone()).collect(),
        representative_sources: ordering.order.iter().map(|&i| kept[i]).collect(),
        ordering_scores: ordering.scores,
        ordering_mode: mode,
        seriation: seriate_matrix(&d)?,
        meta_partition: meta,
        excluded,
        dropped,
        vi_matrix: d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::GreedyModularity;
    use crate::metrics::vi_distance;

    fn c(labels: &[usize]) -> Clustering {
        Clustering::from_labels(NodeSet::numbered(labels.len()).shared(), labels).unwrap()
    }

    fn shared(nodes: &Arc<NodeSet>, labels: &[usize]) -> Clustering {
        Clustering::from_labels(Arc::clone(nodes), labels).unwrap()
    }

    #[test]
    fn alphas_are_unit_and_deterministic() {
        let a = sample_alphas(3, 50, 9).unwrap();
        assert!(a.iter().all(|w| (w.norm() - 1.0).abs() < 1e-9));
        assert_eq!(a, sample_alphas(3, 50, 9).unwrap());
        let one = sample_alphas(1, 20, 1).unwrap();
        assert!(one.iter().all(|w| w.as_slice()[0].abs() == 1.0));
    }

    #[test]
    fn coordinate_sample_matches_direct_clustering() {
        let g = MultiGraph::new(
            NodeSet::numbered(6).shared(),
            vec!["a".into(), "b".into()],
            vec![
                (0, 1, vec![1.0, 0.0]),
                (1, 2, vec![1.0, 1.0]),
                (0, 2, vec![1.0, 0.0]),
                (3, 4, vec![1.0, 1.0]),
                (4, 5, vec![1.0, 0.0]),
                (3, 5, vec![1.0, 1.0]),
                (2, 3, vec![1.0, 1.0]),
            ],
        )
        .unwrap();
        let e1 = WeightVector::unit(2, 1);
        let e = sample_clustering_space(&g, &[e1.clone(), e1.clone()], &GreedyModularity).unwrap();
        let direct = crate::community::cluster_greedy_modularity(&g.extract_type(1).unwrap()).unwrap();
        assert_eq!(e.entries()[0].clustering, direct);
        assert_eq!(e.entries()[0].clustering, e.entries()[1].clustering);

        let neg = WeightVector::new(vec![-1.0, 0.0]).unwrap();
        let e = sample_clustering_space(&g, &[neg], &GreedyModularity).unwrap();
        assert_eq!(e.warnings().len(), 1);
        assert_eq!(e.entries()[0].clustering.n_clusters(), 6);
    }

    #[test]
    fn meta_graph_weights() {
        let nodes = NodeSet::numbered(4).shared();
        let cs = [
            shared(&nodes, &[0, 0, 1, 1]),
            shared(&nodes, &[0, 0, 1, 1]),
            shared(&nodes, &[0, 1, 0, 1]),
        ];
        let e = Ensemble::from_clusterings(&cs).unwrap();
        let g = build_meta_graph(&e).unwrap();
        let delta = 0.01 * 4f64.ln();
        let w: HashMap<(usize, usize), f64> = g.edges().iter().map(|&(u, v, w)| ((u, v), w)).collect();
        assert_eq!(w[&(0, 1)], 1.0 / delta);
        let d = vi_distance(&cs[0], &cs[2]).unwrap();
        assert_eq!(w[&(0, 2)], 1.0 / (d + delta));
        assert_eq!(w[&(1, 2)], 1.0 / (d + delta));

        let two = Ensemble::from_clusterings(&cs[..2]).unwrap();
        let g = build_meta_graph(&two).unwrap();
        assert_eq!(g.edges(), &[(0, 1, 1.0 / delta)]);
    }

    #[test]
    fn identical_entries_form_one_meta_cluster() {
        let cs = vec![c(&[0, 0, 1, 1]); 5];
        let e = Ensemble::from_clusterings(&cs).unwrap();
        assert_eq!(metacluster(&e, &GreedyModularity).unwrap().n_clusters(), 1);
    }

    #[test]
    fn consensus_examples() {
        let nodes = NodeSet::numbered(3).shared();
        let ab_c = shared(&nodes, &[0, 0, 1]);
        let a_bc = shared(&nodes, &[0, 1, 1]);
        let co = co_occurrence_graph(&[&ab_c, &ab_c, &a_bc]).unwrap();
        assert_eq!(co.edges(), &[(0, 1, 2.0), (1, 2, 1.0)]);
        // on this weighted path the single cluster (Q = 0) beats {ab|c} (Q = -1/18)
        let got = cspa_consensus(&[&ab_c, &ab_c, &a_bc], &GreedyModularity).unwrap();
        assert_eq!(got.n_clusters(), 1);
        let split = crate::community::modularity(&co, &ab_c).unwrap();
        assert!((split + 1.0 / 18.0).abs() < 1e-12);
        assert!(cspa_consensus(&[&a_bc], &GreedyModularity).unwrap().same_partition(&a_bc));
        let singles = Clustering::singletons(Arc::clone(&nodes));
        let got = cspa_consensus(&[&singles, &singles], &GreedyModularity).unwrap();
        assert_eq!(got.n_clusters(), 3);
    }

    fn independent_pair_and_duplicate() -> Vec<Clustering> {
        let nodes = NodeSet::numbered(64).shared();
        let c1: Vec<usize> = (0..64).map(|i| i % 4).collect();
        let c2: Vec<usize> = (0..64).map(|i| (i / 4) % 4).collect();
        let mut c3 = c1.clone();
        c3.swap(0, 1);
        vec![shared(&nodes, &c1), shared(&nodes, &c2), shared(&nodes, &c3)]
    }

    #[test]
    fn ordering_prefers_independent_partitions() {
        let cs = independent_pair_and_duplicate();
        let refs: Vec<&Clustering> = cs.iter().collect();
        for mode in [OrderMode::Exact, OrderMode::Greedy] {
            let o = order_representatives(&refs, mode).unwrap();
            assert_eq!(o.order, vec![0, 1, 2], "{mode:?}");
            assert!(o.scores.windows(2).all(|w| w[1] >= w[0]));
            assert!((o.scores[1] - 16f64.ln()).abs() < 1e-12);
        }
        let single = order_representatives(&refs[..1], OrderMode::Exact).unwrap();
        assert_eq!(single.scores, vec![entropy(&cs[0])]);
        let many: Vec<&Clustering> = std::iter::repeat_n(&cs[0], 9).collect();
        assert!(matches!(
            order_representatives(&many, OrderMode::Exact),
            Err(Error::LimitExceeded(_))
        ));
        assert_eq!(order_representatives(&many, OrderMode::Greedy).unwrap().order.len(), 9);
    }

    #[test]
    fn seriation_groups_duplicates() {
        let a = c(&[0, 0, 0, 1, 1, 1]);
        let b = c(&[0, 1, 2, 0, 1, 2]);
        let cs = vec![a.clone(), b.clone(), a.clone(), b.clone(), a, b];
        let e = Ensemble::from_clusterings(&cs).unwrap();
        let order = seriate(&e).unwrap();
        let mut sorted = order.clone();
        sorted.sort();
        assert_eq!(sorted, (0..6).collect::<Vec<_>>());
        let parity: Vec<usize> = order.iter().map(|i| i % 2).collect();
        let switches = parity.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(switches, 1);
        let two = Ensemble::from_clusterings(&cs[..2]).unwrap();
        assert_eq!(seriate(&two).unwrap(), vec![0, 1]);
    }

    #[test]
    fn invariant_group_examples() {
        let e = Ensemble::from_clusterings(&[c(&[0, 0, 1, 1, 2])]).unwrap();
        assert_eq!(invariant_groups(&e).unwrap(), vec![vec![0, 1], vec![2, 3]]);
        let nodes = NodeSet::numbered(4).shared();
        let e = Ensemble::from_clusterings(&[shared(&nodes, &[0, 0, 1, 1]), shared(&nodes, &[0, 1, 0, 1])])
            .unwrap();
        assert!(invariant_groups(&e).unwrap().is_empty());
    }

    #[test]
    fn pipeline_on_two_groups() {
        let nodes = NodeSet::numbered(40).shared();
        let rows: Vec<usize> = (0..40).map(|i| i / 10).collect();
        let cols: Vec<usize> = (0..40).map(|i| i % 4).collect();
        let mut cs = Vec::new();
        for k in 0..10 {
            let mut r = rows.clone();
            r.swap(k, 39 - k);
            cs.push(shared(&nodes, &r));
            let mut q = cols.clone();
            q.swap(k, k + 1);
            cs.push(shared(&nodes, &q));
        }
        let e = Ensemble::from_clusterings(&cs).unwrap();
        let report = run_metaclustering(&e, &GreedyModularity, None).unwrap();
        assert_eq!(report.meta_partition.n_clusters(), 2);
        assert_eq!(report.representatives.len(), 2);
        let truth_rows = shared(&nodes, &rows);
        let truth_cols = shared(&nodes, &cols);
        let best = |t: &Clustering| {
            report
                .representatives
                .iter()
                .map(|r| vi_distance(r, t).unwrap())
                .fold(f64::INFINITY, f64::min)
        };
        assert!(best(&truth_rows) < 0.3);
        assert!(best(&truth_cols) < 0.3);
        assert_eq!(report.seriation.len(), 20);
    }
}
