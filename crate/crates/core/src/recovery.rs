//! Recovering aggregation weights that justify a ground-truth clustering.
//!
//! The central quantity is the holding power of a node: its pull (summed
//! clamped composite weight) towards its own cluster minus the strongest pull
//! towards any other cluster. Weight vectors are scored by the smoothed count
//! `sum_v atan(s * H(v))` and searched on the unit sphere.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::clustering::Clustering;
use crate::community::{cluster_or_singletons, modularity, Clusterer};
use crate::error::{Error, Result};
use crate::metrics::vi_distance;
use crate::multigraph::{MultiGraph, WeightVector};
use crate::nodes::NodeSet;
use crate::optimizer::{pattern_search, random_starts, Domain, SearchConfig, SearchResult};
use crate::rng::sub_seed;

const NO_SLOT: u32 = u32::MAX;

/// Precomputed edge layout for evaluating holding powers of one clustering
/// under many weight vectors. Each evaluation is linear in the edge count.
#[derive(Debug, Clone)]
pub struct HoldingEvaluator<'g> {
    graph: &'g MultiGraph,
    truth: Clustering,
    // per edge: slot of (u, cluster of v) and (v, cluster of u); NO_SLOT when internal
    slots: Vec<(u32, u32)>,
    // node v owns slots slot_start[v]..slot_start[v + 1]
    slot_start: Vec<usize>,
}

impl<'g> HoldingEvaluator<'g> {
    pub fn new(graph: &'g MultiGraph, truth: &Clustering) -> Result<Self> {
        let truth = truth.aligned_to(graph.nodes())?;
        let n = graph.n_nodes();
        let ends = graph.endpoints();
        // cut-edge incidences grouped by node: (edge, side, cluster across)
        let mut start = vec![0usize; n + 1];
        for &(u, v) in ends {
            if truth.label_of(u) != truth.label_of(v) {
                start[u + 1] += 1;
                start[v + 1] += 1;
            }
        }
        for v in 0..n {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut inc = vec![(0usize, 0usize, 0usize); start[n]];
        for (e, &(u, v)) in ends.iter().enumerate() {
            let (lu, lv) = (truth.label_of(u), truth.label_of(v));
            if lu != lv {
                inc[fill[u]] = (e, 0, lv);
                fill[u] += 1;
                inc[fill[v]] = (e, 1, lu);
                fill[v] += 1;
            }
        }
        // one slot per distinct (node, other cluster); `seen` is stamped per node
        let mut slots = vec![(NO_SLOT, NO_SLOT); ends.len()];
        let mut seen = vec![(usize::MAX, 0u32); truth.n_clusters()];
        let mut slot_start = Vec::with_capacity(n + 1);
        let mut next = 0u32;
        for v in 0..n {
            slot_start.push(next as usize);
            for &(e, side, label) in &inc[start[v]..start[v + 1]] {
                if seen[label].0 != v {
                    seen[label] = (v, next);
                    next += 1;
                }
                let slot = seen[label].1;
                if side == 0 {
                    slots[e].0 = slot;
                } else {
                    slots[e].1 = slot;
                }
            }
        }
        slot_start.push(next as usize);
        Ok(HoldingEvaluator {
            graph,
            truth,
            slots,
            slot_start,
        })
    }

    pub fn truth(&self) -> &Clustering {
        &self.truth
    }

    /// Holding power of every node under `alpha`.
    pub fn holding_powers(&self, alpha: &[f64]) -> Vec<f64> {
        let k = self.graph.k();
        let n = self.graph.n_nodes();
        let mut own = vec![0.0; n];
        let mut ext = vec![0.0; *self.slot_start.last().unwrap_or(&0)];
        let weights = self.graph.raw_weights();
        for (e, (&(u, v), &(su, sv))) in self.graph.endpoints().iter().zip(&self.slots).enumerate() {
            let w = &weights[e * k..(e + 1) * k];
            let c: f64 = alpha.iter().zip(w).map(|(a, x)| a * x).sum();
            if c <= 0.0 {
                continue;
            }
            if su == NO_SLOT {
                own[u] += c;
                own[v] += c;
            } else {
                ext[su as usize] += c;
                ext[sv as usize] += c;
            }
        }
        own.iter()
            .enumerate()
            .map(|(v, &p)| {
                let competing = ext[self.slot_start[v]..self.slot_start[v + 1]]
                    .iter()
                    .fold(0.0f64, |m, &x| m.max(x));
                p - competing
            })
            .collect()
    }

    pub fn objective(&self, alpha: &[f64], steepness: f64) -> f64 {
        arctan_sum(&self.holding_powers(alpha), steepness)
    }

    pub fn report(&self, alpha: &[f64], steepness: f64) -> HoldingReport {
        HoldingReport::new(Arc::clone(self.graph.nodes()), self.holding_powers(alpha), steepness)
    }
}

fn arctan_sum(powers: &[f64], steepness: f64) -> f64 {
    powers.iter().map(|h| (steepness * h).atan()).sum()
}

fn positive_fraction(powers: &[f64]) -> f64 {
    if powers.is_empty() {
        return 0.0;
    }
    powers.iter().filter(|&&h| h > 0.0).count() as f64 / powers.len() as f64
}

/// Per-node holding powers for one weight vector.
#[derive(Debug, Clone, PartialEq)]
pub struct HoldingReport {
    nodes: Arc<NodeSet>,
    pub per_node: Vec<f64>,
    pub positive_fraction: f64,
    pub objective_value: f64,
    pub steepness: f64,
}

impl HoldingReport {
    pub fn new(nodes: Arc<NodeSet>, per_node: Vec<f64>, steepness: f64) -> Self {
        HoldingReport {
            positive_fraction: positive_fraction(&per_node),
            objective_value: arctan_sum(&per_node, steepness),
            nodes,
            per_node,
            steepness,
        }
    }

    pub fn nodes(&self) -> &Arc<NodeSet> {
        &self.nodes
    }
}

struct PerNode<'a>(&'a HoldingReport);

impl Serialize for PerNode<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.per_node.len()))?;
        for (id, h) in self.0.nodes.iter().zip(&self.0.per_node) {
            map.serialize_entry(id, h)?;
        }
        map.end()
    }
}

impl Serialize for HoldingReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HoldingReport", 4)?;
        st.serialize_field("positive_fraction", &self.positive_fraction)?;
        st.serialize_field("objective_value", &self.objective_value)?;
        st.serialize_field("steepness", &self.steepness)?;
        st.serialize_field("per_node", &PerNode(self))?;
        st.end()
    }
}

fn check_steepness(steepness: f64) -> Result<()> {
    if !(steepness > 0.0 && steepness.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "steepness must be positive, got {steepness}"
        )));
    }
    Ok(())
}

fn node_index(g: &MultiGraph, node: &str) -> Result<usize> {
    g.nodes()
        .index_of(node)
        .ok_or_else(|| Error::UnknownNode(node.to_string()))
}

/// Summed clamped composite weight of the edges joining `node` to members of `cluster`.
pub fn pull(
    g: &MultiGraph,
    alpha: &WeightVector,
    c: &Clustering,
    node: &str,
    cluster: usize,
) -> Result<f64> {
    g.check_alpha(alpha)?;
    let c = c.over(g.nodes())?;
    let v = node_index(g, node)?;
    if cluster >= c.n_clusters() {
        return Err(Error::UnknownCluster(cluster));
    }
    Ok(pulls_of(g, alpha, &c, v)[cluster])
}

fn pulls_of(g: &MultiGraph, alpha: &WeightVector, c: &Clustering, v: usize) -> Vec<f64> {
    let mut pulls = vec![0.0; c.n_clusters()];
    for r in g.edges() {
        let other = if r.u == v {
            r.v
        } else if r.v == v {
            r.u
        } else {
            continue;
        };
        let w: f64 = alpha.as_slice().iter().zip(r.w).map(|(a, x)| a * x).sum();
        pulls[c.label_of(other)] += w.max(0.0);
    }
    pulls
}

/// Pull to the node's own cluster minus the largest pull to any other cluster
/// (zero when there is no other cluster).
pub fn holding_power(g: &MultiGraph, alpha: &WeightVector, c: &Clustering, node: &str) -> Result<f64> {
    g.check_alpha(alpha)?;
    let c = c.over(g.nodes())?;
    let v = node_index(g, node)?;
    let pulls = pulls_of(g, alpha, &c, v);
    let own = c.label_of(v);
    let competing = pulls
        .iter()
        .enumerate()
        .filter(|&(l, _)| l != own)
        .fold(0.0f64, |m, (_, &p)| m.max(p));
    Ok(pulls[own] - competing)
}

/// `sum_v atan(steepness * H_alpha(v))`.
pub fn arctan_objective(g: &MultiGraph, alpha: &WeightVector, c: &Clustering, steepness: f64) -> Result<f64> {
    check_steepness(steepness)?;
    g.check_alpha(alpha)?;
    Ok(HoldingEvaluator::new(g, c)?.objective(alpha.as_slice(), steepness))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutObjective {
    /// `sum_k alpha_k S^k`.
    pub value: f64,
    /// `S^k`: total type-`k` weight on edges whose endpoints lie in different clusters.
    pub per_type: Vec<f64>,
}

/// Weight of cut edges under a linear aggregation (unclamped).
pub fn cut_objective(g: &MultiGraph, alpha: &WeightVector, c: &Clustering) -> Result<CutObjective> {
    g.check_alpha(alpha)?;
    let c = c.over(g.nodes())?;
    let mut per_type = vec![0.0; g.k()];
    for r in g.edges() {
        if c.label_of(r.u) != c.label_of(r.v) {
            for (s, w) in per_type.iter_mut().zip(r.w) {
                *s += w;
            }
        }
    }
    let value = alpha.as_slice().iter().zip(&per_type).map(|(a, s)| a * s).sum();
    Ok(CutObjective { value, per_type })
}

/// Minimum of `sum_k alpha_k S^k` over the probability simplex, by enumerating
/// its vertices: returns the minimising type and the value.
pub fn simplex_cut_minimum(per_type: &[f64]) -> Option<(usize, f64)> {
    per_type
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Result of [`recover_weights`].
#[derive(Debug, Clone, Serialize)]
pub struct Recovery {
    pub alpha: WeightVector,
    pub report: HoldingReport,
    /// Best initial candidate (coordinate vector or random sample).
    pub initial_alpha: WeightVector,
    pub initial_objective: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// False when the budget ran out before the search improved on the
    /// initial candidate.
    pub improved: bool,
}

/// Maximises the arctan holding-power objective over the unit sphere.
///
/// All coordinate vectors and `cfg.n_starts` random sphere points are scored
/// first; compass search then starts from the best of them with whatever
/// budget remains.
pub fn recover_weights(g: &MultiGraph, truth: &Clustering, cfg: &SearchConfig) -> Result<Recovery> {
    cfg.validate()?;
    let evaluator = HoldingEvaluator::new(g, truth)?;
    recover_with(&evaluator, cfg, cfg.steepness)
}

/// [`recover_weights`] with an explicit steepness, reusing a prepared evaluator.
pub fn recover_with(evaluator: &HoldingEvaluator<'_>, cfg: &SearchConfig, steepness: f64) -> Result<Recovery> {
    check_steepness(steepness)?;
    let k = evaluator.graph.k();
    let mut candidates: Vec<Vec<f64>> = (0..k).map(|t| WeightVector::unit(k, t).into_inner()).collect();
    candidates.extend(random_starts(k, Domain::Sphere, cfg.n_starts, sub_seed(cfg.seed, 1)));

    let mut evaluations = 0;
    let mut best: Option<(Vec<f64>, f64)> = None;
    for cand in candidates {
        if evaluations >= cfg.max_evaluations {
            break;
        }
        let v = evaluator.objective(&cand, steepness);
        evaluations += 1;
        if best.as_ref().is_none_or(|b| v > b.1) {
            best = Some((cand, v));
        }
    }
    let (start, start_value) =
        best.ok_or_else(|| Error::LimitExceeded("evaluation budget is zero".into()))?;

    let remaining = cfg.max_evaluations - evaluations;
    let (point, converged, improved) = if remaining == 0 {
        (start.clone(), false, false)
    } else {
        let budget = SearchConfig {
            max_evaluations: remaining,
            ..cfg.clone()
        };
        let mut f = |x: &[f64]| evaluator.objective(x, steepness);
        let r: SearchResult = pattern_search(&mut f, &start, Domain::Sphere, &budget)?;
        evaluations += r.evaluations;
        (r.best_point, r.converged, r.improved)
    };
    Ok(Recovery {
        report: evaluator.report(&point, steepness),
        alpha: WeightVector::new(point)?,
        initial_alpha: WeightVector::new(start)?,
        initial_objective: start_value,
        evaluations,
        converged,
        improved,
    })
}

/// VI distance between the forward clustering of the aggregated graph and the
/// truth; lower is better. An aggregate with no edges clusters into singletons.
pub fn inverse_objective(
    g: &MultiGraph,
    alpha: &WeightVector,
    truth: &Clustering,
    clusterer: &dyn Clusterer,
) -> Result<f64> {
    let agg = g.aggregate_linear(alpha, true)?;
    let (c, _) = cluster_or_singletons(&agg, clusterer)?;
    vi_distance(&c, truth)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParetoPoint {
    pub alpha: WeightVector,
    pub positive_fraction: f64,
    pub normalized_modularity: f64,
}

/// Points not dominated in (positive_fraction, normalized_modularity), sorted
/// by positive fraction. Exact duplicates collapse to the first occurrence.
pub fn pareto_front(points: &[ParetoPoint]) -> Vec<ParetoPoint> {
    let dominates = |a: &ParetoPoint, b: &ParetoPoint| {
        a.positive_fraction >= b.positive_fraction
            && a.normalized_modularity >= b.normalized_modularity
            && (a.positive_fraction > b.positive_fraction
                || a.normalized_modularity > b.normalized_modularity)
    };
    let mut front: Vec<ParetoPoint> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if points.iter().any(|q| dominates(q, p)) {
            continue;
        }
        let duplicate = points[..i].iter().any(|q| {
            q.positive_fraction == p.positive_fraction
                && q.normalized_modularity == p.normalized_modularity
        });
        if !duplicate {
            front.push(p.clone());
        }
    }
    front.sort_by(|a, b| a.positive_fraction.total_cmp(&b.positive_fraction));
    front
}

#[derive(Debug, Clone, Serialize)]
pub struct ParetoSweep {
    /// Every evaluated weight vector.
    pub evaluated: Vec<ParetoPoint>,
    pub frontier: Vec<ParetoPoint>,
    /// Modularity the normalisation divides by.
    pub reference_modularity: f64,
}

/// Trade-off between positive holding and modularity of the truth.
///
/// Evaluates coordinate vectors, `cfg.n_samples` sphere samples and the
/// optima of five weighted sums `(1 - t) * atan_obj / (n pi/2) + t * Q` for
/// `t in {0, .25, .5, .75, 1}`. Modularity is normalised by that of
/// `reference_alpha` when given, otherwise by the largest observed value.
pub fn pareto_sweep(
    g: &MultiGraph,
    truth: &Clustering,
    cfg: &SearchConfig,
    reference_alpha: Option<&WeightVector>,
) -> Result<ParetoSweep> {
    cfg.validate()?;
    let evaluator = HoldingEvaluator::new(g, truth)?;
    let truth = evaluator.truth().clone();
    let k = g.k();
    let n = g.n_nodes().max(1) as f64;

    let truth_modularity = |alpha: &[f64]| -> Option<f64> {
        let agg = g.aggregate_linear(&WeightVector::new(alpha.to_vec()).ok()?, true).ok()?;
        modularity(&agg, &truth).ok()
    };

    let mut alphas: Vec<Vec<f64>> = (0..k).map(|t| WeightVector::unit(k, t).into_inner()).collect();
    alphas.extend(random_starts(k, Domain::Sphere, cfg.n_samples, sub_seed(cfg.seed, 2)));

    let per_run = (cfg.max_evaluations / 5).max(1);
    for (i, t) in [0.0, 0.25, 0.5, 0.75, 1.0].into_iter().enumerate() {
        let run_cfg = SearchConfig {
            max_evaluations: per_run,
            seed: sub_seed(cfg.seed, 10 + i as u64),
            ..cfg.clone()
        };
        let mut f = |x: &[f64]| {
            let holding = evaluator.objective(x, cfg.steepness) / (n * FRAC_PI_2);
            let q = if t > 0.0 {
                truth_modularity(x).unwrap_or(f64::NEG_INFINITY)
            } else {
                0.0
            };
            (1.0 - t) * holding + t * q
        };
        let start = random_starts(k, Domain::Sphere, 1, run_cfg.seed).remove(0);
        let r = pattern_search(&mut f, &start, Domain::Sphere, &run_cfg)?;
        alphas.push(r.best_point);
    }

    let mut raw: Vec<(Vec<f64>, f64, f64)> = Vec::new();
    for a in alphas {
        if let Some(q) = truth_modularity(&a) {
            let frac = positive_fraction(&evaluator.holding_powers(&a));
            raw.push((a, frac, q));
        }
    }
    let reference = match reference_alpha {
        Some(r) => {
            g.check_alpha(r)?;
            truth_modularity(r.as_slice()).unwrap_or(0.0)
        }
        None => raw.iter().map(|p| p.2).fold(f64::NEG_INFINITY, f64::max),
    };
    let scale = if reference > 0.0 { reference } else { 1.0 };
    let evaluated: Vec<ParetoPoint> = raw
        .into_iter()
        .map(|(a, frac, q)| {
            Ok(ParetoPoint {
                alpha: WeightVector::new(a)?,
                positive_fraction: frac,
                normalized_modularity: q / scale,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ParetoSweep {
        frontier: pareto_front(&evaluated),
        evaluated,
        reference_modularity: reference,
    })
}

/// Pearson correlation; `None` when either sequence has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some(sxy / (sxx.sqrt() * syy.sqrt()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationPoint {
    pub steepness: f64,
    /// `None` when either measure was constant across the samples.
    pub correlation: Option<f64>,
}

/// For each steepness, correlates the arctan objective of the truth with the
/// negated VI distance between forward clusterings and the truth, over
/// `cfg.n_samples` sphere samples.
pub fn correlation_sweep(
    g: &MultiGraph,
    truth: &Clustering,
    clusterer: &dyn Clusterer,
    steepness_grid: &[f64],
    cfg: &SearchConfig,
) -> Result<Vec<CorrelationPoint>> {
    if steepness_grid.is_empty() {
        return Err(Error::InvalidParameter("steepness grid is empty".into()));
    }
    for &s in steepness_grid {
        check_steepness(s)?;
    }
    cfg.validate()?;
    let evaluator = HoldingEvaluator::new(g, truth)?;
    let alphas = random_starts(g.k(), Domain::Sphere, cfg.n_samples, sub_seed(cfg.seed, 3));

    let sample = |a: &Vec<f64>| -> Result<(Vec<f64>, f64)> {
        let powers = evaluator.holding_powers(a);
        let vi = inverse_objective(g, &WeightVector::new(a.clone())?, evaluator.truth(), clusterer)?;
        Ok((powers, -vi))
    };
    #[cfg(feature = "parallel")]
    let samples: Vec<(Vec<f64>, f64)> = {
        use rayon::prelude::*;
        alphas.par_iter().map(sample).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let samples: Vec<(Vec<f64>, f64)> = alphas.iter().map(sample).collect::<Result<_>>()?;

    let neg_vi: Vec<f64> = samples.iter().map(|s| s.1).collect();
    Ok(steepness_grid
        .iter()
        .map(|&s| {
            let obj: Vec<f64> = samples.iter().map(|(p, _)| arctan_sum(p, s)).collect();
            CorrelationPoint {
                steepness: s,
                correlation: pearson(&obj, &neg_vi),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Fixed-width histogram of holding powers over `[-max|H|, max|H|]`, bin width
/// `0.05 * max|H|`.
pub fn holding_histogram(powers: &[f64]) -> Vec<HistogramBin> {
    let max = powers.iter().fold(0.0f64, |m, h| m.max(h.abs()));
    if max == 0.0 {
        return vec![HistogramBin {
            lo: 0.0,
            hi: 0.0,
            count: powers.len(),
        }];
    }
    let width = 0.05 * max;
    let n_bins = 40;
    let mut bins: Vec<HistogramBin> = (0..n_bins)
        .map(|i| HistogramBin {
            lo: -max + i as f64 * width,
            hi: -max + (i + 1) as f64 * width,
            count: 0,
        })
        .collect();
    for &h in powers {
        let i = (((h + max) / width).floor() as usize).min(n_bins - 1);
        bins[i].count += 1;
    }
    bins
}
