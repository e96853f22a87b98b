//! Searching for good clusterings that differ from the ones already known.
//!
//! A weight vector is scored by the modularity of its forward clustering plus
//! `lambda` times the smallest VI distance (scaled by `ln n`) to any given
//! clustering.

use std::cell::RefCell;
use std::sync::Arc;

use serde::Serialize;

use crate::clustering::Clustering;
use crate::community::{cluster_or_singletons, modularity, Clusterer};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::vi_distance;
use crate::metaclustering::labels_only;
use crate::multigraph::{MultiGraph, WeightVector};
use crate::optimizer::{multistart, Domain, SearchConfig};

/// Normalised novelty below which a discovery result is flagged.
pub const LOW_NOVELTY: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscoveryReport {
    pub alpha: WeightVector,
    #[serde(serialize_with = "labels_only")]
    pub clustering: Clustering,
    pub modularity: f64,
    pub vi_to_given: Vec<f64>,
    /// `modularity + lambda * min(vi_to_given) / ln n`, or `-inf` when the
    /// aggregate has no edges.
    pub scalarized: f64,
    pub lambda: f64,
    pub empty_aggregate: bool,
    /// Set when `min(vi_to_given) / ln n` falls below [`LOW_NOVELTY`].
    pub low_novelty: bool,
    pub evaluations: usize,
}

impl DiscoveryReport {
    pub fn min_vi(&self) -> f64 {
        self.vi_to_given.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn check_inputs(given: &[&Clustering], lambda: f64) -> Result<()> {
    if given.is_empty() {
        return Err(Error::InvalidParameter("at least one given clustering is required".into()));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda must be nonnegative, got {lambda}")));
    }
    Ok(())
}

fn novelty_scale(n: usize) -> f64 {
    if n >= 2 {
        (n as f64).ln()
    } else {
        1.0
    }
}

/// Scores one weight vector; see the module docs.
pub fn unexpected_objective(
    g: &MultiGraph,
    alpha: &WeightVector,
    given: &[&Clustering],
    clusterer: &dyn Clusterer,
    lambda: f64,
) -> Result<(f64, DiscoveryReport)> {
    check_inputs(given, lambda)?;
    let agg = g.aggregate_linear(alpha, true)?;
    let (clustering, empty) = cluster_or_singletons(&agg, clusterer)?;
    let vi_to_given = given
        .iter()
        .map(|c| vi_distance(&clustering, c))
        .collect::<Result<Vec<f64>>>()?;
    let min_vi = vi_to_given.iter().copied().fold(f64::INFINITY, f64::min);
    let novelty = min_vi / novelty_scale(g.n_nodes());
    let (q, scalarized) = if empty {
        (f64::NEG_INFINITY, f64::NEG_INFINITY)
    } else {
        let q = modularity(&agg, &clustering)?;
        (q, q + lambda * novelty)
    };
    let report = DiscoveryReport {
        alpha: alpha.clone(),
        clustering,
        modularity: q,
        vi_to_given,
        scalarized,
        lambda,
        empty_aggregate: empty,
        low_novelty: novelty < LOW_NOVELTY,
        evaluations: 1,
    };
    Ok((scalarized, report))
}

/// Multistart compass search over `[-1, 1]^k` for the weight vector with the
/// highest [`unexpected_objective`], warm-started from every coordinate vector.
/// `cfg.lambda` sets the trade-off.
pub fn find_unexpected(
    g: &MultiGraph,
    given: &[&Clustering],
    cfg: &SearchConfig,
    clusterer: &dyn Clusterer,
) -> Result<DiscoveryReport> {
    cfg.validate()?;
    check_inputs(given, cfg.lambda)?;
    let k = g.k();
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let mut f = |x: &[f64]| -> f64 {
        let scored = WeightVector::new(x.to_vec())
            .and_then(|a| unexpected_objective(g, &a, given, clusterer, cfg.lambda));
        match scored {
            Ok((v, _)) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NEG_INFINITY
            }
        }
    };
    let warm: Vec<Vec<f64>> = (0..k).map(|t| WeightVector::unit(k, t).into_inner()).collect();
    let result = multistart(&mut f, k, Domain::Box { lo: -1.0, hi: 1.0 }, cfg, &warm)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let alpha = WeightVector::new(result.best_point)?;
    let (_, mut report) = unexpected_objective(g, &alpha, given, clusterer, cfg.lambda)?;
    report.evaluations = result.evaluations;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairTableRow {
    /// A type name, or `a*b` for the product of two types.
    pub label: String,
    /// Indices of the aggregated types (one or two).
    pub types: Vec<usize>,
    /// `None` when the aggregate has no edges.
    pub modularity: Option<f64>,
    pub vi_to_reference: Option<f64>,
    #[serde(skip)]
    pub clustering: Option<Clustering>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairOptions {
    pub include_singletons: bool,
    /// Also score `a*a` for every type.
    pub include_self_pairs: bool,
}

/// [`enumerate_pairs_with`] without self pairs.
pub fn enumerate_pairs(
    g: &MultiGraph,
    reference: &Clustering,
    clusterer: &dyn Clusterer,
    include_singletons: bool,
) -> Result<Vec<PairTableRow>> {
    let opts = PairOptions {
        include_singletons,
        include_self_pairs: false,
    };
    enumerate_pairs_with(g, reference, clusterer, &opts)
}

/// Clusters every single type (optionally) and every pairwise product, and
/// scores each against `reference`. Rows are sorted by VI descending; rows with
/// an empty aggregate come last.
pub fn enumerate_pairs_with(
    g: &MultiGraph,
    reference: &Clustering,
    clusterer: &dyn Clusterer,
    opts: &PairOptions,
) -> Result<Vec<PairTableRow>> {
    let reference = reference.aligned_to(g.nodes())?;
    let names = g.edge_types();
    let k = g.k();
    let mut specs: Vec<Vec<usize>> = Vec::new();
    if opts.include_singletons {
        specs.extend((0..k).map(|t| vec![t]));
    }
    for a in 0..k {
        let start = if opts.include_self_pairs { a } else { a + 1 };
        specs.extend((start..k).map(|b| vec![a, b]));
    }

    let row = |types: &Vec<usize>| -> Result<PairTableRow> {
        let (label, agg): (String, Graph) = match types[..] {
            [t] => (names[t].clone(), g.extract_type(t)?),
            [a, b] => (format!("{}*{}", names[a], names[b]), g.aggregate_product(&names[a], &names[b])?),
            _ => unreachable!("rows aggregate one or two types"),
        };
        if agg.n_edges() == 0 {
            return Ok(PairTableRow {
                label,
                types: types.clone(),
                modularity: None,
                vi_to_reference: None,
                clustering: None,
            });
        }
        let c = clusterer.cluster(&agg)?;
        Ok(PairTableRow {
            label,
            types: types.clone(),
            modularity: Some(modularity(&agg, &c)?),
            vi_to_reference: Some(vi_distance(&c, &reference)?),
            clustering: Some(c),
        })
    };
    #[cfg(feature = "parallel")]
    let mut rows: Vec<PairTableRow> = {
        use rayon::prelude::*;
        specs.par_iter().map(row).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let mut rows: Vec<PairTableRow> = specs.iter().map(row).collect::<Result<_>>()?;

    rows.sort_by(|a, b| match (a.vi_to_reference, b.vi_to_reference) {
        (Some(x), Some(y)) => y.total_cmp(&x),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistantSelection {
    /// Candidate indices in selection order.
    pub order: Vec<usize>,
    /// Minimum VI from each selected candidate to everything chosen before it
    /// (the reference included).
    pub min_distances: Vec<f64>,
    /// Every selected candidate coincides with the reference or an earlier pick.
    pub degenerate: bool,
}

/// Farthest-point selection of `m` candidates, starting from `reference`.
/// Ties go to the lower index.
pub fn select_distant_set(candidates: &[&Clustering], reference: &Clustering, m: usize) -> Result<DistantSelection> {
    if m > candidates.len() {
        return Err(Error::InvalidParameter(format!(
            "cannot select {m} of {} candidates",
            candidates.len()
        )));
    }
    let nodes = Arc::clone(reference.nodes());
    let cands: Vec<Clustering> = candidates
        .iter()
        .map(|c| c.aligned_to(&nodes))
        .collect::<Result<_>>()?;
    let mut nearest: Vec<f64> = cands
        .iter()
        .map(|c| vi_distance(c, reference))
        .collect::<Result<_>>()?;
    let mut used = vec![false; cands.len()];
    let mut order = Vec::with_capacity(m);
    let mut min_distances = Vec::with_capacity(m);
    for _ in 0..m {
        let next = (0..cands.len())
            .filter(|&i| !used[i])
            .fold(None, |best: Option<usize>, i| match best {
                Some(b) if nearest[b] >= nearest[i] => Some(b),
                _ => Some(i),
            })
            .expect("m <= candidate count");
        used[next] = true;
        order.push(next);
        min_distances.push(nearest[next]);
        for i in 0..cands.len() {
            if !used[i] {
                nearest[i] = nearest[i].min(vi_distance(&cands[i], &cands[next])?);
            }
        }
    }
    let degenerate = min_distances.iter().all(|&d| d <= 1e-12);
    Ok(DistantSelection {
        order,
        min_distances,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::GreedyModularity;
    use crate::nodes::NodeSet;

    fn two_type() -> MultiGraph {
        // type a: two triangles; type b: the same nodes split the other way
        MultiGraph::new(
            NodeSet::numbered(6).shared(),
            vec!["a".into(), "b".into()],
            vec![
                (0, 1, vec![1.0, 0.0]),
                (1, 2, vec![1.0, 0.0]),
                (0, 2, vec![1.0, 0.0]),
                (3, 4, vec![1.0, 0.0]),
                (4, 5, vec![1.0, 0.0]),
                (3, 5, vec![1.0, 0.0]),
                (2, 3, vec![1.0, 0.0]),
                (0, 3, vec![0.0, 1.0]),
                (1, 4, vec![0.0, 1.0]),
                (2, 5, vec![0.0, 1.0]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn lambda_zero_is_modularity() {
        let g = two_type();
        let truth = Clustering::from_labels(Arc::clone(g.nodes()), &[0, 0, 0, 1, 1, 1]).unwrap();
        let alpha = WeightVector::new(vec![1.0, 0.0]).unwrap();
        let (v, report) = unexpected_objective(&g, &alpha, &[&truth], &GreedyModularity, 0.0).unwrap();
        assert_eq!(v, report.modularity);
        assert!((v - 5.0 / 14.0).abs() < 1e-12);
        // the forward clustering is the given one, so novelty is zero
        let (v1, r1) = unexpected_objective(&g, &alpha, &[&truth], &GreedyModularity, 1.0).unwrap();
        assert_eq!(r1.vi_to_given, vec![0.0]);
        assert_eq!(v1, r1.modularity);
        assert!(r1.low_novelty);
    }

    #[test]
    fn empty_aggregate_scores_negative_infinity() {
        let g = two_type();
        let truth = Clustering::single_cluster(Arc::clone(g.nodes()));
        let alpha = WeightVector::new(vec![-1.0, -1.0]).unwrap();
        let (v, r) = unexpected_objective(&g, &alpha, &[&truth], &GreedyModularity, 1.0).unwrap();
        assert_eq!(v, f64::NEG_INFINITY);
        assert!(r.empty_aggregate);
        assert!(unexpected_objective(&g, &alpha, &[], &GreedyModularity, 1.0).is_err());
        assert!(unexpected_objective(&g, &alpha, &[&truth], &GreedyModularity, -1.0).is_err());
    }

    #[test]
    fn one_type_has_no_novelty() {
        let g = two_type().extract_type(0).unwrap();
        let g = MultiGraph::new(
            Arc::clone(g.nodes()),
            vec!["a".into()],
            g.edges().iter().map(|&(u, v, w)| (u, v, vec![w])).collect(),
        )
        .unwrap();
        let known = crate::community::cluster_greedy_modularity(&g.extract_type(0).unwrap()).unwrap();
        let cfg = SearchConfig {
            max_evaluations: 50,
            n_starts: 2,
            ..SearchConfig::default()
        };
        let r = find_unexpected(&g, &[&known], &cfg, &GreedyModularity).unwrap();
        assert!(r.low_novelty);
        assert!(r.alpha.as_slice()[0] > 0.0);
    }

    #[test]
    fn pair_table_counts_and_order() {
        let g = two_type();
        let truth = Clustering::from_labels(Arc::clone(g.nodes()), &[0, 0, 0, 1, 1, 1]).unwrap();
        let rows = enumerate_pairs(&g, &truth, &GreedyModularity, true).unwrap();
        assert_eq!(rows.len(), 3);
        // a and b share no edge, so the product is empty and comes last
        assert_eq!(rows[2].label, "a*b");
        assert_eq!(rows[2].modularity, None);
        assert!(rows[0].vi_to_reference >= rows[1].vi_to_reference);
        let with_self = enumerate_pairs_with(
            &g,
            &truth,
            &GreedyModularity,
            &PairOptions {
                include_singletons: false,
                include_self_pairs: true,
            },
        )
        .unwrap();
        assert_eq!(with_self.len(), 3);
    }

    #[test]
    fn distant_selection() {
        let nodes = NodeSet::numbered(8).shared();
        let c = |l: &[usize]| Clustering::from_labels(Arc::clone(&nodes), l).unwrap();
        let reference = c(&[0, 0, 0, 0, 1, 1, 1, 1]);
        let near = c(&[0, 0, 0, 1, 1, 1, 1, 1]);
        let far = c(&[0, 1, 0, 1, 0, 1, 0, 1]);
        let s = select_distant_set(&[&near, &far], &reference, 1).unwrap();
        assert_eq!(s.order, vec![1]);
        assert!(!s.degenerate);
        let s = select_distant_set(&[&reference, &reference], &reference, 2).unwrap();
        assert!(s.degenerate);
        assert_eq!(s.min_distances, vec![0.0, 0.0]);
        assert!(select_distant_set(&[&near], &reference, 2).is_err());
    }
}
