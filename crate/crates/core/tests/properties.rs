mod common;

use std::sync::Arc;

use polyedge::clustering::Clustering;
use polyedge::community::{cluster_greedy_modularity, modularity, modularity_oracle, GreedyModularity};
use polyedge::discovery::{enumerate_pairs, unexpected_objective};
use polyedge::graph::Graph;
use polyedge::metaclustering::{
    build_meta_graph, cspa_consensus, invariant_groups, meta_delta, order_representatives, run_metaclustering,
    sample_alphas, Ensemble, OrderMode,
};
use polyedge::metrics::{entropy, mutual_information, setwise_information, vi_distance, vi_matrix};
use polyedge::multigraph::{MultiGraph, WeightVector};
use polyedge::nodes::NodeSet;
use polyedge::optimizer::{pattern_search, Domain, SearchConfig};
use polyedge::io::format_multigraph;
use polyedge::recovery::{cut_objective, pull, recover_weights, HoldingEvaluator};
use polyedge::synth::{generate_planted, perturb, PlantedSpec};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn multigraph(seed: u64, n: usize, k: usize) -> MultiGraph {
    let mut rng = common::rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < 0.45 {
                let w: Vec<f64> = (0..k)
                    .map(|_| if rng.random::<f64>() < 0.3 { 0.0 } else { rng.random_range(0.1..2.0) })
                    .collect();
                edges.push((u, v, w));
            }
        }
    }
    edges.push((0, n - 1, vec![1.0; k]));
    edges.sort_by_key(|e| (e.0, e.1));
    edges.dedup_by_key(|e| (e.0, e.1));
    let names = (0..k).map(|t| format!("t{t}")).collect();
    MultiGraph::new(NodeSet::numbered(n).shared(), names, edges).unwrap()
}

fn clustering(nodes: &Arc<NodeSet>, seed: u64, max_k: usize) -> Clustering {
    common::random_clustering(nodes, max_k, &mut common::rng(seed))
}

fn relabel(c: &Clustering, seed: u64) -> Clustering {
    let mut perm: Vec<usize> = (0..c.n_clusters()).collect();
    perm.shuffle(&mut common::rng(seed));
    let labels: Vec<usize> = c.labels().iter().map(|&l| perm[l] * 7 + 3).collect();
    Clustering::from_labels(Arc::clone(c.nodes()), &labels).unwrap()
}

fn weights(g: &Graph) -> Vec<(usize, usize, f64)> {
    let mut e = g.edges().to_vec();
    e.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    e
}

const POW2: [f64; 5] = [0.25, 0.5, 2.0, 4.0, 8.0];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vi_is_a_metric(seed in any::<u64>(), n in 2usize..40) {
        let nodes = NodeSet::numbered(n).shared();
        let a = clustering(&nodes, seed, 6);
        let b = clustering(&nodes, seed ^ 1, 6);
        let c = clustering(&nodes, seed ^ 2, 6);
        let (ab, bc, ac) = (vi_distance(&a, &b).unwrap(), vi_distance(&b, &c).unwrap(), vi_distance(&a, &c).unwrap());
        prop_assert_eq!(ab, vi_distance(&b, &a).unwrap());
        prop_assert!(ab >= 0.0 && ab <= (n as f64).ln() + 1e-12);
        prop_assert!(ac <= ab + bc + 1e-9);
        prop_assert_eq!(vi_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn relabeling_changes_no_metric(seed in any::<u64>(), n in 1usize..40) {
        let nodes = NodeSet::numbered(n).shared();
        let a = clustering(&nodes, seed, 6);
        let b = clustering(&nodes, seed ^ 5, 6);
        let a2 = relabel(&a, seed);
        prop_assert!(a.same_partition(&a2));
        prop_assert!((entropy(&a) - entropy(&a2)).abs() <= 1e-12);
        prop_assert!((vi_distance(&a, &b).unwrap() - vi_distance(&a2, &b).unwrap()).abs() <= 1e-12);
        prop_assert!((mutual_information(&a, &b).unwrap() - mutual_information(&a2, &b).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn vi_matches_setwise_identity(seed in any::<u64>(), n in 1usize..60) {
        let nodes = NodeSet::numbered(n).shared();
        let a = clustering(&nodes, seed, 8);
        let b = clustering(&nodes, seed ^ 9, 8);
        let via_joint = 2.0 * setwise_information(&[&a, &b]).unwrap() - entropy(&a) - entropy(&b);
        prop_assert!((vi_distance(&a, &b).unwrap() - via_joint).abs() <= 1e-9);
    }

    #[test]
    fn vi_matrix_is_symmetric_with_zero_diagonal(seed in any::<u64>(), m in 1usize..6) {
        let nodes = NodeSet::numbered(20).shared();
        let cs: Vec<Clustering> = (0..m as u64).map(|i| clustering(&nodes, seed ^ i, 5)).collect();
        let refs: Vec<&Clustering> = cs.iter().collect();
        let d = vi_matrix(&refs).unwrap();
        for i in 0..m {
            prop_assert_eq!(d[i][i], 0.0);
            for j in 0..m {
                prop_assert_eq!(d[i][j], d[j][i]);
            }
        }
    }

    #[test]
    fn modularity_matches_oracle_and_is_scale_invariant(seed in any::<u64>(), n in 2usize..16, c in 0.01f64..100.0) {
        let mut rng = common::rng(seed);
        let g = common::random_graph(n, 0.4, &mut rng);
        let part = common::random_clustering(g.nodes(), 5, &mut rng);
        let q = modularity(&g, &part).unwrap();
        prop_assert!((q - modularity_oracle(&g, &part).unwrap()).abs() <= 1e-12);
        prop_assert!((q - modularity(&g.scaled(c).unwrap(), &part).unwrap()).abs() <= 1e-12);
        prop_assert!((-1.0..=1.0).contains(&q));
    }

    #[test]
    fn greedy_is_bounded_by_exhaustive_search(seed in any::<u64>(), n in 2usize..8) {
        let g = common::random_graph(n, 0.5, &mut common::rng(seed));
        let greedy = cluster_greedy_modularity(&g).unwrap();
        let q = modularity(&g, &greedy).unwrap();
        let (_, q_max) = common::best_partition(&g);
        let q_single = modularity(&g, &Clustering::singletons(Arc::clone(g.nodes()))).unwrap();
        prop_assert!(q <= q_max + 1e-12);
        prop_assert!(q >= q_single - 1e-12);
    }

    #[test]
    fn greedy_ignores_node_order(seed in any::<u64>(), n in 3usize..30) {
        let mut rng = common::rng(seed);
        let g = common::random_graph(n, 0.3, &mut rng);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        // node i of the original becomes position perm[i] of the copy
        let mut ids = vec![String::new(); n];
        for (i, &p) in perm.iter().enumerate() {
            ids[p] = g.nodes().id(i).to_string();
        }
        let edges = g.edges().iter().map(|&(u, v, w)| (perm[u], perm[v], w)).collect();
        let h = Graph::new(NodeSet::new(ids).unwrap().shared(), edges).unwrap();
        let a = cluster_greedy_modularity(&g).unwrap();
        let b = cluster_greedy_modularity(&h).unwrap().aligned_to(g.nodes()).unwrap();
        prop_assert!(a.same_partition(&b));
    }

    #[test]
    fn linear_aggregation_scales_and_extracts(seed in any::<u64>(), k in 1usize..4, c in 0.1f64..10.0) {
        let g = multigraph(seed, 10, k);
        let alpha = sample_alphas(k, 1, seed).unwrap().remove(0);
        let base = g.aggregate_linear(&alpha, true).unwrap();
        let scaled = g.aggregate_linear(&alpha.scaled(c), true).unwrap();
        let (wb, ws) = (weights(&base), weights(&scaled));
        prop_assert_eq!(wb.len(), ws.len());
        for (x, y) in wb.iter().zip(&ws) {
            prop_assert!((x.2 * c - y.2).abs() <= 1e-12 * y.2.max(1.0));
        }
        if base.n_edges() > 0 {
            let part = clustering(g.nodes(), seed, 3);
            let diff = modularity(&base, &part).unwrap() - modularity(&scaled, &part).unwrap();
            prop_assert!(diff.abs() <= 1e-12);
        }
        for t in 0..k {
            let unit = g.aggregate_linear(&WeightVector::unit(k, t), true).unwrap();
            prop_assert_eq!(weights(&unit), weights(&g.extract_type(t).unwrap()));
        }
    }

    #[test]
    fn product_is_commutative(seed in any::<u64>()) {
        let g = multigraph(seed, 10, 3);
        for (a, b) in [("t0", "t1"), ("t1", "t2"), ("t0", "t2")] {
            prop_assert_eq!(
                weights(&g.aggregate_product(a, b).unwrap()),
                weights(&g.aggregate_product(b, a).unwrap())
            );
        }
    }

    #[test]
    fn normalization_is_idempotent(seed in any::<u64>(), k in 1usize..4) {
        let once = multigraph(seed, 12, k).normalize_edge_types().unwrap();
        let twice = once.normalize_edge_types().unwrap();
        prop_assert_eq!(once.n_edges(), twice.n_edges());
        for e in 0..once.n_edges() {
            for (x, y) in once.edge(e).w.iter().zip(twice.edge(e).w) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn holding_power_argmax_is_scale_invariant(seed in any::<u64>(), k in 1usize..4, ci in 0usize..5) {
        let c = POW2[ci];
        let g = multigraph(seed, 10, k);
        let truth = clustering(g.nodes(), seed, 3);
        let alpha = sample_alphas(k, 1, seed ^ 3).unwrap().remove(0);
        let ev = HoldingEvaluator::new(&g, &truth).unwrap();
        let h = ev.holding_powers(alpha.as_slice());
        let hc = ev.holding_powers(alpha.scaled(c).as_slice());
        for (x, y) in h.iter().zip(&hc) {
            prop_assert_eq!(x * c, *y);
        }
        prop_assert_eq!(
            ev.report(alpha.as_slice(), 1.0).positive_fraction,
            ev.report(alpha.scaled(c).as_slice(), 1.0).positive_fraction
        );
        let argmax = |a: &WeightVector, v: &str| {
            (0..truth.n_clusters())
                .map(|l| pull(&g, a, &truth, v, l).unwrap())
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (l, p)| if p > best.1 { (l, p) } else { best })
                .0
        };
        for v in g.nodes().iter() {
            prop_assert_eq!(argmax(&alpha, v), argmax(&alpha.scaled(c), v));
        }
    }

    #[test]
    fn cut_objective_is_linear(seed in any::<u64>(), k in 1usize..4) {
        let g = multigraph(seed, 10, k);
        let truth = clustering(g.nodes(), seed, 3);
        let alpha = WeightVector::new((0..k).map(|t| (t as f64 - 1.0) * 0.7 + 0.1).collect()).unwrap();
        let cut = cut_objective(&g, &alpha, &truth).unwrap();
        let direct: f64 = g
            .edges()
            .filter(|r| truth.label_of(r.u) != truth.label_of(r.v))
            .map(|r| r.w.iter().zip(alpha.as_slice()).map(|(w, a)| w * a).sum::<f64>())
            .sum();
        prop_assert!((cut.value - direct).abs() <= 1e-12);
        let linear: f64 = cut.per_type.iter().zip(alpha.as_slice()).map(|(s, a)| s * a).sum();
        prop_assert!((cut.value - linear).abs() <= 1e-12);
    }

    #[test]
    fn recovery_never_loses_to_a_coordinate_vector(seed in any::<u64>(), k in 1usize..4) {
        let g = multigraph(seed, 12, k);
        let truth = clustering(g.nodes(), seed, 3);
        let cfg = SearchConfig { max_evaluations: 200, seed, ..SearchConfig::default() };
        let r = recover_weights(&g, &truth, &cfg).unwrap();
        let ev = HoldingEvaluator::new(&g, &truth).unwrap();
        let best_unit = (0..k)
            .map(|t| ev.objective(WeightVector::unit(k, t).as_slice(), 1.0))
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(r.report.objective_value >= best_unit);
        prop_assert!(r.evaluations <= cfg.max_evaluations);
    }

    #[test]
    fn pattern_search_is_monotone_and_deterministic(seed in any::<u64>(), d in 1usize..4) {
        let centre: Vec<f64> = (0..d).map(|i| ((seed >> (8 * i)) % 100) as f64 / 100.0 - 0.5).collect();
        let f = |x: &[f64]| -> f64 { -x.iter().zip(&centre).map(|(a, b)| (a - b).powi(2) * 3.0 - (a * 7.0).sin() * 0.1).sum::<f64>() };
        let cfg = SearchConfig { max_evaluations: 300, seed, ..SearchConfig::default() };
        for domain in [Domain::Box { lo: -1.0, hi: 1.0 }, Domain::Sphere] {
            let start = vec![0.3; d];
            let a = pattern_search(&mut { f }, &start, domain, &cfg).unwrap();
            let b = pattern_search(&mut { f }, &start, domain, &cfg).unwrap();
            prop_assert!(a.trace.windows(2).all(|w| w[1] >= w[0]));
            prop_assert!(a.evaluations <= cfg.max_evaluations);
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn consensus_ignores_input_order(seed in any::<u64>(), m in 1usize..6) {
        let nodes = NodeSet::numbered(15).shared();
        let cs: Vec<Clustering> = (0..m as u64).map(|i| clustering(&nodes, seed ^ (i * 31), 4)).collect();
        let mut refs: Vec<&Clustering> = cs.iter().collect();
        let a = cspa_consensus(&refs, &GreedyModularity).unwrap();
        refs.shuffle(&mut common::rng(seed));
        let b = cspa_consensus(&refs, &GreedyModularity).unwrap();
        prop_assert!(a.same_partition(&b));
    }

    #[test]
    fn meta_graph_weights_are_positive_and_peak_at_equality(seed in any::<u64>(), m in 2usize..7) {
        let nodes = NodeSet::numbered(12).shared();
        let mut cs: Vec<Clustering> = (0..m as u64).map(|i| clustering(&nodes, seed ^ (i * 17), 4)).collect();
        cs.push(relabel(&cs[0], seed));
        let e = Ensemble::from_clusterings(&cs).unwrap();
        let g = build_meta_graph(&e).unwrap();
        let top = 1.0 / meta_delta(12);
        prop_assert_eq!(g.n_edges(), cs.len() * (cs.len() - 1) / 2);
        for &(i, j, w) in g.edges() {
            prop_assert!(w > 0.0);
            let equal = cs[i].same_partition(&cs[j]);
            prop_assert_eq!(equal, (w - top).abs() <= 1e-9 * top, "pair {} {}", i, j);
        }
    }

    #[test]
    fn invariant_groups_are_disjoint_and_shrink_under_refinement(seed in any::<u64>(), m in 1usize..5) {
        let nodes = NodeSet::numbered(20).shared();
        let mut cs: Vec<Clustering> = (0..m as u64).map(|i| clustering(&nodes, seed ^ (i * 13), 3)).collect();
        let before = invariant_groups(&Ensemble::from_clusterings(&cs).unwrap()).unwrap();
        let mut seen = vec![false; 20];
        for v in before.iter().flatten() {
            prop_assert!(!seen[*v]);
            seen[*v] = true;
        }
        // split the first cluster of the first clustering in half
        let mut labels = cs[0].labels().to_vec();
        let fresh = cs[0].n_clusters();
        let members: Vec<usize> = (0..20).filter(|&v| labels[v] == 0).collect();
        for &v in &members[..members.len() / 2] {
            labels[v] = fresh;
        }
        cs[0] = Clustering::from_labels(Arc::clone(&nodes), &labels).unwrap();
        let after = invariant_groups(&Ensemble::from_clusterings(&cs).unwrap()).unwrap();
        for group in &after {
            prop_assert!(before.iter().any(|b| group.iter().all(|v| b.contains(v))));
        }
    }

    #[test]
    fn exact_ordering_prefix_information_grows(seed in any::<u64>(), m in 1usize..7) {
        let n = 25;
        let nodes = NodeSet::numbered(n).shared();
        let cs: Vec<Clustering> = (0..m as u64).map(|i| clustering(&nodes, seed ^ (i * 7), 4)).collect();
        let refs: Vec<&Clustering> = cs.iter().collect();
        for mode in [OrderMode::Exact, OrderMode::Greedy] {
            let o = order_representatives(&refs, mode).unwrap();
            let mut sorted = o.order.clone();
            sorted.sort();
            prop_assert_eq!(sorted, (0..m).collect::<Vec<_>>());
            prop_assert!(o.scores.windows(2).all(|w| w[1] >= w[0] - 1e-12));
            prop_assert!(o.scores.iter().all(|&s| s <= (n as f64).ln() + 1e-12));
        }
    }

    #[test]
    fn metaclustering_report_is_consistent(seed in any::<u64>()) {
        let nodes = NodeSet::numbered(18).shared();
        let base: Vec<Clustering> = (0..3u64).map(|i| clustering(&nodes, seed ^ (i * 101), 3)).collect();
        let cs: Vec<Clustering> = (0..12).map(|i| relabel(&base[i % 3], seed ^ i as u64)).collect();
        let r = run_metaclustering(&Ensemble::from_clusterings(&cs).unwrap(), &GreedyModularity, None).unwrap();
        prop_assert_eq!(r.representatives.len(), r.meta_partition.n_clusters() - r.dropped.len());
        prop_assert_eq!(r.representatives.len(), r.ordering_scores.len());
        prop_assert!(r.ordering_scores.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        let mut s = r.seriation.clone();
        s.sort();
        prop_assert_eq!(s, (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn sampled_alphas_are_unit_vectors(seed in any::<u64>(), k in 1usize..6) {
        let a = sample_alphas(k, 20, seed).unwrap();
        prop_assert_eq!(&a, &sample_alphas(k, 20, seed).unwrap());
        for v in &a {
            prop_assert!((v.norm() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn perturbation_keeps_support(seed in any::<u64>(), k in 1usize..4) {
        let g = multigraph(seed, 12, k);
        let p = perturb(&g, seed).unwrap();
        let original: std::collections::HashSet<(usize, usize)> = g.edges().map(|r| (r.u, r.v)).collect();
        prop_assert!(p.edges().all(|r| original.contains(&(r.u, r.v))));
        prop_assert!(p.edges().all(|r| r.w.iter().all(|&w| w >= 0.0)));
    }

    #[test]
    fn planted_graphs_are_reproducible(seed in any::<u64>()) {
        let spec = PlantedSpec { n: 60, n_clusters: 3, avg_degree: 6.0, mixing: 0.2, k_types: 2, noise_types: 1, seed };
        let (a, ta) = generate_planted(&spec).unwrap();
        let (b, tb) = generate_planted(&spec).unwrap();
        prop_assert_eq!(format_multigraph(&a), format_multigraph(&b));
        prop_assert_eq!(ta.labels(), tb.labels());
    }

    #[test]
    fn discovery_objective_is_split_correctly(seed in any::<u64>(), lambda in 0.0f64..3.0) {
        let g = multigraph(seed, 12, 3);
        let given = clustering(g.nodes(), seed, 3);
        let alpha = sample_alphas(3, 1, seed).unwrap().remove(0);
        let (zero, r0) = unexpected_objective(&g, &alpha, &[&given], &GreedyModularity, 0.0).unwrap();
        if !r0.empty_aggregate {
            let agg = g.aggregate_linear(&alpha, true).unwrap();
            prop_assert_eq!(zero, modularity(&agg, &r0.clustering).unwrap());
            let (v, _) = unexpected_objective(&g, &alpha, &[&given], &GreedyModularity, lambda).unwrap();
            let novelty = v - zero;
            prop_assert!(novelty >= -1e-12 && novelty <= lambda + 1e-12);
        }
    }

    #[test]
    fn pair_rows_match_either_product_order(seed in any::<u64>()) {
        let g = multigraph(seed, 12, 3);
        let reference = clustering(g.nodes(), seed, 3);
        let rows = enumerate_pairs(&g, &reference, &GreedyModularity, true).unwrap();
        prop_assert_eq!(rows.len(), 6);
        for row in rows.iter().filter(|r| r.types.len() == 2) {
            let names = g.edge_types();
            let swapped = g.aggregate_product(&names[row.types[1]], &names[row.types[0]]).unwrap();
            if swapped.n_edges() > 0 {
                let c = cluster_greedy_modularity(&swapped).unwrap();
                prop_assert_eq!(row.modularity, Some(modularity(&swapped, &c).unwrap()));
                prop_assert_eq!(row.vi_to_reference, Some(vi_distance(&c, &reference).unwrap()));
            } else {
                prop_assert_eq!(row.modularity, None);
            }
        }
    }
}
