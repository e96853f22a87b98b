//! Synthetic multigraphs with known ground truth.
//!
//! * [`generate_planted`]: equal-size planted partition with signal and noise
//!   edge types.
//! * [`perturb`]: the `w <- nu (w + sigma)` weight perturbation.
//! * [`generate_grid`]: points in a grid of cells, one edge type per random
//!   one-dimensional projection.
//! * [`generate_factors`]: independent latent partitions, each observed through
//!   several noisy views.

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::multigraph::MultiGraph;
use crate::nodes::NodeSet;
use crate::rng::{sub_rng, Rng};

const WEIGHT_LO: f64 = 0.5;
const WEIGHT_HI: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub n: usize,
    pub n_clusters: usize,
    /// Expected number of edges per node.
    pub avg_degree: f64,
    /// Fraction of a node's expected edges leaving its cluster.
    pub mixing: f64,
    /// Total edge types, noise types included.
    pub k_types: usize,
    /// Trailing types that carry no cluster structure.
    pub noise_types: usize,
    pub seed: u64,
}

impl Default for PlantedSpec {
    fn default() -> Self {
        PlantedSpec {
            n: 500,
            n_clusters: 14,
            avg_degree: 20.0,
            mixing: 0.3,
            k_types: 1,
            noise_types: 0,
            seed: 0,
        }
    }
}

impl PlantedSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.n_clusters == 0 || self.n_clusters > self.n {
            return bad(format!("need 1 <= n_clusters <= n, got {} clusters for {} nodes", self.n_clusters, self.n));
        }
        if !(self.avg_degree > 0.0) || self.avg_degree >= self.n as f64 {
            return bad(format!("average degree {} is infeasible for {} nodes", self.avg_degree, self.n));
        }
        if !(0.0..=1.0).contains(&self.mixing) {
            return bad(format!("mixing must lie in [0, 1], got {}", self.mixing));
        }
        if self.k_types == 0 || self.noise_types >= self.k_types {
            return bad("need at least one signal type".into());
        }
        Ok(())
    }
}

/// Contiguous blocks whose sizes differ by at most one.
fn block_labels(n: usize, blocks: usize) -> Vec<usize> {
    let base = n / blocks;
    let extra = n % blocks;
    let mut labels = Vec::with_capacity(n);
    for b in 0..blocks {
        let size = base + usize::from(b < extra);
        labels.extend(std::iter::repeat_n(b, size));
    }
    labels
}

fn weight(rng: &mut Rng) -> f64 {
    rng.random_range(WEIGHT_LO..WEIGHT_HI)
}

fn ordered(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Uniformly random distinct pairs accepted by `keep`, excluding `taken`.
fn random_pairs(
    rng: &mut Rng,
    n: usize,
    count: usize,
    available: usize,
    taken: &HashSet<(usize, usize)>,
    keep: impl Fn(usize, usize) -> bool,
) -> Result<Vec<(usize, usize)>> {
    if count > available {
        return Err(Error::InvalidParameter(format!(
            "cannot place {count} edges among {available} candidate pairs"
        )));
    }
    let mut chosen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v || !keep(u, v) {
            continue;
        }
        let p = ordered(u, v);
        if !taken.contains(&p) && chosen.insert(p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Equal-size planted partition.
///
/// Each within-cluster pair is an edge with probability
/// `avg_degree (1 - mixing) / (s - 1)`; `n avg_degree mixing / 2` distinct
/// cross-cluster pairs are added on top. Every signal type weights every such
/// edge independently from `U(0.5, 1.5)`. A noise type gets a separate
/// uniformly random support of the same size with weights from the same
/// distribution, so it carries no information about the partition.
pub fn generate_planted(spec: &PlantedSpec) -> Result<(MultiGraph, Clustering)> {
    spec.validate()?;
    let n = spec.n;
    let labels = block_labels(n, spec.n_clusters);
    let mut rng = sub_rng(spec.seed, 0);

    let mut support: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for size in (0..spec.n_clusters).map(|b| labels.iter().filter(|&&l| l == b).count()) {
        if size >= 2 {
            let p = spec.avg_degree * (1.0 - spec.mixing) / (size - 1) as f64;
            if p > 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "clusters of {size} nodes cannot reach internal degree {}",
                    spec.avg_degree * (1.0 - spec.mixing)
                )));
            }
            for u in start..start + size {
                for v in u + 1..start + size {
                    if rng.random::<f64>() < p {
                        support.push((u, v));
                    }
                }
            }
        }
        start += size;
    }
    let internal_pairs: usize = (0..spec.n_clusters)
        .map(|b| {
            let s = labels.iter().filter(|&&l| l == b).count();
            s * s.saturating_sub(1) / 2
        })
        .sum();
    let cross_pairs = n * (n - 1) / 2 - internal_pairs;
    let n_external = (n as f64 * spec.avg_degree * spec.mixing / 2.0).round() as usize;
    let taken: HashSet<(usize, usize)> = support.iter().copied().collect();
    support.extend(random_pairs(&mut rng, n, n_external, cross_pairs, &taken, |u, v| {
        labels[u] != labels[v]
    })?);

    let k = spec.k_types;
    let n_signal = k - spec.noise_types;
    let mut edges: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    for &p in &support {
        let w = edges.entry(p).or_insert_with(|| vec![0.0; k]);
        for slot in w.iter_mut().take(n_signal) {
            *slot = weight(&mut rng);
        }
    }
    for t in n_signal..k {
        let mut noise_rng = sub_rng(spec.seed, 1 + t as u64);
        let pairs = random_pairs(&mut noise_rng, n, support.len(), n * (n - 1) / 2, &HashSet::new(), |_, _| true)?;
        for p in pairs {
            edges.entry(p).or_insert_with(|| vec![0.0; k])[t] = weight(&mut noise_rng);
        }
    }

    let mut names: Vec<String> = (0..n_signal).map(|t| format!("signal_{t}")).collect();
    names.extend((0..spec.noise_types).map(|t| format!("noise_{t}")));
    let nodes = NodeSet::numbered(n).shared();
    let g = MultiGraph::new(
        Arc::clone(&nodes),
        names,
        edges.into_iter().map(|((u, v), w)| (u, v, w)).collect(),
    )?;
    Ok((g, Clustering::from_labels(nodes, &labels)?))
}

/// Parameters of the weight perturbation `w <- nu (w + sigma)` with
/// `sigma ~ U(-f w_a, f w_a)`, `nu ~ U(nu_lo, nu_hi)`, `w_a` the mean stored
/// weight of the type and `f = sigma_factor`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub sigma_factor: f64,
    pub nu_lo: f64,
    pub nu_hi: f64,
}

impl Default for Perturbation {
    fn default() -> Self {
        Perturbation {
            sigma_factor: 2.0,
            nu_lo: 0.0,
            nu_hi: 1.0,
        }
    }
}

impl Perturbation {
    /// `sigma = 0`, `nu = 1`.
    pub fn identity() -> Self {
        Perturbation {
            sigma_factor: 0.0,
            nu_lo: 1.0,
            nu_hi: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = self.sigma_factor >= 0.0
            && self.sigma_factor.is_finite()
            && self.nu_lo >= 0.0
            && self.nu_lo <= self.nu_hi
            && self.nu_hi.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid perturbation {self:?}")))
        }
    }
}

/// [`perturb_with`] using the default perturbation.
pub fn perturb(g: &MultiGraph, seed: u64) -> Result<MultiGraph> {
    perturb_with(g, seed, &Perturbation::default())
}

/// Perturbs every stored (nonzero) weight component independently and clamps
/// at zero. Zero components stay zero, so no edge is ever added; an edge
/// disappears only when all of its components clamp to zero.
pub fn perturb_with(g: &MultiGraph, seed: u64, p: &Perturbation) -> Result<MultiGraph> {
    p.validate()?;
    if g.n_edges() == 0 {
        return Err(Error::EmptyGraph);
    }
    let k = g.k();
    let mut sums = vec![0.0; k];
    let mut counts = vec![0usize; k];
    for r in g.edges() {
        for (t, &w) in r.w.iter().enumerate() {
            if w > 0.0 {
                sums[t] += w;
                counts[t] += 1;
            }
        }
    }
    let mean: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| if c > 0 { s / c as f64 } else { 0.0 })
        .collect();
    let mut rng = sub_rng(seed, 0);
    g.with_weights(|_, w| {
        w.iter()
            .enumerate()
            .map(|(t, &x)| {
                if x <= 0.0 {
                    return 0.0;
                }
                let half = p.sigma_factor * mean[t];
                let sigma = if half > 0.0 { rng.random_range(-half..half) } else { 0.0 };
                let nu = if p.nu_hi > p.nu_lo {
                    rng.random_range(p.nu_lo..p.nu_hi)
                } else {
                    p.nu_lo
                };
                (nu * (x + sigma)).max(0.0)
            })
            .collect()
    })
}

/// One signal type, replicated `copies` times and perturbed: the inputs of the
/// holding-power recovery experiment.
pub fn perturbed_copies(g: &MultiGraph, t: usize, copies: usize, seed: u64) -> Result<MultiGraph> {
    perturb(&g.replicate_type(t, copies)?, seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
    pub points_per_cell: usize,
    pub n_projections: usize,
    /// Pairs closer than this in the plane are joined; cells have unit side.
    pub neighbor_radius: f64,
    /// Offset added to projected distances before inversion.
    #[serde(default = "default_grid_epsilon")]
    pub epsilon: f64,
    /// Side of the centred square, as a fraction of the cell, that points
    /// are scattered in.
    #[serde(default = "default_cell_spread")]
    pub cell_spread: f64,
    pub seed: u64,
}

fn default_grid_epsilon() -> f64 {
    GRID_EPSILON
}

fn default_cell_spread() -> f64 {
    CELL_SPREAD
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            rows: 3,
            cols: 3,
            points_per_cell: 30,
            n_projections: 16,
            neighbor_radius: 1.2,
            epsilon: GRID_EPSILON,
            cell_spread: CELL_SPREAD,
            seed: 0,
        }
    }
}

impl GridSpec {
    pub fn n(&self) -> usize {
        self.rows * self.cols * self.points_per_cell
    }

    fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 || self.points_per_cell == 0 || self.n_projections == 0 {
            return Err(Error::InvalidParameter("grid dimensions must be positive".into()));
        }
        if !(self.neighbor_radius > 0.0) {
            return Err(Error::InvalidParameter("neighbor radius must be positive".into()));
        }
        if !(self.cell_spread > 0.0 && self.cell_spread <= 1.0) {
            return Err(Error::InvalidParameter("cell spread must lie in (0, 1]".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter("epsilon must be positive".into()));
        }
        Ok(())
    }
}

/// Default offset added to projected distances before inversion.
pub const GRID_EPSILON: f64 = 0.2;

/// Default [`GridSpec::cell_spread`].
pub const CELL_SPREAD: f64 = 0.1;

#[derive(Debug, Clone)]
pub struct GridFixture {
    pub graph: MultiGraph,
    pub cells: Clustering,
    pub row_factor: Clustering,
    pub col_factor: Clustering,
    pub points: Vec<(f64, f64)>,
    /// Projection angles in radians, one per edge type.
    pub angles: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Grid fixture with `spec.n_projections` uniformly random projection angles.
pub fn generate_grid(spec: &GridSpec) -> Result<GridFixture> {
    spec.validate()?;
    let mut rng = sub_rng(spec.seed, 1);
    let angles: Vec<f64> = (0..spec.n_projections).map(|_| rng.random_range(0.0..PI)).collect();
    generate_grid_with_angles(spec, &angles)
}

/// Grid fixture with explicit projection angles (0 projects onto the x axis).
pub fn generate_grid_with_angles(spec: &GridSpec, angles: &[f64]) -> Result<GridFixture> {
    spec.validate()?;
    if angles.is_empty() {
        return Err(Error::InvalidParameter("at least one projection is required".into()));
    }
    let mut rng = sub_rng(spec.seed, 0);
    let lo = 0.5 - spec.cell_spread / 2.0;
    let hi = 0.5 + spec.cell_spread / 2.0;
    let mut points = Vec::with_capacity(spec.n());
    let (mut rows, mut cols, mut cells) = (Vec::new(), Vec::new(), Vec::new());
    for r in 0..spec.rows {
        for c in 0..spec.cols {
            for _ in 0..spec.points_per_cell {
                let x = c as f64 + rng.random_range(lo..hi);
                let y = r as f64 + rng.random_range(lo..hi);
                points.push((x, y));
                rows.push(r);
                cols.push(c);
                cells.push(r * spec.cols + c);
            }
        }
    }
    let n = points.len();
    let dirs: Vec<(f64, f64)> = angles.iter().map(|a| (a.cos(), a.sin())).collect();
    let r2 = spec.neighbor_radius * spec.neighbor_radius;
    let mut edges = Vec::new();
    let mut parent: Vec<usize> = (0..n).collect();
    for u in 0..n {
        for v in u + 1..n {
            let (dx, dy) = (points[u].0 - points[v].0, points[u].1 - points[v].1);
            if dx * dx + dy * dy > r2 {
                continue;
            }
            let w = dirs
                .iter()
                .map(|&(cx, cy)| 1.0 / ((dx * cx + dy * cy).abs() + spec.epsilon))
                .collect();
            edges.push((u, v, w));
            union(&mut parent, u, v);
        }
    }
    let mut warnings = Vec::new();
    let components = (0..n).filter(|&v| find(&mut parent, v) == v).count();
    if components > 1 {
        warnings.push(format!(
            "neighbor radius {} leaves the support in {components} components",
            spec.neighbor_radius
        ));
    }
    let names = (0..angles.len()).map(|t| format!("proj_{t}")).collect();
    let nodes = NodeSet::numbered(n).shared();
    Ok(GridFixture {
        graph: MultiGraph::new(Arc::clone(&nodes), names, edges)?,
        cells: Clustering::from_labels(Arc::clone(&nodes), &cells)?,
        row_factor: Clustering::from_labels(Arc::clone(&nodes), &rows)?,
        col_factor: Clustering::from_labels(nodes, &cols)?,
        points,
        angles: angles.to_vec(),
        warnings,
    })
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Independent latent partitions observed through noisy edge types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorSpec {
    pub n: usize,
    pub n_factors: usize,
    /// Groups per factor; `n` must be a multiple of `groups^n_factors`.
    pub groups: usize,
    pub views_per_factor: usize,
    /// Expected degree of the support shared by all views of a factor.
    pub signal_degree: f64,
    /// Probability that a view keeps a shared support edge.
    pub retention: f64,
    /// Expected degree of the uniformly random edges private to each view.
    pub noise_degree: f64,
    pub seed: u64,
}

impl Default for FactorSpec {
    fn default() -> Self {
        FactorSpec {
            n: 320,
            n_factors: 2,
            groups: 4,
            views_per_factor: 2,
            signal_degree: 10.0,
            retention: 0.8,
            noise_degree: 8.0,
            seed: 0,
        }
    }
}

impl FactorSpec {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.n_factors == 0 || self.n_factors > 26 || self.views_per_factor == 0 || self.groups < 2 {
            return bad("need 1..=26 factors, at least one view and two groups");
        }
        let cells = self.groups.checked_pow(self.n_factors as u32);
        if cells.is_none_or(|c| !self.n.is_multiple_of(c) || self.n == 0) {
            return bad("node count must be a positive multiple of groups^n_factors");
        }
        if !(self.signal_degree >= 0.0 && self.noise_degree >= 0.0) {
            return bad("degrees must be nonnegative");
        }
        if !(0.0..=1.0).contains(&self.retention) {
            return bad("retention must lie in [0, 1]");
        }
        let group_size = self.n / self.groups;
        if group_size < 2 || self.signal_degree > (group_size - 1) as f64 {
            return bad("signal degree exceeds the group size");
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct FactorFixture {
    pub graph: MultiGraph,
    /// One partition per factor; factor `f` puts node `i` in group
    /// `(i / groups^f) % groups`.
    pub factors: Vec<Clustering>,
}

/// Factor `f` (named `A`, `B`, ...) gets a shared support of within-group pairs;
/// its views `A1, A2, ...` each keep every shared edge with probability
/// `retention` and add their own `n noise_degree / 2` random edges.
pub fn generate_factors(spec: &FactorSpec) -> Result<FactorFixture> {
    spec.validate()?;
    let n = spec.n;
    let g = spec.groups;
    let k = spec.n_factors * spec.views_per_factor;
    let labels: Vec<Vec<usize>> = (0..spec.n_factors)
        .map(|f| (0..n).map(|i| (i / g.pow(f as u32)) % g).collect())
        .collect();
    let group_size = n / g;
    let p_signal = spec.signal_degree / (group_size - 1) as f64;
    let n_noise = (n as f64 * spec.noise_degree / 2.0).round() as usize;

    let mut edges: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    let mut names = Vec::with_capacity(k);
    for (f, lab) in labels.iter().enumerate() {
        let mut rng = sub_rng(spec.seed, f as u64);
        let mut shared = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if lab[u] == lab[v] && rng.random::<f64>() < p_signal {
                    shared.push((u, v));
                }
            }
        }
        let letter = (b'A' + f as u8) as char;
        for view in 0..spec.views_per_factor {
            let t = f * spec.views_per_factor + view;
            names.push(format!("{letter}{}", view + 1));
            let mut vr = sub_rng(spec.seed, 1000 + t as u64);
            let mut own: HashSet<(usize, usize)> = HashSet::new();
            for &p in &shared {
                if vr.random::<f64>() < spec.retention {
                    own.insert(p);
                    edges.entry(p).or_insert_with(|| vec![0.0; k])[t] = weight(&mut vr);
                }
            }
            let available = n * (n - 1) / 2 - own.len();
            for p in random_pairs(&mut vr, n, n_noise.min(available), available, &own, |_, _| true)? {
                edges.entry(p).or_insert_with(|| vec![0.0; k])[t] = weight(&mut vr);
            }
        }
    }
    let nodes = NodeSet::numbered(n).shared();
    let graph = MultiGraph::new(
        Arc::clone(&nodes),
        names,
        edges.into_iter().map(|((u, v), w)| (u, v, w)).collect(),
    )?;
    let factors = labels
        .iter()
        .map(|l| Clustering::from_labels(Arc::clone(&nodes), l))
        .collect::<Result<_>>()?;
    Ok(FactorFixture { graph, factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::format_multigraph;
    use crate::metrics::vi_distance;
    use crate::multigraph::WeightVector;
    use crate::recovery::HoldingEvaluator;

    fn small() -> PlantedSpec {
        PlantedSpec {
            n: 120,
            n_clusters: 4,
            avg_degree: 10.0,
            mixing: 0.2,
            k_types: 2,
            noise_types: 1,
            seed: 3,
        }
    }

    #[test]
    fn planted_is_deterministic() {
        let (a, ta) = generate_planted(&small()).unwrap();
        let (b, tb) = generate_planted(&small()).unwrap();
        assert_eq!(format_multigraph(&a), format_multigraph(&b));
        assert_eq!(ta, tb);
        assert_eq!(a.edge_types(), &["signal_0".to_string(), "noise_0".to_string()]);
    }

    #[test]
    fn planted_edge_counts_near_target() {
        for seed in 0..10 {
            let spec = PlantedSpec {
                noise_types: 0,
                k_types: 1,
                seed,
                ..small()
            };
            let (g, _) = generate_planted(&spec).unwrap();
            let target = spec.n as f64 * spec.avg_degree / 2.0;
            assert!((g.n_edges() as f64 - target).abs() <= 0.1 * target, "{}", g.n_edges());
        }
    }

    #[test]
    fn zero_mixing_keeps_every_edge_internal() {
        let spec = PlantedSpec {
            mixing: 0.0,
            ..small()
        };
        let (g, truth) = generate_planted(&spec).unwrap();
        let signal = g.extract_type(0).unwrap();
        assert!(signal.edges().iter().all(|&(u, v, _)| truth.label_of(u) == truth.label_of(v)));
        let ev = HoldingEvaluator::new(&g, &truth).unwrap();
        let h = ev.holding_powers(&[1.0, 0.0]);
        let degrees = signal.degrees();
        for (v, &x) in h.iter().enumerate() {
            assert!(x > 0.0 || degrees[v] == 0.0);
        }
    }

    #[test]
    fn infeasible_specs() {
        let spec = PlantedSpec {
            avg_degree: 120.0,
            ..small()
        };
        assert!(generate_planted(&spec).is_err());
        let spec = PlantedSpec {
            noise_types: 2,
            ..small()
        };
        assert!(generate_planted(&spec).is_err());
    }

    #[test]
    fn identity_perturbation() {
        let (g, _) = generate_planted(&small()).unwrap();
        let same = perturb_with(&g, 7, &Perturbation::identity()).unwrap();
        assert_eq!(format_multigraph(&g), format_multigraph(&same));
    }

    #[test]
    fn perturbation_range_and_support() {
        let (g, _) = generate_planted(&small()).unwrap();
        let p = perturb(&g, 5).unwrap();
        let originals: std::collections::HashMap<(usize, usize), Vec<f64>> =
            g.edges().map(|r| ((r.u, r.v), r.w.to_vec())).collect();
        let mean: Vec<f64> = (0..g.k())
            .map(|t| {
                let ws: Vec<f64> = g.edges().map(|r| r.w[t]).filter(|&w| w > 0.0).collect();
                ws.iter().sum::<f64>() / ws.len() as f64
            })
            .collect();
        assert!(p.n_edges() <= g.n_edges());
        for r in p.edges() {
            let orig = &originals[&(r.u, r.v)];
            for t in 0..g.k() {
                assert!(r.w[t] >= 0.0);
                assert!(r.w[t] <= orig[t] + 2.0 * mean[t] + 1e-12);
                if orig[t] == 0.0 {
                    assert_eq!(r.w[t], 0.0);
                }
            }
        }
    }

    #[test]
    fn grid_shape() {
        let fx = generate_grid(&GridSpec::default()).unwrap();
        assert_eq!(fx.graph.n_nodes(), 270);
        assert_eq!(fx.graph.k(), 16);
        assert!(fx.cells.same_partition(&fx.row_factor.product(&fx.col_factor).unwrap()));
        let d = vi_distance(&fx.row_factor, &fx.col_factor).unwrap();
        assert!((d - 2.0 * 3f64.ln()).abs() < 1e-9);
        assert!(fx.warnings.is_empty());
    }

    #[test]
    fn small_radius_warns() {
        let spec = GridSpec {
            neighbor_radius: 0.05,
            points_per_cell: 3,
            ..GridSpec::default()
        };
        assert!(!generate_grid(&spec).unwrap().warnings.is_empty());
    }

    #[test]
    fn factor_fixture_shape() {
        let fx = generate_factors(&FactorSpec::default()).unwrap();
        let names: Vec<&str> = fx.graph.edge_types().iter().map(String::as_str).collect();
        assert_eq!(names, ["A1", "A2", "B1", "B2"]);
        let d = vi_distance(&fx.factors[0], &fx.factors[1]).unwrap();
        assert!((d - 2.0 * 4f64.ln()).abs() < 1e-9);
        let a1 = fx.graph.aggregate_linear(&WeightVector::unit(4, 0), true).unwrap();
        assert!(a1.n_edges() > 0);
    }
}
