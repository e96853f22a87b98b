use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Subcommand, ValueEnum};
use polyedge::clustering::Clustering;
use polyedge::community::{modularity, GreedyModularity};
use polyedge::discovery::{enumerate_pairs_with, find_unexpected, PairOptions};
use polyedge::error::{Error, Result};
use polyedge::graph::Graph;
use polyedge::io::{format_clustering, format_graph, format_matrix_csv, format_multigraph, parse_clustering, parse_multigraph};
use polyedge::metaclustering::{
    cspa_consensus, invariant_groups, order_representatives, run_metaclustering, sample_alphas,
    sample_clustering_space, Ensemble, OrderMode,
};
use polyedge::metrics::{vi_distance, vi_matrix};
use polyedge::multigraph::{MultiGraph, WeightVector};
use polyedge::nodes::NodeSet;
use polyedge::optimizer::SearchConfig;
use polyedge::recovery::{
    arctan_objective, correlation_sweep, holding_histogram, pareto_sweep, recover_with, HoldingEvaluator,
    ParetoPoint,
};
use polyedge::rng::sub_seed;
use polyedge::synth::{
    generate_factors, generate_grid, generate_planted, perturb_with, FactorSpec, GridSpec, Perturbation,
    PlantedSpec,
};
use serde_json::json;

use crate::manifest::Run;
use crate::Command;

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

fn parse_reals(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("`{s}` is not a number")))
        })
        .collect()
}

fn parse_pair(text: &str) -> Result<(String, String)> {
    match text.split_once(',') {
        Some((a, b)) if !a.trim().is_empty() && !b.trim().is_empty() => {
            Ok((a.trim().to_string(), b.trim().to_string()))
        }
        _ => Err(Error::Parse(format!("expected `type_a,type_b`, got `{text}`"))),
    }
}

fn reals_csv(xs: &[f64]) -> String {
    xs.iter().map(|x| f6(*x)).collect::<Vec<_>>().join(",")
}

fn load_multigraph(run: &mut Run, path: &Path) -> Result<MultiGraph> {
    parse_multigraph(&run.read(path)?)
}

fn load_clustering(run: &mut Run, path: &Path, universe: Option<&Arc<NodeSet>>) -> Result<Clustering> {
    parse_clustering(&run.read(path)?, universe)
}

/// Clusterings over the first file's nodes.
fn load_clusterings(run: &mut Run, paths: &[PathBuf]) -> Result<Vec<Clustering>> {
    let mut out: Vec<Clustering> = Vec::with_capacity(paths.len());
    for p in paths {
        let universe = out.first().map(|c| Arc::clone(c.nodes()));
        out.push(load_clustering(run, p, universe.as_ref())?);
    }
    Ok(out)
}

/// A single-weight graph: a one-type file, or a multigraph collapsed by `alpha`.
fn load_graph(run: &mut Run, path: &Path, alpha: Option<&str>) -> Result<Graph> {
    let g = load_multigraph(run, path)?;
    match alpha {
        Some(a) => g.aggregate_linear(&WeightVector::new(parse_reals(a)?)?, true),
        None if g.k() == 1 => g.extract_type(0),
        None => Err(Error::DimensionMismatch {
            expected: 1,
            found: g.k(),
        }),
    }
}

pub fn run(command: Command, cfg: &SearchConfig, manifest: Option<&Path>) -> Result<()> {
    let name = command_name(&command);
    let mut run = Run::new(name, cfg);
    match command {
        Command::Aggregate(a) => aggregate(&mut run, a)?,
        Command::Cluster(a) => cluster(&mut run, a)?,
        Command::Modularity(a) => modularity_cmd(&mut run, a)?,
        Command::Vi(a) => vi(&mut run, a)?,
        Command::Recover(a) => recover(&mut run, cfg, a)?,
        Command::Pareto(a) => pareto(&mut run, cfg, a)?,
        Command::Correlate(a) => correlate(&mut run, cfg, a)?,
        Command::Metacluster(a) => metacluster(&mut run, cfg, a)?,
        Command::Consensus(a) => consensus(&mut run, a)?,
        Command::Order(a) => order(&mut run, a)?,
        Command::Discover(a) => discover(&mut run, cfg, a)?,
        Command::Pairs(a) => pairs(&mut run, a)?,
        Command::InvariantGroups(a) => invariant(&mut run, a)?,
        Command::Generate(g) => generate(&mut run, cfg, g)?,
        Command::Perturb(a) => perturb_cmd(&mut run, cfg, a)?,
        Command::Bench(a) => bench(&mut run, cfg, a)?,
        Command::ConfigDump => print!("{}", cfg.to_kv()),
    }
    run.finish(manifest)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Aggregate(_) => "aggregate",
        Command::Cluster(_) => "cluster",
        Command::Modularity(_) => "modularity",
        Command::Vi(_) => "vi",
        Command::Recover(_) => "recover",
        Command::Pareto(_) => "pareto",
        Command::Correlate(_) => "correlate",
        Command::Metacluster(_) => "metacluster",
        Command::Consensus(_) => "consensus",
        Command::Order(_) => "order",
        Command::Discover(_) => "discover",
        Command::Pairs(_) => "pairs",
        Command::InvariantGroups(_) => "invariant-groups",
        Command::Generate(_) => "generate",
        Command::Perturb(_) => "perturb",
        Command::Bench(_) => "bench",
        Command::ConfigDump => "config-dump",
    }
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("how").required(true).args(["alpha", "pair", "union"])))]
pub struct AggregateArgs {
    /// Multigraph edge list.
    #[arg(short, long)]
    input: PathBuf,
    /// Linear weights, comma separated.
    #[arg(long)]
    alpha: Option<String>,
    /// Product of two named types.
    #[arg(long, value_name = "A,B")]
    pair: Option<String>,
    /// Union (maximum) of two named types.
    #[arg(long, value_name = "A,B")]
    union: Option<String>,
    /// Scale every type to unit L2 norm first.
    #[arg(long)]
    normalize: bool,
    /// Fail on negative composite weights instead of truncating them.
    #[arg(long)]
    no_clamp: bool,
    #[arg(short, long)]
    output: PathBuf,
}

fn aggregate(run: &mut Run, a: AggregateArgs) -> Result<()> {
    let mut g = load_multigraph(run, &a.input)?;
    if a.normalize {
        g = g.normalize_edge_types()?;
    }
    let out = if let Some(alpha) = &a.alpha {
        run.param("alpha", alpha);
        g.aggregate_linear(&WeightVector::new(parse_reals(alpha)?)?, !a.no_clamp)?
    } else if let Some(p) = &a.pair {
        run.param("pair", p);
        let (x, y) = parse_pair(p)?;
        g.aggregate_product(&x, &y)?
    } else {
        let u = a.union.as_deref().unwrap_or_default();
        run.param("union", u);
        let (x, y) = parse_pair(u)?;
        g.aggregate_union(&x, &y)?
    };
    run.param("normalize", a.normalize);
    run.param("clamp", !a.no_clamp);
    run.write(&a.output, &format_graph(&out))?;
    run.manifest_beside(&a.output);
    println!("edges: {}", out.n_edges());
    Ok(())
}

#[derive(Args, Debug)]
pub struct ClusterArgs {
    /// Single-weight graph, or a multigraph together with --alpha.
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long)]
    alpha: Option<String>,
    /// Clustering file to write.
    #[arg(short, long)]
    output: PathBuf,
    /// JSON report.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn cluster(run: &mut Run, a: ClusterArgs) -> Result<()> {
    let g = load_graph(run, &a.input, a.alpha.as_deref())?;
    run.param("alpha", &a.alpha);
    let c = polyedge::community::cluster_greedy_modularity(&g)?;
    let q = modularity(&g, &c)?;
    run.write(&a.output, &format_clustering(&c))?;
    run.manifest_beside(&a.output);
    if let Some(j) = &a.json {
        run.write_json(j, &json!({ "n_clusters": c.n_clusters(), "modularity": q, "sizes": c.sizes() }))?;
    }
    println!("clusters: {}", c.n_clusters());
    println!("modularity: {}", f6(q));
    Ok(())
}

#[derive(Args, Debug)]
pub struct ModularityArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(short, long)]
    clustering: PathBuf,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn modularity_cmd(run: &mut Run, a: ModularityArgs) -> Result<()> {
    let g = load_graph(run, &a.input, a.alpha.as_deref())?;
    let c = load_clustering(run, &a.clustering, Some(g.nodes()))?;
    let q = modularity(&g, &c)?;
    if let Some(j) = &a.json {
        run.write_json(j, &json!({ "modularity": q }))?;
        run.manifest_beside(j);
    }
    println!("{}", f6(q));
    Ok(())
}

#[derive(Args, Debug)]
pub struct ViArgs {
    /// Two or more clustering files over the same nodes.
    #[arg(required = true, num_args = 2..)]
    files: Vec<PathBuf>,
    /// Pairwise matrix as CSV (written when more than two files are given).
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn vi(run: &mut Run, a: ViArgs) -> Result<()> {
    let cs = load_clusterings(run, &a.files)?;
    if cs.len() == 2 {
        let d = vi_distance(&cs[0], &cs[1])?;
        if let Some(j) = &a.json {
            run.write_json(j, &json!({ "vi": d }))?;
            run.manifest_beside(j);
        }
        println!("{}", f6(d));
        return Ok(());
    }
    let refs: Vec<&Clustering> = cs.iter().collect();
    let d = vi_matrix(&refs)?;
    let ids: Vec<String> = a.files.iter().map(|p| p.display().to_string()).collect();
    let csv = format_matrix_csv(&ids, &d);
    match &a.matrix {
        Some(m) => {
            run.write(m, &csv)?;
            run.manifest_beside(m);
        }
        None => print!("{csv}"),
    }
    if let Some(j) = &a.json {
        run.write_json(j, &json!({ "ids": ids, "vi_matrix": d }))?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct RecoverArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Ground-truth clustering.
    #[arg(short, long)]
    truth: PathBuf,
    /// Arctangent steepness values, comma separated (default: config steepness).
    #[arg(long)]
    steepness_grid: Option<String>,
    /// Evaluation budget per steepness (default: config max_evaluations).
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    out_dir: PathBuf,
}

fn recover(run: &mut Run, cfg: &SearchConfig, a: RecoverArgs) -> Result<()> {
    let g = load_multigraph(run, &a.input)?;
    let truth = load_clustering(run, &a.truth, Some(g.nodes()))?;
    let grid = match &a.steepness_grid {
        Some(s) => parse_reals(s)?,
        None => vec![cfg.steepness],
    };
    let mut cfg = cfg.clone();
    if let Some(b) = a.budget {
        cfg.max_evaluations = b;
    }
    cfg.validate()?;
    run.param("steepness_grid", &grid);
    run.param("budget", cfg.max_evaluations);
    run.seed("initial_samples", sub_seed(cfg.seed, 1));

    let ev = HoldingEvaluator::new(&g, &truth)?;
    let mut runs = Vec::new();
    let mut best: Option<usize> = None;
    for &s in &grid {
        let r = recover_with(&ev, &cfg, s)?;
        run.add_evaluations(r.evaluations);
        if best.is_none_or(|b: usize| r.report.positive_fraction > runs_fraction(&runs, b)) {
            best = Some(runs.len());
        }
        runs.push(r);
    }
    let best = best.unwrap_or(0);

    let mut holding = String::from("node");
    for s in &grid {
        let _ = write!(holding, ",h_{s}");
    }
    holding.push('\n');
    for (v, id) in g.nodes().iter().enumerate() {
        holding.push_str(id);
        for r in &runs {
            let _ = write!(holding, ",{}", f6(r.report.per_node[v]));
        }
        holding.push('\n');
    }
    let mut hist = String::from("lo,hi,count\n");
    for b in holding_histogram(&runs[best].report.per_node) {
        let _ = writeln!(hist, "{},{},{}", f6(b.lo), f6(b.hi), b.count);
    }
    let summary: Vec<_> = runs
        .iter()
        .map(|r| {
            json!({
                "steepness": r.report.steepness,
                "alpha": r.alpha,
                "positive_fraction": r.report.positive_fraction,
                "objective": r.report.objective_value,
                "initial_alpha": r.initial_alpha,
                "initial_objective": r.initial_objective,
                "evaluations": r.evaluations,
                "converged": r.converged,
                "improved": r.improved,
            })
        })
        .collect();
    let weights = json!({ "runs": summary, "best": best, "edge_types": g.edge_types() });
    run.write_json(&a.out_dir.join("weights.json"), &weights)?;
    run.write(&a.out_dir.join("holding.csv"), &holding)?;
    run.write(&a.out_dir.join("histogram.csv"), &hist)?;
    run.write_json(&a.out_dir.join("report.json"), &runs[best].report)?;
    run.manifest_in(&a.out_dir);
    for r in &runs {
        println!(
            "steepness {}: positive fraction {} alpha [{}]",
            r.report.steepness,
            f6(r.report.positive_fraction),
            reals_csv(r.alpha.as_slice())
        );
    }
    Ok(())
}

fn runs_fraction(runs: &[polyedge::recovery::Recovery], i: usize) -> f64 {
    runs[i].report.positive_fraction
}

#[derive(Args, Debug)]
pub struct ParetoArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    truth: PathBuf,
    /// Weights whose modularity normalises the others.
    #[arg(long)]
    reference_alpha: Option<String>,
    #[arg(long)]
    out_dir: PathBuf,
}

fn points_csv(k: usize, pts: &[ParetoPoint]) -> String {
    let mut out = String::new();
    for t in 0..k {
        let _ = write!(out, "alpha_{t},");
    }
    out.push_str("positive_fraction,normalized_modularity\n");
    for p in pts {
        let _ = writeln!(
            out,
            "{},{},{}",
            reals_csv(p.alpha.as_slice()),
            f6(p.positive_fraction),
            f6(p.normalized_modularity)
        );
    }
    out
}

fn pareto(run: &mut Run, cfg: &SearchConfig, a: ParetoArgs) -> Result<()> {
    let g = load_multigraph(run, &a.input)?;
    let truth = load_clustering(run, &a.truth, Some(g.nodes()))?;
    let reference = a
        .reference_alpha
        .as_deref()
        .map(|s| parse_reals(s).and_then(WeightVector::new))
        .transpose()?;
    run.param("reference_alpha", &reference);
    let sweep = pareto_sweep(&g, &truth, cfg, reference.as_ref())?;
    run.write(&a.out_dir.join("points.csv"), &points_csv(g.k(), &sweep.evaluated))?;
    run.write(&a.out_dir.join("frontier.csv"), &points_csv(g.k(), &sweep.frontier))?;
    run.note("reference_modularity", sweep.reference_modularity);
    run.manifest_in(&a.out_dir);
    println!("evaluated: {}", sweep.evaluated.len());
    println!("frontier: {}", sweep.frontier.len());
    Ok(())
}

#[derive(Args, Debug)]
pub struct CorrelateArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    truth: PathBuf,
    #[arg(long, default_value = "1")]
    steepness_grid: String,
    /// Random weight vectors (default: config n_samples).
    #[arg(long)]
    samples: Option<usize>,
    #[arg(short, long)]
    output: PathBuf,
}

fn correlate(run: &mut Run, cfg: &SearchConfig, a: CorrelateArgs) -> Result<()> {
    let g = load_multigraph(run, &a.input)?;
    let truth = load_clustering(run, &a.truth, Some(g.nodes()))?;
    let grid = parse_reals(&a.steepness_grid)?;
    let mut cfg = cfg.clone();
    if let Some(n) = a.samples {
        cfg.n_samples = n;
    }
    run.param("steepness_grid", &grid);
    run.param("samples", cfg.n_samples);
    run.seed("samples", sub_seed(cfg.seed, 3));
    let pts = correlation_sweep(&g, &truth, &GreedyModularity, &grid, &cfg)?;
    let mut csv = String::from("steepness,correlation\n");
    for p in &pts {
        let c = p.correlation.map(f6).unwrap_or_else(|| "NA".into());
        let _ = writeln!(csv, "{},{c}", p.steepness);
        println!("steepness {}: {c}", p.steepness);
    }
    run.write(&a.output, &csv)?;
    run.manifest_beside(&a.output);
    Ok(())
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum ModeArg {
    Exact,
    Greedy,
}

impl From<ModeArg> for OrderMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => OrderMode::Exact,
            ModeArg::Greedy => OrderMode::Greedy,
        }
    }
}

#[derive(Args, Debug)]
pub struct MetaclusterArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Number of sampled weight vectors (default: config n_samples).
    #[arg(long)]
    samples: Option<usize>,
    /// Ordering mode (default: exact for small representative sets).
    #[arg(long, value_enum)]
    order: Option<ModeArg>,
    #[arg(long)]
    out_dir: PathBuf,
}

fn entry_name(i: usize) -> String {
    format!("entry_{i:04}")
}

fn metacluster(run: &mut Run, cfg: &SearchConfig, a: MetaclusterArgs) -> Result<()> {
    let g = load_multigraph(run, &a.input)?;
    let n = a.samples.unwrap_or(cfg.n_samples);
    if n < 2 {
        return Err(Error::InvalidParameter("meta-clustering needs at least two samples".into()));
    }
    run.param("samples", n);
    run.seed("alphas", cfg.seed);
    let alphas = sample_alphas(g.k(), n, cfg.seed)?;
    let ensemble = sample_clustering_space(&g, &alphas, &GreedyModularity)?;
    let report = run_metaclustering(&ensemble, &GreedyModularity, a.order.map(OrderMode::from))?;

    let dir = &a.out_dir;
    let ens_dir = dir.join("ensemble");
    let names: Vec<String> = (0..ensemble.len()).map(entry_name).collect();
    for (name, e) in names.iter().zip(ensemble.entries()) {
        run.write(&ens_dir.join(format!("{name}.tsv")), &format_clustering(&e.clustering))?;
    }
    let warnings: Vec<_> = ensemble
        .warnings()
        .iter()
        .map(|(i, w)| json!({ "index": i, "warning": w }))
        .collect();
    let alphas_json: Vec<_> = ensemble.entries().iter().map(|e| &e.alpha).collect();
    run.write_json(
        &ens_dir.join("manifest.json"),
        &json!({ "seed": cfg.seed, "edge_types": g.edge_types(), "alphas": alphas_json, "entries": names, "warnings": warnings }),
    )?;
    run.write(&dir.join("vi_matrix.csv"), &format_matrix_csv(&names, &report.vi_matrix))?;
    let mut ser = String::from("position,entry\n");
    for (p, i) in report.seriation.iter().enumerate() {
        let _ = writeln!(ser, "{p},{}", names[*i]);
    }
    run.write(&dir.join("seriation.csv"), &ser)?;
    let mut ord = String::from("rank,meta_cluster,setwise_information\n");
    for (r, (src, score)) in report
        .representative_sources
        .iter()
        .zip(&report.ordering_scores)
        .enumerate()
    {
        let _ = writeln!(ord, "{r},{src},{}", f6(*score));
        run.write(
            &dir.join("representatives").join(format!("rep_{r}.tsv")),
            &format_clustering(&report.representatives[r]),
        )?;
    }
    run.write(&dir.join("ordering.csv"), &ord)?;
    run.write_json(&dir.join("meta_report.json"), &report)?;
    run.note("dropped_meta_clusters", &report.dropped);
    run.note("excluded_entries", &report.excluded);
    run.manifest_in(dir);
    println!("samples: {n}");
    println!("meta-clusters: {}", report.meta_partition.n_clusters());
    println!("representatives: {}", report.representatives.len());
    for (r, c) in report.representatives.iter().enumerate() {
        println!("  rep_{r}: {} clusters, prefix information {}", c.n_clusters(), f6(report.ordering_scores[r]));
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct ConsensusArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
}

fn consensus(run: &mut Run, a: ConsensusArgs) -> Result<()> {
    let cs = load_clusterings(run, &a.files)?;
    let refs: Vec<&Clustering> = cs.iter().collect();
    let c = cspa_consensus(&refs, &GreedyModularity)?;
    run.write(&a.output, &format_clustering(&c))?;
    run.manifest_beside(&a.output);
    println!("clusters: {}", c.n_clusters());
    Ok(())
}

#[derive(Args, Debug)]
pub struct OrderArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Ordering as CSV instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn order(run: &mut Run, a: OrderArgs) -> Result<()> {
    let cs = load_clusterings(run, &a.files)?;
    let refs: Vec<&Clustering> = cs.iter().collect();
    let o = order_representatives(&refs, a.mode.into())?;
    run.param("mode", OrderMode::from(a.mode));
    let mut csv = String::from("rank,file,setwise_information\n");
    for (r, (i, s)) in o.order.iter().zip(&o.scores).enumerate() {
        let _ = writeln!(csv, "{r},{},{}", a.files[*i].display(), f6(*s));
    }
    match &a.output {
        Some(p) => {
            run.write(p, &csv)?;
            run.manifest_beside(p);
        }
        None => print!("{csv}"),
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct DiscoverArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Known clustering to move away from (repeatable).
    #[arg(short, long, required = true)]
    given: Vec<PathBuf>,
    /// Novelty weight (default: config lambda).
    #[arg(long)]
    lambda: Option<f64>,
    /// Evaluation budget (default: config max_evaluations).
    #[arg(long)]
    budget: Option<usize>,
    /// Report JSON.
    #[arg(short, long)]
    output: PathBuf,
    /// Found clustering.
    #[arg(long)]
    clustering_out: Option<PathBuf>,
}

fn discover(run: &mut Run, cfg: &SearchConfig, a: DiscoverArgs) -> Result<()> {
    let g = load_multigraph(run, &a.input)?;
    let mut given = Vec::new();
    for p in &a.given {
        given.push(load_clustering(run, p, Some(g.nodes()))?);
    }
    let mut cfg = cfg.clone();
    if let Some(l) = a.lambda {
        cfg.lambda = l;
    }
    if let Some(b) = a.budget {
        cfg.max_evaluations = b;
    }
    run.param("lambda", cfg.lambda);
    run.param("budget", cfg.max_evaluations);
    run.seed("starts", cfg.seed);
    let refs: Vec<&Clustering> = given.iter().collect();
    let r = find_unexpected(&g, &refs, &cfg, &GreedyModularity)?;
    run.add_evaluations(r.evaluations);
    run.write_json(&a.output, &r)?;
    run.manifest_beside(&a.output);
    if let Some(p) = &a.clustering_out {
        run.write(p, &format_clustering(&r.clustering))?;
    }
    println!("modularity: {}", f6(r.modularity));
    println!("min vi to given: {}", f6(r.min_vi()));
    println!("scalarized: {}", f6(r.scalarized));
    println!("alpha: [{}]", reals_csv(r.alpha.as_slice()));
    if r.low_novelty {
        eprintln!("warning: the result is close to a given clustering");
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct PairsArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    reference: PathBuf,
    /// Leave out single-type rows.
    #[arg(long)]
    no_singletons: bool,
    /// Include products of a type with itself.
    #[arg(long)]
    self_pairs: bool,
    /// Table CSV.
    #[arg(short, long)]
    output: PathBuf,
    /// Directory for the clustering of every row.
    #[arg(long)]
    clusterings_dir: Option<PathBuf>,
}

fn pairs(run: &mut Run, a: PairsArgs) -> Result<()> {
    let g = load_multigraph(run, &a.input)?;
    let reference = load_clustering(run, &a.reference, Some(g.nodes()))?;
    let opts = PairOptions {
        include_singletons: !a.no_singletons,
        include_self_pairs: a.self_pairs,
    };
    run.param("include_singletons", opts.include_singletons);
    run.param("include_self_pairs", opts.include_self_pairs);
    let rows = enumerate_pairs_with(&g, &reference, &GreedyModularity, &opts)?;
    let mut csv = String::from("Name,Modularity,VI distance\n");
    let opt = |x: Option<f64>| x.map(f6).unwrap_or_else(|| "NA".into());
    for r in &rows {
        let _ = writeln!(csv, "{},{},{}", r.label, opt(r.modularity), opt(r.vi_to_reference));
        println!("{:<24} {:>10} {:>10}", r.label, opt(r.modularity), opt(r.vi_to_reference));
        if let (Some(dir), Some(c)) = (&a.clusterings_dir, &r.clustering) {
            run.write(&dir.join(format!("{}.tsv", r.label.replace('*', "_x_"))), &format_clustering(c))?;
        }
    }
    run.write(&a.output, &csv)?;
    run.manifest_beside(&a.output);
    Ok(())
}

#[derive(Args, Debug)]
pub struct InvariantArgs {
    /// Clustering files over the same nodes.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Smallest group to list.
    #[arg(long, default_value_t = 2)]
    min_size: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn invariant(run: &mut Run, a: InvariantArgs) -> Result<()> {
    let cs = load_clusterings(run, &a.files)?;
    let nodes = Arc::clone(cs[0].nodes());
    let groups = invariant_groups(&Ensemble::from_clusterings(&cs)?)?;
    run.param("min_size", a.min_size);
    let mut out = String::from("group\tsize\tmembers\n");
    let mut listed = 0;
    for g in groups.iter().filter(|g| g.len() >= a.min_size) {
        let members: Vec<&str> = g.iter().map(|&v| nodes.id(v)).collect();
        let _ = writeln!(out, "{listed}\t{}\t{}", g.len(), members.join(","));
        listed += 1;
    }
    run.note("groups_total", groups.len());
    match &a.output {
        Some(p) => {
            run.write(p, &out)?;
            run.manifest_beside(p);
            println!("groups: {listed} of {}", groups.len());
        }
        None => print!("{out}"),
    }
    Ok(())
}

#[derive(Subcommand, Debug)]
pub enum GenerateCommand {
    /// Planted-partition multigraph with signal and noise types.
    Planted {
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 14)]
        clusters: usize,
        #[arg(long, default_value_t = 20.0)]
        avg_degree: f64,
        #[arg(long, default_value_t = 0.3)]
        mixing: f64,
        /// Total edge types.
        #[arg(long, default_value_t = 1)]
        types: usize,
        /// How many of the types are noise.
        #[arg(long, default_value_t = 0)]
        noise_types: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Points on a grid of cells, one edge type per random projection.
    Grid {
        #[arg(long, default_value_t = 3)]
        rows: usize,
        #[arg(long, default_value_t = 3)]
        cols: usize,
        #[arg(long, default_value_t = 30)]
        points_per_cell: usize,
        #[arg(long, default_value_t = 16)]
        projections: usize,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        spread: Option<f64>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Independent latent factors, each seen through noisy views.
    Factors {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        factors: Option<usize>,
        #[arg(long)]
        groups: Option<usize>,
        #[arg(long)]
        views: Option<usize>,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn generate(run: &mut Run, cfg: &SearchConfig, cmd: GenerateCommand) -> Result<()> {
    run.seed("generator", cfg.seed);
    let (dir, graph) = match cmd {
        GenerateCommand::Planted { n, clusters, avg_degree, mixing, types, noise_types, out_dir } => {
            let spec = PlantedSpec {
                n,
                n_clusters: clusters,
                avg_degree,
                mixing,
                k_types: types,
                noise_types,
                seed: cfg.seed,
            };
            let (g, truth) = generate_planted(&spec)?;
            run.write_json(&out_dir.join("spec.json"), &spec)?;
            run.write(&out_dir.join("truth.tsv"), &format_clustering(&truth))?;
            (out_dir, g)
        }
        GenerateCommand::Grid { rows, cols, points_per_cell, projections, radius, epsilon, spread, out_dir } => {
            let d = GridSpec::default();
            let spec = GridSpec {
                rows,
                cols,
                points_per_cell,
                n_projections: projections,
                neighbor_radius: radius.unwrap_or(d.neighbor_radius),
                epsilon: epsilon.unwrap_or(d.epsilon),
                cell_spread: spread.unwrap_or(d.cell_spread),
                seed: cfg.seed,
            };
            let fx = generate_grid(&spec)?;
            for w in &fx.warnings {
                eprintln!("warning: {w}");
            }
            run.note("warnings", &fx.warnings);
            run.write_json(&out_dir.join("spec.json"), &json!({ "spec": spec, "angles": fx.angles }))?;
            run.write(&out_dir.join("cells.tsv"), &format_clustering(&fx.cells))?;
            run.write(&out_dir.join("rows.tsv"), &format_clustering(&fx.row_factor))?;
            run.write(&out_dir.join("cols.tsv"), &format_clustering(&fx.col_factor))?;
            let mut pts = String::from("node,x,y\n");
            for (id, (x, y)) in fx.graph.nodes().iter().zip(&fx.points) {
                let _ = writeln!(pts, "{id},{},{}", f6(*x), f6(*y));
            }
            run.write(&out_dir.join("points.csv"), &pts)?;
            (out_dir, fx.graph)
        }
        GenerateCommand::Factors { n, factors, groups, views, out_dir } => {
            let d = FactorSpec::default();
            let spec = FactorSpec {
                n: n.unwrap_or(d.n),
                n_factors: factors.unwrap_or(d.n_factors),
                groups: groups.unwrap_or(d.groups),
                views_per_factor: views.unwrap_or(d.views_per_factor),
                seed: cfg.seed,
                ..d
            };
            let fx = generate_factors(&spec)?;
            run.write_json(&out_dir.join("spec.json"), &spec)?;
            for (f, c) in fx.factors.iter().enumerate() {
                let letter = (b'A' + f as u8) as char;
                run.write(&out_dir.join(format!("factor_{letter}.tsv")), &format_clustering(c))?;
            }
            (out_dir, fx.graph)
        }
    };
    run.write(&dir.join("graph.tsv"), &format_multigraph(&graph))?;
    run.manifest_in(&dir);
    println!("nodes: {}", graph.n_nodes());
    println!("edges: {}", graph.n_edges());
    println!("types: {}", graph.edge_types().join(" "));
    Ok(())
}

#[derive(Args, Debug)]
pub struct PerturbArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    sigma_factor: Option<f64>,
    #[arg(long)]
    nu_lo: Option<f64>,
    #[arg(long)]
    nu_hi: Option<f64>,
    /// Leave weights unchanged (sigma 0, nu 1).
    #[arg(long, conflicts_with_all = ["sigma_factor", "nu_lo", "nu_hi"])]
    identity: bool,
    /// Replace the graph by copies of this type before perturbing.
    #[arg(long)]
    replicate: Option<String>,
    #[arg(long, default_value_t = 10, requires = "replicate")]
    copies: usize,
}

fn perturb_cmd(run: &mut Run, cfg: &SearchConfig, a: PerturbArgs) -> Result<()> {
    let mut g = load_multigraph(run, &a.input)?;
    if let Some(t) = &a.replicate {
        g = g.replicate_type(g.type_index(t)?, a.copies)?;
        run.param("replicate", t);
        run.param("copies", a.copies);
    }
    let p = if a.identity {
        Perturbation::identity()
    } else {
        let d = Perturbation::default();
        Perturbation {
            sigma_factor: a.sigma_factor.unwrap_or(d.sigma_factor),
            nu_lo: a.nu_lo.unwrap_or(d.nu_lo),
            nu_hi: a.nu_hi.unwrap_or(d.nu_hi),
        }
    };
    run.param("perturbation", p);
    run.seed("perturbation", cfg.seed);
    let out = perturb_with(&g, cfg.seed, &p)?;
    run.write(&a.output, &format_multigraph(&out))?;
    run.manifest_beside(&a.output);
    println!("edges: {} of {}", out.n_edges(), g.n_edges());
    Ok(())
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Node counts of the planted graphs.
    #[arg(long, default_value = "1000,2000")]
    sizes: String,
    #[arg(long, default_value_t = 30.0)]
    avg_degree: f64,
    #[arg(long, default_value_t = 20)]
    clusters: usize,
    #[arg(long, default_value_t = 3)]
    types: usize,
    /// Timed evaluations per size.
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(short, long)]
    output: PathBuf,
}

fn bench(run: &mut Run, cfg: &SearchConfig, a: BenchArgs) -> Result<()> {
    let sizes: Vec<usize> = a
        .sizes
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| Error::Parse(format!("`{s}` is not a count"))))
        .collect::<Result<_>>()?;
    if sizes.is_empty() || a.runs == 0 {
        return Err(Error::InvalidParameter("need at least one size and one run".into()));
    }
    run.param("sizes", &sizes);
    run.param("runs", a.runs);
    run.seed("graphs", cfg.seed);
    let alpha = WeightVector::new(vec![1.0; a.types])?.normalized()?;
    let mut csv = String::from("nodes,edges,mean_seconds\n");
    let mut prev: Option<f64> = None;
    for (i, &n) in sizes.iter().enumerate() {
        let spec = PlantedSpec {
            n,
            n_clusters: a.clusters,
            avg_degree: a.avg_degree,
            mixing: 0.3,
            k_types: a.types,
            noise_types: 0,
            seed: sub_seed(cfg.seed, i as u64),
        };
        let (g, truth) = generate_planted(&spec)?;
        arctan_objective(&g, &alpha, &truth, cfg.steepness)?;
        let t = Instant::now();
        for _ in 0..a.runs {
            std::hint::black_box(arctan_objective(&g, &alpha, &truth, cfg.steepness)?);
        }
        let mean = t.elapsed().as_secs_f64() / a.runs as f64;
        let _ = writeln!(csv, "{n},{},{mean:.9}", g.n_edges());
        match prev {
            Some(p) => println!("{} edges: {:.3} ms (x{:.2})", g.n_edges(), mean * 1e3, mean / p),
            None => println!("{} edges: {:.3} ms", g.n_edges(), mean * 1e3),
        }
        prev = Some(mean);
    }
    run.write(&a.output, &csv)?;
    run.manifest_beside(&a.output);
    Ok(())
}

