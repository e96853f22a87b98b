//! `polyedge`: aggregate, cluster and explore graphs with several edge types.
//!
//! Exit statuses: 0 success, 1 unparsable input or arguments, 2 inputs that
//! do not fit together, 3 I/O failure, 4 size cap or evaluation budget.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polyedge::error::{ErrorKind, Result};
use polyedge::io::read_to_string;
use polyedge::optimizer::SearchConfig;

#[derive(Parser, Debug)]
#[command(name = "polyedge", version, about = "Clustering graphs with multiple edge types")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random draw; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// key=value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one configuration key (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// Where to write the run manifest.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Collapse a multigraph into one weight per edge.
    Aggregate(commands::AggregateArgs),
    /// Cluster a graph by greedy modularity.
    Cluster(commands::ClusterArgs),
    /// Modularity of a clustering on a graph.
    Modularity(commands::ModularityArgs),
    /// Variation-of-information distance between clusterings.
    Vi(commands::ViArgs),
    /// Recover edge-type weights from a known clustering.
    Recover(commands::RecoverArgs),
    /// Trade-off between holding power and modularity.
    Pareto(commands::ParetoArgs),
    /// Correlation of the holding objective with recovery quality.
    Correlate(commands::CorrelateArgs),
    /// Sample the space of clusterings and cluster the samples.
    Metacluster(commands::MetaclusterArgs),
    /// Consensus of several clusterings.
    Consensus(commands::ConsensusArgs),
    /// Order clusterings by the information they add.
    Order(commands::OrderArgs),
    /// Search for a clustering unlike the given ones.
    Discover(commands::DiscoverArgs),
    /// Table of single types and pairwise products against a reference.
    Pairs(commands::PairsArgs),
    /// Node groups that no clustering separates.
    InvariantGroups(commands::InvariantArgs),
    /// Write a synthetic fixture.
    #[command(subcommand)]
    Generate(commands::GenerateCommand),
    /// Perturb edge weights.
    Perturb(commands::PerturbArgs),
    /// Time holding-objective evaluation at several graph sizes.
    Bench(commands::BenchArgs),
    /// Print the effective configuration.
    ConfigDump,
}

impl Global {
    fn config(&self) -> Result<SearchConfig> {
        let mut cfg = match &self.config {
            Some(p) => SearchConfig::from_kv(&read_to_string(p)?)?,
            None => SearchConfig::default(),
        };
        for kv in &self.overrides {
            let (k, v) = kv.split_once('=').ok_or_else(|| {
                polyedge::error::Error::Parse(format!("expected KEY=VALUE, got `{kv}`"))
            })?;
            cfg.set(k.trim(), v.trim())?;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        Ok(cfg)
    }
}

fn exit_status(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Parse => 1,
        ErrorKind::Semantic => 2,
        ErrorKind::Io => 3,
        ErrorKind::Limit => 4,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let status = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(status);
        }
    };
    let result = cli
        .global
        .config()
        .and_then(|cfg| commands::run(cli.command, &cfg, cli.global.manifest.as_deref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_status(e.kind()))
        }
    }
}
