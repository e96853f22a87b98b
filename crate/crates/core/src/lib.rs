pub mod clustering;
pub mod community;
pub mod discovery;
pub mod error;
pub mod graph;
pub mod io;
pub mod metaclustering;
pub mod metrics;
pub mod multigraph;
pub mod nodes;
pub mod optimizer;
pub mod recovery;
pub mod rng;
pub mod synth;
