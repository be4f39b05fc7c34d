use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "hublab", version, about = "Canonical hub labeling: build, query, verify, stats")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a labeling and write it with a run manifest.
    Build(BuildArgs),
    /// Answer distance queries from a labeling.
    Query(QueryArgs),
    /// Check cover, respects-ranking, and minimality of a labeling.
    Verify(VerifyArgs),
    /// Emit per-tree counts, psi trace, ALS, label-size histogram, and traffic CSVs.
    Stats(StatsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    /// DIMACS `.gr` with 1-based ids.
    Dimacs,
    /// `u v [w]` lines with 0-based ids.
    Edges,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMethod {
    Degree,
    Betweenness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    Seqpll,
    Lcc,
    Gll,
    Plant,
    Dgll,
    Hybrid,
}

impl Algo {
    /// Whether the algorithm runs on the simulated cluster and writes shards.
    pub fn is_cluster(self) -> bool {
        matches!(self, Algo::Plant | Algo::Dgll | Algo::Hybrid)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphClass {
    ScaleFree,
    Road,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QueryMode {
    Qlsn,
    Qfdl,
    Qdol,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphArgs {
    /// Input graph file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Dimacs)]
    pub format: Format,
    /// Edge lists only: treat lines as arcs.
    #[arg(long)]
    pub directed: bool,
    /// Edge lists only: read a third weight column.
    #[arg(long)]
    pub weighted: bool,
    /// Replace weights with uniform integers in [1, sqrt n).
    #[arg(long)]
    pub random_weights: bool,
    #[arg(long, value_enum, default_value_t = RankMethod::Degree)]
    pub ranking: RankMethod,
    /// Shortest-path trees sampled for the betweenness ranking.
    #[arg(long, default_value_t = 16)]
    pub samples: usize,
    /// Root of every random stream (weights, betweenness roots, queries, delivery).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildOpts {
    #[arg(long, value_enum, default_value_t = Algo::Seqpll)]
    pub algo: Algo,
    /// Worker threads; falls back to HUBLAB_WORKERS, then to the core count.
    #[arg(long, env = "HUBLAB_WORKERS")]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = 4.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub q: usize,
    #[arg(long, default_value_t = 8)]
    pub beta: u32,
    /// Superstep count; defaults to ceil(log8 n).
    #[arg(long)]
    pub syncs: Option<usize>,
    /// Hybrid switch threshold; defaults to 100, or 500 for road graphs.
    #[arg(long)]
    pub psi_th: Option<f64>,
    #[arg(long, value_enum, default_value_t = GraphClass::ScaleFree)]
    pub graph_class: GraphClass,
    #[arg(long, default_value_t = 16)]
    pub eta: usize,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub opts: BuildOpts,
    /// Labeling file, or shard directory for cluster algorithms.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the labeling as text.
    #[arg(long)]
    pub text: Option<PathBuf>,
    /// Traffic CSV for cluster algorithms.
    #[arg(long)]
    pub traffic: Option<PathBuf>,
    /// Manifest path; defaults to `<out>.manifest.json`, or `manifest.json` inside a shard directory.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Rerun the build recorded in a manifest; other flags are ignored.
    #[arg(long)]
    #[serde(skip)]
    pub from_manifest: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryArgs {
    #[arg(long, value_enum)]
    pub mode: Option<QueryMode>,
    /// Labeling file (qlsn, qdol) or shard directory (qfdl).
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// File of `u v` lines.
    #[arg(long)]
    pub queries: Option<PathBuf>,
    /// Generate this many uniform random queries instead.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Simulated nodes for qdol.
    #[arg(long, default_value_t = 1)]
    pub q: usize,
    /// Results file, one distance per line.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Throughput CSV.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub from_manifest: Option<PathBuf>,
}

#[derive(Args, Clone, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Labeling file or shard directory.
    #[arg(long)]
    pub labels: PathBuf,
    /// Check every pair up to this many vertices; sample pairs above.
    #[arg(long, default_value_t = 512)]
    pub limit: usize,
    /// Sampled pairs for graphs above the limit.
    #[arg(long, default_value_t = 2000)]
    pub pairs: usize,
}

#[derive(Args, Clone, Debug)]
pub struct StatsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub opts: BuildOpts,
    /// Existing labeling; when absent the labeling is built with --algo.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: PathBuf,
}
