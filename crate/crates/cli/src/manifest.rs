//! Run manifests: everything needed to redo a command, and nothing that
//! varies between identical runs (no timings, no host names).

use serde::{Deserialize, Serialize};

use crate::args::{BuildArgs, QueryArgs};

pub const TOOL: &str = "hublab";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildManifest {
    pub tool: String,
    pub version: String,
    pub args: BuildArgs,
    /// Defaulted knobs after resolution.
    pub resolved: Resolved,
    pub graph_digest: String,
    pub ranking_digest: String,
    pub n: usize,
    pub directed: bool,
    pub outputs: Outputs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub workers: usize,
    pub psi_th: f64,
    pub syncs: usize,
    pub q: usize,
    pub eta: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Outputs {
    pub labels: Option<String>,
    pub order: Option<String>,
    pub text: Option<String>,
    pub traffic: Option<String>,
    pub results: Option<String>,
    pub stats: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryManifest {
    pub tool: String,
    pub version: String,
    pub args: QueryArgs,
    pub labels_digest: String,
    /// Digest of the query file, when one was given.
    pub queries_digest: Option<String>,
    pub outputs: Outputs,
}

pub fn version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}
