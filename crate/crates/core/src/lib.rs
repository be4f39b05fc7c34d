//! Canonical Hub Labeling (CHL) construction and querying.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] and [`rank`] hold the immutable inputs: a positively weighted
//!   graph and a total order on its vertices.
//! * [`oracle`] computes reference answers by brute force: single-source
//!   distances and the canonical labeling itself.
//! * [`label`] and [`table`] hold label containers and the three query
//!   primitives used during construction, cleaning, and user queries.
//! * [`smp`] builds the labeling with pruned Dijkstra trees (sequential PLL,
//!   LCC, and GLL), and [`plant`] does so without any dependency between
//!   trees.
//! * [`codec`] reads and writes labelings.

pub mod codec;
pub mod graph;
pub mod label;
pub mod oracle;
pub mod plant;
pub mod rank;
pub mod seed;
pub mod smp;
pub mod synthetic;
pub mod table;

/// Dense vertex id in `[0, n)`.
pub type Vertex = u32;

/// Exact integer path length.
pub type Dist = u64;

/// Sentinel for "no path". Never stored in a label.
pub const INF: Dist = Dist::MAX;

pub use graph::{Graph, GraphError};
pub use label::{HubLabel, LabelView, Labeling, Side};
pub use rank::Ranking;
pub use table::{CommonLabelTable, GlobalLocalTable, StoreError};
