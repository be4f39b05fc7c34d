//! A simulated cluster of `q` nodes that build a hub-partitioned labeling.
//!
//! Nodes share nothing but the read-only graph and ranking; everything else
//! crosses a metered [`bus::MessageBus`]. Labels with hub `h` live on node
//! `position(h) mod q`.

pub mod bus;
pub mod config;
pub mod run;
pub mod schedule;
pub mod shard;
pub mod wire;

pub use bus::{meter_report, run_cluster, write_traffic_csv, MessageBus, Op, TrafficRecord, TrafficSummary};
pub use config::{ClusterConfig, ClusterConfigError};
pub use run::{dgll_run, hybrid_run, plant_run, run, Algorithm, RunOutput};
pub use schedule::{default_syncs, owner, partition_tasks, sync_schedule};
pub use shard::PartitionedLabeling;
