//! The `hublab` command line: build, query, verify, and stats.

pub mod args;
pub mod build;
pub mod error;
pub mod inputs;
pub mod manifest;
pub mod query;
pub mod stats;
pub mod store;
pub mod verify;

pub use error::CliError;

use args::Command;

pub fn dispatch(cmd: &Command) -> error::Result<()> {
    match cmd {
        Command::Build(a) => build::cmd_build(a),
        Command::Query(a) => query::cmd_query(a),
        Command::Verify(a) => verify::cmd_verify(a),
        Command::Stats(a) => stats::cmd_stats(a),
    }
}
