//! Graph loading, ranking, and the digests recorded in manifests.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use hublab_core::graph::{assign_random_weights, load_dimacs_gr, load_edge_list};
use hublab_core::rank::{rank_by_approx_betweenness, rank_by_degree};
use hublab_core::seed::{self, Stream};
use hublab_core::{Graph, Ranking, Vertex};
use sha2::{Digest, Sha256};

use crate::args::{Format, GraphArgs, RankMethod};
use crate::error::{at, CliError, Result};

pub fn load_graph(args: &GraphArgs) -> Result<Graph> {
    let path = args.graph.as_deref().ok_or_else(|| CliError::usage("--graph is required"))?;
    let reader = BufReader::new(at(path, File::open(path))?);
    let g = match args.format {
        Format::Dimacs => load_dimacs_gr(reader),
        Format::Edges => load_edge_list(reader, args.directed, args.weighted),
    };
    let g = at(path, g)?;
    Ok(if args.random_weights { assign_random_weights(&g, seed::derive(args.seed, Stream::Weights)) } else { g })
}

pub fn rank(g: &Graph, args: &GraphArgs) -> Ranking {
    match args.ranking {
        RankMethod::Degree => rank_by_degree(g),
        RankMethod::Betweenness => {
            rank_by_approx_betweenness(g, args.samples, seed::derive(args.seed, Stream::BetweennessRoots))
        }
    }
}

pub fn graph_digest(g: &Graph) -> String {
    let mut h = Sha256::new();
    h.update((g.n() as u64).to_le_bytes());
    h.update([g.is_directed() as u8]);
    for (u, v, w) in g.edges() {
        h.update(u.to_le_bytes());
        h.update(v.to_le_bytes());
        h.update(w.to_le_bytes());
    }
    hex::encode(h.finalize())
}

pub fn ranking_digest(r: &Ranking) -> String {
    let mut h = Sha256::new();
    for &x in r.ranks() {
        h.update(x.to_le_bytes());
    }
    hex::encode(h.finalize())
}

pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = at(path, std::fs::read(path))?;
    Ok(hex::encode(Sha256::digest(bytes)))
}

/// One vertex id per line, highest rank first.
pub fn write_order(r: &Ranking, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(at(path, File::create(path))?);
    for v in r.order() {
        at(path, writeln!(w, "{v}"))?;
    }
    at(path, w.flush())
}

pub fn read_order(path: &Path) -> Result<Ranking> {
    let reader = BufReader::new(at(path, File::open(path))?);
    let mut order = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = at(path, line)?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let v: Vertex = t.parse().map_err(|_| CliError::io(format!("{}: line {}: bad vertex id", path.display(), i + 1)))?;
        order.push(v);
    }
    Ranking::from_order(order).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}
