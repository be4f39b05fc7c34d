//! On-disk labeling layouts.
//!
//! A single labeling is one binary file `X` with its ranking in `X.order`.
//! A cluster build is a directory of `node_<i>.chlb` shards plus
//! `order.txt` and `manifest.json`.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use hublab_cluster::PartitionedLabeling;
use hublab_core::codec::{read_binary, read_text, write_binary, MAGIC};
use hublab_core::{Labeling, Ranking};

use crate::error::{at, CliError, Result};
use crate::inputs::{read_order, write_order};

pub const ORDER_FILE: &str = "order.txt";
pub const MANIFEST_FILE: &str = "manifest.json";

pub fn shard_path(dir: &Path, node: usize) -> PathBuf {
    dir.join(format!("node_{node}.chlb"))
}

/// Ranking file that accompanies a labeling at `path`.
pub fn order_path(path: &Path) -> PathBuf {
    if path.is_dir() {
        path.join(ORDER_FILE)
    } else {
        let mut s = path.as_os_str().to_owned();
        s.push(".order");
        PathBuf::from(s)
    }
}

pub enum Stored {
    Single(Labeling),
    Shards(PartitionedLabeling),
}

impl Stored {
    pub fn into_labeling(self, r: &Ranking) -> Labeling {
        match self {
            Stored::Single(lab) => lab,
            Stored::Shards(p) => p.union(r),
        }
    }
}

pub fn write_labeling(lab: &Labeling, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(at(path, File::create(path))?);
    at(path, write_binary(lab, &mut w))?;
    at(path, w.flush())
}

/// Reads a binary labeling, or a text one when the magic is absent.
pub fn read_labeling(path: &Path) -> Result<Labeling> {
    let bytes = at(path, fs::read(path))?;
    let lab = if bytes.starts_with(MAGIC) { read_binary(&bytes[..]) } else { read_text(&bytes[..]) };
    at(path, lab)
}

pub fn write_shards(p: &PartitionedLabeling, r: &Ranking, dir: &Path) -> Result<()> {
    at(dir, fs::create_dir_all(dir))?;
    for (i, shard) in p.shards().iter().enumerate() {
        write_labeling(shard, &shard_path(dir, i))?;
    }
    // stale shards from an earlier, wider run would be read back
    let mut extra = p.q();
    while shard_path(dir, extra).is_file() {
        at(dir, fs::remove_file(shard_path(dir, extra)))?;
        extra += 1;
    }
    write_order(r, &dir.join(ORDER_FILE))
}

pub fn read_shards(dir: &Path) -> Result<PartitionedLabeling> {
    let mut shards = Vec::new();
    while shard_path(dir, shards.len()).is_file() {
        shards.push(read_labeling(&shard_path(dir, shards.len()))?);
    }
    if shards.is_empty() {
        return Err(CliError::io(format!("{}: no node_0.chlb shard", dir.display())));
    }
    let shape = (shards[0].n(), shards[0].is_directed());
    if shards.iter().any(|s| (s.n(), s.is_directed()) != shape) {
        return Err(CliError::io(format!("{}: shards disagree on n or directedness", dir.display())));
    }
    Ok(PartitionedLabeling::new(shards))
}

pub fn load(path: &Path) -> Result<Stored> {
    if path.is_dir() {
        read_shards(path).map(Stored::Shards)
    } else {
        read_labeling(path).map(Stored::Single)
    }
}

/// The ranking stored beside `path`, if any.
pub fn stored_ranking(path: &Path) -> Result<Option<Ranking>> {
    let p = order_path(path);
    if p.is_file() {
        read_order(&p).map(Some)
    } else {
        Ok(None)
    }
}

/// Reads a JSON document.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let mut s = String::new();
    at(path, File::open(path).and_then(|f| BufReader::new(f).read_to_string(&mut s)))?;
    at(path, serde_json::from_str(&s))
}

pub fn write_json<T: serde::Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    at(path, fs::write(path, s))
}
