use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use hublab_query::batch::write_answers;
use hublab_query::{qdol, qfdl, qlsn, write_stats_csv, Mode, QdolStore, QueryBatch, QueryStats};
use sha2::{Digest, Sha256};

use crate::args::{QueryArgs, QueryMode};
use crate::error::{at, CliError, Result};
use crate::inputs::file_digest;
use crate::manifest::{self, Outputs, QueryManifest};
use crate::store::{self, shard_path, stored_ranking};

/// Digest over a labeling file, or over every shard of a directory.
pub fn labels_digest(path: &Path) -> Result<String> {
    if !path.is_dir() {
        return file_digest(path);
    }
    let mut h = Sha256::new();
    let mut i = 0;
    while shard_path(path, i).is_file() {
        h.update(file_digest(&shard_path(path, i))?.as_bytes());
        i += 1;
    }
    Ok(hex::encode(h.finalize()))
}

fn batch(args: &QueryArgs, n: usize) -> Result<QueryBatch> {
    match (&args.queries, args.random) {
        (Some(_), Some(_)) => Err(CliError::usage("--queries and --random are exclusive")),
        (Some(p), None) => {
            let f = at(p, File::open(p))?;
            Ok(at(p, QueryBatch::read(BufReader::new(f)))?)
        }
        (None, Some(count)) => Ok(QueryBatch::random(n, count, args.seed)),
        (None, None) => Err(CliError::usage("one of --queries or --random is required")),
    }
}

pub fn cmd_query(args: &QueryArgs) -> Result<()> {
    match &args.from_manifest {
        Some(path) => {
            let m: QueryManifest = store::read_json(path)?;
            let digest = labels_digest(m.args.labels.as_deref().ok_or_else(|| CliError::io("manifest lacks labels"))?)?;
            if digest != m.labels_digest {
                return Err(CliError::io(format!("labels digest {digest} differs from the manifest's {}", m.labels_digest)));
            }
            execute(&m.args)
        }
        None => execute(args),
    }
}

fn execute(args: &QueryArgs) -> Result<()> {
    let mode = args.mode.ok_or_else(|| CliError::usage("--mode is required"))?;
    let labels = args.labels.as_deref().ok_or_else(|| CliError::usage("--labels is required"))?;
    let out = args.out.as_deref().ok_or_else(|| CliError::usage("--out is required"))?;
    if args.q == 0 {
        return Err(CliError::usage("--q must be at least 1"));
    }
    let is_dir = labels.is_dir();
    match (mode, is_dir) {
        (QueryMode::Qfdl, false) => {
            return Err(CliError::usage(format!(
                "layout error: qfdl needs a hub-partitioned shard directory, {} is a single labeling",
                labels.display()
            )))
        }
        (QueryMode::Qlsn | QueryMode::Qdol, true) => {
            return Err(CliError::usage(format!(
                "layout error: {} needs a single labeling file, {} holds hub-partitioned shards",
                mode_of(mode).as_str(),
                labels.display()
            )))
        }
        _ => {}
    }
    let r = stored_ranking(labels)?
        .ok_or_else(|| CliError::io(format!("{}: no ranking file beside the labeling", labels.display())))?;

    let (answers, elapsed, queries) = match store::load(labels)? {
        store::Stored::Single(lab) => {
            check_n(lab.n(), r.n())?;
            let b = batch(args, lab.n())?;
            if mode == QueryMode::Qlsn {
                let start = Instant::now();
                let a = qlsn(&b, &lab, &r);
                (a, start.elapsed(), b.len())
            } else {
                let qstore = QdolStore::build(&lab, args.q);
                let start = Instant::now();
                let a = qdol(&b, &qstore, &r, args.seed).answers;
                (a, start.elapsed(), b.len())
            }
        }
        store::Stored::Shards(shards) => {
            check_n(shards.n(), r.n())?;
            let b = batch(args, shards.n())?;
            let start = Instant::now();
            let a = qfdl(&b, &shards, &r, args.seed).answers;
            (a, start.elapsed(), b.len())
        }
    };

    let mut w = BufWriter::new(at(out, File::create(out))?);
    at(out, write_answers(&answers, &mut w))?;
    let mut outputs = Outputs { results: Some(out.display().to_string()), ..Default::default() };
    let stats = QueryStats::new(mode_of(mode), queries, elapsed);
    if let Some(s) = &args.stats {
        let mut w = BufWriter::new(at(s, File::create(s))?);
        at(s, write_stats_csv(std::slice::from_ref(&stats), &mut w))?;
        at(s, w.flush())?;
        outputs.stats = Some(s.display().to_string());
    }
    let manifest_path = args.manifest.clone().unwrap_or_else(|| {
        let mut s = out.as_os_str().to_owned();
        s.push(".manifest.json");
        s.into()
    });
    let m = QueryManifest {
        tool: manifest::TOOL.into(),
        version: manifest::version(),
        args: QueryArgs { mode: Some(mode), from_manifest: None, ..args.clone() },
        labels_digest: labels_digest(labels)?,
        queries_digest: args.queries.as_deref().map(file_digest).transpose()?,
        outputs,
    };
    store::write_json(&m, &manifest_path)?;
    println!("mode {}", stats.mode.as_str());
    println!("queries {}", stats.queries);
    println!("qps {:.1}", stats.qps());
    println!("mean_us {:.3}", stats.mean_us());
    Ok(())
}

fn check_n(labels: usize, ranking: usize) -> Result<()> {
    if labels == ranking {
        Ok(())
    } else {
        Err(CliError::io(format!("labeling has {labels} vertices but its ranking has {ranking}")))
    }
}

fn mode_of(m: QueryMode) -> Mode {
    match m {
        QueryMode::Qlsn => Mode::Qlsn,
        QueryMode::Qfdl => Mode::Qfdl,
        QueryMode::Qdol => Mode::Qdol,
    }
}
