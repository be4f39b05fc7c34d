use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use hublab_cluster::write_traffic_csv;
use hublab_core::plant::{psi_trace, write_psi_csv};
use hublab_core::{Labeling, Ranking};

use crate::args::StatsArgs;
use crate::build::build_labeling;
use crate::error::{at, Result};
use crate::inputs::{load_graph, rank};
use crate::store::{self, stored_ranking};

/// Labels per hub, listed by descending hub rank. For a canonical labeling
/// this is the label count of each vertex's shortest-path tree.
pub fn tree_label_counts(lab: &Labeling, r: &Ranking) -> Vec<usize> {
    let mut per_hub = vec![0usize; lab.n()];
    for (_, _, l) in lab.iter() {
        per_hub[l.hub as usize] += 1;
    }
    r.order().iter().map(|&h| per_hub[h as usize]).collect()
}

pub fn write_tree_labels_csv(lab: &Labeling, r: &Ranking, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "tree_index,root,rank,labels")?;
    for (i, (&root, count)) in r.order().iter().zip(tree_label_counts(lab, r)).enumerate() {
        writeln!(w, "{i},{root},{},{count}", r.rank(root))?;
    }
    Ok(())
}

pub fn write_als_csv(lab: &Labeling, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "convention,als")?;
    writeln!(w, "excluding_self,{:.6}", lab.als())?;
    writeln!(w, "including_self,{:.6}", lab.als_with_self())
}

/// Vertices per stored label-set size, one block per side.
pub fn write_histogram_csv(lab: &Labeling, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "side,size,vertices")?;
    for &side in lab.sides() {
        let mut hist = BTreeMap::new();
        for v in 0..lab.n() as u32 {
            *hist.entry(lab.labels(side, v).len()).or_insert(0usize) += 1;
        }
        let name = if lab.is_directed() { format!("{side:?}").to_lowercase() } else { "both".into() };
        for (size, count) in hist {
            writeln!(w, "{name},{size},{count}")?;
        }
    }
    Ok(())
}

fn emit(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>) -> Result<()> {
    let mut w = BufWriter::new(at(path, File::create(path))?);
    at(path, f(&mut w))?;
    at(path, w.flush())
}

pub fn cmd_stats(args: &StatsArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let (lab, r, traffic) = match &args.labels {
        Some(path) => {
            let r = match stored_ranking(path)? {
                Some(r) => r,
                None => rank(&g, &args.graph),
            };
            (store::load(path)?.into_labeling(&r), r, Vec::new())
        }
        None => {
            let r = rank(&g, &args.graph);
            let built = build_labeling(&g, &r, &args.opts, args.graph.seed)?;
            (built.labeling(&r), r, built.traffic)
        }
    };
    let dir = &args.out_dir;
    at(dir, fs::create_dir_all(dir))?;
    emit(&dir.join("tree_labels.csv"), |w| write_tree_labels_csv(&lab, &r, w))?;
    emit(&dir.join("psi.csv"), |w| write_psi_csv(&psi_trace(&g, &r), w))?;
    emit(&dir.join("als.csv"), |w| write_als_csv(&lab, w))?;
    emit(&dir.join("histogram.csv"), |w| write_histogram_csv(&lab, w))?;
    emit(&dir.join("traffic.csv"), |w| write_traffic_csv(&traffic, w))?;
    println!("ALS {:.6}", lab.als());
    println!("wrote {}", dir.display());
    Ok(())
}
