use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use hublab_cluster::config::{PSI_TH_ROAD, PSI_TH_SCALE_FREE};
use hublab_cluster::{default_syncs, run, write_traffic_csv, Algorithm, ClusterConfig, PartitionedLabeling, TrafficRecord};
use hublab_core::codec::write_text;
use hublab_core::plant::PsiRecord;
use hublab_core::smp::{default_workers, gll, lcc, seq_pll, BuildConfig};
use hublab_core::{Graph, Labeling, Ranking};

use clap::ValueEnum;

use crate::args::{Algo, BuildArgs, BuildOpts, GraphClass};
use crate::error::{at, CliError, Result};
use crate::inputs::{graph_digest, load_graph, rank, ranking_digest};
use crate::manifest::{self, BuildManifest, Outputs, Resolved};
use crate::store::{self, order_path, MANIFEST_FILE};

/// Labeling produced by one build, in the layout its algorithm writes.
pub struct Built {
    pub single: Option<Labeling>,
    pub shards: Option<PartitionedLabeling>,
    pub traffic: Vec<TrafficRecord>,
    pub psi: Vec<PsiRecord>,
    pub resolved: Resolved,
}

impl Built {
    pub fn labeling(&self, r: &Ranking) -> Labeling {
        match (&self.single, &self.shards) {
            (Some(lab), _) => lab.clone(),
            (None, Some(p)) => p.union(r),
            (None, None) => unreachable!("a build yields a labeling"),
        }
    }
}

/// Fills in defaults. Cluster algorithms run one worker per node unless
/// told otherwise, which keeps their traffic reproducible.
pub fn resolve(opts: &BuildOpts, n: usize) -> Resolved {
    let workers = match opts.workers {
        Some(w) => w,
        None if opts.algo.is_cluster() => 1,
        None => default_workers(),
    };
    let psi_th = opts.psi_th.unwrap_or(match opts.graph_class {
        GraphClass::ScaleFree => PSI_TH_SCALE_FREE,
        GraphClass::Road => PSI_TH_ROAD,
    });
    Resolved { workers, psi_th, syncs: opts.syncs.unwrap_or_else(|| default_syncs(n)), q: opts.q, eta: opts.eta }
}

pub fn build_labeling(g: &Graph, r: &Ranking, opts: &BuildOpts, seed: u64) -> Result<Built> {
    let resolved = resolve(opts, g.n());
    let smp_cfg = BuildConfig { workers: resolved.workers, alpha: opts.alpha, seed, jitter: false };
    smp_cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;
    let single = |lab| Built { single: Some(lab), shards: None, traffic: Vec::new(), psi: Vec::new(), resolved: resolved.clone() };
    let algo = match opts.algo {
        Algo::Seqpll => return Ok(single(seq_pll(g, r))),
        Algo::Lcc => return Ok(single(lcc(g, r, &smp_cfg))),
        Algo::Gll => return Ok(single(gll(g, r, &smp_cfg))),
        Algo::Plant => Algorithm::Plant,
        Algo::Dgll => Algorithm::Dgll,
        Algo::Hybrid => Algorithm::Hybrid,
    };
    let cfg = ClusterConfig {
        q: opts.q,
        syncs: Some(resolved.syncs),
        beta: opts.beta,
        psi_th: resolved.psi_th,
        eta: opts.eta,
        workers_per_node: resolved.workers,
        seed,
    };
    let out = run(g, r, &cfg, algo).map_err(|e| CliError::usage(e.to_string()))?;
    Ok(Built { single: None, shards: Some(out.labeling), traffic: out.traffic, psi: out.psi, resolved })
}

fn default_manifest(args: &BuildArgs, out: &Path) -> PathBuf {
    if let Some(m) = &args.manifest {
        m.clone()
    } else if args.opts.algo.is_cluster() {
        out.join(MANIFEST_FILE)
    } else {
        let mut s = out.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    }
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

pub fn cmd_build(args: &BuildArgs) -> Result<()> {
    match &args.from_manifest {
        Some(path) => {
            let m: BuildManifest = store::read_json(path)?;
            let mut rerun = m.args.clone();
            rerun.opts.workers = Some(m.resolved.workers);
            rerun.opts.psi_th = Some(m.resolved.psi_th);
            rerun.opts.syncs = Some(m.resolved.syncs);
            execute(&rerun, Some(&m))
        }
        None => execute(args, None),
    }
}

fn execute(args: &BuildArgs, recorded: Option<&BuildManifest>) -> Result<()> {
    let out = args.out.as_deref().ok_or_else(|| CliError::usage("--out is required"))?;
    let g = load_graph(&args.graph)?;
    let gd = graph_digest(&g);
    let r = rank(&g, &args.graph);
    let rd = ranking_digest(&r);
    if let Some(m) = recorded {
        if m.graph_digest != gd {
            return Err(CliError::io(format!("graph digest {gd} differs from the manifest's {}", m.graph_digest)));
        }
        if m.ranking_digest != rd {
            return Err(CliError::io(format!("ranking digest {rd} differs from the manifest's {}", m.ranking_digest)));
        }
    }

    let start = Instant::now();
    let built = build_labeling(&g, &r, &args.opts, args.graph.seed)?;
    let elapsed = start.elapsed();

    let mut outputs = Outputs { labels: Some(display(out)), ..Default::default() };
    if let Some(p) = &built.shards {
        store::write_shards(p, &r, out)?;
        outputs.order = Some(display(&out.join(store::ORDER_FILE)));
    } else {
        let lab = built.single.as_ref().expect("single-file build");
        store::write_labeling(lab, out)?;
        let order = order_path(out);
        crate::inputs::write_order(&r, &order)?;
        outputs.order = Some(display(&order));
    }
    let lab = built.labeling(&r);
    if let Some(t) = &args.text {
        let mut w = BufWriter::new(at(t, File::create(t))?);
        at(t, write_text(&lab, &mut w))?;
        outputs.text = Some(display(t));
    }
    if let Some(t) = &args.traffic {
        let mut w = BufWriter::new(at(t, File::create(t))?);
        at(t, write_traffic_csv(&built.traffic, &mut w))?;
        at(t, w.flush())?;
        outputs.traffic = Some(display(t));
    }

    let manifest = BuildManifest {
        tool: manifest::TOOL.into(),
        version: manifest::version(),
        args: recorded.map_or_else(|| BuildArgs { from_manifest: None, ..args.clone() }, |m| m.args.clone()),
        resolved: built.resolved.clone(),
        graph_digest: gd,
        ranking_digest: rd,
        n: g.n(),
        directed: g.is_directed(),
        outputs,
    };
    store::write_json(&manifest, &default_manifest(args, out))?;

    println!("algo {}", args.opts.algo.to_possible_value().expect("no skipped variants").get_name());
    println!("n {}", g.n());
    println!("labels {}", lab.total_labels());
    println!("ALS {:.6}", lab.als());
    println!("build_seconds {:.6}", elapsed.as_secs_f64());
    Ok(())
}
