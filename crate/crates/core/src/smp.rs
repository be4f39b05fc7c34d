//! Shared-memory builders: pruned Dijkstra with Rank Queries, sequential
//! PLL, LCC (construct, then clean), and GLL (construct and clean in
//! supersteps bounded by `alpha * n` fresh labels).

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::Rng;
use rayon::prelude::*;

use crate::graph::{Direction, Graph};
use crate::label::{dq_clean, HubLabel, Labeling, RootIndex, Side};
use crate::rank::Ranking;
use crate::seed::{self, Stream};
use crate::table::{CommonLabelTable, GlobalLocalTable};
use crate::{Dist, Vertex, INF};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("synchronization threshold alpha must exceed 1 (got {0})")]
    Alpha(f64),
    #[error("worker count must be positive")]
    Workers,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BuildConfig {
    pub workers: usize,
    /// GLL synchronizes once the local table holds more than `alpha * n` labels.
    pub alpha: f64,
    pub seed: u64,
    /// Randomly yield between label appends to shake out interleavings.
    pub jitter: bool,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig { workers: default_workers(), alpha: 4.0, seed: 0, jitter: false }
    }
}

impl BuildConfig {
    pub fn with_workers(workers: usize) -> Self {
        BuildConfig { workers, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.alpha.is_nan() || self.alpha <= 1.0 {
            return Err(ConfigError::Alpha(self.alpha));
        }
        if self.workers == 0 {
            return Err(ConfigError::Workers);
        }
        Ok(())
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Per-thread Dijkstra scratch. Reset cost is proportional to the vertices
/// the previous tree touched, not to `n`.
#[derive(Debug)]
pub struct Workspace {
    dist: Vec<Dist>,
    touched: Vec<Vertex>,
    heap: BinaryHeap<Reverse<(Dist, Vertex)>>,
    index: RootIndex,
}

impl Workspace {
    pub fn new(n: usize) -> Self {
        Workspace { dist: vec![INF; n], touched: Vec::new(), heap: BinaryHeap::new(), index: RootIndex::new(n) }
    }

    fn reset(&mut self) {
        for v in self.touched.drain(..) {
            self.dist[v as usize] = INF;
        }
        self.heap.clear();
    }
}

/// Traversal direction of the tree that produces `side` labels.
pub fn tree_direction(g: &Graph, side: Side) -> Direction {
    match (g.is_directed(), side) {
        (true, Side::Out) => Direction::Reverse,
        _ => Direction::Forward,
    }
}

/// Label sides a graph needs: one for undirected, two for directed.
pub fn label_sides(g: &Graph) -> &'static [Side] {
    if g.is_directed() {
        &[Side::Out, Side::In]
    } else {
        &[Side::Out]
    }
}

/// Per-tree counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TreeStats {
    pub explored: usize,
    pub labels: usize,
}

/// Pruned Dijkstra with Rank Queries for one root and one label side,
/// reporting each new label through `emit` instead of storing it.
///
/// A popped vertex ranked above the root is pruned without a label. So is
/// one whose distance is already certified by shared hubs in `tables`
/// (or in `common`, when given).
#[allow(clippy::too_many_arguments)]
pub fn prune_tree(
    g: &Graph,
    r: &Ranking,
    root: Vertex,
    side: Side,
    tables: &GlobalLocalTable,
    common: Option<&CommonLabelTable>,
    ws: &mut Workspace,
    mut emit: impl FnMut(Vertex, Dist),
) -> TreeStats {
    let dir = tree_direction(g, side);
    ws.reset();
    tables.load_root_index(side.opposite(), root, &mut ws.index);
    ws.dist[root as usize] = 0;
    ws.touched.push(root);
    ws.heap.push(Reverse((0, root)));
    let mut stats = TreeStats::default();
    while let Some(Reverse((d, v))) = ws.heap.pop() {
        if d > ws.dist[v as usize] {
            continue;
        }
        stats.explored += 1;
        if v != root {
            if r.outranks(v, root) {
                continue;
            }
            if tables.dq(side, v, d, &ws.index) || common.is_some_and(|c| c.covers(side, root, v, d, r, true)) {
                continue;
            }
            emit(v, d);
            stats.labels += 1;
        }
        for (u, w) in g.neighbors(v, dir) {
            let nd = d + w;
            let slot = &mut ws.dist[u as usize];
            if nd < *slot {
                if *slot == INF {
                    ws.touched.push(u);
                }
                *slot = nd;
                ws.heap.push(Reverse((nd, u)));
            }
        }
    }
    stats
}

/// Pruned Dijkstra from `root` appending every new label to the local tier.
/// Directed graphs run one forward tree (inbound labels) and one reverse
/// tree (outbound labels).
pub fn prune_dij_rq(
    g: &Graph,
    r: &Ranking,
    root: Vertex,
    tables: &GlobalLocalTable,
    common: Option<&CommonLabelTable>,
    ws: &mut Workspace,
) -> TreeStats {
    let mut total = TreeStats::default();
    for &side in label_sides(g) {
        let s = prune_tree(g, r, root, side, tables, common, ws, |v, d| tables.append(side, v, HubLabel::new(root, d)));
        total.explored += s.explored;
        total.labels += s.labels;
    }
    total
}

/// Sequential Pruned Landmark Labeling: one tree per vertex in descending
/// rank, each committed before the next starts.
pub fn seq_pll(g: &Graph, r: &Ranking) -> Labeling {
    let mut table = GlobalLocalTable::new(g.n(), g.is_directed());
    let mut ws = Workspace::new(g.n());
    let mut keep = Vec::new();
    for &root in r.order() {
        prune_dij_rq(g, r, root, &table, None, &mut ws);
        keep.clear();
        keep.resize(table.local_count(), true);
        table.commit_superstep(&keep, r).expect("mask sized from local count");
    }
    table.into_global()
}

/// Counters from a superstep run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BuildTrace {
    pub supersteps: usize,
    /// Labels produced by construction, before cleaning.
    pub generated: usize,
    /// Labels removed by cleaning.
    pub removed: usize,
}

/// Builds trees for `roots[cursor..]` on `workers` threads until the roots
/// run out or the local table holds more than `threshold` labels. Trees in
/// flight when the threshold trips are finished.
#[allow(clippy::too_many_arguments)]
pub fn construct_parallel(
    g: &Graph,
    r: &Ranking,
    roots: &[Vertex],
    cursor: &AtomicUsize,
    tables: &GlobalLocalTable,
    common: Option<&CommonLabelTable>,
    workers: usize,
    threshold: usize,
    jitter: Option<u64>,
) {
    let work = |worker: usize| {
        let mut ws = Workspace::new(g.n());
        let mut rng = jitter.map(|s| seed::rng(s ^ worker as u64, Stream::Jitter));
        while tables.local_count() <= threshold {
            let i = cursor.fetch_add(1, Ordering::AcqRel);
            let Some(&root) = roots.get(i) else { break };
            for &side in label_sides(g) {
                prune_tree(g, r, root, side, tables, common, &mut ws, |v, d| {
                    tables.append(side, v, HubLabel::new(root, d));
                    if let Some(rng) = rng.as_mut() {
                        if rng.gen_ratio(1, 3) {
                            std::thread::yield_now();
                        }
                    }
                });
            }
        }
    };
    if workers <= 1 {
        work(0);
        return;
    }
    std::thread::scope(|s| {
        for w in 0..workers {
            s.spawn(move || work(w));
        }
    });
}

/// Keep-mask over `candidates`: a label survives unless [`dq_clean`] finds a
/// higher-ranked hub covering it in the union of both tiers.
pub fn clean_mask(tables: &GlobalLocalTable, r: &Ranking, candidates: &[(Side, Vertex, HubLabel)]) -> Vec<bool> {
    candidates
        .par_iter()
        .map(|&(side, v, l)| {
            tables.with_view(side.opposite(), l.hub, true, |lh| {
                tables.with_view(side, v, true, |lv| !dq_clean(l.dist, &lh, &lv, r))
            })
        })
        .collect()
}

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool")
}

fn run_supersteps(g: &Graph, r: &Ranking, cfg: &BuildConfig, threshold: usize) -> (Labeling, BuildTrace) {
    cfg.validate().expect("invalid build config");
    let pool = pool(cfg.workers);
    let mut tables = GlobalLocalTable::new(g.n(), g.is_directed());
    let cursor = AtomicUsize::new(0);
    let roots = r.order();
    let jitter = cfg.jitter.then_some(cfg.seed);
    let mut trace = BuildTrace::default();
    loop {
        construct_parallel(g, r, roots, &cursor, &tables, None, cfg.workers, threshold, jitter);
        tables.seal(r);
        let candidates = tables.local_labels();
        let keep = pool.install(|| clean_mask(&tables, r, &candidates));
        let kept = tables.commit_superstep(&keep, r).expect("mask sized from local labels");
        trace.supersteps += 1;
        trace.generated += candidates.len();
        trace.removed += candidates.len() - kept;
        if cursor.load(Ordering::Acquire) >= roots.len() {
            break;
        }
    }
    (tables.into_global(), trace)
}

/// LCC label construction only: every tree built concurrently, then sorted,
/// with no cleaning. Respects the ranking and covers every pair, but may
/// hold redundant labels.
pub fn lcc_phase_one(g: &Graph, r: &Ranking, cfg: &BuildConfig) -> Labeling {
    cfg.validate().expect("invalid build config");
    let mut tables = GlobalLocalTable::new(g.n(), g.is_directed());
    let cursor = AtomicUsize::new(0);
    construct_parallel(g, r, r.order(), &cursor, &tables, None, cfg.workers, usize::MAX, cfg.jitter.then_some(cfg.seed));
    let keep = vec![true; tables.local_count()];
    tables.commit_superstep(&keep, r).expect("mask sized from local count");
    tables.into_global()
}

/// Label Construction and Cleaning: one construction phase, then one
/// cleaning pass over every label.
pub fn lcc(g: &Graph, r: &Ranking, cfg: &BuildConfig) -> Labeling {
    lcc_traced(g, r, cfg).0
}

pub fn lcc_traced(g: &Graph, r: &Ranking, cfg: &BuildConfig) -> (Labeling, BuildTrace) {
    run_supersteps(g, r, cfg, usize::MAX)
}

/// Global Local Labeling: construction pauses whenever more than
/// `alpha * n` fresh labels accumulate; only those are cleaned before
/// being committed.
pub fn gll(g: &Graph, r: &Ranking, cfg: &BuildConfig) -> Labeling {
    gll_traced(g, r, cfg).0
}

pub fn gll_traced(g: &Graph, r: &Ranking, cfg: &BuildConfig) -> (Labeling, BuildTrace) {
    let threshold = cfg.alpha * g.n() as f64;
    let threshold = if threshold >= usize::MAX as f64 { usize::MAX } else { threshold as usize };
    run_supersteps(g, r, cfg, threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{oracle, synthetic};

    fn l(h: Vertex, d: Dist) -> HubLabel {
        HubLabel::new(h, d)
    }

    fn cfg(workers: usize, alpha: f64) -> BuildConfig {
        BuildConfig { workers, alpha, seed: 7, jitter: false }
    }

    fn collect_tree(g: &Graph, r: &Ranking, root: Vertex, t: &GlobalLocalTable) -> (Vec<(Vertex, Dist)>, TreeStats) {
        let mut ws = Workspace::new(g.n());
        let mut got = Vec::new();
        let stats = prune_tree(g, r, root, Side::Out, t, None, &mut ws, |v, d| got.push((v, d)));
        (got, stats)
    }

    #[test]
    fn prune_p3_lowest_root_stops_at_b() {
        let (g, r) = (synthetic::p3(), synthetic::p3_ranking());
        let t = GlobalLocalTable::new(3, false);
        let (got, stats) = collect_tree(&g, &r, 2, &t);
        assert!(got.is_empty());
        assert_eq!(stats.explored, 2);
    }

    #[test]
    fn prune_p3_top_root_labels_both_ends() {
        let (g, r) = (synthetic::p3(), synthetic::p3_ranking());
        let t = GlobalLocalTable::new(3, false);
        let (got, _) = collect_tree(&g, &r, 1, &t);
        assert_eq!(got, vec![(0, 1), (2, 1)]);
    }

    #[test]
    fn prune_p3_second_root_pruned_by_distance_query() {
        let (g, r) = (synthetic::p3(), synthetic::p3_ranking());
        let mut t = GlobalLocalTable::new(3, false);
        t.append(Side::Out, 0, l(1, 1));
        t.append(Side::Out, 2, l(1, 1));
        t.commit_superstep(&[true, true], &r).unwrap();
        let (got, _) = collect_tree(&g, &r, 0, &t);
        assert!(got.is_empty());
    }

    #[test]
    fn seq_pll_fixtures() {
        let lab = seq_pll(&synthetic::p3(), &synthetic::p3_ranking());
        assert_eq!(lab.labels(Side::Out, 0), &[l(1, 1)]);
        assert_eq!(lab.labels(Side::Out, 1), &[]);
        assert_eq!(lab.labels(Side::Out, 2), &[l(1, 1)]);

        let lab = seq_pll(&synthetic::k2(), &synthetic::k2_ranking());
        assert_eq!(lab.labels(Side::Out, 1), &[l(0, 5)]);
        assert_eq!(lab.labels(Side::Out, 0), &[]);

        let lab = seq_pll(&synthetic::diamond(), &synthetic::diamond_ranking());
        let lt = lab.labels(Side::Out, 3);
        assert!(lt.contains(&l(1, 1)));
        assert!(!lt.iter().any(|x| x.hub == 0));
    }

    #[test]
    fn seq_pll_matches_oracle_on_random_graphs() {
        for seed in 0..30 {
            let g = synthetic::gnm(20 + seed as usize, 50, seed % 3 == 0, 10, seed);
            let r = crate::rank::rank_by_degree(&g);
            assert_eq!(seq_pll(&g, &r), oracle::chl_oracle(&g, &r), "seed {seed}");
        }
    }

    #[test]
    fn lcc_single_worker_equals_seq_pll() {
        let g = synthetic::gnm(40, 100, false, 10, 3);
        let r = crate::rank::rank_by_degree(&g);
        assert_eq!(lcc(&g, &r, &cfg(1, 4.0)), seq_pll(&g, &r));
    }

    #[test]
    fn lcc_p3_under_jitter() {
        let (g, r) = (synthetic::p3(), synthetic::p3_ranking());
        let expected = oracle::chl_oracle(&g, &r);
        for seed in 0..50 {
            let c = BuildConfig { workers: 3, alpha: 4.0, seed, jitter: true };
            assert_eq!(lcc(&g, &r, &c), expected);
        }
    }

    #[test]
    fn lcc_random_graph_eight_workers() {
        let g = synthetic::gnm(64, 160, false, 10, 11);
        let r = crate::rank::rank_by_degree(&g);
        let c = BuildConfig { workers: 8, alpha: 4.0, seed: 1, jitter: true };
        assert_eq!(lcc(&g, &r, &c), oracle::chl_oracle(&g, &r));
    }

    #[test]
    fn gll_huge_alpha_is_one_superstep() {
        let g = synthetic::gnm(50, 120, false, 10, 5);
        let r = crate::rank::rank_by_degree(&g);
        let (lab, trace) = gll_traced(&g, &r, &cfg(4, 1e12));
        assert_eq!(trace.supersteps, 1);
        assert_eq!(lab, lcc(&g, &r, &cfg(4, 4.0)));
    }

    #[test]
    fn gll_alpha_robust() {
        let g = synthetic::gnm(64, 150, false, 10, 9);
        let r = crate::rank::rank_by_degree(&g);
        let expected = oracle::chl_oracle(&g, &r);
        for alpha in [1.01, 2.0, 4.0, 8.0, 32.0] {
            let (lab, trace) = gll_traced(&g, &r, &BuildConfig { workers: 4, alpha, seed: 2, jitter: true });
            assert_eq!(lab, expected, "alpha {alpha}");
            assert!(trace.supersteps >= 1);
        }
    }

    #[test]
    fn gll_directed() {
        for seed in 0..10 {
            let g = synthetic::gnm(30, 90, true, 10, seed);
            let r = crate::rank::rank_by_degree(&g);
            let c = BuildConfig { workers: 4, alpha: 2.0, seed, jitter: true };
            assert_eq!(gll(&g, &r, &c), oracle::chl_oracle(&g, &r), "seed {seed}");
        }
    }

    #[test]
    fn config_validation() {
        assert_eq!(cfg(1, 1.0).validate(), Err(ConfigError::Alpha(1.0)));
        assert_eq!(cfg(0, 4.0).validate(), Err(ConfigError::Workers));
        assert!(cfg(2, 4.0).validate().is_ok());
    }
}
