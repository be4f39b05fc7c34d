//! PLaNT: unpruned Dijkstra trees that carry the highest-ranked ancestor of
//! every path and emit only canonical labels, without reading any other
//! tree's output.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::graph::Graph;
use crate::label::{HubLabel, Labeling, Side};
use crate::rank::Ranking;
use crate::smp::{label_sides, tree_direction};
use crate::table::CommonLabelTable;
use crate::{Dist, Vertex, INF};

/// Output of one planted tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantTreeResult {
    pub root: Vertex,
    pub side: Side,
    /// `(v, d)` pairs; each becomes the label `(root, d)` of `v`.
    pub labels: Vec<(Vertex, Dist)>,
    /// Vertices popped from the queue.
    pub explored: usize,
}

impl PlantTreeResult {
    pub fn psi(&self) -> f64 {
        psi(self.explored, self.labels.len())
    }
}

/// Vertices explored per label, with a zero-label tree counted as one label.
pub fn psi(explored: usize, labels: usize) -> f64 {
    explored as f64 / labels.max(1) as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlantOptions {
    pub early_termination: bool,
}

impl Default for PlantOptions {
    fn default() -> Self {
        PlantOptions { early_termination: true }
    }
}

#[derive(Debug)]
pub struct PlantWorkspace {
    dist: Vec<Dist>,
    anc: Vec<Vertex>,
    settled: Vec<bool>,
    touched: Vec<Vertex>,
    heap: BinaryHeap<Reverse<(Dist, Vertex)>>,
}

impl PlantWorkspace {
    pub fn new(n: usize) -> Self {
        PlantWorkspace {
            dist: vec![INF; n],
            anc: vec![Vertex::MAX; n],
            settled: vec![false; n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for v in self.touched.drain(..) {
            self.dist[v as usize] = INF;
            self.anc[v as usize] = Vertex::MAX;
            self.settled[v as usize] = false;
        }
        self.heap.clear();
    }
}

#[inline]
fn higher(r: &Ranking, a: Vertex, b: Vertex) -> Vertex {
    if r.outranks(a, b) {
        a
    } else {
        b
    }
}

/// Plants the tree of `root` that writes `side` labels.
///
/// A vertex whose ancestor (or itself) outranks the root gets no label but
/// is still expanded, so ancestors keep propagating. With `common`, a
/// vertex certified by a common hub ranked above the root is neither
/// labeled nor expanded. The loop stops once no queued vertex has the root
/// as its ancestor.
pub fn plant_dijkstra(
    g: &Graph,
    r: &Ranking,
    root: Vertex,
    side: Side,
    common: Option<&CommonLabelTable>,
    opts: PlantOptions,
    ws: &mut PlantWorkspace,
) -> PlantTreeResult {
    let dir = tree_direction(g, side);
    ws.reset();
    ws.dist[root as usize] = 0;
    ws.anc[root as usize] = root;
    ws.touched.push(root);
    ws.heap.push(Reverse((0, root)));
    let mut cnt: usize = 1;
    let mut out = PlantTreeResult { root, side, labels: Vec::new(), explored: 0 };
    while let Some(&Reverse((d, v))) = ws.heap.peek() {
        if opts.early_termination && cnt == 0 {
            break;
        }
        ws.heap.pop();
        if d > ws.dist[v as usize] || ws.settled[v as usize] {
            continue;
        }
        ws.settled[v as usize] = true;
        out.explored += 1;
        let av = ws.anc[v as usize];
        let na = higher(r, v, av);
        if av == root {
            cnt -= 1;
        }
        if v != root && common.is_some_and(|c| c.covers(side, root, v, d, r, true)) {
            continue;
        }
        if !r.outranks(na, root) && v != root {
            out.labels.push((v, d));
        }
        for (u, w) in g.neighbors(v, dir) {
            let ui = u as usize;
            if ws.settled[ui] {
                continue;
            }
            let nd = d + w;
            let pa = ws.anc[ui];
            if nd < ws.dist[ui] {
                if ws.dist[ui] == INF {
                    ws.touched.push(u);
                }
                ws.dist[ui] = nd;
                ws.anc[ui] = higher(r, na, u);
                ws.heap.push(Reverse((nd, u)));
            } else if nd == ws.dist[ui] {
                ws.anc[ui] = higher(r, na, pa);
            } else {
                continue;
            }
            let now = ws.anc[ui];
            if now == root && pa != root {
                cnt += 1;
            } else if now != root && pa == root {
                cnt -= 1;
            }
        }
    }
    out
}

/// Every tree of `root`: one for undirected graphs, inbound and outbound
/// trees for directed ones.
pub fn plant_root(
    g: &Graph,
    r: &Ranking,
    root: Vertex,
    common: Option<&CommonLabelTable>,
    opts: PlantOptions,
    ws: &mut PlantWorkspace,
) -> Vec<PlantTreeResult> {
    label_sides(g).iter().map(|&side| plant_dijkstra(g, r, root, side, common, opts, ws)).collect()
}

/// Plants the trees of `roots` in parallel on the current rayon pool.
/// Results come back in the order of `roots`.
pub fn plant_roots(
    g: &Graph,
    r: &Ranking,
    roots: &[Vertex],
    common: Option<&CommonLabelTable>,
    opts: PlantOptions,
) -> Vec<Vec<PlantTreeResult>> {
    roots
        .par_iter()
        .map_init(|| PlantWorkspace::new(g.n()), |ws, &root| plant_root(g, r, root, common, opts, ws))
        .collect()
}

/// Appends tree emissions to `lab`. Feeding trees in descending root rank
/// keeps every set sorted.
pub fn absorb_trees<'a>(lab: &mut Labeling, trees: impl IntoIterator<Item = &'a PlantTreeResult>) {
    for t in trees {
        for &(v, d) in &t.labels {
            lab.push(t.side, v, HubLabel::new(t.root, d));
        }
    }
}

/// Plants every tree in rank order and unions the emissions.
pub fn plant_all(g: &Graph, r: &Ranking, common: Option<&CommonLabelTable>, opts: PlantOptions) -> Labeling {
    let trees = plant_roots(g, r, r.order(), common, opts);
    let mut lab = Labeling::new(g.n(), g.is_directed());
    absorb_trees(&mut lab, trees.iter().flatten());
    lab
}

/// One row of the ψ trace. Directed roots sum their two trees.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiRecord {
    pub tree_index: usize,
    pub root: Vertex,
    pub rank: u32,
    pub explored: usize,
    pub labels: usize,
}

impl PsiRecord {
    pub fn psi(&self) -> f64 {
        psi(self.explored, self.labels)
    }
}

pub fn psi_records(r: &Ranking, trees: &[Vec<PlantTreeResult>]) -> Vec<PsiRecord> {
    trees
        .iter()
        .enumerate()
        .filter_map(|(i, per_root)| {
            let root = per_root.first()?.root;
            Some(PsiRecord {
                tree_index: i,
                root,
                rank: r.rank(root),
                explored: per_root.iter().map(|t| t.explored).sum(),
                labels: per_root.iter().map(|t| t.labels.len()).sum(),
            })
        })
        .collect()
}

/// Plants all trees in rank order with early termination and records ψ.
pub fn psi_trace(g: &Graph, r: &Ranking) -> Vec<PsiRecord> {
    psi_records(r, &plant_roots(g, r, r.order(), None, PlantOptions::default()))
}

pub fn write_psi_csv(rows: &[PsiRecord], mut w: impl Write) -> io::Result<()> {
    writeln!(w, "tree_index,root,rank,explored,labels,psi")?;
    for row in rows {
        writeln!(w, "{},{},{},{},{},{}", row.tree_index, row.root, row.rank, row.explored, row.labels, row.psi())?;
    }
    Ok(())
}
