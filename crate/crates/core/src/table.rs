//! Two-tier label storage used while building, and the replicated table of
//! the top-ranked hubs' complete label columns.

use std::sync::atomic::{AtomicUsize, Ordering};

use parking_lot::{Mutex, RwLock};

use crate::label::{dq, HubLabel, LabelView, Labeling, RootIndex, Side};
use crate::rank::Ranking;
use crate::{Dist, Vertex, INF};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum StoreError {
    #[error("keep mask has {got} entries but the local table holds {expected} labels")]
    MaskLength { expected: usize, got: usize },
    #[error("vertex {0} is not among the common hubs")]
    NotCommonHub(Vertex),
}

/// Committed labels (`global`) plus the labels produced since the last
/// synchronization (`local`).
///
/// During construction any number of threads may append to `local` and read
/// either tier; `global` is only rewritten by [`commit_superstep`], which
/// needs exclusive access.
///
/// [`commit_superstep`]: GlobalLocalTable::commit_superstep
#[derive(Debug)]
pub struct GlobalLocalTable {
    global: Labeling,
    local: Vec<Vec<RwLock<Vec<HubLabel>>>>,
    touched: Mutex<Vec<(Side, Vertex)>>,
    local_count: AtomicUsize,
}

impl GlobalLocalTable {
    pub fn new(n: usize, directed: bool) -> Self {
        Self::from_global(Labeling::new(n, directed))
    }

    pub fn from_global(global: Labeling) -> Self {
        let slots = global.sides().len();
        let n = global.n();
        let local = (0..slots).map(|_| (0..n).map(|_| RwLock::new(Vec::new())).collect()).collect();
        GlobalLocalTable { global, local, touched: Mutex::new(Vec::new()), local_count: AtomicUsize::new(0) }
    }

    pub fn n(&self) -> usize {
        self.global.n()
    }

    pub fn is_directed(&self) -> bool {
        self.global.is_directed()
    }

    #[inline]
    fn local_slot(&self, side: Side, v: Vertex) -> &RwLock<Vec<HubLabel>> {
        let slot = if self.is_directed() { side as usize } else { 0 };
        &self.local[slot][v as usize]
    }

    fn canonical(&self, side: Side) -> Side {
        if self.is_directed() {
            side
        } else {
            Side::Out
        }
    }

    pub fn append(&self, side: Side, v: Vertex, label: HubLabel) {
        let mut set = self.local_slot(side, v).write();
        if set.is_empty() {
            self.touched.lock().push((self.canonical(side), v));
        }
        set.push(label);
        self.local_count.fetch_add(1, Ordering::Relaxed);
    }

    pub fn local_count(&self) -> usize {
        self.local_count.load(Ordering::Relaxed)
    }

    pub fn global(&self) -> &Labeling {
        &self.global
    }

    pub fn into_global(self) -> Labeling {
        self.global
    }

    /// Indexes the root's labels on `side` from both tiers.
    pub fn load_root_index(&self, side: Side, root: Vertex, index: &mut RootIndex) {
        let local = self.local_slot(side, root).read();
        index.load(root, self.global.labels(side, root).iter().chain(local.iter()).copied());
    }

    /// Distance-Query against both tiers of `v`'s `side` labels.
    pub fn dq(&self, side: Side, v: Vertex, delta: Dist, index: &RootIndex) -> bool {
        if dq(v, delta, index, self.global.labels(side, v).iter().copied()) {
            return true;
        }
        let local = self.local_slot(side, v).read();
        dq(v, delta, index, local.iter().copied())
    }

    /// Sorts every local set by descending hub rank and fixes the order in
    /// which [`local_labels`](Self::local_labels) enumerates them.
    pub fn seal(&mut self, r: &Ranking) {
        let touched = self.touched.get_mut();
        touched.sort_unstable();
        for &(side, v) in touched.iter() {
            let slot = if self.global.is_directed() { side as usize } else { 0 };
            self.local[slot][v as usize].get_mut().sort_unstable_by_key(|l| std::cmp::Reverse(r.rank(l.hub)));
        }
    }

    /// Local labels in keep-mask order. Call after [`seal`](Self::seal).
    pub fn local_labels(&self) -> Vec<(Side, Vertex, HubLabel)> {
        let touched = self.touched.lock();
        let mut out = Vec::with_capacity(self.local_count());
        for &(side, v) in touched.iter() {
            out.extend(self.local_slot(side, v).read().iter().map(|&l| (side, v, l)));
        }
        out
    }

    /// Runs `f` on the union of both tiers of `v`'s `side` labels.
    pub fn with_view<T>(&self, side: Side, v: Vertex, with_self: bool, f: impl FnOnce(LabelView<'_>) -> T) -> T {
        let local = self.local_slot(side, v).read();
        f(LabelView::split(v, self.global.labels(side, v), &local, with_self))
    }

    /// Moves the local labels whose mask bit is set into the global tier,
    /// keeping every set sorted, then empties the local tier.
    pub fn commit_superstep(&mut self, keep: &[bool], r: &Ranking) -> Result<usize, StoreError> {
        let expected = self.local_count();
        if keep.len() != expected {
            return Err(StoreError::MaskLength { expected, got: keep.len() });
        }
        self.seal(r);
        let touched = std::mem::take(self.touched.get_mut());
        let mut bits = keep.iter();
        let mut committed = 0;
        for (side, v) in touched {
            let slot = if self.global.is_directed() { side as usize } else { 0 };
            let local = std::mem::take(self.local[slot][v as usize].get_mut());
            let survivors: Vec<HubLabel> = local.into_iter().filter(|_| *bits.next().unwrap()).collect();
            committed += survivors.len();
            merge_sorted(self.global.labels_mut(side, v), survivors, r);
        }
        self.local_count.store(0, Ordering::Relaxed);
        Ok(committed)
    }
}

fn merge_sorted(global: &mut Vec<HubLabel>, add: Vec<HubLabel>, r: &Ranking) {
    if add.is_empty() {
        return;
    }
    let fits_at_end = global.last().is_none_or(|last| r.outranks(last.hub, add[0].hub));
    if fits_at_end {
        global.extend(add);
        return;
    }
    let old = std::mem::take(global);
    global.reserve(old.len() + add.len());
    let (mut a, mut b) = (old.into_iter().peekable(), add.into_iter().peekable());
    loop {
        let take_a = match (a.peek(), b.peek()) {
            (Some(x), Some(y)) => r.outranks(x.hub, y.hub),
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        global.push(if take_a { a.next() } else { b.next() }.unwrap());
    }
}

/// Complete label columns of the `eta` highest-ranked hubs, with O(1)
/// lookup by vertex.
#[derive(Clone, Debug)]
pub struct CommonLabelTable {
    n: usize,
    directed: bool,
    hubs: Vec<Vertex>,
    column: Vec<u32>,
    dist: Vec<Vec<Dist>>,
}

impl CommonLabelTable {
    /// An empty table for the top `eta` hubs of `r`.
    pub fn new(r: &Ranking, eta: usize, directed: bool) -> Self {
        let n = r.n();
        let hubs: Vec<Vertex> = r.order()[..eta.min(n)].to_vec();
        let mut column = vec![u32::MAX; n];
        for (c, &h) in hubs.iter().enumerate() {
            column[h as usize] = c as u32;
        }
        let slots = if directed { 2 } else { 1 };
        let dist = vec![vec![INF; hubs.len() * n]; slots];
        CommonLabelTable { n, directed, hubs, column, dist }
    }

    /// Extracts the columns of the top `eta` hubs from a full labeling.
    pub fn from_labeling(lab: &Labeling, r: &Ranking, eta: usize) -> Self {
        let mut t = Self::new(r, eta, lab.is_directed());
        for (side, v, l) in lab.iter() {
            if t.is_common(l.hub) {
                t.insert(side, l.hub, v, l.dist).expect("hub checked");
            }
        }
        t
    }

    pub fn eta(&self) -> usize {
        self.hubs.len()
    }

    /// Common hubs in descending rank.
    pub fn hubs(&self) -> &[Vertex] {
        &self.hubs
    }

    #[inline]
    pub fn is_common(&self, hub: Vertex) -> bool {
        self.column[hub as usize] != u32::MAX
    }

    #[inline]
    fn cell(&self, col: u32, v: Vertex) -> usize {
        col as usize * self.n + v as usize
    }

    #[inline]
    fn slot(&self, side: Side) -> usize {
        if self.directed {
            side as usize
        } else {
            0
        }
    }

    pub fn insert(&mut self, side: Side, hub: Vertex, v: Vertex, d: Dist) -> Result<(), StoreError> {
        let col = self.column[hub as usize];
        if col == u32::MAX {
            return Err(StoreError::NotCommonHub(hub));
        }
        let cell = self.cell(col, v);
        let slot = self.slot(side);
        self.dist[slot][cell] = d;
        Ok(())
    }

    /// `d(v, hub)` from `v`'s `side` labels, or `None` when `v` carries no
    /// label of `hub`.
    pub fn lookup(&self, side: Side, hub: Vertex, v: Vertex) -> Result<Option<Dist>, StoreError> {
        let col = self.column[hub as usize];
        if col == u32::MAX {
            return Err(StoreError::NotCommonHub(hub));
        }
        Ok(self.get(side, col, hub, v))
    }

    #[inline]
    fn get(&self, side: Side, col: u32, hub: Vertex, v: Vertex) -> Option<Dist> {
        if hub == v {
            return Some(0);
        }
        let d = self.dist[self.slot(side)][self.cell(col, v)];
        (d != INF).then_some(d)
    }

    /// Whether a common hub certifies `d(root, v) <= delta` (for a tree that
    /// writes `side` labels of `v`). With `above_root`, only hubs ranked above
    /// the root are consulted.
    pub fn covers(&self, side: Side, root: Vertex, v: Vertex, delta: Dist, r: &Ranking, above_root: bool) -> bool {
        for (col, &c) in self.hubs.iter().enumerate() {
            if above_root && !r.outranks(c, root) {
                break;
            }
            let (Some(a), Some(b)) = (self.get(side.opposite(), col as u32, c, root), self.get(side, col as u32, c, v)) else {
                continue;
            };
            if a + b <= delta {
                return true;
            }
        }
        false
    }

    /// Number of stored (non-self) entries.
    pub fn stored(&self) -> usize {
        self.dist.iter().flatten().filter(|&&d| d != INF).count()
    }
}
