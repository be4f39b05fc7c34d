//! Hub labels, label sets, and the query primitives over them.
//!
//! A label set is a slice of [`HubLabel`] sorted by descending hub rank. The
//! self-label `(v, 0)` is never stored; every primitive here behaves as if it
//! were present at its rank position.

use crate::rank::Ranking;
use crate::{Dist, Vertex, INF};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HubLabel {
    pub hub: Vertex,
    pub dist: Dist,
}

impl HubLabel {
    pub fn new(hub: Vertex, dist: Dist) -> Self {
        HubLabel { hub, dist }
    }
}

/// Which of a vertex's label sets. Undirected labelings only use `Out`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// Hubs reachable from the vertex: `d(v, h)`.
    Out = 0,
    /// Hubs that reach the vertex: `d(h, v)`.
    In = 1,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Out => Side::In,
            Side::In => Side::Out,
        }
    }

    pub fn from_index(i: usize) -> Side {
        if i == 0 {
            Side::Out
        } else {
            Side::In
        }
    }
}

/// Read-only view of one vertex's label set, possibly split across two
/// sorted slices (e.g. a committed and a pending part).
#[derive(Clone, Copy, Debug)]
pub struct LabelView<'a> {
    pub owner: Vertex,
    pub parts: [&'a [HubLabel]; 2],
    /// Whether the implicit `(owner, 0)` label belongs to this view. Shards
    /// that do not own the vertex's rank slot leave it out.
    pub with_self: bool,
}

impl<'a> LabelView<'a> {
    pub fn new(owner: Vertex, labels: &'a [HubLabel]) -> Self {
        LabelView { owner, parts: [labels, &[]], with_self: true }
    }

    pub fn split(owner: Vertex, first: &'a [HubLabel], second: &'a [HubLabel], with_self: bool) -> Self {
        LabelView { owner, parts: [first, second], with_self }
    }

    /// Labels in descending hub rank, self-label included when owned.
    pub fn iter<'r>(&self, r: &'r Ranking) -> ViewIter<'a, 'r> {
        ViewIter { a: self.parts[0], b: self.parts[1], owner: self.owner, pending_self: self.with_self, r }
    }

    pub fn stored_len(&self) -> usize {
        self.parts[0].len() + self.parts[1].len()
    }
}

pub struct ViewIter<'a, 'r> {
    a: &'a [HubLabel],
    b: &'a [HubLabel],
    owner: Vertex,
    pending_self: bool,
    r: &'r Ranking,
}

impl Iterator for ViewIter<'_, '_> {
    type Item = HubLabel;

    #[inline]
    fn next(&mut self) -> Option<HubLabel> {
        const NONE: i64 = -1;
        let key = |s: &[HubLabel], r: &Ranking| s.first().map_or(NONE, |l| r.rank(l.hub) as i64);
        let (ka, kb) = (key(self.a, self.r), key(self.b, self.r));
        let ks = if self.pending_self { self.r.rank(self.owner) as i64 } else { NONE };
        if ka == NONE && kb == NONE && ks == NONE {
            return None;
        }
        if ks >= ka && ks >= kb {
            self.pending_self = false;
            Some(HubLabel::new(self.owner, 0))
        } else if ka >= kb {
            let l = self.a[0];
            self.a = &self.a[1..];
            Some(l)
        } else {
            let l = self.b[0];
            self.b = &self.b[1..];
            Some(l)
        }
    }
}

/// Calls `f(hub, d_left, d_right)` on every common hub in descending rank
/// until it returns `Some`.
#[inline]
fn merge_common<T>(
    left: &LabelView<'_>,
    right: &LabelView<'_>,
    r: &Ranking,
    mut f: impl FnMut(Vertex, Dist, Dist) -> Option<T>,
) -> Option<T> {
    let mut li = left.iter(r).peekable();
    let mut ri = right.iter(r).peekable();
    while let (Some(a), Some(b)) = (li.peek().copied(), ri.peek().copied()) {
        let (ra, rb) = (r.rank(a.hub), r.rank(b.hub));
        if ra == rb {
            if let Some(out) = f(a.hub, a.dist, b.dist) {
                return Some(out);
            }
            li.next();
            ri.next();
        } else if ra > rb {
            li.next();
        } else {
            ri.next();
        }
    }
    None
}

/// Dense hub→distance index over a tree root's own labels, rebuilt per tree.
#[derive(Clone, Debug)]
pub struct RootIndex {
    dist: Vec<Dist>,
    touched: Vec<Vertex>,
}

impl RootIndex {
    pub fn new(n: usize) -> Self {
        RootIndex { dist: vec![INF; n], touched: Vec::new() }
    }

    /// Indexes `labels` plus the implicit `(root, 0)`.
    pub fn load(&mut self, root: Vertex, labels: impl IntoIterator<Item = HubLabel>) {
        self.clear();
        self.set(root, 0);
        for l in labels {
            self.set(l.hub, l.dist);
        }
    }

    fn set(&mut self, hub: Vertex, d: Dist) {
        let slot = &mut self.dist[hub as usize];
        if *slot == INF {
            self.touched.push(hub);
        }
        *slot = (*slot).min(d);
    }

    #[inline]
    pub fn get(&self, hub: Vertex) -> Dist {
        self.dist[hub as usize]
    }

    pub fn clear(&mut self) {
        for h in self.touched.drain(..) {
            self.dist[h as usize] = INF;
        }
    }
}

/// Construction-time Distance-Query: is there a hub `h'` shared by the root
/// and `v` with `d(root, h') + d(h', v) <= delta`? `lv` need not be sorted.
#[inline]
pub fn dq(v: Vertex, delta: Dist, root_index: &RootIndex, lv: impl IntoIterator<Item = HubLabel>) -> bool {
    if root_index.get(v) <= delta {
        return true;
    }
    lv.into_iter().any(|l| {
        let dr = root_index.get(l.hub);
        dr != INF && dr + l.dist <= delta
    })
}

/// Cleaning query for the label `(h, delta)` stored at `lv.owner`, where `h`
/// is `lh.owner`. The label is redundant when the highest-ranked common hub
/// `u` with `d(u, v) + d(u, h) <= delta` outranks `h`. Stops at the first
/// qualifying hub.
pub fn dq_clean(delta: Dist, lh: &LabelView<'_>, lv: &LabelView<'_>, r: &Ranking) -> bool {
    let h = lh.owner;
    merge_common(lh, lv, r, |u, dh, dv| (dh + dv <= delta).then(|| r.outranks(u, h))).unwrap_or(false)
}

/// Point-to-point shortest distance from the labels. Returns the minimum of
/// `d(u, h) + d(h, v)` and the hub attaining it; equal sums keep the
/// higher-ranked hub. `(INF, None)` when no hub is shared.
pub fn ppsd_query(lu: &LabelView<'_>, lv: &LabelView<'_>, r: &Ranking) -> (Dist, Option<Vertex>) {
    let mut best = (INF, None);
    merge_common::<()>(lu, lv, r, |h, du, dv| {
        let d = du + dv;
        if d < best.0 {
            best = (d, Some(h));
        }
        None
    });
    best
}

/// Per-vertex label sets for a whole graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    directed: bool,
    sets: Vec<Vec<Vec<HubLabel>>>,
}

impl Labeling {
    pub fn new(n: usize, directed: bool) -> Self {
        let slots = if directed { 2 } else { 1 };
        Labeling { directed, sets: vec![vec![Vec::new(); n]; slots] }
    }

    pub fn n(&self) -> usize {
        self.sets[0].len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Label sides in use: `[Out]` or `[Out, In]`.
    pub fn sides(&self) -> &'static [Side] {
        if self.directed {
            &[Side::Out, Side::In]
        } else {
            &[Side::Out]
        }
    }

    #[inline]
    fn slot(&self, side: Side) -> usize {
        if self.directed {
            side as usize
        } else {
            0
        }
    }

    #[inline]
    pub fn labels(&self, side: Side, v: Vertex) -> &[HubLabel] {
        &self.sets[self.slot(side)][v as usize]
    }

    pub fn labels_mut(&mut self, side: Side, v: Vertex) -> &mut Vec<HubLabel> {
        let slot = self.slot(side);
        &mut self.sets[slot][v as usize]
    }

    pub fn push(&mut self, side: Side, v: Vertex, label: HubLabel) {
        self.labels_mut(side, v).push(label);
    }

    pub fn view(&self, side: Side, v: Vertex) -> LabelView<'_> {
        LabelView::new(v, self.labels(side, v))
    }

    /// Stored labels, self-labels excluded.
    pub fn total_labels(&self) -> usize {
        self.sets.iter().flatten().map(Vec::len).sum()
    }

    /// Average label size per vertex, self-labels excluded.
    pub fn als(&self) -> f64 {
        if self.n() == 0 {
            return 0.0;
        }
        self.total_labels() as f64 / self.n() as f64
    }

    /// Average label size counting one self-label per vertex and side.
    pub fn als_with_self(&self) -> f64 {
        if self.n() == 0 {
            return 0.0;
        }
        (self.total_labels() + self.n() * self.sets.len()) as f64 / self.n() as f64
    }

    pub fn sort_by_rank(&mut self, r: &Ranking) {
        for set in self.sets.iter_mut().flatten() {
            set.sort_unstable_by_key(|l| std::cmp::Reverse(r.rank(l.hub)));
        }
    }

    /// Every stored label as `(side, vertex, label)`.
    pub fn iter(&self) -> impl Iterator<Item = (Side, Vertex, HubLabel)> + '_ {
        self.sets.iter().enumerate().flat_map(move |(slot, per_vertex)| {
            let side = if self.directed { Side::from_index(slot) } else { Side::Out };
            per_vertex.iter().enumerate().flat_map(move |(v, set)| set.iter().map(move |&l| (side, v as Vertex, l)))
        })
    }

    /// Merges another labeling with disjoint hubs into this one.
    pub fn absorb(&mut self, other: &Labeling, r: &Ranking) {
        assert_eq!((self.n(), self.directed), (other.n(), other.directed), "labeling shapes differ");
        for (mine, theirs) in self.sets.iter_mut().flatten().zip(other.sets.iter().flatten()) {
            mine.extend_from_slice(theirs);
        }
        self.sort_by_rank(r);
    }

    /// Shortest distance `u -> v` answered from the labels.
    pub fn distance(&self, u: Vertex, v: Vertex, r: &Ranking) -> Dist {
        ppsd_query(&self.view(Side::Out, u), &self.view(Side::In, v), r).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(h: Vertex, d: Dist) -> HubLabel {
        HubLabel::new(h, d)
    }

    /// P3 a=0, b=1, c=2 with rank b > a > c.
    fn p3_rank() -> Ranking {
        Ranking::from_ranks(vec![1, 2, 0]).unwrap()
    }

    #[test]
    fn view_inserts_self_at_rank_position() {
        let r = Ranking::from_ranks(vec![0, 1, 2, 3]).unwrap();
        let got: Vec<_> = LabelView::split(1, &[l(3, 4)], &[l(2, 1), l(0, 9)], true).iter(&r).collect();
        assert_eq!(got, vec![l(3, 4), l(2, 1), l(1, 0), l(0, 9)]);
        let got: Vec<_> = LabelView::split(1, &[l(3, 4)], &[], false).iter(&r).collect();
        assert_eq!(got, vec![l(3, 4)]);
    }

    #[test]
    fn dq_no_common_hub() {
        let mut idx = RootIndex::new(3);
        idx.load(0, [l(1, 1)]);
        assert!(!dq(2, 5, &idx, []));
    }

    #[test]
    fn dq_p3_pruned_by_b() {
        // Tree of a after tree of b: at c, delta 2, root labels {a:0, b:1}.
        let mut idx = RootIndex::new(3);
        idx.load(0, [l(1, 1)]);
        assert!(dq(2, 2, &idx, [l(1, 1)]));
        assert!(!dq(2, 1, &idx, [l(1, 1)]));
    }

    #[test]
    fn root_index_clears_between_trees() {
        let mut idx = RootIndex::new(3);
        idx.load(0, [l(1, 1)]);
        idx.load(2, []);
        assert_eq!(idx.get(1), INF);
        assert_eq!(idx.get(0), INF);
        assert_eq!(idx.get(2), 0);
    }

    #[test]
    fn dq_clean_keeps_canonical_label() {
        let r = p3_rank();
        // (b, 1) in L_a: common hub is b itself.
        let lb: [HubLabel; 0] = [];
        assert!(!dq_clean(1, &LabelView::new(1, &lb), &LabelView::new(0, &[l(1, 1)]), &r));
    }

    #[test]
    fn dq_clean_deletes_spurious_label() {
        let r = p3_rank();
        // spurious (a, 2) in L_c; b covers pair (a, c).
        let la = [l(1, 1)];
        let lc = [l(1, 1), l(0, 2)];
        assert!(dq_clean(2, &LabelView::new(0, &la), &LabelView::new(2, &lc), &r));
    }

    #[test]
    fn dq_clean_self_label_never_redundant() {
        let r = p3_rank();
        let la = [l(1, 1)];
        assert!(!dq_clean(0, &LabelView::new(0, &la), &LabelView::new(0, &la), &r));
    }

    #[test]
    fn ppsd_direct_minimum() {
        let r = Ranking::from_ranks(vec![2, 3, 1, 0]).unwrap();
        // hubs a=0 (rank 2) and c=2 (rank 1); owners 1 and 3 do not meet.
        let (a, b) = ([l(0, 2), l(2, 5)], [l(0, 4), l(2, 3)]);
        let lu = LabelView::split(1, &a, &[], false);
        let lv = LabelView::split(3, &b, &[], false);
        assert_eq!(ppsd_query(&lu, &lv, &r), (6, Some(0)));
    }

    #[test]
    fn ppsd_tie_prefers_higher_rank() {
        let r = Ranking::from_ranks(vec![0, 1, 2, 3]).unwrap();
        let (a, b) = ([l(3, 1), l(2, 2)], [l(3, 2), l(2, 1)]);
        let lu = LabelView::split(0, &a, &[], false);
        let lv = LabelView::split(1, &b, &[], false);
        assert_eq!(ppsd_query(&lu, &lv, &r), (3, Some(3)));
    }

    #[test]
    fn ppsd_unreachable_and_self() {
        let r = p3_rank();
        let none: [HubLabel; 0] = [];
        assert_eq!(ppsd_query(&LabelView::new(0, &none), &LabelView::new(2, &none), &r), (INF, None));
        assert_eq!(ppsd_query(&LabelView::new(0, &[l(1, 1)]), &LabelView::new(0, &[l(1, 1)]), &r), (0, Some(0)));
    }

    #[test]
    fn ppsd_p3_through_b() {
        let r = p3_rank();
        let mut lab = Labeling::new(3, false);
        lab.push(Side::Out, 0, l(1, 1));
        lab.push(Side::Out, 2, l(1, 1));
        assert_eq!(ppsd_query(&lab.view(Side::Out, 0), &lab.view(Side::In, 2), &r), (2, Some(1)));
        assert_eq!(lab.distance(0, 1, &r), 1);
        assert_eq!(lab.total_labels(), 2);
        assert!((lab.als_with_self() - lab.als() - 1.0).abs() < 1e-12);
    }
}
