//! Brute-force reference answers: exact distances, the canonical labeling,
//! and checks of the cover, respects-ranking, and minimality properties.
//!
//! Nothing here shares code with the builders; these are the yardsticks the
//! builders are measured against.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::{Direction, Graph};
use crate::label::{dq_clean, HubLabel, Labeling, Side};
use crate::rank::Ranking;
use crate::{Dist, Vertex, INF};

pub type DistanceVector = Vec<Dist>;

/// Textbook Dijkstra over forward (or reverse) adjacency.
pub fn dijkstra_oracle(g: &Graph, source: Vertex, reversed: bool) -> DistanceVector {
    let dir = if reversed { Direction::Reverse } else { Direction::Forward };
    let mut dist = vec![INF; g.n()];
    dist[source as usize] = 0;
    let mut heap = BinaryHeap::from([Reverse((0, source))]);
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > dist[v as usize] {
            continue;
        }
        for (u, w) in g.neighbors(v, dir) {
            if d + w < dist[u as usize] {
                dist[u as usize] = d + w;
                heap.push(Reverse((d + w, u)));
            }
        }
    }
    dist
}

/// `d[u][v]` for every ordered pair.
#[derive(Clone, Debug)]
pub struct AllPairs {
    d: Vec<DistanceVector>,
}

impl AllPairs {
    pub fn new(g: &Graph) -> Self {
        AllPairs { d: (0..g.n() as Vertex).map(|s| dijkstra_oracle(g, s, false)).collect() }
    }

    #[inline]
    pub fn get(&self, u: Vertex, v: Vertex) -> Dist {
        self.d[u as usize][v as usize]
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    /// The highest-ranked vertex on any shortest `u -> v` path.
    pub fn highest_hub(&self, r: &Ranking, u: Vertex, v: Vertex) -> Option<Vertex> {
        let duv = self.get(u, v);
        if duv == INF {
            return None;
        }
        (0..self.n() as Vertex)
            .filter(|&x| {
                let (a, b) = (self.get(u, x), self.get(x, v));
                a != INF && b != INF && a + b == duv
            })
            .max_by_key(|&x| r.rank(x))
    }
}

/// The canonical labeling, by enumerating every connected ordered pair.
/// Intended for small graphs (n up to a few hundred).
pub fn chl_oracle(g: &Graph, r: &Ranking) -> Labeling {
    chl_from_pairs(&AllPairs::new(g), r, g.is_directed())
}

pub fn chl_from_pairs(ap: &AllPairs, r: &Ranking, directed: bool) -> Labeling {
    let n = ap.n();
    let mut lab = Labeling::new(n, directed);
    for u in 0..n as Vertex {
        for v in 0..n as Vertex {
            if u == v {
                continue;
            }
            let Some(h) = ap.highest_hub(r, u, v) else { continue };
            if h != u {
                lab.push(Side::Out, u, HubLabel::new(h, ap.get(u, h)));
            }
            if h != v {
                lab.push(Side::In, v, HubLabel::new(h, ap.get(h, v)));
            }
        }
    }
    lab.sort_by_rank(r);
    for &side in lab.sides() {
        for v in 0..n as Vertex {
            lab.labels_mut(side, v).dedup();
        }
    }
    lab
}

/// A pair whose label answer differs from the true distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverViolation {
    pub u: Vertex,
    pub v: Vertex,
    pub labeled: Dist,
    pub exact: Dist,
}

/// Checks that label queries reproduce `exact` for the given pairs.
pub fn check_cover(
    lab: &Labeling,
    r: &Ranking,
    ap: &AllPairs,
    pairs: impl IntoIterator<Item = (Vertex, Vertex)>,
) -> Result<(), CoverViolation> {
    for (u, v) in pairs {
        let labeled = lab.distance(u, v, r);
        let exact = ap.get(u, v);
        if labeled != exact {
            return Err(CoverViolation { u, v, labeled, exact });
        }
    }
    Ok(())
}

pub fn all_pairs_iter(n: usize) -> impl Iterator<Item = (Vertex, Vertex)> {
    (0..n as Vertex).flat_map(move |u| (0..n as Vertex).map(move |v| (u, v)))
}

/// A connected pair whose highest hub is missing from either endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RespectViolation {
    pub u: Vertex,
    pub v: Vertex,
    pub hub: Vertex,
}

/// Respects-ranking: for each connected pair, the highest hub on its
/// shortest paths is a hub of both endpoints with exact distances.
pub fn check_respects(lab: &Labeling, r: &Ranking, ap: &AllPairs) -> Result<(), RespectViolation> {
    let has = |side: Side, v: Vertex, l: HubLabel| l.hub == v && l.dist == 0 || lab.labels(side, v).contains(&l);
    for (u, v) in all_pairs_iter(ap.n()) {
        let Some(h) = ap.highest_hub(r, u, v) else { continue };
        if !has(Side::Out, u, HubLabel::new(h, ap.get(u, h))) || !has(Side::In, v, HubLabel::new(h, ap.get(h, v))) {
            return Err(RespectViolation { u, v, hub: h });
        }
    }
    Ok(())
}

/// A stored label the cleaning query reports as redundant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedundantLabel {
    pub side: Side,
    pub v: Vertex,
    pub label: HubLabel,
}

/// Minimality via the cleaning query: no stored label may be redundant.
pub fn check_no_redundant(lab: &Labeling, r: &Ranking) -> Result<(), RedundantLabel> {
    for (side, v, label) in lab.iter() {
        let lh = lab.view(side.opposite(), label.hub);
        let lv = lab.view(side, v);
        if dq_clean(label.dist, &lh, &lv, r) {
            return Err(RedundantLabel { side, v, label });
        }
    }
    Ok(())
}

/// Every label sorted by strictly descending hub rank, and every hub
/// outranks the labeled vertex.
pub fn check_order(lab: &Labeling, r: &Ranking) -> Result<(), RedundantLabel> {
    for &side in lab.sides() {
        for v in 0..lab.n() as Vertex {
            let set = lab.labels(side, v);
            for (i, &label) in set.iter().enumerate() {
                let sorted = i == 0 || r.outranks(set[i - 1].hub, label.hub);
                if !sorted || !r.outranks(label.hub, v) {
                    return Err(RedundantLabel { side, v, label });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic;

    fn l(h: Vertex, d: Dist) -> HubLabel {
        HubLabel::new(h, d)
    }

    #[test]
    fn dijkstra_fixtures() {
        assert_eq!(dijkstra_oracle(&synthetic::p3(), 0, false), vec![0, 1, 2]);
        assert_eq!(dijkstra_oracle(&synthetic::k2(), 1, false), vec![5, 0]);
        let g = Graph::from_arcs(2, [], false).unwrap();
        assert_eq!(dijkstra_oracle(&g, 0, false), vec![0, INF]);
    }

    #[test]
    fn dijkstra_reverse_on_directed() {
        let g = Graph::from_arcs(3, [(0, 1, 2), (1, 2, 3)], true).unwrap();
        assert_eq!(dijkstra_oracle(&g, 2, true), vec![5, 3, 0]);
        assert_eq!(dijkstra_oracle(&g, 2, false), vec![INF, INF, 0]);
    }

    #[test]
    fn chl_p3() {
        let lab = chl_oracle(&synthetic::p3(), &synthetic::p3_ranking());
        assert_eq!(lab.labels(Side::Out, 0), &[l(1, 1)]);
        assert_eq!(lab.labels(Side::Out, 1), &[]);
        assert_eq!(lab.labels(Side::Out, 2), &[l(1, 1)]);
    }

    #[test]
    fn chl_k2() {
        let lab = chl_oracle(&synthetic::k2(), &synthetic::k2_ranking());
        assert_eq!(lab.labels(Side::Out, 0), &[]);
        assert_eq!(lab.labels(Side::Out, 1), &[l(0, 5)]);
    }

    #[test]
    fn chl_diamond_covered_by_x() {
        let g = synthetic::diamond();
        let r = synthetic::diamond_ranking();
        let lab = chl_oracle(&g, &r);
        let lt = lab.labels(Side::Out, 3);
        assert!(lt.contains(&l(1, 1)));
        assert!(!lt.iter().any(|x| x.hub == 0));
        let ap = AllPairs::new(&g);
        assert_eq!(ap.highest_hub(&r, 0, 3), Some(1));
    }

    #[test]
    fn chl_directed_splits_sides() {
        // 0 -> 1 -> 2, rank 1 highest
        let g = Graph::from_arcs(3, [(0, 1, 1), (1, 2, 1)], true).unwrap();
        let r = Ranking::from_ranks(vec![1, 2, 0]).unwrap();
        let lab = chl_oracle(&g, &r);
        assert_eq!(lab.labels(Side::Out, 0), &[l(1, 1)]);
        assert_eq!(lab.labels(Side::In, 2), &[l(1, 1)]);
        assert_eq!(lab.labels(Side::In, 0), &[]);
        assert_eq!(lab.labels(Side::Out, 2), &[]);
        assert_eq!(lab.distance(0, 2, &r), 2);
        assert_eq!(lab.distance(2, 0, &r), INF);
    }

    #[test]
    fn checks_pass_on_chl_and_catch_tampering() {
        let g = synthetic::p3();
        let r = synthetic::p3_ranking();
        let ap = AllPairs::new(&g);
        let mut lab = chl_oracle(&g, &r);
        check_cover(&lab, &r, &ap, all_pairs_iter(3)).unwrap();
        check_respects(&lab, &r, &ap).unwrap();
        check_no_redundant(&lab, &r).unwrap();
        check_order(&lab, &r).unwrap();

        lab.push(Side::Out, 2, l(0, 2));
        let err = check_no_redundant(&lab, &r).unwrap_err();
        assert_eq!(err.label, l(0, 2));

        let mut lab = chl_oracle(&g, &r);
        lab.labels_mut(Side::Out, 0).clear();
        let err = check_cover(&lab, &r, &ap, all_pairs_iter(3)).unwrap_err();
        assert_eq!((err.u, err.v), (0, 1));
    }
}
