//! Overlapping partitions: vertices split into ζ contiguous parts, one node
//! per unordered pair of parts holding the full label sets of both.

use hublab_core::label::ppsd_query;
use hublab_core::{Labeling, Ranking, Side, Vertex};

/// Largest ζ with `ζ choose 2 <= q`: `floor((1 + sqrt(1 + 8q)) / 2)`.
pub fn compute_zeta(q: usize) -> usize {
    assert!(q >= 1, "q must be positive");
    (1 + 8 * q as u128).isqrt().div_ceil(2) as usize
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QdolLayout {
    pub zeta: usize,
    pub n: usize,
    pub q: usize,
    /// Partition pairs in lexicographic order; pair `k` lives on node `k`.
    pub pairs: Vec<(usize, usize)>,
}

impl QdolLayout {
    pub fn new(n: usize, q: usize) -> Self {
        let zeta = compute_zeta(q);
        let pairs = (0..zeta).flat_map(|i| (i + 1..zeta).map(move |j| (i, j))).collect();
        QdolLayout { zeta, n, q, pairs }
    }

    pub fn partition(&self, v: Vertex) -> usize {
        (v as u128 * self.zeta as u128 / self.n.max(1) as u128) as usize
    }

    pub fn members(&self, part: usize) -> std::ops::Range<Vertex> {
        let bound = |p: usize| (p as u128 * self.n as u128).div_ceil(self.zeta as u128) as Vertex;
        bound(part)..bound(part + 1)
    }

    /// Node holding parts `i` and `j`.
    pub fn node_for(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        assert!(i != j && j < self.zeta);
        // pairs before row i, then offset within row
        i * (2 * self.zeta - i - 1) / 2 + (j - i - 1)
    }

    /// Node answering `(u, v)`. A query inside part `i` goes to the first
    /// pair containing `i`.
    pub fn route(&self, u: Vertex, v: Vertex) -> usize {
        let (a, b) = (self.partition(u), self.partition(v));
        if a != b {
            self.node_for(a, b)
        } else if a == 0 {
            self.node_for(0, 1)
        } else {
            self.node_for(0, a)
        }
    }

    pub fn used_nodes(&self) -> usize {
        self.pairs.len()
    }
}

/// Per-node label copies for a layout. Nodes past the last pair hold none.
#[derive(Clone, Debug)]
pub struct QdolStore {
    pub layout: QdolLayout,
    nodes: Vec<Labeling>,
}

impl QdolStore {
    pub fn build(lab: &Labeling, q: usize) -> Self {
        let layout = QdolLayout::new(lab.n(), q);
        let mut nodes = vec![Labeling::new(lab.n(), lab.is_directed()); q];
        for (k, &(i, j)) in layout.pairs.iter().enumerate() {
            for part in [i, j] {
                for v in layout.members(part) {
                    for &side in lab.sides() {
                        *nodes[k].labels_mut(side, v) = lab.labels(side, v).to_vec();
                    }
                }
            }
        }
        QdolStore { layout, nodes }
    }

    pub fn node(&self, k: usize) -> &Labeling {
        &self.nodes[k]
    }

    pub fn stored_per_node(&self) -> Vec<usize> {
        self.nodes.iter().map(Labeling::total_labels).collect()
    }

    /// Answers `(u, v)` on node `k`, which must hold both endpoints.
    pub fn answer(&self, k: usize, u: Vertex, v: Vertex, r: &Ranking) -> hublab_core::Dist {
        let lab = &self.nodes[k];
        ppsd_query(&lab.view(Side::Out, u), &lab.view(Side::In, v), r).0
    }
}

/// Label counts of a QDOL layout.
#[derive(Clone, Debug, PartialEq)]
pub struct QdolMemory {
    pub total_labels: usize,
    pub per_node: Vec<usize>,
    pub sum: usize,
    /// `(ζ - 1) * total`: each part is copied to the `ζ - 1` nodes pairing it.
    pub expected_sum: usize,
    /// Mean over used nodes, `2 * total / ζ` when parts are label-balanced.
    pub mean_used: f64,
}

pub fn memory(lab: &Labeling, store: &QdolStore) -> QdolMemory {
    let per_node = store.stored_per_node();
    let sum = per_node.iter().sum();
    let total = lab.total_labels();
    let used = store.layout.used_nodes().max(1);
    QdolMemory {
        total_labels: total,
        sum,
        expected_sum: (store.layout.zeta - 1) * total,
        mean_used: per_node[..store.layout.used_nodes()].iter().sum::<usize>() as f64 / used as f64,
        per_node,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_values() {
        assert_eq!(compute_zeta(1), 2);
        assert_eq!(compute_zeta(3), 3);
        assert_eq!(compute_zeta(5), 3);
        assert_eq!(compute_zeta(6), 4);
        assert_eq!(compute_zeta(10), 5);
        for q in 1..200 {
            let z = compute_zeta(q);
            assert!(z * (z - 1) / 2 <= q && (z + 1) * z / 2 > q);
        }
    }

    #[test]
    fn routing_zeta3() {
        let l = QdolLayout::new(9, 3);
        assert_eq!(l.pairs, vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(l.route(0, 8), 1);
        assert_eq!(l.route(1, 2), 0);
        assert_eq!(l.route(3, 4), 0);
        assert_eq!(l.route(7, 8), 1);
        assert_eq!(l.route(4, 7), 2);
    }

    #[test]
    fn node_for_is_pair_index() {
        for q in [1, 3, 6, 10, 15] {
            let l = QdolLayout::new(50, q);
            for (k, &(i, j)) in l.pairs.iter().enumerate() {
                assert_eq!(l.node_for(i, j), k);
                assert_eq!(l.node_for(j, i), k);
            }
        }
    }

    #[test]
    fn members_match_partition() {
        for (n, q) in [(7, 3), (10, 6), (3, 10), (64, 5)] {
            let l = QdolLayout::new(n, q);
            for p in 0..l.zeta {
                for v in l.members(p) {
                    assert_eq!(l.partition(v), p);
                }
            }
            let covered: usize = (0..l.zeta).map(|p| l.members(p).len()).sum();
            assert_eq!(covered, n);
        }
    }
}
