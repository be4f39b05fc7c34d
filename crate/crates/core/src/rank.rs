//! Vertex rankings (network hierarchies).

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Direction, Graph};
use crate::{Dist, Vertex, INF};

#[derive(Debug, thiserror::Error)]
#[error("ranking is not a permutation of 0..{n}")]
pub struct RankError {
    pub n: usize,
}

/// Total order on vertices. `rank[v] == n - 1` is the most important vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ranking {
    rank: Vec<u32>,
    order: Vec<Vertex>,
}

impl Ranking {
    pub fn from_ranks(rank: Vec<u32>) -> Result<Ranking, RankError> {
        let n = rank.len();
        let mut order = vec![Vertex::MAX; n];
        for (v, &r) in rank.iter().enumerate() {
            let r = r as usize;
            if r >= n || order[n - 1 - r] != Vertex::MAX {
                return Err(RankError { n });
            }
            order[n - 1 - r] = v as Vertex;
        }
        Ok(Ranking { rank, order })
    }

    /// Builds a ranking from vertices listed most important first.
    pub fn from_order(order: Vec<Vertex>) -> Result<Ranking, RankError> {
        let n = order.len();
        let mut rank = vec![u32::MAX; n];
        for (pos, &v) in order.iter().enumerate() {
            if v as usize >= n || rank[v as usize] != u32::MAX {
                return Err(RankError { n });
            }
            rank[v as usize] = (n - 1 - pos) as u32;
        }
        Ok(Ranking { rank, order })
    }

    pub fn n(&self) -> usize {
        self.rank.len()
    }

    #[inline]
    pub fn rank(&self, v: Vertex) -> u32 {
        self.rank[v as usize]
    }

    /// 0 for the highest-ranked vertex.
    #[inline]
    pub fn position(&self, v: Vertex) -> usize {
        self.rank.len() - 1 - self.rank[v as usize] as usize
    }

    /// Vertices in descending rank.
    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn ranks(&self) -> &[u32] {
        &self.rank
    }

    #[inline]
    pub fn outranks(&self, a: Vertex, b: Vertex) -> bool {
        self.rank[a as usize] > self.rank[b as usize]
    }
}

fn rank_by_score(n: usize, score: impl Fn(Vertex) -> u64) -> Ranking {
    let mut order: Vec<Vertex> = (0..n as Vertex).collect();
    order.sort_by_key(|&v| (Reverse(score(v)), v));
    Ranking::from_order(order).expect("sorted ids form a permutation")
}

/// Descending total degree, ties by ascending id.
pub fn rank_by_degree(g: &Graph) -> Ranking {
    rank_by_score(g.n(), |v| (g.out_degree(v) + g.in_degree(v)) as u64)
}

/// Scores each vertex by its descendant count, summed over `samples` full
/// shortest-path trees grown from distinct seeded-random roots.
pub fn rank_by_approx_betweenness(g: &Graph, samples: usize, seed: u64) -> Ranking {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let roots = rand::seq::index::sample(&mut rng, n, samples.max(1).min(n));
    let mut score = vec![0u64; n];
    let mut tree = TreeScratch::new(n);
    for root in roots.iter() {
        tree.grow(g, root as Vertex);
        for (&v, &size) in tree.settled.iter().zip(&tree.size) {
            if v != root as Vertex {
                score[v as usize] += size - 1;
            }
        }
    }
    rank_by_score(n, |v| score[v as usize])
}

struct TreeScratch {
    dist: Vec<Dist>,
    parent: Vec<Vertex>,
    settled: Vec<Vertex>,
    size: Vec<u64>,
    slot: Vec<usize>,
}

impl TreeScratch {
    fn new(n: usize) -> Self {
        TreeScratch { dist: vec![INF; n], parent: vec![Vertex::MAX; n], settled: Vec::new(), size: Vec::new(), slot: vec![usize::MAX; n] }
    }

    /// Dijkstra tree; a vertex's parent is the first vertex to reach it at its
    /// final distance. Fills `settled` in pop order and `size` with subtree sizes.
    fn grow(&mut self, g: &Graph, root: Vertex) {
        for &v in &self.settled {
            self.dist[v as usize] = INF;
            self.slot[v as usize] = usize::MAX;
        }
        self.settled.clear();
        self.dist[root as usize] = 0;
        self.parent[root as usize] = Vertex::MAX;
        let mut heap = BinaryHeap::from([Reverse((0, root))]);
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > self.dist[v as usize] || self.slot[v as usize] != usize::MAX {
                continue;
            }
            self.slot[v as usize] = self.settled.len();
            self.settled.push(v);
            for (u, w) in g.neighbors(v, Direction::Forward) {
                let nd = d + w;
                if nd < self.dist[u as usize] {
                    self.dist[u as usize] = nd;
                    self.parent[u as usize] = v;
                    heap.push(Reverse((nd, u)));
                }
            }
        }
        self.size.clear();
        self.size.resize(self.settled.len(), 1);
        for i in (1..self.settled.len()).rev() {
            let p = self.parent[self.settled[i] as usize];
            let pi = self.slot[p as usize];
            self.size[pi] += self.size[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic;

    #[test]
    fn from_ranks_and_order_agree() {
        let r = Ranking::from_ranks(vec![1, 2, 0]).unwrap();
        assert_eq!(r.order(), &[1, 0, 2]);
        assert_eq!(r.position(1), 0);
        assert_eq!(Ranking::from_order(vec![1, 0, 2]).unwrap(), r);
        assert!(Ranking::from_ranks(vec![0, 0, 1]).is_err());
        assert!(Ranking::from_order(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn degree_star_center_highest() {
        let r = rank_by_degree(&synthetic::star(3));
        assert_eq!(r.rank(0), 3);
        assert_eq!(r.order(), &[0, 1, 2, 3]);
    }

    #[test]
    fn degree_p3_tie_break_by_id() {
        let r = rank_by_degree(&synthetic::p3());
        assert_eq!(r.order(), &[1, 0, 2]);
    }

    #[test]
    fn degree_isolated_by_id() {
        let g = Graph::from_arcs(2, [], false).unwrap();
        assert_eq!(rank_by_degree(&g).order(), &[0, 1]);
    }

    #[test]
    fn betweenness_single_tree_on_p3() {
        let g = synthetic::p3();
        let mut t = TreeScratch::new(3);
        t.grow(&g, 0);
        assert_eq!(t.settled, vec![0, 1, 2]);
        // root a: b has one descendant (c), c has none
        assert_eq!(t.size, vec![3, 2, 1]);
    }

    #[test]
    fn betweenness_all_roots_p3() {
        let r = rank_by_approx_betweenness(&synthetic::p3(), 3, 7);
        assert_eq!(r.order()[0], 1);
    }

    #[test]
    fn betweenness_edgeless_is_id_order() {
        let g = Graph::from_arcs(4, [], false).unwrap();
        assert_eq!(rank_by_approx_betweenness(&g, 16, 1).order(), &[0, 1, 2, 3]);
    }

    #[test]
    fn rankings_are_permutations() {
        for seed in 0..10 {
            let g = synthetic::gnm(40, 90, seed % 2 == 0, 9, seed);
            for r in [rank_by_degree(&g), rank_by_approx_betweenness(&g, 5, seed)] {
                let mut seen = r.ranks().to_vec();
                seen.sort_unstable();
                assert_eq!(seen, (0..40).collect::<Vec<u32>>());
            }
        }
    }
}
