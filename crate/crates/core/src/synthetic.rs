//! Seeded graph generators and the small hand-traced fixtures.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, Weight};
use crate::rank::Ranking;
use crate::Vertex;

/// Uniform random graph with up to `m` distinct edges and weights drawn from
/// `[1, max_weight]`.
pub fn gnm(n: usize, m: usize, directed: bool, max_weight: Weight, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::with_capacity(m);
    if n >= 2 {
        for _ in 0..m {
            let u = rng.gen_range(0..n) as Vertex;
            let v = rng.gen_range(0..n) as Vertex;
            arcs.push((u, v, rng.gen_range(1..=max_weight)));
        }
    }
    Graph::from_arcs(n, arcs, directed).expect("generated arcs are in range")
}

/// Preferential attachment: each new vertex links to `k` earlier vertices
/// chosen proportionally to degree. Produces a scale-free, undirected graph.
pub fn preferential_attachment(n: usize, k: usize, max_weight: Weight, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut endpoints: Vec<Vertex> = Vec::with_capacity(2 * n * k);
    let mut arcs = Vec::with_capacity(n * k);
    let core = (k + 1).min(n);
    for u in 0..core as Vertex {
        for v in 0..u {
            arcs.push((u, v, rng.gen_range(1..=max_weight)));
            endpoints.extend([u, v]);
        }
    }
    for u in core as Vertex..n as Vertex {
        for _ in 0..k {
            let v = *endpoints.choose(&mut rng).unwrap_or(&0);
            arcs.push((u, v, rng.gen_range(1..=max_weight)));
            endpoints.extend([u, v]);
        }
    }
    Graph::from_arcs(n, arcs, false).expect("generated arcs are in range")
}

/// Path a–b–c with unit weights; ids a=0, b=1, c=2.
pub fn p3() -> Graph {
    Graph::from_arcs(3, [(0, 1, 1), (1, 2, 1)], false).unwrap()
}

/// rank(b)=2 > rank(a)=1 > rank(c)=0.
pub fn p3_ranking() -> Ranking {
    Ranking::from_ranks(vec![1, 2, 0]).unwrap()
}

/// Single edge a–b of weight 5; ids a=0, b=1.
pub fn k2() -> Graph {
    Graph::from_arcs(2, [(0, 1, 5)], false).unwrap()
}

/// rank(a) > rank(b).
pub fn k2_ranking() -> Ranking {
    Ranking::from_ranks(vec![1, 0]).unwrap()
}

/// Two unit-weight routes r–x–t and r–y–t; ids r=0, x=1, y=2, t=3.
pub fn diamond() -> Graph {
    Graph::from_arcs(4, [(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 1)], false).unwrap()
}

/// rank x=3, r=2, y=1, t=0.
pub fn diamond_ranking() -> Ranking {
    Ranking::from_ranks(vec![2, 3, 1, 0]).unwrap()
}

/// Star with center 0 and `leaves` unit-weight spokes.
pub fn star(leaves: usize) -> Graph {
    Graph::from_arcs(leaves + 1, (1..=leaves as Vertex).map(|l| (0, l, 1)), false).unwrap()
}
