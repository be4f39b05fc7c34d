//! Immutable weighted graphs and their text loaders.

use std::io::BufRead;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Vertex;

/// Edge weight. Always strictly positive.
pub type Weight = u64;

#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: non-positive edge weight {weight}")]
    NonPositiveWeight { line: usize, weight: i64 },
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: u64, n: usize },
    #[error("missing 'p sp n m' header")]
    MissingHeader,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which adjacency a traversal follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Reverse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
    weights: Vec<Weight>,
}

impl Csr {
    fn build(n: usize, arcs: &[(Vertex, Vertex, Weight)]) -> Csr {
        let mut offsets = vec![0usize; n + 1];
        for &(u, _, _) in arcs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0; arcs.len()];
        let mut weights = vec![0; arcs.len()];
        for &(u, v, w) in arcs {
            let slot = &mut cursor[u as usize];
            targets[*slot] = v;
            weights[*slot] = w;
            *slot += 1;
        }
        Csr { offsets, targets, weights }
    }

    #[inline]
    fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, Weight)> + '_ {
        let (lo, hi) = (self.offsets[v as usize], self.offsets[v as usize + 1]);
        self.targets[lo..hi].iter().copied().zip(self.weights[lo..hi].iter().copied())
    }

    fn degree(&self, v: Vertex) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }
}

/// A positively weighted graph with dense vertex ids `0..n`.
///
/// Undirected graphs store each edge in both directions and share one
/// adjacency for forward and reverse traversal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    directed: bool,
    fwd: Csr,
    rev: Option<Csr>,
}

impl Graph {
    /// Builds a graph from raw arcs. Self-loops are dropped and parallel
    /// edges keep the minimum weight. For undirected graphs `(u, v, w)` and
    /// `(v, u, w)` describe the same edge.
    pub fn from_arcs(
        n: usize,
        arcs: impl IntoIterator<Item = (Vertex, Vertex, Weight)>,
        directed: bool,
    ) -> Result<Graph, GraphError> {
        let mut list = Vec::new();
        for (u, v, w) in arcs {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x as u64, n });
                }
            }
            if w == 0 {
                return Err(GraphError::NonPositiveWeight { line: 0, weight: 0 });
            }
            if u == v {
                continue;
            }
            if directed {
                list.push((u, v, w));
            } else {
                list.push((u.min(v), u.max(v), w));
            }
        }
        dedup_min_weight(&mut list);
        let m = list.len();
        if directed {
            let fwd = Csr::build(n, &list);
            let reversed: Vec<_> = list.iter().map(|&(u, v, w)| (v, u, w)).collect();
            let rev = Csr::build(n, &reversed);
            Ok(Graph { n, m, directed, fwd, rev: Some(rev) })
        } else {
            let mut both = Vec::with_capacity(2 * m);
            for &(u, v, w) in &list {
                both.push((u, v, w));
                both.push((v, u, w));
            }
            both.sort_unstable();
            Ok(Graph { n, m, directed, fwd: Csr::build(n, &both), rev: None })
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges (undirected) or arcs (directed).
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex, dir: Direction) -> impl Iterator<Item = (Vertex, Weight)> + '_ {
        match (dir, &self.rev) {
            (Direction::Reverse, Some(rev)) => rev.neighbors(v),
            _ => self.fwd.neighbors(v),
        }
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.fwd.degree(v)
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        match &self.rev {
            Some(rev) => rev.degree(v),
            None => self.fwd.degree(v),
        }
    }

    /// Every edge once: arcs for directed graphs, `u < v` pairs otherwise.
    pub fn edges(&self) -> Vec<(Vertex, Vertex, Weight)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n as Vertex {
            for (v, w) in self.fwd.neighbors(u) {
                if self.directed || u < v {
                    out.push((u, v, w));
                }
            }
        }
        out
    }

    pub fn max_weight(&self) -> Weight {
        self.fwd.weights.iter().copied().max().unwrap_or(0)
    }
}

fn dedup_min_weight(list: &mut Vec<(Vertex, Vertex, Weight)>) {
    list.sort_unstable();
    list.dedup_by(|later, first| later.0 == first.0 && later.1 == first.1);
}

fn parse_field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, GraphError> {
    let tok = tok.ok_or_else(|| GraphError::Parse { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| GraphError::Parse { line, msg: format!("bad {what} '{tok}'") })
}

fn check_weight(w: i64, line: usize) -> Result<Weight, GraphError> {
    if w <= 0 {
        return Err(GraphError::NonPositiveWeight { line, weight: w });
    }
    Ok(w as Weight)
}

/// Reads a DIMACS `.gr` stream. The graph is undirected exactly when every
/// arc has a reverse twin of equal weight.
pub fn load_dimacs_gr(reader: impl BufRead) -> Result<Graph, GraphError> {
    let mut n: Option<usize> = None;
    let mut arcs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let mut toks = line.split_whitespace();
        match toks.next() {
            None | Some("c") => {}
            Some("p") => {
                if n.is_some() {
                    return Err(GraphError::Parse { line: line_no, msg: "duplicate header".into() });
                }
                let kind: String = parse_field(toks.next(), line_no, "problem kind")?;
                if kind != "sp" {
                    return Err(GraphError::Parse { line: line_no, msg: format!("unsupported problem '{kind}'") });
                }
                n = Some(parse_field(toks.next(), line_no, "vertex count")?);
                let _m: u64 = parse_field(toks.next(), line_no, "arc count")?;
            }
            Some("a") => {
                let nv = n.ok_or(GraphError::MissingHeader)?;
                let u: u64 = parse_field(toks.next(), line_no, "tail")?;
                let v: u64 = parse_field(toks.next(), line_no, "head")?;
                let w: i64 = parse_field(toks.next(), line_no, "weight")?;
                let w = check_weight(w, line_no)?;
                for x in [u, v] {
                    if x == 0 || x as usize > nv {
                        return Err(GraphError::VertexOutOfRange { vertex: x, n: nv });
                    }
                }
                arcs.push(((u - 1) as Vertex, (v - 1) as Vertex, w));
            }
            Some(other) => {
                return Err(GraphError::Parse { line: line_no, msg: format!("unknown line type '{other}'") });
            }
        }
    }
    let n = n.ok_or(GraphError::MissingHeader)?;
    arcs.retain(|&(u, v, _)| u != v);
    dedup_min_weight(&mut arcs);
    let twinned = arcs.iter().all(|&(u, v, w)| arcs.binary_search_by(|probe| probe.0.cmp(&v).then(probe.1.cmp(&u))).is_ok_and(|i| arcs[i].2 == w));
    Graph::from_arcs(n, arcs, !twinned)
}

/// Reads whitespace-separated `u v [w]` lines with 0-based ids. Lines
/// starting with `#` or `%` are comments. Unweighted input gets weight 1.
pub fn load_edge_list(reader: impl BufRead, directed: bool, weighted: bool) -> Result<Graph, GraphError> {
    let mut arcs = Vec::new();
    let mut n = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        let u: u32 = parse_field(toks.next(), line_no, "source")?;
        let v: u32 = parse_field(toks.next(), line_no, "target")?;
        let w = if weighted {
            check_weight(parse_field(toks.next(), line_no, "weight")?, line_no)?
        } else {
            1
        };
        n = n.max(u as usize + 1).max(v as usize + 1);
        arcs.push((u, v, w));
    }
    Graph::from_arcs(n, arcs, directed)
}

/// Redraws every edge weight uniformly from `[1, max(2, ceil(sqrt(n))))`.
/// Undirected twins share one draw. Pure in `(g, seed)`.
pub fn assign_random_weights(g: &Graph, seed: u64) -> Graph {
    let hi = ceil_sqrt(g.n() as u64).max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arcs: Vec<_> = g.edges().into_iter().map(|(u, v, _)| (u, v, rng.gen_range(1..hi))).collect();
    Graph::from_arcs(g.n(), arcs, g.is_directed()).expect("edges of a valid graph stay valid")
}

fn ceil_sqrt(x: u64) -> u64 {
    let mut s = (x as f64).sqrt() as u64;
    while s * s > x {
        s -= 1;
    }
    while s * s < x {
        s += 1;
    }
    s
}
