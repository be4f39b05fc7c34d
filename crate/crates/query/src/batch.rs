use std::fmt;
use std::io::{self, BufRead, Write};

use hublab_core::seed::{self, Stream};
use hublab_core::{Dist, Vertex, INF};
use rand::Rng;

/// Query pairs in submission order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QueryBatch {
    pub pairs: Vec<(Vertex, Vertex)>,
}

#[derive(Debug, thiserror::Error)]
pub enum BatchError {
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: expected \"u v\"")]
    Parse { line: usize },
}

impl QueryBatch {
    pub fn new(pairs: Vec<(Vertex, Vertex)>) -> Self {
        QueryBatch { pairs }
    }

    /// `count` uniform pairs over `[0, n)` drawn from the query substream.
    pub fn random(n: usize, count: usize, seed: u64) -> Self {
        if n == 0 {
            return QueryBatch::default();
        }
        let mut rng = seed::rng(seed, Stream::Queries);
        let pairs = (0..count).map(|_| (rng.gen_range(0..n) as Vertex, rng.gen_range(0..n) as Vertex)).collect();
        QueryBatch { pairs }
    }

    /// One `u v` pair per line; blank lines and `#` comments are skipped.
    pub fn read(r: impl BufRead) -> Result<Self, BatchError> {
        let mut pairs = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let mut it = t.split_whitespace().map(str::parse::<Vertex>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => pairs.push((u, v)),
                _ => return Err(BatchError::Parse { line: i + 1 }),
            }
        }
        Ok(QueryBatch { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn in_range(&self, i: usize, n: usize) -> bool {
        let (u, v) = self.pairs[i];
        (u as usize) < n && (v as usize) < n
    }
}

/// Result of one query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Distance(Dist),
    Unreachable,
    /// An endpoint id was not below `n`.
    OutOfRange,
}

impl Answer {
    pub fn from_dist(d: Dist) -> Self {
        if d == INF {
            Answer::Unreachable
        } else {
            Answer::Distance(d)
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Distance(d) => write!(f, "{d}"),
            Answer::Unreachable => f.write_str("INF"),
            Answer::OutOfRange => f.write_str("ERR"),
        }
    }
}

pub fn write_answers(answers: &[Answer], mut w: impl Write) -> io::Result<()> {
    for a in answers {
        writeln!(w, "{a}")?;
    }
    w.flush()
}

pub fn encode_pairs(pairs: &[(Vertex, Vertex)]) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 + 8 * pairs.len());
    out.extend((pairs.len() as u32).to_le_bytes());
    for &(u, v) in pairs {
        out.extend(u.to_le_bytes());
        out.extend(v.to_le_bytes());
    }
    out
}

pub fn decode_pairs(bytes: &[u8]) -> Vec<(Vertex, Vertex)> {
    let count = u32::from_le_bytes(bytes[..4].try_into().expect("pair payload header")) as usize;
    let body = &bytes[4..];
    assert_eq!(body.len(), 8 * count, "pair payload length");
    body.chunks_exact(8)
        .map(|c| (u32::from_le_bytes(c[..4].try_into().unwrap()), u32::from_le_bytes(c[4..].try_into().unwrap())))
        .collect()
}

pub fn encode_dists(d: &[Dist]) -> Vec<u8> {
    d.iter().flat_map(|x| x.to_le_bytes()).collect()
}

pub fn decode_dists(bytes: &[u8]) -> Vec<Dist> {
    bytes.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().unwrap())).collect()
}
