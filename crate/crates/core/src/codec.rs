//! Labeling files.
//!
//! Binary layout (little-endian): magic `CHLB`, version `u32`, `n: u32`,
//! `directed: u8`, then for each side slot (outbound first, inbound second
//! when directed) and each vertex a `u32` count followed by that many
//! `(hub: u32, dist: u64)` pairs in stored order.
//!
//! Text layout: a `# n=<n> directed=<0|1>` header, then one `v h d` line per
//! label, with a trailing `o` or `i` column on directed labelings.

use std::io::{self, BufRead, Read, Write};

use crate::label::{HubLabel, Labeling, Side};
use crate::Vertex;

pub const MAGIC: &[u8; 4] = b"CHLB";
pub const VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CodecError {
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("not a labeling file (bad magic)")]
    BadMagic,
    #[error("unsupported labeling version {0}")]
    Version(u32),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub fn write_binary(lab: &Labeling, mut w: impl Write) -> io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(lab.n() as u32).to_le_bytes())?;
    w.write_all(&[lab.is_directed() as u8])?;
    for &side in lab.sides() {
        for v in 0..lab.n() as Vertex {
            let set = lab.labels(side, v);
            w.write_all(&(set.len() as u32).to_le_bytes())?;
            for l in set {
                w.write_all(&l.hub.to_le_bytes())?;
                w.write_all(&l.dist.to_le_bytes())?;
            }
        }
    }
    w.flush()
}

fn read_u32(r: &mut impl Read) -> io::Result<u32> {
    let mut b = [0; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> io::Result<u64> {
    let mut b = [0; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

pub fn read_binary(mut r: impl Read) -> Result<Labeling, CodecError> {
    let mut magic = [0; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(CodecError::BadMagic);
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(CodecError::Version(version));
    }
    let n = read_u32(&mut r)? as usize;
    let mut flag = [0; 1];
    r.read_exact(&mut flag)?;
    let directed = match flag[0] {
        0 => false,
        1 => true,
        x => return Err(CodecError::Invalid(format!("bad directed flag {x}"))),
    };
    let mut lab = Labeling::new(n, directed);
    for &side in lab.sides() {
        for v in 0..n as Vertex {
            let count = read_u32(&mut r)? as usize;
            let set = lab.labels_mut(side, v);
            set.reserve(count.min(1 << 20));
            for _ in 0..count {
                let hub = read_u32(&mut r)?;
                let dist = read_u64(&mut r)?;
                if hub as usize >= n {
                    return Err(CodecError::Invalid(format!("hub {hub} out of range for n={n}")));
                }
                set.push(HubLabel::new(hub, dist));
            }
        }
    }
    let mut rest = [0; 1];
    if r.read(&mut rest)? != 0 {
        return Err(CodecError::Invalid("trailing bytes after labeling".into()));
    }
    Ok(lab)
}

pub fn write_text(lab: &Labeling, mut w: impl Write) -> io::Result<()> {
    writeln!(w, "# n={} directed={}", lab.n(), lab.is_directed() as u8)?;
    for &side in lab.sides() {
        for v in 0..lab.n() as Vertex {
            for l in lab.labels(side, v) {
                if lab.is_directed() {
                    let tag = if side == Side::Out { 'o' } else { 'i' };
                    writeln!(w, "{v} {} {} {tag}", l.hub, l.dist)?;
                } else {
                    writeln!(w, "{v} {} {}", l.hub, l.dist)?;
                }
            }
        }
    }
    w.flush()
}

fn parse_header(line: &str) -> Option<(usize, bool)> {
    let mut n = None;
    let mut directed = None;
    for tok in line.strip_prefix('#')?.split_whitespace() {
        if let Some(x) = tok.strip_prefix("n=") {
            n = x.parse().ok();
        } else if let Some(x) = tok.strip_prefix("directed=") {
            directed = match x {
                "0" => Some(false),
                "1" => Some(true),
                _ => None,
            };
        }
    }
    Some((n?, directed?))
}

pub fn read_text(r: impl BufRead) -> Result<Labeling, CodecError> {
    let mut lines = r.lines().enumerate();
    let (n, directed) = match lines.next() {
        Some((_, line)) => parse_header(&line?).ok_or(CodecError::Parse { line: 1, msg: "bad header".into() })?,
        None => return Err(CodecError::Parse { line: 1, msg: "missing header".into() }),
    };
    let mut lab = Labeling::new(n, directed);
    for (i, line) in lines {
        let line = line?;
        let lineno = i + 1;
        let err = |msg: &str| CodecError::Parse { line: lineno, msg: msg.to_string() };
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let want = if directed { 4 } else { 3 };
        if toks.len() != want {
            return Err(err(&format!("expected {want} fields")));
        }
        let v: Vertex = toks[0].parse().map_err(|_| err("bad vertex"))?;
        let hub: Vertex = toks[1].parse().map_err(|_| err("bad hub"))?;
        let dist = toks[2].parse().map_err(|_| err("bad distance"))?;
        if v as usize >= n || hub as usize >= n {
            return Err(err("vertex out of range"));
        }
        let side = match (directed, toks.get(3).copied()) {
            (false, _) => Side::Out,
            (true, Some("o")) => Side::Out,
            (true, Some("i")) => Side::In,
            _ => return Err(err("side must be o or i")),
        };
        lab.push(side, v, HubLabel::new(hub, dist));
    }
    Ok(lab)
}
