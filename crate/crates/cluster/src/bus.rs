//! In-process message bus for simulated nodes.
//!
//! Every node runs on its own thread and owns an [`Endpoint`]. Collectives
//! (barrier, broadcast, exchange, all-reduce) must be entered by all nodes
//! in the same sequence; each one is a full barrier. Bytes are metered at
//! the sending node.

use std::fmt;
use std::io::{self, Write};
use std::sync::{Barrier, Mutex};

use bitvec::prelude::*;
use hublab_core::seed::{self, Stream};
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Barrier,
    Broadcast,
    PointToPoint,
    AllReduceOr,
    AllReduceMin,
    AllReduceSum,
}

impl Op {
    pub fn as_str(self) -> &'static str {
        match self {
            Op::Barrier => "barrier",
            Op::Broadcast => "broadcast",
            Op::PointToPoint => "p2p",
            Op::AllReduceOr => "allreduce_or",
            Op::AllReduceMin => "allreduce_min",
            Op::AllReduceSum => "allreduce_sum",
        }
    }

    /// Broadcast and point-to-point carry labels or queries; the rest are
    /// control traffic.
    pub fn is_exchange(self) -> bool {
        matches!(self, Op::Broadcast | Op::PointToPoint)
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TrafficRecord {
    pub superstep: usize,
    pub node: usize,
    pub op: Op,
    pub bytes: u64,
}

/// The contract simulated nodes communicate through.
pub trait MessageBus {
    fn node(&self) -> usize;
    fn q(&self) -> usize;
    /// Tags subsequent meter records.
    fn set_superstep(&mut self, superstep: usize);
    fn barrier(&mut self);
    /// Delivers `payload` to every node, the sender included. Each node
    /// receives all payloads as `(sender, bytes)` in the same seeded order.
    fn broadcast(&mut self, payload: Vec<u8>) -> Vec<(usize, Vec<u8>)>;
    /// Queues a point-to-point message for the next [`exchange`](Self::exchange).
    fn send(&mut self, to: usize, payload: Vec<u8>);
    /// Delivers all queued messages; returns this node's inbox by sender id.
    fn exchange(&mut self) -> Vec<(usize, Vec<u8>)>;
    fn all_reduce_or(&mut self, bits: &BitSlice<u64, Lsb0>) -> BitVec<u64, Lsb0>;
    fn all_reduce_min(&mut self, values: &[u64]) -> Vec<u64>;
    /// Sums in node order, so every node gets the same bits.
    fn all_reduce_sum(&mut self, values: &[f64]) -> Vec<f64>;
}

/// Per-node inbox of `(sender, payload)`.
type Mailboxes = Vec<Vec<(usize, Vec<u8>)>>;

struct Shared {
    q: usize,
    barrier: Barrier,
    slots: Mutex<Vec<Vec<u8>>>,
    mail: Mutex<Mailboxes>,
    meter: Mutex<Vec<TrafficRecord>>,
}

pub struct Endpoint<'a> {
    node: usize,
    superstep: usize,
    shared: &'a Shared,
    delivery: ChaCha8Rng,
    outbox: Vec<(usize, Vec<u8>)>,
}

impl Endpoint<'_> {
    fn meter(&self, op: Op, bytes: u64) {
        self.shared.meter.lock().unwrap().push(TrafficRecord { superstep: self.superstep, node: self.node, op, bytes });
    }

    /// Every node's contribution, indexed by node id.
    fn gather(&mut self, mine: Vec<u8>) -> Vec<Vec<u8>> {
        self.shared.slots.lock().unwrap()[self.node] = mine;
        self.shared.barrier.wait();
        let all = self.shared.slots.lock().unwrap().clone();
        self.shared.barrier.wait();
        all
    }
}

impl MessageBus for Endpoint<'_> {
    fn node(&self) -> usize {
        self.node
    }

    fn q(&self) -> usize {
        self.shared.q
    }

    fn set_superstep(&mut self, superstep: usize) {
        self.superstep = superstep;
    }

    fn barrier(&mut self) {
        self.meter(Op::Barrier, 0);
        self.shared.barrier.wait();
    }

    fn broadcast(&mut self, payload: Vec<u8>) -> Vec<(usize, Vec<u8>)> {
        self.meter(Op::Broadcast, payload.len() as u64);
        let all = self.gather(payload);
        let mut order: Vec<usize> = (0..all.len()).collect();
        order.shuffle(&mut self.delivery);
        let mut all: Vec<Option<Vec<u8>>> = all.into_iter().map(Some).collect();
        order.into_iter().map(|s| (s, all[s].take().unwrap())).collect()
    }

    fn send(&mut self, to: usize, payload: Vec<u8>) {
        assert!(to < self.shared.q, "no node {to}");
        self.outbox.push((to, payload));
    }

    fn exchange(&mut self) -> Vec<(usize, Vec<u8>)> {
        let sent: u64 = self.outbox.iter().map(|(_, p)| p.len() as u64).sum();
        self.meter(Op::PointToPoint, sent);
        {
            let mut mail = self.shared.mail.lock().unwrap();
            for (to, p) in self.outbox.drain(..) {
                mail[to].push((self.node, p));
            }
        }
        self.shared.barrier.wait();
        let mut inbox = std::mem::take(&mut self.shared.mail.lock().unwrap()[self.node]);
        self.shared.barrier.wait();
        inbox.sort_by_key(|(from, _)| *from);
        inbox
    }

    fn all_reduce_or(&mut self, bits: &BitSlice<u64, Lsb0>) -> BitVec<u64, Lsb0> {
        let len = bits.len();
        let bytes = len.div_ceil(8);
        self.meter(Op::AllReduceOr, bytes as u64);
        let mut packed = vec![0u8; bytes];
        for i in bits.iter_ones() {
            packed[i / 8] |= 1 << (i % 8);
        }
        let all = self.gather(packed);
        let mut out = bitvec![u64, Lsb0; 0; len];
        for contribution in &all {
            assert_eq!(contribution.len(), bytes, "all-reduce lengths differ across nodes");
            for i in 0..len {
                if contribution[i / 8] >> (i % 8) & 1 == 1 {
                    out.set(i, true);
                }
            }
        }
        out
    }

    fn all_reduce_min(&mut self, values: &[u64]) -> Vec<u64> {
        self.meter(Op::AllReduceMin, 8 * values.len() as u64);
        let all = self.gather(values.iter().flat_map(|x| x.to_le_bytes()).collect());
        let mut out = values.to_vec();
        for contribution in &all {
            assert_eq!(contribution.len(), 8 * out.len(), "all-reduce lengths differ across nodes");
            for (o, chunk) in out.iter_mut().zip(contribution.chunks_exact(8)) {
                *o = (*o).min(u64::from_le_bytes(chunk.try_into().unwrap()));
            }
        }
        out
    }

    fn all_reduce_sum(&mut self, values: &[f64]) -> Vec<f64> {
        self.meter(Op::AllReduceSum, 8 * values.len() as u64);
        let all = self.gather(values.iter().flat_map(|x| x.to_le_bytes()).collect());
        let mut out = vec![0.0; values.len()];
        for contribution in &all {
            assert_eq!(contribution.len(), 8 * out.len(), "all-reduce lengths differ across nodes");
            for (o, chunk) in out.iter_mut().zip(contribution.chunks_exact(8)) {
                *o += f64::from_le_bytes(chunk.try_into().unwrap());
            }
        }
        out
    }
}

/// Runs `f` once per node, each on its own thread, and returns the results
/// in node order along with the traffic log.
pub fn run_cluster<T, F>(q: usize, seed: u64, f: F) -> (Vec<T>, Vec<TrafficRecord>)
where
    T: Send,
    F: Fn(&mut Endpoint<'_>) -> T + Sync,
{
    assert!(q >= 1, "cluster needs at least one node");
    let shared = Shared {
        q,
        barrier: Barrier::new(q),
        slots: Mutex::new(vec![Vec::new(); q]),
        mail: Mutex::new(vec![Vec::new(); q]),
        meter: Mutex::new(Vec::new()),
    };
    let results = std::thread::scope(|s| {
        let handles: Vec<_> = (0..q)
            .map(|node| {
                let (shared, f) = (&shared, &f);
                s.spawn(move || {
                    let delivery = seed::rng(seed, Stream::Delivery);
                    let mut ep = Endpoint { node, superstep: 0, shared, delivery, outbox: Vec::new() };
                    f(&mut ep)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("node thread panicked")).collect()
    });
    let mut traffic = shared.meter.into_inner().unwrap();
    traffic.sort();
    (results, traffic)
}

/// Totals by operation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrafficSummary {
    pub broadcast: u64,
    pub point_to_point: u64,
    pub all_reduce: u64,
}

impl TrafficSummary {
    pub fn of(records: &[TrafficRecord]) -> Self {
        let mut s = TrafficSummary::default();
        for r in records {
            match r.op {
                Op::Broadcast => s.broadcast += r.bytes,
                Op::PointToPoint => s.point_to_point += r.bytes,
                Op::AllReduceOr | Op::AllReduceMin | Op::AllReduceSum => s.all_reduce += r.bytes,
                Op::Barrier => {}
            }
        }
        s
    }

    /// Label or query payload bytes, excluding control traffic.
    pub fn exchange(&self) -> u64 {
        self.broadcast + self.point_to_point
    }
}

/// Traffic per `(superstep, node, op)`, summed over repeated calls.
pub fn meter_report(records: &[TrafficRecord]) -> Vec<TrafficRecord> {
    let mut out: Vec<TrafficRecord> = Vec::new();
    let mut sorted = records.to_vec();
    sorted.sort();
    for r in sorted {
        match out.last_mut() {
            Some(last) if (last.superstep, last.node, last.op) == (r.superstep, r.node, r.op) => last.bytes += r.bytes,
            _ => out.push(r),
        }
    }
    out
}

pub fn write_traffic_csv(records: &[TrafficRecord], mut w: impl Write) -> io::Result<()> {
    writeln!(w, "superstep,node,op,bytes")?;
    for r in meter_report(records) {
        writeln!(w, "{},{},{},{}", r.superstep, r.node, r.op, r.bytes)?;
    }
    Ok(())
}
