//! Distance queries over a labeling in three storage modes.
//!
//! * QLSN: the whole labeling on the querying node; no traffic.
//! * QFDL: hub-partitioned shards; every node computes a partial minimum
//!   over its own hubs and the partials are min-reduced.
//! * QDOL: overlapping vertex partitions; each query is shipped to the one
//!   node that holds both endpoints' full label sets.
//!
//! Distributed modes run on the simulated cluster with node 0 as the
//! querying node.

pub mod batch;
pub mod qdol;

use std::io::{self, Write};
use std::time::Duration;

use hublab_cluster::{owner, run_cluster, MessageBus, PartitionedLabeling, TrafficRecord};
use hublab_core::label::{ppsd_query, LabelView};
use hublab_core::{Dist, Labeling, Ranking, Side, Vertex};

pub use batch::{Answer, QueryBatch};
pub use qdol::{compute_zeta, QdolLayout, QdolStore};

use batch::{decode_dists, decode_pairs, encode_dists, encode_pairs};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Qlsn,
    Qfdl,
    Qdol,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Qlsn => "qlsn",
            Mode::Qfdl => "qfdl",
            Mode::Qdol => "qdol",
        }
    }
}

/// Answers plus the traffic they caused.
#[derive(Clone, Debug)]
pub struct QueryOutput {
    pub answers: Vec<Answer>,
    pub traffic: Vec<TrafficRecord>,
}

pub fn qlsn(batch: &QueryBatch, lab: &Labeling, r: &Ranking) -> Vec<Answer> {
    let n = lab.n();
    (0..batch.len())
        .map(|i| {
            if !batch.in_range(i, n) {
                return Answer::OutOfRange;
            }
            let (u, v) = batch.pairs[i];
            Answer::from_dist(ppsd_query(&lab.view(Side::Out, u), &lab.view(Side::In, v), r).0)
        })
        .collect()
}

/// Minimum over the hubs stored in `shard`. The implicit self-labels of
/// `u` and `v` count only on their owners.
pub fn partial_min(shard: &Labeling, r: &Ranking, q: usize, node: usize, u: Vertex, v: Vertex) -> Dist {
    let lu = LabelView::split(u, shard.labels(Side::Out, u), &[], owner(r, u, q) == node);
    let lv = LabelView::split(v, shard.labels(Side::In, v), &[], owner(r, v, q) == node);
    ppsd_query(&lu, &lv, r).0
}

pub fn qfdl(batch: &QueryBatch, shards: &PartitionedLabeling, r: &Ranking, seed: u64) -> QueryOutput {
    let (q, n) = (shards.q(), shards.n());
    let valid: Vec<usize> = (0..batch.len()).filter(|&i| batch.in_range(i, n)).collect();
    let (mut results, traffic) = run_cluster(q, seed, |ep| {
        let me = ep.node();
        let outgoing = if me == 0 { valid.iter().map(|&i| batch.pairs[i]).collect() } else { Vec::new() };
        let mut pairs = Vec::new();
        for (_, payload) in ep.broadcast(encode_pairs(&outgoing)) {
            pairs.extend(decode_pairs(&payload));
        }
        let shard = shards.shard(me);
        let partials: Vec<Dist> = pairs.iter().map(|&(u, v)| partial_min(shard, r, q, me, u, v)).collect();
        ep.all_reduce_min(&partials)
    });
    let mins = results.swap_remove(0);
    let mut answers = vec![Answer::OutOfRange; batch.len()];
    for (&i, &d) in valid.iter().zip(&mins) {
        answers[i] = Answer::from_dist(d);
    }
    QueryOutput { answers, traffic }
}

pub fn qdol(batch: &QueryBatch, store: &QdolStore, r: &Ranking, seed: u64) -> QueryOutput {
    let layout = &store.layout;
    let mut routed: Vec<(usize, usize)> =
        (0..batch.len()).filter(|&i| batch.in_range(i, layout.n)).map(|i| (layout.route(batch.pairs[i].0, batch.pairs[i].1), i)).collect();
    routed.sort();
    let (mut results, traffic) = run_cluster(layout.q, seed, |ep| {
        let me = ep.node();
        if me == 0 {
            let mut start = 0;
            while start < routed.len() {
                let node = routed[start].0;
                let end = start + routed[start..].iter().take_while(|x| x.0 == node).count();
                let pairs: Vec<_> = routed[start..end].iter().map(|&(_, i)| batch.pairs[i]).collect();
                ep.send(node, encode_pairs(&pairs));
                start = end;
            }
        }
        let inbox = ep.exchange();
        for (from, payload) in inbox {
            let dists: Vec<Dist> = decode_pairs(&payload).into_iter().map(|(u, v)| store.answer(me, u, v, r)).collect();
            ep.send(from, encode_dists(&dists));
        }
        ep.exchange()
    });
    let replies = results.swap_remove(0);
    let mut answers = vec![Answer::OutOfRange; batch.len()];
    let mut next = routed.iter();
    for (_, payload) in replies {
        for d in decode_dists(&payload) {
            let &(_, i) = next.next().expect("reply count matches requests");
            answers[i] = Answer::from_dist(d);
        }
    }
    debug_assert!(next.next().is_none());
    QueryOutput { answers, traffic }
}

/// One row of the throughput CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct QueryStats {
    pub mode: Mode,
    pub queries: usize,
    pub seconds: f64,
}

impl QueryStats {
    pub fn new(mode: Mode, queries: usize, elapsed: Duration) -> Self {
        QueryStats { mode, queries, seconds: elapsed.as_secs_f64() }
    }

    pub fn qps(&self) -> f64 {
        if self.seconds > 0.0 {
            self.queries as f64 / self.seconds
        } else {
            0.0
        }
    }

    pub fn mean_us(&self) -> f64 {
        if self.queries > 0 {
            self.seconds * 1e6 / self.queries as f64
        } else {
            0.0
        }
    }
}

pub fn write_stats_csv(rows: &[QueryStats], mut w: impl Write) -> io::Result<()> {
    writeln!(w, "mode,queries,seconds,qps,mean_us")?;
    for s in rows {
        writeln!(w, "{},{},{:.6},{:.1},{:.3}", s.mode.as_str(), s.queries, s.seconds, s.qps(), s.mean_us())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use hublab_core::{oracle, synthetic, INF};

    fn p3() -> (Labeling, Ranking) {
        let r = synthetic::p3_ranking();
        (oracle::chl_oracle(&synthetic::p3(), &r), r)
    }

    #[test]
    fn qlsn_p3() {
        let (lab, r) = p3();
        let b = QueryBatch::new(vec![(0, 2), (1, 1), (0, 9)]);
        assert_eq!(qlsn(&b, &lab, &r), vec![Answer::Distance(2), Answer::Distance(0), Answer::OutOfRange]);
    }

    #[test]
    fn qlsn_disconnected() {
        let g = hublab_core::Graph::from_arcs(3, [(0, 1, 1)], false).unwrap();
        let r = hublab_core::rank::rank_by_degree(&g);
        let lab = oracle::chl_oracle(&g, &r);
        assert_eq!(qlsn(&QueryBatch::new(vec![(0, 2)]), &lab, &r), vec![Answer::Unreachable]);
    }

    #[test]
    fn qfdl_p3_partials() {
        let (lab, r) = p3();
        let shards = PartitionedLabeling::split(&lab, &r, 2);
        assert_eq!(partial_min(shards.shard(0), &r, 2, 0, 0, 2), 2);
        assert_eq!(partial_min(shards.shard(1), &r, 2, 1, 0, 2), INF);
        let out = qfdl(&QueryBatch::new(vec![(0, 2)]), &shards, &r, 1);
        assert_eq!(out.answers, vec![Answer::Distance(2)]);
    }

    #[test]
    fn qdol_single_node() {
        let (lab, r) = p3();
        let store = QdolStore::build(&lab, 1);
        assert_eq!(store.layout.zeta, 2);
        let b = QueryBatch::new(vec![(0, 2), (2, 0), (1, 1), (5, 0)]);
        assert_eq!(qdol(&b, &store, &r, 0).answers, qlsn(&b, &lab, &r));
    }

    #[test]
    fn stats_csv() {
        let rows = [QueryStats { mode: Mode::Qlsn, queries: 1000, seconds: 0.5 }];
        let mut out = Vec::new();
        write_stats_csv(&rows, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "mode,queries,seconds,qps,mean_us\nqlsn,1000,0.500000,2000.0,500.000\n");
    }
}
