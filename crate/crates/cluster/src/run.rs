//! DGLL, distributed PLaNT, and Hybrid over the simulated cluster.

use std::sync::atomic::AtomicUsize;

use bitvec::prelude::*;
use hublab_core::label::dq_clean;
use hublab_core::plant::{plant_roots, PlantOptions, PsiRecord};
use hublab_core::smp::construct_parallel;
use hublab_core::{CommonLabelTable, GlobalLocalTable, Graph, HubLabel, Labeling, Ranking, Vertex};

use crate::bus::{run_cluster, MessageBus, TrafficRecord};
use crate::config::{ClusterConfig, ClusterConfigError};
use crate::schedule::{owner, sync_schedule};
use crate::shard::PartitionedLabeling;
use crate::wire::{decode_labels, encode_labels, WireLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Dgll,
    Plant,
    Hybrid,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub labeling: PartitionedLabeling,
    pub traffic: Vec<TrafficRecord>,
    /// ψ of every planted root, in rank order.
    pub psi: Vec<PsiRecord>,
    pub supersteps: usize,
    /// First superstep built with DGLL by a Hybrid run.
    pub switched_at: Option<usize>,
}

struct Node<'a> {
    id: usize,
    q: usize,
    g: &'a Graph,
    r: &'a Ranking,
    cfg: &'a ClusterConfig,
    tables: GlobalLocalTable,
    common: CommonLabelTable,
    psi: Vec<PsiRecord>,
}

impl<'a> Node<'a> {
    fn new(id: usize, g: &'a Graph, r: &'a Ranking, cfg: &'a ClusterConfig) -> Self {
        Node {
            id,
            q: cfg.q,
            g,
            r,
            cfg,
            tables: GlobalLocalTable::new(g.n(), g.is_directed()),
            common: CommonLabelTable::new(r, cfg.eta, g.is_directed()),
            psi: Vec::new(),
        }
    }

    fn owns(&self, v: Vertex) -> bool {
        owner(self.r, v, self.q) == self.id
    }

    fn mine(&self, roots: &[Vertex]) -> Vec<Vertex> {
        roots.iter().copied().filter(|&v| self.owns(v)).collect()
    }

    fn common(&self) -> Option<&CommonLabelTable> {
        (self.cfg.eta > 0).then_some(&self.common)
    }

    /// Whether this node's labels show `(hub, dist)` at `v` to be redundant.
    fn evidence(&self, (side, v, l): WireLabel) -> bool {
        let h = l.hub;
        self.tables.with_view(side.opposite(), h, self.owns(h), |lh| {
            self.tables.with_view(side, v, self.owns(v), |lv| dq_clean(l.dist, &lh, &lv, self.r))
        })
    }

    fn absorb_common<'l>(&mut self, labels: impl IntoIterator<Item = &'l WireLabel>) {
        for &(side, v, l) in labels {
            if self.common.is_common(l.hub) {
                self.common.insert(side, l.hub, v, l.dist).expect("hub checked");
            }
        }
    }

    /// Pruned trees for this node's share of `roots`, then broadcast and
    /// all-reduce cleaning of every node's fresh labels.
    fn dgll_superstep(&mut self, ep: &mut impl MessageBus, roots: &[Vertex]) {
        let mine = self.mine(roots);
        let cursor = AtomicUsize::new(0);
        construct_parallel(
            self.g,
            self.r,
            &mine,
            &cursor,
            &self.tables,
            self.common(),
            self.cfg.workers_per_node,
            usize::MAX,
            None,
        );
        self.tables.seal(self.r);
        let own = self.tables.local_labels();
        let mut candidates = Vec::new();
        let mut own_offset = 0;
        for (sender, payload) in ep.broadcast(encode_labels(&own)) {
            if sender == self.id {
                own_offset = candidates.len();
            }
            candidates.extend(decode_labels(&payload));
        }
        let bits: BitVec<u64, Lsb0> = candidates.iter().map(|&c| self.evidence(c)).collect();
        let redundant = ep.all_reduce_or(&bits);
        let keep: Vec<bool> = (own_offset..own_offset + own.len()).map(|i| !redundant[i]).collect();
        self.tables.commit_superstep(&keep, self.r).expect("mask sized from local labels");
        let survivors: Vec<WireLabel> =
            candidates.into_iter().zip(redundant.iter().by_vals()).filter(|(_, red)| !red).map(|(c, _)| c).collect();
        self.absorb_common(&survivors);
    }

    /// Plants this node's share of `roots` and commits the labels. Returns
    /// the fresh labels and the ψ sum over the planted roots.
    fn plant_superstep(&mut self, roots: &[Vertex]) -> (Vec<WireLabel>, f64, usize) {
        let mine = self.mine(roots);
        let trees = plant_roots(self.g, self.r, &mine, self.common(), PlantOptions::default());
        let mut fresh = Vec::new();
        let mut psi_sum = 0.0;
        for per_root in &trees {
            let root = per_root[0].root;
            let rec = PsiRecord {
                tree_index: self.r.position(root),
                root,
                rank: self.r.rank(root),
                explored: per_root.iter().map(|t| t.explored).sum(),
                labels: per_root.iter().map(|t| t.labels.len()).sum(),
            };
            psi_sum += rec.psi();
            self.psi.push(rec);
            for t in per_root {
                fresh.extend(t.labels.iter().map(|&(v, d)| (t.side, v, HubLabel::new(root, d))));
            }
        }
        for &(side, v, l) in &fresh {
            self.tables.append(side, v, l);
        }
        let keep = vec![true; self.tables.local_count()];
        self.tables.commit_superstep(&keep, self.r).expect("mask sized from local count");
        (fresh, psi_sum, mine.len())
    }

    /// Broadcasts fresh labels of common hubs into every replica.
    fn share_common(&mut self, ep: &mut impl MessageBus, fresh: &[WireLabel]) {
        let ours: Vec<WireLabel> = fresh.iter().copied().filter(|l| self.common.is_common(l.2.hub)).collect();
        for (_, payload) in ep.broadcast(encode_labels(&ours)) {
            let labels = decode_labels(&payload);
            self.absorb_common(&labels);
        }
    }

    fn finish(self) -> (Labeling, Vec<PsiRecord>) {
        (self.tables.into_global(), self.psi)
    }
}

struct NodeOutput {
    shard: Labeling,
    psi: Vec<PsiRecord>,
    supersteps: usize,
    switched_at: Option<usize>,
}

fn node_main(ep: &mut impl MessageBus, g: &Graph, r: &Ranking, cfg: &ClusterConfig, algo: Algorithm) -> NodeOutput {
    let mut node = Node::new(ep.node(), g, r, cfg);
    let order = r.order();
    let mut supersteps = 0;
    let mut switched_at = None;
    match algo {
        Algorithm::Plant => {
            let head = if cfg.eta > 0 { cfg.eta.min(order.len()) } else { 0 };
            if head > 0 {
                let (fresh, _, _) = node.plant_superstep(&order[..head]);
                node.share_common(ep, &fresh);
                supersteps += 1;
                ep.set_superstep(supersteps);
            }
            node.plant_superstep(&order[head..]);
            supersteps += 1;
            ep.barrier();
        }
        Algorithm::Dgll | Algorithm::Hybrid => {
            let sizes = sync_schedule(g.n(), cfg.effective_syncs(g.n()), cfg.beta);
            let mut dgll = algo == Algorithm::Dgll;
            let mut start = 0;
            for (k, &s) in sizes.iter().enumerate() {
                ep.set_superstep(k);
                let roots = &order[start..start + s];
                start += s;
                if dgll {
                    node.dgll_superstep(ep, roots);
                } else {
                    let (fresh, psi_sum, count) = node.plant_superstep(roots);
                    node.share_common(ep, &fresh);
                    let tot = ep.all_reduce_sum(&[psi_sum, count as f64]);
                    let mean = if tot[1] > 0.0 { tot[0] / tot[1] } else { 0.0 };
                    if mean > cfg.psi_th {
                        dgll = true;
                        switched_at = Some(k + 1);
                    }
                }
            }
            supersteps = sizes.len();
            ep.barrier();
        }
    }
    let (shard, psi) = node.finish();
    NodeOutput { shard, psi, supersteps, switched_at }
}

pub fn run(g: &Graph, r: &Ranking, cfg: &ClusterConfig, algo: Algorithm) -> Result<RunOutput, ClusterConfigError> {
    cfg.validate()?;
    assert_eq!(g.n(), r.n(), "ranking size differs from graph");
    let (outs, traffic) = run_cluster(cfg.q, cfg.seed, |ep| node_main(ep, g, r, cfg, algo));
    let supersteps = outs[0].supersteps;
    let switched_at = outs[0].switched_at.filter(|&k| k < supersteps);
    let mut psi: Vec<PsiRecord> = Vec::new();
    let mut shards = Vec::with_capacity(outs.len());
    for o in outs {
        psi.extend(o.psi);
        shards.push(o.shard);
    }
    psi.sort_by_key(|p| p.tree_index);
    Ok(RunOutput { labeling: PartitionedLabeling::new(shards), traffic, psi, supersteps, switched_at })
}

pub fn dgll_run(g: &Graph, r: &Ranking, cfg: &ClusterConfig) -> Result<RunOutput, ClusterConfigError> {
    run(g, r, cfg, Algorithm::Dgll)
}

pub fn plant_run(g: &Graph, r: &Ranking, cfg: &ClusterConfig) -> Result<RunOutput, ClusterConfigError> {
    run(g, r, cfg, Algorithm::Plant)
}

pub fn hybrid_run(g: &Graph, r: &Ranking, cfg: &ClusterConfig) -> Result<RunOutput, ClusterConfigError> {
    run(g, r, cfg, Algorithm::Hybrid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bus::TrafficSummary;
    use hublab_core::{oracle, synthetic};

    fn cfg(q: usize, eta: usize) -> ClusterConfig {
        ClusterConfig { q, eta, ..Default::default() }
    }

    #[test]
    fn dgll_p3_two_nodes() {
        let (g, r) = (synthetic::p3(), synthetic::p3_ranking());
        let out = dgll_run(&g, &r, &cfg(2, 16)).unwrap();
        assert_eq!(out.labeling.union(&r), oracle::chl_oracle(&g, &r));
        out.labeling.check_ownership(&r).unwrap();
    }

    #[test]
    fn plant_p3_three_nodes_no_traffic() {
        let (g, r) = (synthetic::p3(), synthetic::p3_ranking());
        let out = plant_run(&g, &r, &cfg(3, 0)).unwrap();
        assert_eq!(out.labeling.union(&r), oracle::chl_oracle(&g, &r));
        assert_eq!(TrafficSummary::of(&out.traffic), TrafficSummary::default());
        assert_eq!(out.psi.iter().map(|p| p.root).collect::<Vec<_>>(), vec![1, 0, 2]);
    }

    #[test]
    fn hybrid_switch_points() {
        let g = synthetic::gnm(60, 150, false, 10, 4);
        let r = hublab_core::rank::rank_by_degree(&g);
        let chl = oracle::chl_oracle(&g, &r);
        let never = hybrid_run(&g, &r, &ClusterConfig { psi_th: f64::INFINITY, ..cfg(2, 4) }).unwrap();
        assert_eq!(never.switched_at, None);
        assert_eq!(never.labeling.union(&r), chl);
        let eager = hybrid_run(&g, &r, &ClusterConfig { psi_th: 0.0, ..cfg(2, 4) }).unwrap();
        assert_eq!(eager.switched_at, Some(1));
        assert_eq!(eager.labeling.union(&r), chl);
    }

    #[test]
    fn rejects_bad_config() {
        let g = synthetic::p3();
        let r = synthetic::p3_ranking();
        let bad = ClusterConfig { beta: 1, ..Default::default() };
        assert_eq!(dgll_run(&g, &r, &bad).unwrap_err(), ClusterConfigError::Beta(1));
    }
}
