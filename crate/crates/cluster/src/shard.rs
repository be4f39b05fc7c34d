use hublab_core::{HubLabel, Labeling, Ranking, Side, Vertex};

use crate::schedule::owner;

/// Hub-disjoint label shards, one per node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionedLabeling {
    shards: Vec<Labeling>,
}

/// A label stored on a node that does not own its hub.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Misplaced {
    pub node: usize,
    pub side: Side,
    pub v: Vertex,
    pub label: HubLabel,
}

impl PartitionedLabeling {
    pub fn new(shards: Vec<Labeling>) -> Self {
        assert!(!shards.is_empty(), "at least one shard");
        PartitionedLabeling { shards }
    }

    /// Splits a full labeling by hub owner.
    pub fn split(lab: &Labeling, r: &Ranking, q: usize) -> Self {
        let mut shards = vec![Labeling::new(lab.n(), lab.is_directed()); q];
        for (side, v, l) in lab.iter() {
            shards[owner(r, l.hub, q)].push(side, v, l);
        }
        PartitionedLabeling { shards }
    }

    pub fn q(&self) -> usize {
        self.shards.len()
    }

    pub fn n(&self) -> usize {
        self.shards[0].n()
    }

    pub fn is_directed(&self) -> bool {
        self.shards[0].is_directed()
    }

    pub fn shards(&self) -> &[Labeling] {
        &self.shards
    }

    pub fn shard(&self, i: usize) -> &Labeling {
        &self.shards[i]
    }

    pub fn into_shards(self) -> Vec<Labeling> {
        self.shards
    }

    pub fn total_labels(&self) -> usize {
        self.shards.iter().map(Labeling::total_labels).sum()
    }

    pub fn union(&self, r: &Ranking) -> Labeling {
        let mut out = self.shards[0].clone();
        for s in &self.shards[1..] {
            out.absorb(s, r);
        }
        out
    }

    /// Every label sits on the node owning its hub.
    pub fn check_ownership(&self, r: &Ranking) -> Result<(), Misplaced> {
        let q = self.q();
        for (node, shard) in self.shards.iter().enumerate() {
            if let Some((side, v, label)) = shard.iter().find(|(_, _, l)| owner(r, l.hub, q) != node) {
                return Err(Misplaced { node, side, v, label });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hublab_core::{oracle, synthetic};

    #[test]
    fn split_and_union_p3() {
        let r = synthetic::p3_ranking();
        let chl = oracle::chl_oracle(&synthetic::p3(), &r);
        let p = PartitionedLabeling::split(&chl, &r, 2);
        assert_eq!(p.shard(0).total_labels(), 2);
        assert_eq!(p.shard(1).total_labels(), 0);
        assert_eq!(p.union(&r), chl);
        p.check_ownership(&r).unwrap();
        let swapped = PartitionedLabeling::new(p.clone().into_shards().into_iter().rev().collect());
        assert_eq!(swapped.check_ownership(&r).unwrap_err().node, 1);
    }
}
