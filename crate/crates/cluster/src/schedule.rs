use hublab_core::{Ranking, Vertex};

/// Node that owns tree `v` (and every label with hub `v`): rank position
/// modulo `q`, position 0 being the top rank.
#[inline]
pub fn owner(r: &Ranking, v: Vertex, q: usize) -> usize {
    r.position(v) % q
}

/// Circular task shards, each in descending rank.
pub fn partition_tasks(r: &Ranking, q: usize) -> Vec<Vec<Vertex>> {
    assert!(q >= 1);
    let mut shards = vec![Vec::new(); q];
    for (pos, &v) in r.order().iter().enumerate() {
        shards[pos % q].push(v);
    }
    shards
}

/// `ceil(log8 n)`, at least 1.
pub fn default_syncs(n: usize) -> usize {
    let mut k = 0;
    let mut reach: u128 = 1;
    while reach < n as u128 {
        reach *= 8;
        k += 1;
    }
    k.max(1)
}

/// Superstep sizes `x, βx, β²x, …` over `syncs` supersteps, with `x` the
/// smallest positive integer whose geometric sum reaches `n`. The sizes are
/// truncated to sum to exactly `n`; supersteps left empty are dropped.
pub fn sync_schedule(n: usize, syncs: usize, beta: u32) -> Vec<usize> {
    assert!(syncs >= 1 && beta >= 2);
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for _ in 0..syncs {
        total = total.saturating_add(term);
        term = term.saturating_mul(beta as u128);
    }
    let x = (n as u128).div_ceil(total).max(1);
    let mut sizes = Vec::new();
    let mut left = n as u128;
    let mut size = x;
    for _ in 0..syncs {
        if left == 0 {
            break;
        }
        let s = size.min(left);
        sizes.push(s as usize);
        left -= s;
        size = size.saturating_mul(beta as u128);
    }
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;
    use hublab_core::synthetic;

    #[test]
    fn partition_p3() {
        let r = synthetic::p3_ranking();
        assert_eq!(partition_tasks(&r, 2), vec![vec![1, 2], vec![0]]);
        assert_eq!(partition_tasks(&r, 1), vec![vec![1, 0, 2]]);
        let wide = partition_tasks(&r, 5);
        assert_eq!(wide.len(), 5);
        assert!(wide[3].is_empty() && wide[4].is_empty());
        assert_eq!(owner(&r, 0, 2), 1);
    }

    #[test]
    fn schedules() {
        assert_eq!(sync_schedule(8, 1, 8), vec![8]);
        assert_eq!(sync_schedule(100, 3, 8), vec![2, 16, 82]);
        assert_eq!(sync_schedule(3, 2, 8), vec![1, 2]);
        assert_eq!(sync_schedule(2, 4, 8), vec![1, 1]);
        assert_eq!(sync_schedule(0, 3, 8), Vec::<usize>::new());
    }

    #[test]
    fn default_sync_counts() {
        assert_eq!(default_syncs(1), 1);
        assert_eq!(default_syncs(8), 1);
        assert_eq!(default_syncs(9), 2);
        assert_eq!(default_syncs(64), 2);
        assert_eq!(default_syncs(65), 3);
    }
}
