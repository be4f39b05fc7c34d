use hublab_cluster::{PartitionedLabeling, TrafficSummary};
use hublab_core::rank::rank_by_degree;
use hublab_core::smp::seq_pll;
use hublab_core::{oracle, synthetic, Labeling, Ranking};
use hublab_query::qdol::memory;
use hublab_query::{qdol, qfdl, qlsn, Answer, QdolStore, QueryBatch};
use proptest::prelude::*;

fn labeled(seed: u64, directed: bool) -> (Labeling, Ranking) {
    let g = synthetic::gnm(64, 180, directed, 10, seed);
    let r = rank_by_degree(&g);
    (seq_pll(&g, &r), r)
}

#[test]
fn modes_agree_on_random_batches() {
    for seed in 0..4 {
        let (lab, r) = labeled(seed, seed % 2 == 1);
        let batch = QueryBatch::random(lab.n(), 10_000, seed);
        let expected = qlsn(&batch, &lab, &r);
        for q in [1, 2, 3, 4, 5, 6, 10] {
            let shards = PartitionedLabeling::split(&lab, &r, q);
            assert_eq!(qfdl(&batch, &shards, &r, seed).answers, expected, "qfdl q={q}");
            let store = QdolStore::build(&lab, q);
            assert_eq!(qdol(&batch, &store, &r, seed).answers, expected, "qdol q={q}");
        }
    }
}

#[test]
fn qlsn_matches_oracle() {
    let g = synthetic::gnm(40, 90, false, 10, 2);
    let r = rank_by_degree(&g);
    let lab = seq_pll(&g, &r);
    let ap = oracle::AllPairs::new(&g);
    let pairs: Vec<_> = oracle::all_pairs_iter(40).collect();
    let answers = qlsn(&QueryBatch::new(pairs.clone()), &lab, &r);
    for ((u, v), a) in pairs.into_iter().zip(answers) {
        assert_eq!(a, Answer::from_dist(ap.get(u, v)));
    }
}

#[test]
fn out_of_range_ids_are_per_query_errors() {
    let (lab, r) = labeled(1, false);
    let batch = QueryBatch::new(vec![(0, 1), (64, 0), (3, 99), (2, 2)]);
    let expected = qlsn(&batch, &lab, &r);
    assert_eq!(expected[1], Answer::OutOfRange);
    assert_eq!(expected[2], Answer::OutOfRange);
    assert_eq!(expected[3], Answer::Distance(0));
    assert_eq!(qfdl(&batch, &PartitionedLabeling::split(&lab, &r, 3), &r, 0).answers, expected);
    assert_eq!(qdol(&batch, &QdolStore::build(&lab, 3), &r, 0).answers, expected);
}

#[test]
fn qdol_memory_accounting() {
    let (lab, _) = labeled(3, false);
    for q in [1, 3, 5, 6, 10] {
        let store = QdolStore::build(&lab, q);
        let mem = memory(&lab, &store);
        assert_eq!(mem.sum, mem.expected_sum, "q={q}");
        let z = store.layout.zeta;
        assert!(mem.per_node[z * (z - 1) / 2..].iter().all(|&c| c == 0));
        // each used node holds two of the ζ parts
        let mean_balanced = 2.0 * lab.total_labels() as f64 / z as f64;
        assert!((mem.mean_used - mean_balanced).abs() < 1e-9 * mean_balanced.max(1.0), "q={q}");
    }
}

#[test]
fn qlsn_has_no_traffic_and_qdol_uses_point_to_point() {
    let (lab, r) = labeled(0, false);
    let batch = QueryBatch::random(lab.n(), 500, 9);
    let out = qdol(&batch, &QdolStore::build(&lab, 6), &r, 0);
    let t = TrafficSummary::of(&out.traffic);
    assert_eq!(t.broadcast, 0);
    assert!(t.point_to_point > 0);
    let f = TrafficSummary::of(&qfdl(&batch, &PartitionedLabeling::split(&lab, &r, 4), &r, 0).traffic);
    assert_eq!(f.broadcast, 4 + 8 * 500 + 3 * 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn modes_agree_on_small_graphs(n in 2usize..30, m in 0usize..60, directed: bool, seed: u64, q in 1usize..8) {
        let g = synthetic::gnm(n, m, directed, 10, seed);
        let r = rank_by_degree(&g);
        let lab = oracle::chl_oracle(&g, &r);
        let batch = QueryBatch::random(n, 200, seed);
        let expected = qlsn(&batch, &lab, &r);
        prop_assert_eq!(&qfdl(&batch, &PartitionedLabeling::split(&lab, &r, q), &r, seed).answers, &expected);
        prop_assert_eq!(&qdol(&batch, &QdolStore::build(&lab, q), &r, seed).answers, &expected);
    }
}
