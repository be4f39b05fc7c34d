use hublab_core::oracle::{all_pairs_iter, check_cover, check_no_redundant, check_order, check_respects, dijkstra_oracle, AllPairs};
use hublab_core::seed::{self, Stream};
use hublab_core::{Graph, HubLabel, Labeling, Ranking, Side, Vertex, INF};
use rand::Rng;

use crate::args::VerifyArgs;
use crate::error::{CliError, Result};
use crate::inputs::{load_graph, rank};
use crate::store::{self, stored_ranking};

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub failure: Option<String>,
}

impl Check {
    fn new(name: &'static str, failure: Option<String>) -> Self {
        Check { name, failure }
    }

    pub fn line(&self) -> String {
        match &self.failure {
            None => format!("{} PASS", self.name),
            Some(why) => format!("{} FAIL {why}", self.name),
        }
    }
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Out => "out",
        Side::In => "in",
    }
}

fn show(side: Side, v: Vertex, l: HubLabel, directed: bool) -> String {
    if directed {
        format!("label (hub {}, dist {}) in L_{}({v})", l.hub, l.dist, side_name(side))
    } else {
        format!("label (hub {}, dist {}) in L({v})", l.hub, l.dist)
    }
}

fn dist(d: u64) -> String {
    if d == INF {
        "INF".into()
    } else {
        d.to_string()
    }
}

/// Sampled cover and respects checks for graphs too large for all pairs.
fn sampled(g: &Graph, lab: &Labeling, r: &Ranking, pairs: usize, seed: u64) -> (Option<String>, Option<String>) {
    let n = g.n();
    let mut rng = seed::rng(seed, Stream::Queries);
    let has = |side: Side, v: Vertex, l: HubLabel| l.hub == v && l.dist == 0 || lab.labels(side, v).contains(&l);
    let (mut cover, mut respects) = (None, None);
    for _ in 0..pairs {
        let (u, v) = (rng.gen_range(0..n) as Vertex, rng.gen_range(0..n) as Vertex);
        let from_u = dijkstra_oracle(g, u, false);
        let to_v = dijkstra_oracle(g, v, true);
        let exact = from_u[v as usize];
        let labeled = lab.distance(u, v, r);
        if cover.is_none() && labeled != exact {
            cover = Some(format!("pair ({u}, {v}): labels give {}, exact {}", dist(labeled), dist(exact)));
        }
        if respects.is_none() && exact != INF {
            let h = (0..n as Vertex)
                .filter(|&h| from_u[h as usize] != INF && to_v[h as usize] != INF && from_u[h as usize] + to_v[h as usize] == exact)
                .max_by_key(|&h| r.rank(h))
                .expect("a shortest path has a vertex");
            if !has(Side::Out, u, HubLabel::new(h, from_u[h as usize])) || !has(Side::In, v, HubLabel::new(h, to_v[h as usize])) {
                respects = Some(format!("pair ({u}, {v}): highest hub {h} missing"));
            }
        }
        if cover.is_some() && respects.is_some() {
            break;
        }
    }
    (cover, respects)
}

pub fn run_checks(g: &Graph, lab: &Labeling, r: &Ranking, limit: usize, pairs: usize, seed: u64) -> Vec<Check> {
    let directed = lab.is_directed();
    if lab.n() != g.n() || directed != g.is_directed() || r.n() != g.n() {
        let why = format!(
            "graph has n={} directed={}, labeling n={} directed={}, ranking n={}",
            g.n(),
            g.is_directed(),
            lab.n(),
            directed,
            r.n()
        );
        return vec![Check::new("shape", Some(why))];
    }
    let order = check_order(lab, r).err().map(|e| format!("{} is out of rank order", show(e.side, e.v, e.label, directed)));
    let (cover, respects) = if g.n() <= limit {
        let ap = AllPairs::new(g);
        let cover = check_cover(lab, r, &ap, all_pairs_iter(g.n()))
            .err()
            .map(|e| format!("pair ({}, {}): labels give {}, exact {}", e.u, e.v, dist(e.labeled), dist(e.exact)));
        let respects =
            check_respects(lab, r, &ap).err().map(|e| format!("pair ({}, {}): highest hub {} missing", e.u, e.v, e.hub));
        (cover, respects)
    } else {
        sampled(g, lab, r, pairs, seed)
    };
    let minimal = check_no_redundant(lab, r).err().map(|e| format!("{} is redundant", show(e.side, e.v, e.label, directed)));
    vec![
        Check::new("order", order),
        Check::new("cover", cover),
        Check::new("respects", respects),
        Check::new("minimality", minimal),
    ]
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let r = match stored_ranking(&args.labels)? {
        Some(r) => r,
        None => rank(&g, &args.graph),
    };
    let stored = store::load(&args.labels)?;
    if let store::Stored::Shards(p) = &stored {
        if p.n() != r.n() {
            return Err(CliError::io(format!("shards have {} vertices but the ranking has {}", p.n(), r.n())));
        }
    }
    let lab = stored.into_labeling(&r);
    let checks = run_checks(&g, &lab, &r, args.limit, args.pairs, args.graph.seed);
    for c in &checks {
        println!("{}", c.line());
    }
    let failed: Vec<&str> = checks.iter().filter(|c| c.failure.is_some()).map(|c| c.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verify(failed.join(", ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hublab_core::{oracle, synthetic};

    fn names(checks: &[Check]) -> Vec<(&'static str, bool)> {
        checks.iter().map(|c| (c.name, c.failure.is_none())).collect()
    }

    #[test]
    fn chl_passes() {
        let (g, r) = (synthetic::diamond(), synthetic::diamond_ranking());
        let lab = oracle::chl_oracle(&g, &r);
        let c = run_checks(&g, &lab, &r, 512, 0, 0);
        assert!(c.iter().all(|c| c.failure.is_none()), "{c:?}");
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn injected_label_fails_minimality() {
        let (g, r) = (synthetic::p3(), synthetic::p3_ranking());
        let mut lab = oracle::chl_oracle(&g, &r);
        lab.push(Side::Out, 2, HubLabel::new(0, 2));
        let c = run_checks(&g, &lab, &r, 512, 0, 0);
        assert_eq!(names(&c), vec![("order", true), ("cover", true), ("respects", true), ("minimality", false)]);
        assert_eq!(c[3].line(), "minimality FAIL label (hub 0, dist 2) in L(2) is redundant");
    }

    #[test]
    fn deleted_label_fails_cover() {
        let (g, r) = (synthetic::p3(), synthetic::p3_ranking());
        let mut lab = oracle::chl_oracle(&g, &r);
        lab.labels_mut(Side::Out, 0).clear();
        let c = run_checks(&g, &lab, &r, 512, 0, 0);
        assert_eq!(c[1].line(), "cover FAIL pair (0, 1): labels give INF, exact 1");
        assert!(c[2].failure.is_some());
    }

    #[test]
    fn sampled_path_agrees() {
        let g = synthetic::gnm(40, 120, false, 9, 3);
        let r = hublab_core::rank::rank_by_degree(&g);
        let mut lab = oracle::chl_oracle(&g, &r);
        assert!(run_checks(&g, &lab, &r, 10, 300, 1).iter().all(|c| c.failure.is_none()));
        for v in 0..40 {
            lab.labels_mut(Side::Out, v).clear();
        }
        let c = run_checks(&g, &lab, &r, 10, 300, 1);
        assert!(c[1].failure.is_some() && c[2].failure.is_some());
    }
}
