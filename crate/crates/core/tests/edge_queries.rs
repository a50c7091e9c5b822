mod common;

use matint::exchange::ExchangeGraph;
use matint::ledger::Stage;
use matint::neighborhood::{
    in_edge, out_edge, search_budget, EdgeAudit, NeighborhoodOracle, Vertex,
};
use matint::ElementId;
use rand::seq::SliceRandom;
use rand::Rng;

use common::{random_common_set, rng, small_instances};

fn subsets(base: &[ElementId], rng: &mut impl Rng) -> Vec<Vec<ElementId>> {
    if base.len() <= 6 {
        return (0u32..1 << base.len())
            .map(|mask| {
                base.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect()
            })
            .collect();
    }
    (0..64)
        .map(|_| base.iter().copied().filter(|_| rng.gen_bool(0.5)).collect())
        .collect()
}

#[test]
fn set_queries_agree_with_single_edges() {
    let mut r = rng(11);
    for (name, o1, o2) in small_instances(&[6, 10, 14], 3) {
        for trial in 0..3 {
            let keep = [None, Some(2), Some(1)][trial];
            let base = random_common_set(&o1, &o2, trial as u64, keep);
            let g = ExchangeGraph::new(o1.clone(), o2.clone(), base.clone()).unwrap();
            for v in (0..g.n()).filter(|&v| !g.in_base(v)) {
                let vv = Vertex::Elem(v);
                assert_eq!(
                    g.exists_in_edge(v, &[], true, Stage::Other).unwrap(),
                    g.has_edge(Vertex::Source, vv)
                );
                assert_eq!(
                    g.exists_out_edge(v, &[], true, Stage::Other).unwrap(),
                    g.has_edge(vv, Vertex::Sink)
                );
                for xs in subsets(&base, &mut r) {
                    let truth_in = xs.iter().any(|&u| g.has_edge(Vertex::Elem(u), vv));
                    let truth_out = xs.iter().any(|&u| g.has_edge(vv, Vertex::Elem(u)));
                    let before = g.ledger().total();
                    assert_eq!(
                        g.exists_in_edge(v, &xs, false, Stage::Other).unwrap(),
                        truth_in,
                        "{name} v={v} X={xs:?}"
                    );
                    assert_eq!(
                        g.exists_out_edge(v, &xs, false, Stage::Other).unwrap(),
                        truth_out,
                        "{name} v={v} X={xs:?}"
                    );
                    assert!(g.ledger().total() - before <= 2);
                }
            }
        }
    }
}

#[test]
fn binary_searches_return_first_neighbour_in_order() {
    let mut r = rng(12);
    for (name, o1, o2) in small_instances(&[8, 12, 14], 3) {
        let base = random_common_set(&o1, &o2, 5, None);
        let g = ExchangeGraph::new(o1, o2, base.clone()).unwrap();
        for v in (0..g.n()).filter(|&v| !g.in_base(v)) {
            let vv = Vertex::Elem(v);
            for _ in 0..8 {
                // Order by random weights, ties by id.
                let weights: Vec<u32> = (0..g.n()).map(|_| r.gen_range(0..3)).collect();
                let mut xs = base.clone();
                xs.shuffle(&mut r);
                xs.sort_by_key(|&u| (weights[u], u));
                let with_end = r.gen_bool(0.5);
                let budget = search_budget(xs.len() + usize::from(with_end));

                let before = g.ledger().total();
                let got = in_edge(&g, v, &xs, with_end, Stage::Other).unwrap();
                assert!(g.ledger().total() - before <= budget, "{name}");
                let expected = if with_end && g.has_edge(Vertex::Source, vv) {
                    Some(Vertex::Source)
                } else {
                    xs.iter()
                        .copied()
                        .find(|&u| g.has_edge(Vertex::Elem(u), vv))
                        .map(Vertex::Elem)
                };
                assert_eq!(got, expected, "{name} in_edge v={v}");

                let before = g.ledger().total();
                let got = out_edge(&g, v, &xs, with_end, Stage::Other).unwrap();
                assert!(g.ledger().total() - before <= budget, "{name}");
                let expected = if with_end && g.has_edge(vv, Vertex::Sink) {
                    Some(Vertex::Sink)
                } else {
                    xs.iter()
                        .copied()
                        .find(|&u| g.has_edge(vv, Vertex::Elem(u)))
                        .map(Vertex::Elem)
                };
                assert_eq!(got, expected, "{name} out_edge v={v}");
            }
        }
    }
}

#[test]
fn singleton_and_empty_searches() {
    for (_, o1, o2) in small_instances(&[8], 2) {
        let base = random_common_set(&o1, &o2, 1, None);
        let g = ExchangeGraph::new(o1, o2, base.clone()).unwrap();
        for v in (0..g.n()).filter(|&v| !g.in_base(v)) {
            assert_eq!(in_edge(&g, v, &[], false, Stage::Other).unwrap(), None);
            for &u in &base {
                let got = in_edge(&g, v, &[u], false, Stage::Other).unwrap();
                assert_eq!(got.is_some(), g.has_edge(Vertex::Elem(u), Vertex::Elem(v)));
                if let Some(x) = got {
                    assert_eq!(x, Vertex::Elem(u));
                }
            }
        }
    }
}
