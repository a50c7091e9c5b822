use matint::audit::{find_chord, is_walk, Adjacency};
use matint::hidden::{generate_hidden, reference_reachability, HiddenGraph, HiddenKind};
use matint::neighborhood::{NeighborhoodOracle, Vertex};
use matint::reachability::{
    augmentation, reverse_bfs, AuditOptions, CategorizerConfig, Label, Mode, PhaseState,
};
use matint::rng::seeded;

fn kinds(n: usize) -> Vec<HiddenKind> {
    vec![
        HiddenKind::RandomGnp { p: 0.1 },
        HiddenKind::RandomGnp { p: 0.4 },
        HiddenKind::LayeredPath { depth: 4 },
        HiddenKind::LayeredPath {
            depth: HiddenKind::max_depth(n),
        },
        HiddenKind::AdversarialLongPath,
        HiddenKind::NoStPath,
    ]
}

#[test]
fn augmentation_agrees_with_plain_bfs() {
    for n in [4, 9, 20, 33] {
        for kind in kinds(n) {
            for seed in 0..12 {
                let g = generate_hidden(kind, n, seed).unwrap();
                let (reachable, _) = reference_reachability(&g);
                let adj = Adjacency::enumerate(&g);
                for mode in [Mode::Randomized, Mode::Deterministic] {
                    for h in [1, 2, 4] {
                        let cfg = CategorizerConfig::new(mode, h, n, seed);
                        let out = augmentation(&g, &cfg, AuditOptions::all()).unwrap();
                        let tag = format!("{kind:?} n={n} seed={seed} {mode} h={h}");
                        assert_eq!(out.path.is_some(), reachable, "{tag}");
                        if let Some(p) = out.path {
                            let v = &p.vertices;
                            assert_eq!(v.first(), Some(&Vertex::Source), "{tag}");
                            assert_eq!(v.last(), Some(&Vertex::Sink), "{tag}");
                            assert!(is_walk(&adj, v), "{tag}: {v:?}");
                            assert_eq!(find_chord(&adj, v), None, "{tag}: {v:?}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn layered_path_depth_is_recovered() {
    for depth in [2, 6, 10, 20] {
        let g = generate_hidden(HiddenKind::LayeredPath { depth }, 20, 3).unwrap();
        assert_eq!(reference_reachability(&g), (true, Some(depth)));
        let cfg = CategorizerConfig::new(Mode::Deterministic, 2, 20, 0);
        let p = augmentation(&g, &cfg, AuditOptions::all())
            .unwrap()
            .path
            .unwrap();
        // A chordless path can be no shorter than the distance.
        assert!(p.len() >= depth, "{depth}: {:?}", p.vertices);
    }
}

/// First-phase reverse search against BFS from `s` to the heavy set.
#[test]
fn reverse_search_finds_a_shortest_route_to_heavy() {
    let mut compared = 0;
    for n in [8, 16, 30] {
        for kind in kinds(n) {
            for seed in 0..10 {
                let g = generate_hidden(kind, n, seed).unwrap();
                let adj = Adjacency::enumerate(&g);
                for h in [1, 2, 3] {
                    let cfg = CategorizerConfig::new(Mode::Deterministic, h, n, seed);
                    let mut state = PhaseState::new(&g, h);
                    state.categorize(&g, &cfg, &mut seeded(seed)).unwrap();
                    let heavy = |v: Vertex| match v {
                        Vertex::Elem(e) => !g.in_base(e) && state.label(e) == Label::Heavy,
                        _ => false,
                    };
                    let expected = adj.bfs_path(&[Vertex::Source], heavy);
                    let found = reverse_bfs(&g, &state).unwrap();
                    let tag = format!("{kind:?} n={n} seed={seed} h={h}");
                    match (expected, found.path) {
                        (None, None) => {}
                        (Some(want), Some(got)) => {
                            assert_eq!(got.len(), want.len(), "{tag}");
                            assert_eq!(got[0], Vertex::Source, "{tag}");
                            assert!(heavy(*got.last().unwrap()), "{tag}");
                            assert!(is_walk(&adj, &got), "{tag}: {got:?}");
                            compared += 1;
                        }
                        (want, got) => panic!("{tag}: expected {want:?}, got {got:?}"),
                    }
                }
            }
        }
    }
    assert!(compared > 100, "{compared}");
}

#[test]
fn set_queries_on_a_small_graph() {
    // s → 0 → 1 → 2 → t with left side {1}, plus 3 → 1 and 1 → 3.
    let mut g = HiddenGraph::new(4, &[1]).unwrap();
    g.add_edge(Vertex::Source, Vertex::Elem(0)).unwrap();
    g.add_edge(Vertex::Elem(0), Vertex::Elem(1)).unwrap();
    g.add_edge(Vertex::Elem(1), Vertex::Elem(2)).unwrap();
    g.add_edge(Vertex::Elem(2), Vertex::Sink).unwrap();
    g.add_edge(Vertex::Elem(1), Vertex::Elem(3)).unwrap();
    g.add_edge(Vertex::Elem(3), Vertex::Elem(1)).unwrap();
    let st = matint::ledger::Stage::Other;

    assert!(g.exists_in_edge(0, &[], true, st).unwrap());
    assert!(!g.exists_in_edge(0, &[1], false, st).unwrap());
    assert!(g.exists_in_edge(2, &[1], false, st).unwrap());
    assert!(!g.exists_in_edge(2, &[], true, st).unwrap());
    assert!(g.exists_out_edge(2, &[], true, st).unwrap());
    assert!(g.exists_out_edge(3, &[1], false, st).unwrap());
    assert!(!g.exists_out_edge(3, &[], true, st).unwrap());
    assert_eq!(g.probes(), 7);

    assert_eq!(reference_reachability(&g), (true, Some(4)));
    let loaded = HiddenGraph::load(&g.dump()).unwrap();
    assert_eq!(loaded.edges(), g.edges());
}
