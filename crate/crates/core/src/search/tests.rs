use super::*;
use crate::expand::expand;
use crate::network::{Node, WeightMode};
use crate::oracle::{brute_force_cdc_path, brute_force_matching, random_instance, InstanceParams};

fn relay() -> Network {
    let nodes = vec![
        Node::new(0, 0.0, 0.0, [1]),
        Node::new(1, 1.0, 0.0, [1, 2, 3]),
        Node::new(2, 2.0, 0.0, [3]),
    ];
    Network::with_links(4, nodes, &[(0, 1), (1, 2)], WeightMode::Unit).unwrap()
}

/// Minimum over every eligible pair, found by scanning all edges.
fn exhaustive_min(state: &SearchState<'_>) -> Option<(HalfUnits, SubId, SubId)> {
    let g = state.graph();
    let mut best: Option<(HalfUnits, SubId, SubId)> = None;
    for e in g.edges() {
        for (u, v) in [(e.u, e.v), (e.v, e.u)] {
            if state.label(u) != Label::S || state.is_examined(u, v) {
                continue;
            }
            let du = state.d_s(u).unwrap();
            let val = match state.label(v) {
                Label::F => 2 * (du + e.weight),
                Label::S if state.base_of(u) != state.base_of(v) => {
                    du + state.d_s(v).unwrap() + e.weight
                }
                _ => continue,
            };
            let cand = (HalfUnits(val), u.min(v), u.max(v));
            if best.is_none_or(|b| cand < b) {
                best = Some(cand);
            }
        }
    }
    best
}

#[test]
fn relay_instance_routes_through_relay() {
    let net = relay();
    let out = shortest_cdc(&net, 0, 2, SearchOptions::default()).unwrap();
    let path = out.path.unwrap();
    assert_eq!(path.nodes(), vec![0, 1, 2]);
    assert_eq!(path.channels(), vec![1, 3]);
    assert_eq!(path.total_weight, 2);
    assert_eq!(out.blossoms, 1);
}

#[test]
fn blocked_chain_has_no_path() {
    let nodes = vec![
        Node::new(0, 0.0, 0.0, [1]),
        Node::new(1, 1.0, 0.0, [1]),
        Node::new(2, 2.0, 0.0, [1]),
    ];
    let net = Network::with_links(2, nodes, &[(0, 1), (1, 2)], WeightMode::Unit).unwrap();
    let out = shortest_cdc(&net, 0, 2, SearchOptions::default()).unwrap();
    assert_eq!(out.path, None);
    assert!(out.expanded_path.is_empty());
}

#[test]
fn same_endpoints_give_empty_path() {
    let out = shortest_cdc(&relay(), 1, 1, SearchOptions::default()).unwrap();
    assert_eq!(out.path, Some(CdcPath::empty()));
    assert!(shortest_cdc(&relay(), 5, 5, SearchOptions::default()).is_err());
}

#[test]
fn first_findmin_takes_cheapest_source_edge() {
    let nodes = vec![Node::new(0, 0.0, 0.0, [0]), Node::new(1, 0.0, 5.0, [0, 1]), Node::new(2, 0.0, 20.0, [1])];
    let net = Network::with_links(2, nodes, &[(0, 1), (1, 2)], WeightMode::Euclidean).unwrap();
    let (g, m) = expand(&net, 0, 2, false).unwrap();
    let mut state = SearchState::new(&g, &m);
    let v = g.port(1, 0).unwrap();
    assert_eq!(
        state.findmin(),
        FindMin::Candidate {
            u: g.source(),
            v,
            minval: HalfUnits::from_whole(5_000_000),
            kind: CandidateKind::ToF,
        }
    );
}

#[test]
fn candidate_formula() {
    assert_eq!(candidate_value(3, Some(5), 4), HalfUnits::from_whole(6));
    assert_eq!(candidate_value(0, None, 5), HalfUnits::from_whole(5));
    assert_eq!(candidate_value(1, Some(0), 0), HalfUnits(1));
}

#[test]
fn grow_assigns_distances_and_parents() {
    let net = relay();
    let (g, m) = expand(&net, 0, 2, false).unwrap();
    let mut state = SearchState::new(&g, &m);
    let x1 = g.port(1, 1).unwrap();
    let x1p = m.mate(x1).unwrap();
    state.grow(g.source(), x1);
    assert_eq!(state.d_t(x1), Some(1));
    assert_eq!(state.d_s(x1p), Some(1));
    assert_eq!(state.p_s(x1p), Some(x1));
    assert_eq!(state.p_t(x1), Some(g.source()));
    assert_eq!(state.label(x1), Label::T);
    assert_eq!(state.label(x1p), Label::S);
    assert!(dual_certificate(&state).is_valid());

    // A zero-weight internal edge leaves the distance unchanged.
    let FindMin::Candidate { u, v, minval, .. } = state.findmin() else {
        panic!("expected a candidate");
    };
    assert_eq!(u, x1p);
    assert_eq!(minval, HalfUnits::from_whole(1));
    state.grow(u, v);
    assert_eq!(state.d_t(v), Some(1));
}

#[test]
fn gadget_triangle_blossom() {
    let net = relay();
    let (g, m) = expand(&net, 0, 2, false).unwrap();
    let mut state = SearchState::new(&g, &m);
    assert_eq!(state.step(), StepOutcome::Grew);
    assert_eq!(state.step(), StepOutcome::Grew);
    let StepOutcome::Blossomed(id) = state.step() else {
        panic!("expected the gadget triangle to close");
    };
    let b = state.blossoms()[id].clone();
    assert_eq!(b.members.len(), 3);
    for &w in &b.members {
        assert_eq!(state.base_of(w), b.base);
        assert_eq!(state.d_s(w), Some(1));
        assert_eq!(state.d_t(w), Some(1));
    }
    assert_eq!(b.base, g.port(1, 1).unwrap() + 1);
    assert!(dual_certificate(&state).is_valid());
}

#[test]
fn initial_certificate_is_trivial() {
    let net = relay();
    let (g, m) = expand(&net, 0, 2, false).unwrap();
    let state = SearchState::new(&g, &m);
    let cert = dual_certificate(&state);
    assert_eq!(cert.y[g.source()], 0);
    assert!(cert.is_valid());
}

#[test]
fn no_blossom_trace_back_is_parent_chain() {
    let nodes = vec![Node::new(0, 0.0, 0.0, [0]), Node::new(1, 1.0, 0.0, [0])];
    let net = Network::with_links(1, nodes, &[(0, 1)], WeightMode::Unit).unwrap();
    let out = shortest_cdc(&net, 0, 1, SearchOptions::default()).unwrap();
    assert_eq!(out.expanded_path, vec![0, 1]);
    assert_eq!(out.blossoms, 0);
    assert_eq!(out.trace.len(), 1);
    assert_eq!(out.trace.entries[0].phase, Phase::Reach);
}

/// Odd ring s - a - b - c - d - s where the direct link is expensive.
fn pentagon() -> Network {
    let nodes = vec![
        Node::new(0, 0.0, 0.0, [0, 1]),
        Node::new(1, 1.0, 1.0, [0, 1]),
        Node::new(2, 2.0, 1.5, [1, 2]),
        Node::new(3, 3.0, 1.0, [0, 2]),
        Node::new(4, 4.0, 0.0, [0]),
    ];
    Network::with_links(3, nodes, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)], WeightMode::Euclidean)
        .unwrap()
}

#[test]
fn pentagon_matches_oracles() {
    let net = pentagon();
    let (g, m) = expand(&net, 0, 4, false).unwrap();
    let out = run_search(&net, &g, &m, true);
    let w = out.weight().unwrap();
    assert_eq!(Some(w), brute_force_matching(&g).unwrap());
    assert_eq!(Some(w), brute_force_cdc_path(&net, 0, 4).unwrap());
    assert!(out.blossoms >= 1);
    assert_eq!(out.max_violation, Some(0));
    // Re-sum the weights along the expanded path.
    let resum: Weight = out
        .expanded_path
        .windows(2)
        .map(|p| g.edge(g.edge_between(p[0], p[1]).unwrap()).weight)
        .sum();
    assert_eq!(resum, w);
}

fn check_run(net: &Network, s: NodeId, d: NodeId, reduced: bool) -> SearchOutcome {
    let (g, m) = expand(net, s, d, reduced).unwrap();
    let mut state = SearchState::new(&g, &m);
    let mut last = HalfUnits(0);
    loop {
        let expected = exhaustive_min(&state);
        let found = match state.findmin() {
            FindMin::Candidate { u, v, minval, .. } => Some((minval, u.min(v), u.max(v))),
            FindMin::Exhausted => None,
        };
        assert_eq!(found, expected);
        let outcome = state.step();
        assert!(state.dual_time() >= last);
        last = state.dual_time();
        let cert = dual_certificate(&state);
        assert_eq!(cert.max_violation, 0, "{cert:?}");
        for b in state.blossoms() {
            assert_eq!(b.members.len() % 2, 1);
        }
        // Outer, unblossomed inner vertices have their mate outer at equal distance.
        for v in 0..g.len() {
            if state.label(v) == Label::T && v != g.dest() {
                let mate = m.mate(v).unwrap();
                assert_eq!(state.d_s(mate), state.d_t(v));
            }
        }
        if matches!(outcome, StepOutcome::Reached | StepOutcome::Exhausted) {
            break;
        }
    }
    if state.is_reached() {
        let path = state.extract_path().unwrap();
        for (i, p) in path.windows(2).enumerate() {
            assert_eq!(m.is_matched(p[0], p[1]), i % 2 == 1);
        }
    }
    run_search(net, &g, &m, false)
}

#[test]
fn random_small_instances_agree_with_oracles() {
    let params = InstanceParams::matching_sized();
    for seed in 0..150 {
        let (net, s, d) = random_instance(&params, seed);
        let out = check_run(&net, s, d, false);
        let (g, _) = expand(&net, s, d, false).unwrap();
        assert_eq!(out.weight(), brute_force_matching(&g).unwrap(), "seed {seed}");
        assert_eq!(out.weight(), brute_force_cdc_path(&net, s, d).unwrap(), "seed {seed}");
        if let Some(p) = &out.path {
            p.validate(&net).unwrap();
            assert!(p.connects(s, d));
            assert!(p.is_node_simple());
        }
    }
}

#[test]
fn euclidean_and_reduced_instances_agree_with_path_oracle() {
    let params = InstanceParams::path_sized().weight_mode(WeightMode::Euclidean);
    for seed in 0..100 {
        let (net, s, d) = random_instance(&params, 1000 + seed);
        let full = check_run(&net, s, d, false);
        let reduced = check_run(&net, s, d, true);
        let brute = brute_force_cdc_path(&net, s, d).unwrap();
        assert_eq!(full.weight(), brute, "seed {seed}");
        assert_eq!(reduced.weight(), brute, "seed {seed}");
    }
}
