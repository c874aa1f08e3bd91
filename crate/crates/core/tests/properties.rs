use graphcx::canonical::{canonicalize, canonicalize_exhaustive};
use graphcx::corpus::{enumerate_graphs, Filter};
use graphcx::text::parse_literal;
use graphcx::{alpha, AlphaInput, Canonical, HalfEdge, OrientedGraph, SignedGraph};
use proptest::prelude::*;

/// Random loop-free graph; vertices left below valency three are topped up
/// with edges to their successor.
fn graph() -> impl Strategy<Value = OrientedGraph> {
    (2u32..=6)
        .prop_flat_map(|v| (Just(v), prop::collection::vec((1..=v, 1..v), 0..=12)))
        .prop_map(|(v, raw)| {
            let mut edges: Vec<(u32, u32)> = raw
                .into_iter()
                .map(|(s, offset)| (s, (s - 1 + offset) % v + 1))
                .collect();
            let mut valency = vec![0; v as usize];
            for &(s, t) in &edges {
                valency[s as usize - 1] += 1;
                valency[t as usize - 1] += 1;
            }
            for x in 1..=v {
                while valency[x as usize - 1] < 3 {
                    let y = x % v + 1;
                    edges.push((x, y));
                    valency[x as usize - 1] += 1;
                    valency[y as usize - 1] += 1;
                }
            }
            OrientedGraph::new(v, edges).unwrap()
        })
}

fn permutation(n: u32) -> impl Strategy<Value = Vec<u32>> {
    Just((1..=n).collect::<Vec<u32>>()).prop_shuffle()
}

fn class(g: &SignedGraph) -> Canonical {
    match g {
        SignedGraph::Zero => Canonical::Zero,
        SignedGraph::Signed(s, g) => canonicalize(g).times(*s),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn search_agrees_with_exhaustive(g in graph()) {
        prop_assert_eq!(canonicalize(&g), canonicalize_exhaustive(&g));
    }

    #[test]
    fn relabeling_and_reversal_are_equivariant(
        (g, perm, flips) in graph().prop_flat_map(|g| {
            let n = g.vertex_count();
            let e = g.edge_count();
            (Just(g), permutation(n), prop::collection::vec(any::<bool>(), e))
        })
    ) {
        let mut h = g.relabel(&perm).unwrap();
        for (edge, flip) in flips.into_iter().enumerate() {
            if flip {
                let SignedGraph::Signed(s, inner) = h else { unreachable!() };
                h = inner.reverse_edge(edge).unwrap().times(s);
            }
        }
        prop_assert_eq!(class(&h), canonicalize(&g));
    }

    #[test]
    fn surgery_is_symmetric_under_swap_and_bar(
        (g, a, b) in graph().prop_flat_map(|g| {
            let halves = 2 * g.edge_count();
            (Just(g), 0..halves, 0..halves)
        })
    ) {
        let (h1, h2) = (HalfEdge::from_index(a), HalfEdge::from_index(b));
        prop_assume!(h1.edge != h2.edge);
        let surgery = |x: HalfEdge, y: HalfEdge| match g.surgery(x, y).unwrap() {
            None => Canonical::Zero,
            Some(d) => class(&d.signed()),
        };
        prop_assert_eq!(surgery(h1, h2), surgery(h2.bar(), h1.bar()));
    }

    #[test]
    fn literal_round_trip(g in graph()) {
        prop_assert_eq!(parse_literal(&g.to_literal()).unwrap(), g);
    }

    #[test]
    fn bracket_commutes_up_to_vertex_sign(x in graph(), y in graph()) {
        let sign = if x.vertex_count() * y.vertex_count() % 2 == 1 { -1 } else { 1 };
        let xy = alpha(1, 2, &AlphaInput::new(vec![x.clone(), y.clone()])).unwrap();
        let yx = alpha(1, 2, &AlphaInput::new(vec![y, x])).unwrap();
        prop_assert!(yx.add(&xy.scale(-sign)).unwrap().is_zero());
    }
}

#[test]
fn bases_are_canonical_and_filters_nest() {
    for (v, e) in [(3, 6), (4, 6), (4, 8), (5, 9)] {
        let all = enumerate_graphs(v, e, Filter::ALL);
        let connected = enumerate_graphs(v, e, Filter { connected: true, one_pi: false });
        let one_pi = enumerate_graphs(v, e, Filter { connected: true, one_pi: true });
        for key in &all.keys {
            assert_eq!(canonicalize(&key.to_graph()), Canonical::Class(graphcx::Sign::Pos, key.clone()));
        }
        assert!(one_pi.keys.iter().all(|k| connected.keys.contains(k)));
        assert!(connected.keys.iter().all(|k| all.keys.contains(k)));
    }
}
