//! Randomised invariants over the fixture corpus and small enumerated graphs.

use std::sync::OnceLock;

use num_rational::BigRational;
use proptest::prelude::*;
use strandhopf::graph_core::TwoGraph;
use strandhopf::hopf::{self, AlgebraElement, Laurent, PolePart};
use strandhopf::models::{self, Theory};
use strandhopf::{cli_io, fixtures, iso, series};

fn corpus() -> &'static [(&'static str, TwoGraph)] {
    static C: OnceLock<Vec<(&'static str, TwoGraph)>> = OnceLock::new();
    C.get_or_init(fixtures::corpus)
}

/// Small graphs for algebra elements: gw4 and quartic3 classes with at most two edges.
fn pool() -> &'static [TwoGraph] {
    static P: OnceLock<Vec<TwoGraph>> = OnceLock::new();
    P.get_or_init(|| {
        let mut v: Vec<TwoGraph> =
            series::enumerate(&Theory::gw4(), 2, true, None).into_iter().map(|c| c.graph).collect();
        v.extend(series::enumerate(&Theory::quartic3(), 1, true, None).into_iter().map(|c| c.graph));
        v
    })
}

fn perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

/// A corpus graph with a random relabelling of vertices, half-edges and strands.
fn relabelled_fixture() -> impl Strategy<Value = (usize, TwoGraph)> {
    (0..corpus().len()).prop_flat_map(|i| {
        let g = &corpus()[i].1;
        (Just(i), perm(g.num_vertices()), perm(g.num_half_edges()), perm(g.num_strands()))
            .prop_map(|(i, pv, ph, ps)| (i, corpus()[i].1.permuted(&pv, &ph, &ps)))
    })
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn element() -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec((0..pool().len(), rational(), any::<bool>()), 0..3).prop_map(|terms| {
        let mut x = AlgebraElement::zero();
        for (i, q, with_one) in terms {
            let g = AlgebraElement::from_graph(&pool()[i]);
            let t = if with_one { g.add(&AlgebraElement::one()) } else { g };
            x = x.add(&t.scale(&q));
        }
        x
    })
}

fn laurent() -> impl Strategy<Value = Laurent> {
    prop::collection::vec((-4i32..=3, rational()), 0..5).prop_map(|t| Laurent::from_terms(&t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_code_is_relabelling_invariant((i, h) in relabelled_fixture()) {
        let g = &corpus()[i].1;
        let (c, a) = iso::canonical_form_with_aut(g);
        let (ch, ah) = iso::canonical_form_with_aut(&h);
        prop_assert_eq!(c, ch);
        prop_assert_eq!(a, ah);
        prop_assert!(iso::are_isomorphic(g, &h));
    }

    #[test]
    fn relabelled_graphs_round_trip((_, h) in relabelled_fixture()) {
        let text = cli_io::graph_to_json(&h);
        let back = cli_io::parse_graph(&text).unwrap();
        prop_assert_eq!(cli_io::graph_to_json(&back), text);
        prop_assert_eq!(back, h);
    }

    #[test]
    fn topology_is_relabelling_invariant((i, h) in relabelled_fixture()) {
        let g = &corpus()[i].1;
        prop_assert_eq!(g.euler_characteristic(), h.euler_characteristic());
        prop_assert_eq!(g.num_internal_faces(), h.num_internal_faces());
        prop_assert!(iso::are_isomorphic_one(&g.boundary(), &h.boundary()));
    }

    #[test]
    fn contraction_preserves_boundary(i in 0..corpus().len(), mask in any::<u64>()) {
        let g = &corpus()[i].1;
        let e = g.num_edges();
        let keep: Vec<bool> = (0..e).map(|k| mask >> (k % 64) & 1 == 1).collect();
        let q = g.contract_edge_mask(&keep);
        prop_assert_eq!(q.num_edges(), e - keep.iter().filter(|&&b| b).count());
        prop_assert!(iso::are_isomorphic_one(&q.boundary(), &g.boundary()));
        prop_assert!(iso::are_isomorphic(&q.residue(), &g.residue()));
    }

    #[test]
    fn product_is_associative_and_commutative(x in element(), y in element(), z in element()) {
        prop_assert_eq!(x.product(&y).product(&z), x.product(&y.product(&z)));
        prop_assert_eq!(x.product(&y), y.product(&x));
    }

    #[test]
    fn coproduct_and_counit_are_multiplicative(x in element(), y in element()) {
        let xy = x.product(&y);
        prop_assert_eq!(hopf::coproduct(&xy), hopf::coproduct(&x).product(&hopf::coproduct(&y)));
        prop_assert_eq!(hopf::counit(&xy), hopf::counit(&x) * hopf::counit(&y));
        prop_assert_eq!(hopf::antipode(&xy), hopf::antipode(&x).product(&hopf::antipode(&y)));
    }

    #[test]
    fn antipode_inverts_identity(x in element()) {
        let (l, r) = hopf::antipode_sides(&x);
        let ue = hopf::unit_counit(&x);
        prop_assert_eq!(&l, &ue);
        prop_assert_eq!(&r, &ue);
    }

    #[test]
    fn pole_part_is_rota_baxter(x in laurent(), y in laurent()) {
        prop_assert!(hopf::rota_baxter_holds(&PolePart, &x, &y));
        prop_assert_eq!(x.pole_part().pole_part(), x.pole_part());
    }

    #[test]
    fn gurau_degree_bounds_boundary_degree(i in 0..pool().len()) {
        let g = &pool()[i];
        if g.coloured_rank().is_some() {
            prop_assert!(models::gurau_degree_pinched(g).unwrap() >= models::boundary_gurau_degree(g).unwrap());
        }
    }
}
