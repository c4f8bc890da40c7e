use proptest::prelude::*;

use coxeter_chein::cli::{parse_input, Input};
use coxeter_chein::cohomology::gf2::BitMatrix;
use coxeter_chein::cohomology::{build_complex, coboundary_matrix, cohomology, Graph};
use coxeter_chein::coxeter::{enumerate_group, recognize_spherical, CoxeterDiagram, GroupTable, Label};
use coxeter_chein::groups::corpus;
use coxeter_chein::loop_core::{chein_loop, is_associative, is_loop, is_moufang, verify_chein_identities, LoopTable};
use coxeter_chein::morphisms::{automorphism_group, classify_trichotomy, Morphism, Trichotomy, DEFAULT_BUDGET};
use coxeter_chein::table::Magma;

/// Relabels `g` by a permutation of `1..n` (the identity stays at 0).
fn relabel(g: &GroupTable, perm: &[usize]) -> GroupTable {
    let n = g.order();
    let p: Vec<usize> = std::iter::once(0).chain(perm.iter().copied()).collect();
    let mut rows = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            rows[p[a]][p[b]] = p[g.mul(a, b)];
        }
    }
    GroupTable::from_rows(&rows, None).unwrap()
}

fn corpus_group() -> impl Strategy<Value = (String, GroupTable, Vec<usize>)> {
    let groups = corpus();
    (0..groups.len()).prop_flat_map(move |i| {
        let (name, g) = groups[i].clone();
        let rest: Vec<usize> = (1..g.order()).collect();
        Just(rest)
            .prop_shuffle()
            .prop_map(move |perm| (name.clone(), g.clone(), perm))
    })
}

fn graph(max_vertices: usize) -> impl Strategy<Value = Graph> {
    (1..=max_vertices).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let all: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let edges: Vec<_> = all.into_iter().zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
            Graph::new(n, &edges).unwrap()
        })
    })
}

fn matrix() -> impl Strategy<Value = BitMatrix> {
    (1usize..12, 1usize..12).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(0u8..2, c), r).prop_map(|rows| BitMatrix::from_dense(&rows))
    })
}

fn label() -> impl Strategy<Value = Label> {
    prop_oneof![4 => (2u32..8).prop_map(Label::Finite), 1 => Just(Label::Infinite)]
}

fn diagram() -> impl Strategy<Value = CoxeterDiagram> {
    (1usize..6).prop_flat_map(|n| {
        proptest::collection::vec(label(), n * (n - 1) / 2).prop_map(move |labels| {
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    edges.push((i, j, labels[k]));
                    k += 1;
                }
            }
            CoxeterDiagram::from_edges(n, &edges).unwrap()
        })
    })
}

fn to_dsl(d: &CoxeterDiagram) -> String {
    let mut s = format!("coxeter v1\nrank {}\n", d.rank());
    for i in 0..d.rank() {
        for j in i + 1..d.rank() {
            match d.label(i, j) {
                Label::Finite(2) => {}
                Label::Finite(m) => s.push_str(&format!("edge {} {} {m}\n", i + 1, j + 1)),
                Label::Infinite => s.push_str(&format!("edge {} {} inf\n", i + 1, j + 1)),
            }
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chein_loop_is_moufang((name, g, perm) in corpus_group()) {
        let g = relabel(&g, &perm);
        let l = chein_loop(&g);
        prop_assert_eq!(l.order(), 2 * g.order());
        prop_assert!(is_loop(&l));
        prop_assert!(is_moufang(&l).iter().all(|r| r.holds), "{}", name);
        prop_assert!(verify_chein_identities(&l).unwrap().iter().all(|r| r.holds));
        prop_assert_eq!(is_associative(&l).holds, g.is_abelian());
    }

    #[test]
    fn automorphism_order_is_an_isomorphism_invariant((name, g, perm) in corpus_group()) {
        let h = relabel(&g, &perm);
        let a = automorphism_group(&chein_loop(&g), DEFAULT_BUDGET).unwrap();
        let b = automorphism_group(&chein_loop(&h), DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(a.order(), b.order(), "{}", name);
        prop_assert!(b.is_group());
        let case = |t: Trichotomy| match t {
            Trichotomy::Case1 => 1,
            Trichotomy::Case2 => 2,
            Trichotomy::Case3 { .. } => 3,
        };
        prop_assert_eq!(case(classify_trichotomy(&g)), case(classify_trichotomy(&h)));
    }

    #[test]
    fn automorphisms_compose_and_invert((_, g, _) in corpus_group(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let aut = automorphism_group(&g, DEFAULT_BUDGET).unwrap();
        let f = &aut.elements()[i.index(aut.order())];
        let h = &aut.elements()[j.index(aut.order())];
        prop_assert!(aut.contains(&f.compose(h)));
        let inv = f.inverse().unwrap();
        prop_assert_eq!(f.compose(&inv), Morphism::identity(g.order()));
    }

    #[test]
    fn rank_nullity(m in matrix()) {
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.nrows(), m.ncols());
        prop_assert!(m.mul(&k.transpose()).is_zero());
        prop_assert_eq!(k.rank(), k.nrows());
        prop_assert_eq!(m.transpose().rank(), m.rank());
        let (r, pivots) = m.rref();
        prop_assert_eq!(pivots.len(), m.rank());
        prop_assert_eq!(r.rref().0, r);
    }

    #[test]
    fn cohomology_formulas(g in graph(7)) {
        let r = cohomology(&g, false).unwrap();
        let m = g.edges().len();
        let verts = g.non_isolated();
        let c = g.edge_components();
        prop_assert_eq!(r.dim_z1, 2 * m - verts);
        prop_assert_eq!(r.dim_b1, m - c);
        prop_assert_eq!(r.dim_h1 + verts, m + c);
        prop_assert_eq!(r.dim_h1, r.tree.non_tree.len());
        let complex = build_complex(&g);
        prop_assert!(coboundary_matrix(&complex, 1).mul(&coboundary_matrix(&complex, 0)).is_zero());
        prop_assert!(r.checks.iter().all(|c| c.passed), "{:?}", r.checks);
        prop_assert_eq!(cohomology(&g, true).is_ok(), g.is_connected());
    }

    #[test]
    fn diagram_dsl_round_trip(d in diagram()) {
        match parse_input(&to_dsl(&d)) {
            Ok(Input::Diagram(e)) => prop_assert_eq!(e, d),
            other => prop_assert!(false, "{:?}", other.map(|i| i.kind())),
        }
    }

    #[test]
    fn dihedral_orders(m in 2u32..16) {
        let d = CoxeterDiagram::dihedral(Label::Finite(m)).unwrap();
        let w = enumerate_group(&d, 1000).unwrap();
        prop_assert_eq!(w.order(), 2 * m as usize);
        prop_assert_eq!(recognize_spherical(&d).predicted_order(), Some(2 * m as u128));
    }

    #[test]
    fn spherical_prediction_matches_enumeration(d in diagram()) {
        if let Some(order) = recognize_spherical(&d).predicted_order().filter(|&o| o <= 2000) {
            prop_assert_eq!(enumerate_group(&d, 2000).unwrap().order() as u128, order);
        }
    }

    #[test]
    fn corruption_is_detected((_, g, _) in corpus_group(), x in 1usize..24, y in 1usize..24, shift in 1usize..24) {
        let l = chein_loop(&g);
        let n = l.order();
        let (x, y) = (x % n, y % n);
        let bad = l.corrupted(x, y, (l.mul(x, y) + shift % n.max(2)) % n);
        if bad.mul(x, y) != l.mul(x, y) {
            prop_assert!(!is_loop(&bad));
            prop_assert!(LoopTable::from_rows(&bad.rows()).is_err());
        }
    }
}
