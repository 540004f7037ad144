use nhsf::liealg::*;
use nhsf::rootsys::*;
use proptest::prelude::*;

fn chevalley(t: TypeLetter, n: usize) -> (RootSystem, ZGradedLieAlgebra) {
    let rs = build_root_system(CartanMatrixSpec::new(t, n).unwrap()).unwrap();
    let a = build_chevalley(&rs).unwrap();
    (rs, a)
}

fn small_types() -> Vec<(TypeLetter, usize)> {
    vec![
        (TypeLetter::A, 1),
        (TypeLetter::A, 2),
        (TypeLetter::A, 3),
        (TypeLetter::A, 4),
        (TypeLetter::B, 2),
        (TypeLetter::B, 3),
        (TypeLetter::C, 3),
        (TypeLetter::D, 4),
        (TypeLetter::G, 2),
    ]
}

#[test]
fn dimensions_of_simple_algebras() {
    for (t, n, d) in [(TypeLetter::A, 3, 15), (TypeLetter::B, 3, 21), (TypeLetter::C, 3, 21), (TypeLetter::D, 4, 28), (TypeLetter::G, 2, 14), (TypeLetter::F, 4, 52), (TypeLetter::E, 6, 78)] {
        assert_eq!(chevalley(t, n).1.dim(), d, "{t}{n}");
    }
}

#[test]
fn jacobi_on_exceptional_algebras() {
    for (t, n) in [(TypeLetter::G, 2), (TypeLetter::F, 4)] {
        let (_, a) = chevalley(t, n);
        a.check_jacobi(None).unwrap();
    }
}

#[test]
fn depth_is_maximal_root_label() {
    for (t, n) in [(TypeLetter::F, 4), (TypeLetter::E, 6), (TypeLetter::G, 2)] {
        let (rs, a) = chevalley(t, n);
        for i in 0..n {
            let g = apply_grading(&a, &rs, &GradingSpec::from_nodes(n, &[i])).unwrap();
            assert_eq!(g.depth(), rs.maximal_root[i], "{t}{n} node {}", i + 1);
            assert!(g.g_minus_generated());
        }
    }
}

#[test]
fn negative_grading_rejected() {
    let (rs, a) = chevalley(TypeLetter::A, 2);
    assert!(apply_grading(&a, &rs, &GradingSpec { degrees: vec![1, -1] }).is_err());
}

#[test]
fn serde_roundtrip_keeps_brackets() {
    let (rs, a) = chevalley(TypeLetter::B, 2);
    let g = apply_grading(&a, &rs, &GradingSpec::from_nodes(2, &[1])).unwrap();
    let s = serde_json::to_string(&g).unwrap();
    let back: ZGradedLieAlgebra = serde_json::from_str(&s).unwrap();
    assert_eq!(back.dim(), g.dim());
    assert_eq!(back.bracket_keys(), g.bracket_keys());
    for (i, j) in g.bracket_keys() {
        assert_eq!(back.bracket(i, j), g.bracket(i, j));
    }
    assert_eq!(serde_json::to_string(&back).unwrap(), s);
}

#[test]
fn nonpositive_part_is_subalgebra() {
    let (rs, a) = chevalley(TypeLetter::G, 2);
    let g = apply_grading(&a, &rs, &GradingSpec::from_nodes(2, &[1])).unwrap();
    let p = levi_pieces(&g);
    let np = nonpositive_part(&g, &p.l, "p").unwrap();
    assert_eq!(np.dim(), g.g_minus().len() + p.l.len());
    np.check_jacobi(None).unwrap();
    np.check_grading().unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graded_algebra_invariants((t, n) in prop::sample::select(small_types()), mask in 1u32..256) {
        let (rs, a) = chevalley(t, n);
        let nodes: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        prop_assume!(!nodes.is_empty());
        let g = apply_grading(&a, &rs, &GradingSpec::from_nodes(n, &nodes)).unwrap();
        g.check_grading().unwrap();
        g.check_jacobi(None).unwrap();
        prop_assert!(g.g_minus_generated());
        let dims = g.dims_by_degree();
        prop_assert_eq!(dims.values().sum::<usize>(), g.dim());
        let height: i64 = nodes.iter().map(|&i| rs.maximal_root[i]).sum();
        prop_assert_eq!(g.depth(), height);
        for (i, j) in g.bracket_keys() {
            prop_assert_eq!(g.bracket(i, j), nhsf::linalg::neg(&g.bracket(j, i)));
            for (k, _) in g.bracket(i, j) {
                prop_assert_eq!(g.basis[k].degree, g.basis[i].degree + g.basis[j].degree);
            }
        }
        let p = levi_pieces(&g);
        prop_assert_eq!(p.z.len(), nodes.len());
        prop_assert_eq!(p.l.len(), p.l1.len() + p.z.len());
        prop_assert_eq!(p.l.len(), dims[&0]);
    }
}
