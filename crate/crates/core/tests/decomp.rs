use nhsf::cohom::*;
use nhsf::decomp::*;
use nhsf::gmod::*;
use nhsf::verify::{adjoint_h2, bwb_h_i, compute_space, graded_simple, DegreeWindow};
use nhsf::rootsys::TypeLetter;
use proptest::prelude::*;

#[test]
fn g2_node1_single_summand() {
    let (_, g) = graded_simple(TypeLetter::G, 2, &[0]).unwrap();
    let h = adjoint_h2(&g).unwrap();
    assert_eq!(h.summands.len(), 1);
    let s = &h.summands[0];
    assert_eq!(s.weight_cm, vec![8, -4]);
    assert_eq!(s.weight_fw, vec!["4", "0"]);
    assert_eq!((s.kind, s.multiplicity, s.s), (ExtremalKind::Lowest, 1, 2));
}

#[test]
fn extremal_vectors_are_annihilated() {
    let (_, g) = graded_simple(TypeLetter::B, 3, &[1]).unwrap();
    let m = adjoint_module(&g);
    let cx = CochainComplex::new(&g, &m).unwrap();
    let frame = g.frame.as_ref().unwrap();
    for k in cx.degrees(2) {
        let sl = cx.slice(2, k).unwrap();
        check_weight_vectors(&cx, &sl).unwrap();
        for kind in [ExtremalKind::Lowest, ExtremalKind::Highest] {
            let ops = if kind == ExtremalKind::Lowest { &frame.lowering } else { &frame.raising };
            for (w, vecs) in extremal_vectors(&cx, &sl, kind).unwrap() {
                let blk = sl.block(&w).unwrap();
                for v in &vecs {
                    let coords = blk.coordinates(v.clone()).unwrap();
                    for (x, mat) in ops.iter().zip(g0_action(&cx, &sl, blk, ops).unwrap()) {
                        let mut acc = nhsf::linalg::Accum::new();
                        for (i, c) in &coords {
                            acc.add_scaled(c, &mat[*i]);
                        }
                        assert!(acc.is_empty(), "element {x} moves an extremal vector of weight {w:?}");
                    }
                }
            }
            let total: usize = decompose(&cx, &sl, kind).unwrap().iter().map(|s| s.multiplicity * nhsf::linalg::to_i64(&levi_dimension(&frame.rs, &frame.levi_nodes, &s.weight_cm, kind)).unwrap() as usize).sum();
            assert_eq!(total, sl.dim_h);
        }
    }
}

#[test]
fn simple_coordinates_may_be_fractional() {
    let (rs, _) = graded_simple(TypeLetter::A, 2, &[0]).unwrap();
    assert_eq!(simple_coords_str(&rs, &[1, 0]), vec!["2/3", "1/3"]);
    assert_eq!(simple_coords_int(&rs, &[1, 0]), None);
    assert_eq!(simple_coords_int(&rs, &[2, -1]), Some(vec![1, 0]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn direct_cohomology_agrees_with_bwb(
        (t, n) in prop::sample::select(vec![(TypeLetter::A, 2), (TypeLetter::A, 3), (TypeLetter::A, 4), (TypeLetter::B, 2), (TypeLetter::B, 3), (TypeLetter::C, 3), (TypeLetter::G, 2)]),
        mask in 1u32..16,
        s in 1usize..3,
    ) {
        let nodes: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        prop_assume!(!nodes.is_empty());
        let (rs, g) = graded_simple(t, n, &nodes).unwrap();
        let space = compute_space(&g, &adjoint_module(&g), "adjoint", s, ExtremalKind::Lowest, DegreeWindow::default()).unwrap();
        let mut direct: Vec<Vec<i64>> = space.summands.iter().flat_map(|x| std::iter::repeat_n(x.weight_cm.clone(), x.multiplicity)).collect();
        direct.sort();
        prop_assert_eq!(direct, bwb_h_i(&rs, &nodes, &rs.adjoint_highest_weight(), s).unwrap());
    }
}
