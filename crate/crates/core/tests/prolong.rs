use nhsf::liealg::*;
use nhsf::prolong::*;
use nhsf::rootsys::TypeLetter;
use nhsf::verify::graded_simple;
use nhsf::verify::suites::{conformal_check, family_base, negative_part_check, yamaguchi_check, Family};

#[test]
fn polynomial_vector_fields_in_two_variables() {
    let base = family_base(Family::Vect, 2).unwrap();
    let p = full_prolong(&base, 3).unwrap();
    assert!(!p.stabilized);
    assert_eq!(p.positive_dims, vec![6, 8, 10]);
    check_derivations(&p).unwrap();
    p.algebra.check_jacobi(Some(3)).unwrap();
}

#[test]
fn hamiltonian_fields_in_two_variables() {
    let base = family_base(Family::H, 1).unwrap();
    let p = full_prolong(&base, 3).unwrap();
    // S^{k+2}(V) for dim V = 2
    assert_eq!(p.positive_dims, vec![4, 5, 6]);
    check_derivations(&p).unwrap();
}

#[test]
fn conformal_algebra_prolongs_to_orthogonal() {
    for n in 3..=5 {
        let c = conformal_check(n).unwrap();
        assert!(c.holds, "co({n}): {:?}", c.prolong);
        assert!(c.stabilized);
        let dims: Vec<usize> = c.prolong.iter().map(|x| x.1).collect();
        assert_eq!(dims, vec![n, n * (n - 1) / 2 + 1, n], "co({n})");
    }
}

#[test]
fn vanishing_component_stops_the_prolongation() {
    let (_, g) = graded_simple(TypeLetter::G, 2, &[1]).unwrap();
    let p = levi_pieces(&g);
    let base = nonpositive_part(&g, &p.l, "g2 nonpositive").unwrap();
    let pr = full_prolong(&base, 8).unwrap();
    assert!(pr.stabilized);
    assert_eq!(*pr.positive_dims.last().unwrap(), 0);
    assert!(pr.positive_dims[..pr.positive_dims.len() - 1].iter().all(|&d| d > 0));
    assert_eq!(pr.dims_by_degree(), g.dims_by_degree());
}

#[test]
fn degree_zero_derivations() {
    let (_, g) = graded_simple(TypeLetter::G, 2, &[0]).unwrap();
    let d = der0(&g).unwrap();
    assert_eq!(d.indices_of_degree(0).len(), 4);
    d.check_jacobi(None).unwrap();
}

#[test]
fn classification_of_gradings() {
    let cls = |t, n, nodes: &[usize]| yamaguchi_classify(&graded_simple(t, n, nodes).unwrap().1).unwrap();
    assert_eq!(cls(TypeLetter::A, 3, &[0]), YamaguchiClass::Depth1Vect);
    assert_eq!(cls(TypeLetter::C, 3, &[0]), YamaguchiClass::ContactK);
    assert_eq!(cls(TypeLetter::G, 2, &[1]), YamaguchiClass::ContactK);
    assert_eq!(cls(TypeLetter::A, 3, &[0, 1]), YamaguchiClass::SpecialSlSp);
    assert_eq!(cls(TypeLetter::C, 3, &[0, 2]), YamaguchiClass::SpecialSlSp);
    assert_eq!(cls(TypeLetter::A, 4, &[1, 2]), YamaguchiClass::EqualsS);
    assert_eq!(cls(TypeLetter::G, 2, &[0]), YamaguchiClass::EqualsS);
}

#[test]
fn single_node_prolongations_of_small_algebras() {
    for (t, n) in [(TypeLetter::G, 2), (TypeLetter::A, 3), (TypeLetter::C, 3)] {
        for i in 0..n {
            let y = yamaguchi_check(t, n, i).unwrap();
            assert!(y.holds, "{t}{n} node {}: {:?} vs {:?}", i + 1, y.prolong, y.ambient);
            let z = negative_part_check(t, n, i).unwrap();
            assert!(z.holds, "{t}{n} node {}: {:?} vs {:?}", i + 1, z.prolong, z.ambient);
        }
    }
}

#[test]
fn classification_from_roots_agrees() {
    for (t, n) in [(TypeLetter::A, 4), (TypeLetter::C, 3), (TypeLetter::D, 4), (TypeLetter::G, 2), (TypeLetter::B, 3)] {
        for mask in 1u32..(1 << n) {
            let nodes: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let (rs, g) = graded_simple(t, n, &nodes).unwrap();
            assert_eq!(classify_selection(&rs, &nodes), yamaguchi_classify(&g).unwrap(), "{t}{n} {nodes:?}");
        }
    }
}

#[test]
fn kmax_must_be_positive() {
    let base = family_base(Family::Vect, 2).unwrap();
    assert!(full_prolong(&base, 0).is_err());
}
