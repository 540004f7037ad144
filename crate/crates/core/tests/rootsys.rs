use nhsf::rootsys::*;
use proptest::prelude::*;

fn rs(t: TypeLetter, n: usize) -> RootSystem {
    build_root_system(CartanMatrixSpec::new(t, n).unwrap()).unwrap()
}

fn all_types() -> Vec<(TypeLetter, usize)> {
    let mut v = Vec::new();
    for n in 1..=6 {
        v.push((TypeLetter::A, n));
    }
    for n in 2..=5 {
        v.push((TypeLetter::B, n));
        v.push((TypeLetter::C, n));
    }
    for n in 3..=6 {
        v.push((TypeLetter::D, n));
    }
    v.extend([(TypeLetter::E, 6), (TypeLetter::E, 7), (TypeLetter::E, 8), (TypeLetter::F, 4), (TypeLetter::G, 2)]);
    v
}

fn classical_count(t: TypeLetter, n: usize) -> usize {
    match t {
        TypeLetter::A => n * (n + 1) / 2,
        TypeLetter::B | TypeLetter::C => n * n,
        TypeLetter::D => n * (n - 1),
        TypeLetter::E => [36, 63, 120][n - 6],
        TypeLetter::F => 24,
        TypeLetter::G => 6,
    }
}

fn strategy_type() -> impl Strategy<Value = (TypeLetter, usize)> {
    prop::sample::select(all_types())
}

#[test]
fn positive_root_counts() {
    for (t, n) in all_types() {
        let r = rs(t, n);
        assert_eq!(r.num_positive_roots(), classical_count(t, n), "{t}{n}");
    }
    assert_eq!(2 * rs(TypeLetter::G, 2).num_positive_roots(), 12);
    assert_eq!(2 * rs(TypeLetter::F, 4).num_positive_roots(), 48);
}

#[test]
fn maximal_root_dominates() {
    for (t, n) in all_types() {
        let r = rs(t, n);
        for b in &r.positive_roots {
            assert!(b.iter().all(|&x| x >= 0));
            assert!(b.iter().zip(&r.maximal_root).all(|(x, m)| x <= m), "{t}{n} {b:?}");
        }
    }
}

#[test]
fn root_strings_are_unbroken() {
    for (t, n) in all_types() {
        let r = rs(t, n);
        for b in &r.positive_roots {
            for i in 0..n {
                if b.iter().enumerate().all(|(j, &x)| x == i64::from(j == i)) {
                    continue;
                }
                let mut down = 0;
                let mut v = b.clone();
                loop {
                    v[i] -= 1;
                    if r.is_root(&v) {
                        down += 1;
                    } else {
                        break;
                    }
                }
                let mut up = 0;
                let mut v = b.clone();
                loop {
                    v[i] += 1;
                    if r.is_root(&v) {
                        up += 1;
                    } else {
                        break;
                    }
                }
                assert_eq!(down - up, r.pairing(b, i), "{t}{n} root {b:?} node {i}");
            }
        }
    }
}

#[test]
fn rho_is_half_sum() {
    for (t, n) in all_types() {
        let r = rs(t, n);
        let mut sum = vec![0i64; n];
        for b in &r.positive_roots {
            for (s, x) in sum.iter_mut().zip(r.to_coroot(b)) {
                *s += x;
            }
        }
        assert!(sum.iter().all(|&x| x == 2), "{t}{n}");
    }
}

#[test]
fn dynkin_edges_follow_cartan() {
    let d5 = rs(TypeLetter::D, 5);
    assert_eq!(d5.neighbors(2), vec![1, 3, 4]);
    let e6 = rs(TypeLetter::E, 6);
    assert_eq!(e6.neighbors(2), vec![1, 3, 5]);
    let g2 = rs(TypeLetter::G, 2);
    assert_eq!(g2.cartan_matrix, vec![vec![2, -3], vec![-1, 2]]);
}

#[test]
fn w_i_sizes() {
    let g2 = rs(TypeLetter::G, 2);
    assert_eq!(enumerate_w_i(&g2, &[0], 2).unwrap().len(), 1);
    let f4 = rs(TypeLetter::F, 4);
    assert_eq!(enumerate_w_i(&f4, &[1], 2).unwrap().len(), 2);
    let a3 = rs(TypeLetter::A, 3);
    assert_eq!(enumerate_w_i(&a3, &[0, 1, 2], 2).unwrap().len(), 5);
    assert_eq!(enumerate_w_i(&a3, &[0, 1, 2], 1).unwrap().len(), 3);
    assert!(enumerate_w_i(&a3, &[], 1).is_err());
    assert!(enumerate_w_i(&a3, &[3], 1).is_err());
}

#[test]
fn split_of_d20_example() {
    let d20 = rs(TypeLetter::D, 20);
    let black: Vec<usize> = [1, 2, 4, 5, 6, 10, 11, 13, 14, 15, 17, 18].iter().map(|i| i - 1).collect();
    let sp = dynkin_split(&d20, &black);
    assert_eq!(sp.c_i, vec![0, 1, 1, 1, 2]);
    assert_eq!(sp.s, 5);
}

proptest! {
    #[test]
    fn weight_conversion_roundtrip((t, n) in strategy_type(), seed in prop::collection::vec(-20i64..20, 8)) {
        let r = rs(t, n);
        let w = Weight::coroot(&seed[..n]);
        let s = convert_weight(&w, Basis::SimpleRoot, &r);
        prop_assert_eq!(convert_weight(&s, Basis::Coroot, &r), w);
        let v = Weight::simple(&seed[..n]);
        let c = convert_weight(&v, Basis::Coroot, &r);
        prop_assert_eq!(convert_weight(&c, Basis::SimpleRoot, &r), v);
    }

    #[test]
    fn reflection_is_involution((t, n) in strategy_type(), i in 0usize..8, seed in prop::collection::vec(-9i64..9, 8)) {
        let r = rs(t, n);
        let i = i % n;
        let w = Weight::coroot(&seed[..n]);
        prop_assert_eq!(reflect(&r, i, &reflect(&r, i, &w)), w);
    }

    #[test]
    fn rho_minus_w_rho_is_inversion_sum((t, n) in strategy_type(), word in prop::collection::vec(0usize..8, 0..12)) {
        let r = rs(t, n);
        // reduced word built by left multiplication whenever it lengthens
        let mut refl: Vec<usize> = Vec::new();
        for i in word.into_iter().map(|i| i % n) {
            let w = WeylWord::new(refl.clone());
            let e = (0..n).map(|j| if j == i { 1 } else { 0 }).collect::<Vec<i64>>();
            if w.inverse().apply_root(&r, &e).iter().all(|&x| x >= 0) {
                refl.insert(0, i);
            }
        }
        let w = WeylWord::new(refl);
        let inv = r.inversion_set(&w);
        prop_assert_eq!(inv.len(), w.length);
        let wr = w.apply_weight(&r, &r.rho);
        let diff: Vec<i64> = r.rho.iter().zip(&wr).map(|(a, b)| a - b).collect();
        let mut sum = vec![0i64; n];
        for b in &inv {
            for (s, x) in sum.iter_mut().zip(b) {
                *s += x;
            }
        }
        prop_assert_eq!(r.to_coroot(&sum), diff);
    }

    #[test]
    fn roots_permuted_by_reflections((t, n) in strategy_type(), i in 0usize..8) {
        let r = rs(t, n);
        let i = i % n;
        for b in &r.positive_roots {
            let img = r.reflect_root(i, b);
            let neg: Vec<i64> = img.iter().map(|x| -x).collect();
            prop_assert!(r.is_root(&img) || r.is_root(&neg));
        }
    }
}
