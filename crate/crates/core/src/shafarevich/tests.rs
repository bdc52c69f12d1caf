use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use super::*;
use crate::arith::square_class_reps;
use crate::dynamics::MorphismPN;

fn pt(a: i64, b: i64) -> ProjPoint {
    ProjPoint::from_i64(&[a, b]).unwrap()
}

fn set(pts: &[(i64, i64)]) -> PointSet {
    PointSet::new(pts.iter().map(|&(a, b)| pt(a, b))).unwrap()
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn m(s: &str) -> MorphismPN {
    MorphismPN::parse(s).unwrap()
}

fn s_of(ps: &[u64]) -> PlaceSet {
    PlaceSet::new(ps.iter().copied()).unwrap()
}

fn zero_one_inf() -> PointSet {
    set(&[(0, 1), (1, 1), (1, 0)])
}

#[test]
fn form_examples() {
    assert_eq!(form_of_point_set(&zero_one_inf()).expand().to_string(), "X^2*Y + X*Y^2");
    assert_eq!(form_of_point_set(&set(&[(1, 0)])).expand().to_string(), "X");
    assert_eq!(form_of_point_set(&set(&[(0, 1), (2, 1)])).expand().to_string(), "2*X*Y + Y^2");
}

#[test]
fn decomposable_form_keeps_scalar_under_normalization() {
    let l = LinearForm::new(vec![BigInt::from(-2), BigInt::from(4)]).unwrap();
    let f = DecomposableForm::new(vec![(l, 2)], BigRational::one()).unwrap();
    assert_eq!(f.expand().to_string(), "4*X^2 - 16*X*Y + 16*Y^2");
    let l1 = LinearForm::new(vec![BigInt::from(1), BigInt::from(1)]).unwrap();
    let l2 = LinearForm::new(vec![BigInt::from(2), BigInt::from(2)]).unwrap();
    assert!(DecomposableForm::new(vec![(l1, 1), (l2, 1)], BigRational::one()).is_err());
}

#[test]
fn discriminant_examples() {
    let arch = PlaceSet::archimedean();
    let d = discriminant_ideal(&form_of_point_set(&zero_one_inf()), &arch).unwrap();
    assert!(d.is_unit());
    let v = set(&[(0, 1), (2, 1), (1, 0)]);
    let d = discriminant_ideal(&form_of_point_set(&v), &arch).unwrap();
    assert_eq!(d.exponent(&BigInt::from(2)), 2);
    assert_eq!(d.exponents().len(), 1);
    assert!(discriminant_ideal(&form_of_point_set(&v), &s_of(&[2])).unwrap().is_unit());
    // a single point of P^1 has no independent pair
    assert!(discriminant_ideal(&form_of_point_set(&set(&[(1, 0)])), &arch).is_err());
}

#[test]
fn class_p_examples() {
    let arch = PlaceSet::archimedean();
    assert!(in_class_p(&zero_one_inf(), &arch, 3).unwrap().holds());
    let r = in_class_p(&set(&[(0, 1), (2, 1), (1, 0)]), &arch, 3).unwrap();
    assert!(!r.holds() && r.cardinality && !r.unit_discriminant);
    let r = in_class_p(&zero_one_inf(), &arch, 4).unwrap();
    assert!(!r.holds() && !r.cardinality && r.unit_discriminant);
}

#[test]
fn act_examples() {
    let v = zero_one_inf();
    assert_eq!(act(&ProjLinearMap::identity(1), &v).unwrap(), v);
    let shift = ProjLinearMap::mobius(1, 1, 0, 1).unwrap();
    assert_eq!(act(&shift, &v).unwrap(), set(&[(1, 1), (2, 1), (1, 0)]));
    let inv = ProjLinearMap::mobius(0, 1, 1, 0).unwrap();
    assert_eq!(act(&inv, &set(&[(0, 1), (2, 1), (1, 0)])).unwrap(), set(&[(1, 0), (1, 2), (0, 1)]));
    assert!(act(&ProjLinearMap::identity(2), &v).is_err());
}

#[test]
fn invariance_examples() {
    let arch = PlaceSet::archimedean();
    let shift = ProjLinearMap::mobius(1, 1, 0, 1).unwrap();
    assert!(discriminant_invariance_check(&zero_one_inf(), &shift, &arch).unwrap());
    let inv = ProjLinearMap::mobius(0, 1, 1, 0).unwrap();
    assert!(discriminant_invariance_check(&set(&[(0, 1), (2, 1), (1, 0)]), &inv, &arch).unwrap());
    let double = ProjLinearMap::mobius(2, 0, 0, 1).unwrap();
    assert!(discriminant_invariance_check(&zero_one_inf(), &double, &arch).is_err());
}

#[test]
fn transport_examples() {
    let f = form_of_point_set(&zero_one_inf());
    let id = ProjLinearMap::identity(1);
    assert_eq!(
        weak_equivalence_transport(&f, &f, &id, &BigRational::one()).unwrap(),
        Some(vec![(0, 0), (1, 1), (2, 2)])
    );
    // F_{a(W)} = λ·F_W(A·X) with A the transposed lift of a
    let a = ProjLinearMap::mobius(1, 1, 0, 1).unwrap();
    let w = zero_one_inf();
    let fa = form_of_point_set(&act(&a, &w).unwrap());
    let g = form_of_point_set(&w);
    let at = a.transpose();
    let lambda = forced_lambda(&fa, &g, &at).unwrap().unwrap();
    let pairs = weak_equivalence_transport(&fa, &g, &at, &lambda).unwrap().unwrap();
    let wv = w.to_vec();
    let fav = act(&a, &w).unwrap().to_vec();
    for (i, j) in pairs {
        assert_eq!(fav[i], a.apply(&wv[j]).unwrap());
    }
    let wrong = BigRational::from_integer(BigInt::from(7)) * &lambda;
    assert_eq!(weak_equivalence_transport(&fa, &g, &at, &wrong).unwrap(), None);
    let deg2 = form_of_point_set(&set(&[(0, 1), (2, 1)]));
    assert!(weak_equivalence_transport(&f, &deg2, &id, &BigRational::one()).is_err());
}

fn mobius_set(rows: &[[i64; 4]]) -> BTreeSet<ProjLinearMap> {
    rows.iter().map(|r| ProjLinearMap::mobius(r[0], r[1], r[2], r[3]).unwrap()).collect()
}

#[test]
fn maps_between_examples() {
    let v = zero_one_inf();
    let got: BTreeSet<_> = maps_between(&v, &v).unwrap().into_iter().collect();
    // z, 1−z, 1/z, 1/(1−z), (z−1)/z, z/(z−1)
    let expected = mobius_set(&[[1, 0, 0, 1], [-1, 1, 0, 1], [0, 1, 1, 0], [0, 1, -1, 1], [1, -1, 1, 0], [1, 0, 1, -1]]);
    assert_eq!(got, expected);
    let w = set(&[(1, 1), (2, 1), (1, 0)]);
    let to_w = maps_between(&v, &w).unwrap();
    assert_eq!(to_w.len(), 6);
    assert!(to_w.contains(&ProjLinearMap::mobius(1, 1, 0, 1).unwrap()));
    let finite = set(&[(0, 1), (1, 1), (2, 1)]);
    let to_finite = maps_between(&v, &finite).unwrap();
    assert!(to_finite.len() <= 6);
    for f in &to_finite {
        assert_eq!(act(f, &v).unwrap(), finite);
    }
    assert!(maps_between(&v, &set(&[(0, 1), (1, 1)])).is_err());
}

#[test]
fn maps_between_in_the_plane() {
    let v = PointSet::new(
        [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]].iter().map(|c| ProjPoint::from_i64(c).unwrap()),
    )
    .unwrap();
    let maps = maps_between(&v, &v).unwrap();
    // the symmetric group on a projective frame of P^2
    assert_eq!(maps.len(), 24);
}

#[test]
fn automorphism_examples() {
    let neg = ProjLinearMap::mobius(-1, 0, 0, 1).unwrap();
    assert!(automorphism_group(&m("X^2 + Y^2; X*Y"), 3, 50).unwrap().contains(&neg));
    let aut = automorphism_group(&m("X^2; Y^2"), 2, 50).unwrap();
    assert!(aut.contains(&ProjLinearMap::identity(1)));
    assert!(aut.contains(&ProjLinearMap::mobius(0, 1, 1, 0).unwrap()));
    // z² + z/2 − 1: rational preperiodic points without a nontrivial symmetry
    let generic = m("2*X^2 + X*Y - 2*Y^2; 2*Y^2");
    assert_eq!(automorphism_group(&generic, 4, 20).unwrap(), vec![ProjLinearMap::identity(1)]);
}

#[test]
fn k_isomorphism_examples() {
    let base = m("X^2 + Y^2; X*Y");
    match is_k_isomorphic(&base, &m("X^2 + 4*Y^2; X*Y"), 3, 50).unwrap() {
        KIsoVerdict::Yes { witness } => assert_eq!(witness, ProjLinearMap::mobius(2, 0, 0, 1).unwrap()),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        is_k_isomorphic(&base, &m("X^2 + 2*Y^2; X*Y"), 3, 50).unwrap(),
        KIsoVerdict::NoRationalWitness { .. }
    ));
    assert!(is_k_isomorphic(&m("X^2; Y^2"), &m("X^2; Y^2"), 2, 50).unwrap().is_yes());
    assert!(is_k_isomorphic(&base, &m("X^3; Y^3"), 2, 10).is_err());
}

#[test]
fn two_point_anchor_sets_are_resolved() {
    // anchors {0, ∞} on both sides: the torus parameter decides
    let a = m("X^2 + 2*Y^2; X*Y");
    match is_k_isomorphic(&a, &m("X^2 + 8*Y^2; X*Y"), 3, 30).unwrap() {
        KIsoVerdict::Yes { witness } => assert_eq!(witness, ProjLinearMap::mobius(2, 0, 0, 1).unwrap()),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        is_k_isomorphic(&a, &m("X^2 + 3*Y^2; X*Y"), 3, 30).unwrap(),
        KIsoVerdict::NoRationalWitness { .. }
    ));
}

#[test]
fn twist_examples() {
    let base = m("X^2 + Y^2; X*Y");
    assert_eq!(quadratic_twist(&base, &q(6)).unwrap(), m("X^2 + 6*Y^2; X*Y"));
    assert_eq!(quadratic_twist(&base, &q(1)).unwrap(), base);
    let t4 = quadratic_twist(&base, &q(4)).unwrap();
    assert_eq!(t4, m("X^2 + 4*Y^2; X*Y"));
    assert!(is_k_isomorphic(&base, &t4, 3, 50).unwrap().is_yes());
    assert!(matches!(quadratic_twist(&m("X^2 + Y^2; Y^2"), &q(2)), Err(Error::Unsupported(_))));
    // z³ + z twisted by γ is z³/γ + z
    let cubic = m("X^3 + X*Y^2; Y^3");
    assert_eq!(quadratic_twist(&cubic, &q(3)).unwrap(), m("X^3 + 3*X*Y^2; 3*Y^3"));
}

#[test]
fn twist_set_examples() {
    let base = m("X^2 + Y^2; X*Y");
    let r = enumerate_twist_set(&base, &PlaceSet::archimedean()).unwrap();
    let gammas: Vec<String> = r.records.iter().map(|t| t.gamma.to_string()).collect();
    assert_eq!(gammas, ["1", "-1"]);
    let r = enumerate_twist_set(&base, &s_of(&[2, 3])).unwrap();
    let gammas: BTreeSet<i64> = r.records.iter().map(|t| t.gamma.to_string().parse().unwrap()).collect();
    assert_eq!(gammas, BTreeSet::from([1, -1, 2, -2, 3, -3, 6, -6]));
    for t in &r.records {
        assert!(t.s_model);
        assert!(t.bad_primes.iter().all(|p| *p == BigInt::from(2) || *p == BigInt::from(3)));
    }
    assert_eq!(r.completeness, TWIST_COMPLETENESS);
    let r = enumerate_twist_set(&base, &s_of(&[5])).unwrap();
    assert_eq!(r.records.len(), 4);
    assert!(enumerate_twist_set(&m("X^2 + 2*Y^2; X*Y"), &PlaceSet::archimedean()).is_err());
}

#[test]
fn twist_classes_stay_apart() {
    let base = m("X^2 + Y^2; X*Y");
    let mut r = enumerate_twist_set(&base, &s_of(&[2, 3])).unwrap();
    classify_twists(&mut r, 3, 20).unwrap();
    let classes: BTreeSet<usize> = r.records.iter().map(|t| t.k_iso_class).collect();
    assert_eq!(classes.len(), 8);
    assert!(r.inconclusive_pairs.is_empty());
}

fn arb_points(n: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, n + 1), 3..=6).prop_filter_map(
        "need an independent frame",
        |raw| {
            let pts: BTreeSet<ProjPoint> = raw.iter().filter_map(|c| ProjPoint::from_i64(c).ok()).collect();
            let v = PointSet::new(pts).ok()?;
            v.has_independent_frame().then_some(v)
        },
    )
}

/// Products of elementary matrices: determinant ±1, or a unit at 2 and 3.
fn arb_unimodular(n: usize, s_units: bool) -> impl Strategy<Value = ProjLinearMap> {
    let size = n + 1;
    prop::collection::vec((0..size, 0..size, -3i64..=3, 0usize..4), 1..6).prop_map(move |ops| {
        let mut a: Vec<Vec<BigInt>> =
            (0..size).map(|i| (0..size).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
        for (i, j, c, scale) in ops {
            if i != j {
                for k in 0..size {
                    let add = &a[j][k] * c;
                    a[i][k] += add;
                }
            } else {
                let factor = if s_units { [1, -1, 2, 3][scale] } else { [1, -1, 1, -1][scale] };
                for x in a[i].iter_mut() {
                    *x *= factor;
                }
            }
        }
        ProjLinearMap::new(a).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn discriminant_ignores_scalars(v in arb_points(1), num in 1i64..50, den in 1i64..50, neg: bool) {
        let s = s_of(&[3]);
        let f = form_of_point_set(&v);
        let g = BigRational::new(BigInt::from(if neg { -num } else { num }), BigInt::from(den));
        prop_assert_eq!(discriminant_ideal(&f, &s).unwrap(), discriminant_ideal(&f.scaled(&g).unwrap(), &s).unwrap());
    }

    #[test]
    fn discriminant_is_invariant(v in arb_points(2), f in arb_unimodular(2, true)) {
        let s = s_of(&[2, 3]);
        prop_assert!(discriminant_invariance_check(&v, &f, &s).unwrap());
    }

    #[test]
    fn action_preserves_class_p(v in arb_points(1), f in arb_unimodular(1, false)) {
        let s = PlaceSet::archimedean();
        let before = in_class_p(&v, &s, v.len()).unwrap();
        let after = in_class_p(&act(&f, &v).unwrap(), &s, v.len()).unwrap();
        prop_assert_eq!(before.holds(), after.holds());
    }

    #[test]
    fn self_maps_form_a_group(v in arb_points(1)) {
        prop_assume!(v.len() >= 3);
        let maps = maps_between(&v, &v).unwrap();
        let set: BTreeSet<_> = maps.iter().cloned().collect();
        prop_assert!(set.contains(&ProjLinearMap::identity(1)));
        prop_assert!(maps.len() <= 6 * v.len() * (v.len() - 1) * (v.len() - 2) / 6);
        for f in &maps {
            prop_assert!(set.contains(&f.inverse()));
            for g in &maps {
                prop_assert!(set.contains(&f.compose(g).unwrap()));
            }
        }
    }

    #[test]
    fn transport_follows_the_action(w in arb_points(1), a in arb_unimodular(1, true)) {
        let f = form_of_point_set(&act(&a, &w).unwrap());
        let g = form_of_point_set(&w);
        let at = a.transpose();
        let lambda = forced_lambda(&f, &g, &at).unwrap();
        prop_assert!(lambda.is_some());
        let pairs = weak_equivalence_transport(&f, &g, &at, &lambda.unwrap()).unwrap().unwrap();
        prop_assert_eq!(pairs.len(), w.len());
    }

}

#[test]
fn twists_by_squares_are_isomorphic() {
    let base = m("X^2 + Y^2; X*Y");
    for g in square_class_reps(&s_of(&[2, 3])) {
        let a = quadratic_twist(&base, &g.as_rational()).unwrap();
        for k in 2..4 {
            let b = quadratic_twist(&base, &(g.as_rational() * q(k * k))).unwrap();
            assert!(is_k_isomorphic(&a, &b, 3, 20).unwrap().is_yes(), "{g} {k}");
        }
    }
}

#[test]
fn twists_by_distinct_classes_are_not_isomorphic() {
    let base = m("X^2 + Y^2; X*Y");
    let reps = square_class_reps(&s_of(&[2, 3]));
    for (i, g) in reps.iter().enumerate() {
        for h in &reps[i + 1..] {
            let a = quadratic_twist(&base, &g.as_rational()).unwrap();
            let b = quadratic_twist(&base, &h.as_rational()).unwrap();
            assert!(!is_k_isomorphic(&a, &b, 3, 20).unwrap().is_yes(), "{g} {h}");
        }
    }
}
