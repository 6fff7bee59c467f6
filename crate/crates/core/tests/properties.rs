use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use rpgroup::abelian::{quotient, snf, AffineMonoid, FgAbelianGroup, IntMatrix};
use rpgroup::catops::{product, reflect_to_ordgrp};
use rpgroup::cone::Cone;
use rpgroup::finite::FiniteGroupTable;
use rpgroup::group::{cone_from_preorder, induced_relation};
use rpgroup::{Element, RPGroup, Tri};

fn matrix(rows: &[Vec<i64>]) -> IntMatrix {
    let cols = rows.first().map_or(0, Vec::len);
    IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), cols)
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(m, n)| prop::collection::vec(prop::collection::vec(-30i64..=30, n), m))
}

fn tri() -> impl Strategy<Value = Tri> {
    prop_oneof![Just(Tri::Yes), Just(Tri::No), (1u64..100).prop_map(Tri::unknown)]
}

fn groups() -> Vec<FiniteGroupTable> {
    vec![
        FiniteGroupTable::cyclic(6),
        FiniteGroupTable::cyclic(8),
        FiniteGroupTable::symmetric(3).0,
        FiniteGroupTable::dihedral(4),
        FiniteGroupTable::quaternion(),
    ]
}

/// Determinant by cofactor expansion, for the small square matrices used here.
fn det(a: &[Vec<BigInt>]) -> BigInt {
    match a.len() {
        0 => BigInt::from(1),
        1 => a[0][0].clone(),
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<BigInt>> =
                    a[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect()).collect();
                let term = &a[0][j] * det(&minor);
                if j % 2 == 0 { term } else { -term }
            })
            .sum(),
    }
}

proptest! {
    #[test]
    fn smith_form_is_a_unimodular_diagonalization(rows in small_matrix()) {
        let a = matrix(&rows);
        let f = snf(&a);
        prop_assert_eq!(f.u.mul(&a).mul(&f.v), f.d.clone());
        prop_assert!(f.u.is_unimodular() && f.v.is_unimodular());
        let d = f.diagonal();
        prop_assert!(d.iter().all(|x| !x.is_negative()));
        for w in d.windows(2) {
            let divides = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            prop_assert!(divides);
        }
        prop_assert_eq!(d.iter().filter(|x| !x.is_zero()).count(), f.rank);
    }

    #[test]
    fn quotient_order_is_the_determinant(rows in (1usize..=3).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-6i64..=6, n), n))) {
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let d = det(&big).abs();
        let (p, proj) = quotient(&FgAbelianGroup::free(rows.len()), &big);
        if d.is_zero() {
            prop_assert!(p.group.rank() > 0);
        } else {
            prop_assert_eq!(p.group.order(), Some(d));
        }
        for r in &big {
            prop_assert!(proj.apply(r).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn kleene_laws(a in tri(), b in tri(), c in tri()) {
        prop_assert_eq!(a.and(b), b.and(a));
        prop_assert_eq!(a.or(b), b.or(a));
        prop_assert_eq!(a.and(b.and(c)), a.and(b).and(c));
        prop_assert_eq!(Tri::Yes.and(a), a);
        prop_assert_eq!(Tri::No.or(a), a);
        prop_assert_eq!(Tri::No.and(a), Tri::No);
        prop_assert_eq!(Tri::Yes.or(a), Tri::Yes);
    }

    #[test]
    fn closures_are_submonoids_and_roundtrip(g in 0usize..5, seeds in prop::collection::vec(0usize..24, 0..4)) {
        let t = &groups()[g];
        let seeds: Vec<usize> = seeds.into_iter().map(|s| s % t.order()).collect();
        let c = t.submonoid_closure(&seeds);
        prop_assert!(t.check_submonoid(&c).is_ok());
        prop_assert_eq!(t.submonoid_closure(&c), c.clone());
        prop_assert!(seeds.iter().all(|s| c.contains(s)));
        let rp = RPGroup::finite(t.clone(), &c).unwrap();
        let rel = induced_relation(&rp).unwrap();
        prop_assert_eq!(cone_from_preorder(t, &rel).unwrap(), c.clone());
        for x in 0..t.order() {
            for y in 0..t.order() {
                for z in 0..t.order() {
                    if rel[x][y] {
                        prop_assert!(rel[t.op(x, z)][t.op(y, z)]);
                    }
                }
            }
        }
        let (refl, _) = reflect_to_ordgrp(&rp).unwrap();
        let rc: BTreeSet<usize> = refl.cone_indices().unwrap().into_iter().collect();
        prop_assert!(c.iter().all(|i| rc.contains(i)));
        prop_assert!(rc.iter().all(|&p| (0..t.order()).all(|g| rc.contains(&t.conjugate(g, p)))));
    }

    #[test]
    fn monoid_sums_are_members(
        gens in prop::collection::vec((-5i64..=5, -5i64..=5), 1..=4),
        coeffs in prop::collection::vec(0i64..4, 4),
    ) {
        let big: Vec<Vec<BigInt>> = gens.iter().map(|&(a, b)| vec![a.into(), b.into()]).collect();
        let m = AffineMonoid::new(FgAbelianGroup::free(2), big.clone(), 512).unwrap();
        let mut x = vec![BigInt::zero(), BigInt::zero()];
        for (g, &c) in big.iter().zip(&coeffs) {
            x[0] += g[0].clone() * c;
            x[1] += g[1].clone() * c;
        }
        let r = m.member(&x, 512);
        prop_assert_eq!(r.value, Tri::Yes);
        let t = r.coefficients.unwrap();
        prop_assert!(t.iter().all(|c| !c.is_negative()));
        let mut back = vec![BigInt::zero(), BigInt::zero()];
        for (g, c) in big.iter().zip(&t) {
            back[0] += &g[0] * c;
            back[1] += &g[1] * c;
        }
        prop_assert_eq!(back, x);
    }

    #[test]
    fn orthant_membership_is_sign_test(a in -20i64..=20, b in -20i64..=20) {
        let g = RPGroup::abelian(FgAbelianGroup::free(2), Cone::Orthant).unwrap();
        prop_assert_eq!(g.contains(&Element::vector(&[a, b])), Tri::from_bool(a >= 0 && b >= 0));
        let gens = vec![vec![BigInt::from(1), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(1)]];
        let m = AffineMonoid::new(FgAbelianGroup::free(2), gens, 512).unwrap();
        prop_assert_eq!(m.contains(&[a.into(), b.into()]), Tri::from_bool(a >= 0 && b >= 0));
    }

    #[test]
    fn product_cone_is_componentwise(a in -9i64..=9, b in -9i64..=9) {
        let p = product(&RPGroup::z_natural(), &RPGroup::z_total()).unwrap();
        let e = Element::vector(&[a, b]);
        prop_assert_eq!(p.object.contains(&e), Tri::from_bool(a >= 0));
        prop_assert_eq!(p.maps[0].apply(&e), Element::int(a));
        prop_assert_eq!(p.maps[1].apply(&e), Element::int(b));
    }
}
