//! Property tests of the structural invariants over generated rational
//! inputs.

use proptest::prelude::*;
use rumin::exterior::{basis_monomials, Covector, Monomial};
use rumin::forms::{exterior_d, PolyForm};
use rumin::heis::{dilate, distance_fourth, gauge_fourth, group_mul, GroupPoint};
use rumin::poly::PolyScalar;
use rumin::scalar::{ratio, Rat};

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
}

fn point_strategy(n: usize) -> impl Strategy<Value = GroupPoint<Rat>> {
    prop::collection::vec(rat_strategy(), 2 * n + 1)
        .prop_map(|coords| GroupPoint::from_coords(&coords))
}

fn covector_strategy(n: usize, h: usize) -> impl Strategy<Value = Covector<Rat>> {
    let basis = basis_monomials(n, h);
    prop::collection::vec(rat_strategy(), basis.len())
        .prop_map(move |coeffs| Covector::from_dense(n, h, &coeffs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_associativity(
        a in point_strategy(2),
        b in point_strategy(2),
        c in point_strategy(2),
    ) {
        let l = group_mul(&group_mul(&a, &b).unwrap(), &c).unwrap();
        let r = group_mul(&a, &group_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn dilation_automorphism_and_gauge_homogeneity(
        a in point_strategy(1),
        b in point_strategy(1),
        lp in 1i64..=9,
        lq in 1i64..=4,
    ) {
        let lambda = ratio(lp, lq);
        let l4 = lambda.clone() * lambda.clone() * lambda.clone() * lambda.clone();
        let d1 = dilate(&lambda, &group_mul(&a, &b).unwrap()).unwrap();
        let d2 = group_mul(&dilate(&lambda, &a).unwrap(), &dilate(&lambda, &b).unwrap()).unwrap();
        prop_assert_eq!(&d1, &d2);
        prop_assert_eq!(gauge_fourth(&d1), l4 * gauge_fourth(&group_mul(&a, &b).unwrap()));
    }

    #[test]
    fn distance_left_invariance(
        g in point_strategy(1),
        p in point_strategy(1),
        q in point_strategy(1),
    ) {
        let d = distance_fourth(&p, &q).unwrap();
        let d2 = distance_fourth(
            &group_mul(&g, &p).unwrap(),
            &group_mul(&g, &q).unwrap(),
        ).unwrap();
        prop_assert_eq!(d, d2);
    }

    #[test]
    fn wedge_graded_anticommutative(
        a in covector_strategy(2, 1),
        b in covector_strategy(2, 2),
        c in covector_strategy(2, 1),
    ) {
        // odd·even commute, odd·odd anticommute
        prop_assert_eq!(a.wedge(&b), b.wedge(&a));
        prop_assert_eq!(a.wedge(&c), c.wedge(&a).neg());
        // bilinearity
        prop_assert_eq!(
            a.add(&c).wedge(&b),
            a.wedge(&b).add(&c.wedge(&b))
        );
    }

    #[test]
    fn hodge_star_isometry(
        a in covector_strategy(2, 2),
        b in covector_strategy(2, 2),
    ) {
        // ⟨★a, ★b⟩ = ⟨a, b⟩ and b ∧ ★a = ⟨b, a⟩ dV
        prop_assert_eq!(a.hodge_star().inner(&b.hodge_star()), a.inner(&b));
        let dv = Covector::<Rat>::volume(2);
        prop_assert_eq!(b.wedge(&a.hodge_star()), dv.scale(&b.inner(&a)));
    }

    #[test]
    fn d_squared_zero_on_simple_forms(
        coeffs in prop::collection::vec((-5i64..=5, 0u16..=2, 0u16..=2, 0u16..=2), 1..4),
        idx in 0usize..3,
    ) {
        // single-monomial 1-forms with small polynomial coefficients
        let n = 1;
        let basis = basis_monomials(n, 1);
        let mut form = PolyForm::zero(n, 1);
        let mut poly = PolyScalar::zero(3);
        for (c, e1, e2, e3) in coeffs {
            poly = poly.add(&PolyScalar::monomial(3, vec![e1, e2, e3], ratio(c, 1)));
        }
        form.set(basis[idx].clone(), poly);
        prop_assert!(exterior_d(&exterior_d(&form)).is_zero());
        let _ = Monomial::scalar();
    }
}
