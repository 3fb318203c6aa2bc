use std::collections::BTreeMap;

use msploc::algebra::*;
use proptest::prelude::*;

fn var_strategy() -> impl Strategy<Value = Variable> {
    prop_oneof![
        (1u32..4).prop_map(Variable::t),
        (0u32..2).prop_map(Variable::h),
        (0u32..2, 0u32..2).prop_map(|(e, v)| Variable::psi(e, v)),
        (0u32..2, 1u32..3).prop_map(|(v, i)| Variable::lambda(v, i)),
    ]
}

fn poly_strategy() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        (
            -5i64..6,
            1i64..4,
            prop::collection::vec((var_strategy(), 1u32..3), 0..3),
        ),
        0..5,
    )
    .prop_map(|terms| {
        let mut p = Polynomial::zero();
        for (n, d, pairs) in terms {
            let mut m = Polynomial::constant(q(n, d));
            for (v, e) in pairs {
                m = &m * &Polynomial::var(v).pow(e);
            }
            p = &p + &m;
        }
        p
    })
}

fn t_only_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-4i64..5, 0u32..3, 0u32..3), 1..4).prop_map(|terms| {
        let mut p = Polynomial::zero();
        for (c, e1, e2) in terms {
            let m = &Polynomial::var(Variable::t(1)).pow(e1) * &Polynomial::var(Variable::t(2)).pow(e2);
            p = &p + &m.scale(&qi(c));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn ratfunc_field_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assume!(!c.is_zero() && !b.is_zero());
        let x = RatFunc::new(a.clone(), c.clone()).unwrap();
        let y = RatFunc::new(b.clone(), c.clone()).unwrap();
        let s = &x + &y;
        prop_assert_eq!(s, RatFunc::new(&a + &b, c.clone()).unwrap());
        let inv = y.inv().unwrap();
        prop_assert_eq!(&y * &inv, RatFunc::one());
        prop_assert!(RatFunc::one().denom().is_one());
    }

    #[test]
    fn substitute_is_homomorphism(a in poly_strategy(), b in poly_strategy(), x in 1i64..5, y in -3i64..4) {
        let bind = BTreeMap::from([
            (Variable::t(1), RatFunc::int(x)),
            (Variable::h(0), &RatFunc::var(Variable::t(2)) + &RatFunc::int(y)),
        ]);
        let fa = RatFunc::from_poly(a);
        let fb = RatFunc::from_poly(b);
        let lhs = (&fa * &fb).substitute(&bind).unwrap();
        let rhs = &fa.substitute(&bind).unwrap() * &fb.substitute(&bind).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        let lhs = (&fa + &fb).substitute(&bind).unwrap();
        let rhs = &fa.substitute(&bind).unwrap() + &fb.substitute(&bind).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_parse_round_trip(a in poly_strategy(), b in t_only_poly()) {
        prop_assume!(!b.is_zero());
        let f = RatFunc::new(a, b).unwrap();
        let back = parse_ratfunc(&f.to_string()).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_string(), f.to_string());
    }

    #[test]
    fn hodge_properties(g in 0u32..5, c1 in -6i64..7, c2 in -6i64..7, dual in any::<bool>()) {
        let c = &Polynomial::var(Variable::t(1)).scale(&qi(c1)) + &Polynomial::var(Variable::t(2)).scale(&qi(c2));
        let e = hodge_euler(g, &c, dual, 3);
        let zero_lambda: BTreeMap<_, _> = (1..=g).map(|i| (Variable::lambda(3, i), RatFunc::zero())).collect();
        prop_assert_eq!(
            RatFunc::from_poly(e.clone()).substitute(&zero_lambda).unwrap(),
            RatFunc::from_poly(c.pow(g))
        );
        let deg = RatFunc::from_poly(e).homogeneous_degree(&standard_grading);
        prop_assert_eq!(deg, Some(g as i64));
    }
}
