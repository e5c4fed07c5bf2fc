mod common;

use common::*;
use ech_core::{Rational, ToricDomain};
use proptest::prelude::*;

fn pl_fixtures() -> Vec<ToricDomain> {
    ["PL[(0,2),(1,2),(3,0)]", "PL[(0,3),(2,2),(5/2,1),(3,0)]", "PL[(0,1),(7/2,0)]"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn action_is_additive(d in arb_domain(), a in arb_generator(true), b in arb_generator(true)) {
        if let Ok(ab) = a.product(&b) {
            prop_assert_eq!(d.action(&ab), d.action(&a) + d.action(&b));
            for pl in pl_fixtures() {
                prop_assert_eq!(pl.action(&ab), pl.action(&a) + pl.action(&b));
            }
        }
        prop_assert!(d.action(&a).is_positive());
    }

    #[test]
    fn support_point_reduction(a in arb_positive_rational(), b in arb_positive_rational(), g in arb_generator(true)) {
        let p = ToricDomain::polydisk(a.clone(), b.clone()).unwrap();
        let x = Rational::from(g.x());
        let y = Rational::from(g.y());
        prop_assert_eq!(p.action(&g), &b * &x + &a * &y);

        // lowest line bx + ay = c with every vertex of the path below it
        let e = ToricDomain::ellipsoid(a.clone(), b.clone()).unwrap();
        let tangent = g
            .vertices()
            .into_iter()
            .map(|(vx, vy)| &b * &Rational::from(vx) + &a * &Rational::from(vy))
            .max()
            .unwrap();
        prop_assert_eq!(e.action(&g), tangent);
    }

    #[test]
    fn ellipsoid_action_scales(a in arb_positive_rational(), b in arb_positive_rational(), l in arb_positive_rational(), g in arb_generator(true)) {
        let e = ToricDomain::ellipsoid(a.clone(), b.clone()).unwrap();
        let scaled = ToricDomain::ellipsoid(&l * &a, &l * &b).unwrap();
        prop_assert_eq!(scaled.action(&g), &l * &e.action(&g));
        let p = ToricDomain::polydisk(a.clone(), b.clone()).unwrap();
        let scaled = ToricDomain::polydisk(&l * &a, &l * &b).unwrap();
        prop_assert_eq!(scaled.action(&g), &l * &p.action(&g));
    }

    #[test]
    fn action_is_monotone(
        a in arb_positive_rational(),
        b in arb_positive_rational(),
        da in arb_positive_rational(),
        db in arb_positive_rational(),
        g in arb_generator(true),
    ) {
        let (a2, b2) = (&a + &da, &b + &db);
        let small = ToricDomain::ellipsoid(a.clone(), b.clone()).unwrap();
        let big = ToricDomain::ellipsoid(a2.clone(), b2.clone()).unwrap();
        prop_assert!(small.action(&g) <= big.action(&g));
        let small = ToricDomain::polydisk(a.clone(), b.clone()).unwrap();
        let big = ToricDomain::polydisk(a2, b2).unwrap();
        prop_assert!(small.action(&g) <= big.action(&g));
        // E(a,b) sits inside P(a,b)
        let e = ToricDomain::ellipsoid(a.clone(), b.clone()).unwrap();
        prop_assert!(e.action(&g) <= small.action(&g));
    }

    #[test]
    fn domain_round_trip(d in arb_domain()) {
        let back: ToricDomain = d.to_string().parse().unwrap();
        prop_assert_eq!(back, d);
    }
}

#[test]
fn pl_fixtures_agree_with_closed_shapes() {
    let rect: ToricDomain = "PL[(0,1),(3/2,1),(3/2,0)]".parse().unwrap();
    let tri: ToricDomain = "PL[(0,1),(2,0)]".parse().unwrap();
    let p = ToricDomain::polydisk(r(3, 2), r(1, 1)).unwrap();
    let e = ToricDomain::ellipsoid(r(2, 1), r(1, 1)).unwrap();
    for s in ["e(1,1)", "e(1,0)^2 e(0,1)", "e(2,1) h(2,1) e(1,2)", "e(5,2)^2", "e(1,0)^3 e(3,2) e(0,1)"] {
        let x = g(s);
        assert_eq!(rect.action(&x), p.action(&x), "{s}");
        assert_eq!(tri.action(&x), e.action(&x), "{s}");
    }
    assert_eq!(rect.volume(), p.volume());
    assert_eq!(tri.volume(), e.volume());
}
