mod common;

use std::collections::BTreeSet;

use common::*;
use ech_core::{decompositions, enumerate_generators, ConvexGenerator, IndexFamily, LabelMode, ToricDomain};
use proptest::prelude::*;

fn naive_enumeration(
    index: u64,
    bound: &ech_core::Rational,
    domain: &ToricDomain,
    labels: LabelMode,
) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for x0 in 0..=index {
        for y0 in 0..=index - x0 {
            for path in naive_paths(x0, y0) {
                let gens = match labels {
                    LabelMode::EllipticOnly => vec![elliptic(&path)],
                    LabelMode::All => labellings(&path),
                };
                for g in gens {
                    if g.ech_index() == index && domain.action(&g) <= *bound {
                        out.insert(g.to_string());
                    }
                }
            }
        }
    }
    out
}

#[test]
fn enumeration_matches_naive_oracle() {
    let domains = [
        ToricDomain::polydisk(r(3, 2), r(1, 1)).unwrap(),
        ToricDomain::ellipsoid(r(2, 1), r(1, 1)).unwrap(),
        ToricDomain::ellipsoid(r(1, 1), r(1, 1)).unwrap(),
        "PL[(0,2),(1,2),(3,0)]".parse().unwrap(),
    ];
    for domain in &domains {
        for index in [2, 4, 5, 6, 8, 10] {
            for bound in [r(3, 1), r(9, 2), r(7, 1)] {
                for labels in [LabelMode::EllipticOnly, LabelMode::All] {
                    let fast = enumerate_generators(index, &bound, domain, labels).unwrap();
                    let set: BTreeSet<String> = fast.iter().map(|g| g.to_string()).collect();
                    assert_eq!(set.len(), fast.len(), "duplicates for {domain} I={index}");
                    assert_eq!(set, naive_enumeration(index, &bound, domain, labels), "{domain} I={index} A<={bound}");
                }
            }
        }
    }
}

#[test]
fn closed_forms_match_for_all_small_families() {
    let mut checked = 0;
    for k in 0..=12 {
        for m in 0..=12 {
            let mut families =
                vec![IndexFamily::Rectangle { k, m }, IndexFamily::Triangle { k, m }, IndexFamily::Hook { k, m }];
            for d in 1..=12 {
                families.push(IndexFamily::Trapezoid { k, m, d });
                families.push(IndexFamily::Power { p: k, q: m, d });
            }
            for f in families {
                let (Ok(g), Ok(i)) = (f.generator(), f.closed_form()) else { continue };
                assert_eq!(g.ech_index(), i, "{f:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 3000);
}

#[test]
fn index_between_chord_and_rectangle() {
    for x0 in 1..=8 {
        for y0 in 1..=8 {
            let rectangle = IndexFamily::Rectangle { k: x0, m: y0 }.generator().unwrap().ech_index();
            let chord = ConvexGenerator::segment(x0, y0).unwrap().ech_index();
            for path in naive_paths(x0, y0) {
                assert!(elliptic(&path).ech_index() >= chord, "{path:?}");
                for g in labellings(&path) {
                    assert!(g.ech_index() <= rectangle, "{g}");
                }
            }
        }
    }
}

#[test]
fn index_bounded_by_hook_without_horizontal_edge() {
    for x0 in 1..=8 {
        for y0 in 1..=8 {
            let hook = IndexFamily::Hook { k: x0, m: y0 }.generator().unwrap().ech_index();
            for path in naive_paths(x0, y0) {
                if path.iter().any(|&(run, drop, _)| (run, drop) == (1, 0)) {
                    continue;
                }
                for g in labellings(&path) {
                    assert!(g.ech_index() <= hook, "{g}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn pick_oracle(g in arb_generator(false)) {
        prop_assert_eq!(g.lattice_count(), pick_count(&g));
    }

    #[test]
    fn parse_round_trip(g in arb_generator(true)) {
        let back: ConvexGenerator = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn index_parity(g in arb_generator(true)) {
        prop_assert_eq!(g.ech_index() % 2, g.hyperbolic_count() % 2);
        if g.is_elliptic() {
            prop_assert_eq!(g.ech_index() % 2, 0);
        }
    }

    #[test]
    fn product_is_associative(a in arb_generator(true), b in arb_generator(true), c in arb_generator(true)) {
        let left = a.product(&b).and_then(|ab| ab.product(&c));
        let right = b.product(&c).and_then(|bc| a.product(&bc));
        match (left, right) {
            (Ok(l), Ok(r)) => prop_assert_eq!(l, r),
            (l, r) => prop_assert!(l.is_err() && r.is_err()),
        }
    }

    #[test]
    fn decompositions_reassemble(g in arb_generator(true), n in 1usize..4) {
        let single = decompositions(&g, 1);
        prop_assert_eq!(single, vec![vec![g.clone()]]);
        let all = decompositions(&g, n);
        let distinct: BTreeSet<String> =
            all.iter().map(|d| d.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" | ")).collect();
        prop_assert_eq!(distinct.len(), all.len());
        for parts in all {
            prop_assert_eq!(parts.len(), n);
            prop_assert_eq!(ConvexGenerator::product_all(&parts).unwrap(), g.clone());
        }
    }
}
