use cocycle_core::brute;
use cocycle_core::cohomology::{cohomology_with, CohomologyOptions};
use cocycle_core::extension::{
    build_extension, cocycle_failure, explicit_isomorphism, extension_class, is_isomorphism,
};
use cocycle_core::spectral::FilteredComplex;
use cocycle_core::{cohomology, corpus, Cochain, CyclicModule, FiniteGroup};
use proptest::prelude::*;

fn small_group(i: usize) -> FiniteGroup {
    match i {
        0..=3 => FiniteGroup::cyclic(i + 1),
        _ => FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
    }
}

/// Trivial action, or `a.g^k = a (-1)^k` on cyclic groups of even order.
fn module(g: &FiniteGroup, m: u64, twisted: bool, i: usize) -> CyclicModule {
    if twisted && i % 2 == 1 && i < 4 {
        let mult = (0..g.order())
            .map(|k| if k % 2 == 0 { 1 } else { m - 1 })
            .collect();
        CyclicModule::from_multipliers(g, m, mult).unwrap()
    } else {
        CyclicModule::trivial(g, m)
    }
}

fn random_cochain(g: &FiniteGroup, m: u64, degree: usize, seed: &[u64]) -> Cochain {
    let size = g.order().pow(degree as u32);
    Cochain::from_values(
        g,
        m,
        degree,
        (0..size)
            .map(|k| seed[k % seed.len()].wrapping_mul(k as u64 + 1) % m)
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coboundary_squares_to_zero(i in 0usize..5, m in 2u64..=4, twisted: bool, degree in 0usize..3,
                                  seed in prop::collection::vec(0u64..1000, 1..8)) {
        let g = small_group(i);
        let a = module(&g, m, twisted, i);
        let c = random_cochain(&g, m, degree, &seed);
        prop_assert!(c.coboundary(&g, &a).coboundary(&g, &a).is_zero());
    }

    #[test]
    fn leibniz_rule(i in 0usize..5, m in 2u64..=4, p in 0usize..2, q in 0usize..2,
                    s1 in prop::collection::vec(0u64..1000, 1..6), s2 in prop::collection::vec(0u64..1000, 1..6)) {
        let g = small_group(i);
        let a = CyclicModule::trivial(&g, m);
        let x = random_cochain(&g, m, p, &s1);
        let y = random_cochain(&g, m, q, &s2);
        let mul = |u: u64, v: u64| u * v % m;
        let lhs = x.cup(&y, &g, &a, mul).coboundary(&g, &a);
        let first = x.coboundary(&g, &a).cup(&y, &g, &a, mul);
        let second = x.cup(&y.coboundary(&g, &a), &g, &a, mul);
        let rhs = if p % 2 == 0 { first.add(&second) } else { first.add(&second.neg()) };
        prop_assert_eq!(lhs.values(), rhs.values());
    }

    #[test]
    fn normalized_and_full_complexes_agree(i in 0usize..5, m in 2u64..=4, twisted: bool, degree in 0usize..3) {
        let g = small_group(i);
        let a = module(&g, m, twisted, i);
        let norm = cohomology(&g, &a, degree).unwrap().order();
        let full = cohomology_with(&g, &a, degree, CohomologyOptions { normalized: false, ..Default::default() }).unwrap();
        prop_assert_eq!(norm, full.order());
    }

    #[test]
    fn first_cohomology_counts_homomorphisms(i in 0usize..5, m in 2u64..=4) {
        let g = small_group(i);
        let a = CyclicModule::trivial(&g, m);
        prop_assert_eq!(cohomology(&g, &a, 1).unwrap().order(), brute::hom_count(&g, m));
    }

    #[test]
    fn engine_agrees_with_enumeration(i in 0usize..4, m in 2u64..=3, twisted: bool, degree in 1usize..3) {
        let g = small_group(i);
        let a = module(&g, m, twisted, i);
        if let Some(b) = brute::cohomology_order(&g, &a, degree) {
            prop_assert_eq!(cohomology(&g, &a, degree).unwrap().order(), b);
        }
    }

    #[test]
    fn product_is_associative_iff_cocycle(i in 0usize..5, m in 2u64..=4, seed in prop::collection::vec(0u64..1000, 1..6),
                                          use_coboundary: bool) {
        let g = small_group(i);
        let a = CyclicModule::trivial(&g, m);
        let chi = if use_coboundary {
            random_cochain(&g, m, 1, &seed).coboundary(&g, &a)
        } else {
            random_cochain(&g, m, 2, &seed)
        };
        let mu = m as usize;
        let table = FiniteGroup::from_fn((0..g.order() * mu).map(|k| k.to_string()).collect(), |x, y| {
            let v = (x % mu) as u64 + (y % mu) as u64 + chi.get(&[x / mu, y / mu]);
            g.mul(x / mu, y / mu) * mu + (v % m) as usize
        });
        // a normalized cochain is required for (1,0) to be the identity
        let normalized = (0..g.order()).all(|x| chi.get(&[0, x]) == 0 && chi.get(&[x, 0]) == 0);
        if normalized {
            prop_assert_eq!(table.is_ok(), cocycle_failure(&g, &chi).is_none());
        }
        prop_assert_eq!(build_extension(&g, &chi).is_ok(), cocycle_failure(&g, &chi).is_none());
    }

    #[test]
    fn cohomologous_cocycles_give_isomorphic_extensions(i in 0usize..5, m in 2u64..=4, class in 0u64..16,
                                                        f in prop::collection::vec(0u64..4, 4)) {
        let g = small_group(i);
        let a = CyclicModule::trivial(&g, m);
        let h2 = cohomology(&g, &a, 2).unwrap();
        let coords: Vec<u64> = (0..h2.group().rank()).map(|k| (class >> k) % h2.group().modulus(k)).collect();
        let chi = h2.element(&g, &coords);
        let mut fq: Vec<u64> = (0..g.order()).map(|k| f[k % f.len()] % m).collect();
        fq[g.identity()] = 0;
        let shift = Cochain::from_values(&g, m, 1, fq.clone()).coboundary(&g, &a);
        let e1 = build_extension(&g, &chi).unwrap();
        let e2 = build_extension(&g, &chi.add(&shift)).unwrap();
        prop_assert!(is_isomorphism(&e1.group, &e2.group, &explicit_isomorphism(&e1, &fq)));
        prop_assert!(e1.group.find_isomorphism(&e2.group).is_some());
    }

    #[test]
    fn extension_class_is_section_independent(k in 0usize..3, seed: u64) {
        let ext = [corpus::z4_over_z2(), corpus::klein_over_z2(), corpus::q8_over_center()][k].clone();
        let gen = ext.normal[1];
        let h2 = cohomology(&ext.quotient, &CyclicModule::trivial(&ext.quotient, 2), 2).unwrap();
        let c1 = extension_class(&ext, gen).unwrap();
        let c2 = extension_class(&ext.random_section(seed), gen).unwrap();
        prop_assert_eq!(h2.reduce(&c1).unwrap(), h2.reduce(&c2).unwrap());
    }

    #[test]
    fn coboundary_preserves_filtration(k in 0usize..4, p in 0i64..3, degree in 0usize..3,
                                       seed in prop::collection::vec(0u64..1000, 1..6)) {
        let ext = corpus::by_name(corpus::NAMES[k]).unwrap();
        let a = CyclicModule::trivial(&ext.group, 2);
        let fc = FilteredComplex::new(&ext, &a, degree);
        let space = fc.space(degree);
        let level = fc.level(degree, p);
        let mut coords = vec![0u64; space.dim()];
        for (j, &l) in level.iter().enumerate() {
            coords[l] = seed[j % seed.len()].wrapping_mul(j as u64 + 3) % 2;
        }
        let c = space.cochain(&ext.group, 2, &coords);
        prop_assert!(fc.in_level(&c, p));
        prop_assert!(fc.in_level(&c.coboundary(&ext.group, &a), p));
    }
}
