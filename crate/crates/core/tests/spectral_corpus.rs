use cocycle_core::spectral::{compare_e1_e2, convergence_check, shuffle_check, FilteredComplex};
use cocycle_core::{corpus, CyclicModule};

#[test]
fn pages_match_fiber_and_base_cohomology() {
    for name in corpus::NAMES {
        let e = corpus::by_name(name).unwrap();
        for m in [2, 4] {
            let a = CyclicModule::trivial(&e.group, m);
            for row in compare_e1_e2(&e, &a, 3).unwrap() {
                assert!(row.agree, "{name} Z/{m}: {row:?}");
            }
        }
    }
}

#[test]
fn stable_pages_match_filtration_quotients() {
    for name in corpus::NAMES {
        let e = corpus::by_name(name).unwrap();
        for m in [2, 4] {
            let a = CyclicModule::trivial(&e.group, m);
            for row in convergence_check(&e, &a, 3).unwrap() {
                assert!(row.agree, "{name} Z/{m}: {row:?}");
            }
        }
    }
}

#[test]
fn differentials_square_to_zero() {
    for name in corpus::NAMES {
        let e = corpus::by_name(name).unwrap();
        let a = CyclicModule::trivial(&e.group, 2);
        let fc = FilteredComplex::new(&e, &a, 3);
        for (r, p, q) in [(1, 0, 0), (1, 0, 1), (1, 1, 0), (2, 0, 1)] {
            let src = fc.page(r, p, q).unwrap();
            let (d, mid) = fc.differential(&src).unwrap();
            let (d2, _) = fc.differential(&mid).unwrap();
            assert!(d.then(&d2).is_zero(), "{name} r={r} ({p},{q})");
        }
    }
}

#[test]
fn shuffle_transform_identifies_e1() {
    for name in corpus::NAMES {
        let e = corpus::by_name(name).unwrap();
        for m in [2, 4] {
            let a = CyclicModule::trivial(&e.group, m);
            let s = shuffle_check(&e, &a).unwrap();
            assert!(
                s.descends && s.injective && s.surjective,
                "{name} Z/{m}: {s:?}"
            );
        }
    }
}
