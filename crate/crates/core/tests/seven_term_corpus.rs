use cocycle_core::seven_term::{compatible_lambda, seven_term_report_checked, RestrictionKernel};
use cocycle_core::spectral::FiberCohomology;
use cocycle_core::{corpus, Cochain, CyclicModule, ExtensionData};

#[test]
fn sequences_are_exact_on_the_corpus() {
    for name in corpus::NAMES {
        let e = corpus::by_name(name).unwrap();
        for m in [2, 3, 4] {
            let a = CyclicModule::trivial(&e.group, m);
            let r = seven_term_report_checked(&e, &a, 5).unwrap();
            let orders: Vec<u64> = r.terms.iter().map(|t| t.order).collect();
            println!("{name} Z/{m}: terms {orders:?}");
            assert!(r.all_exact(), "{name} Z/{m}: {r:#?}");
        }
    }
}

/// The coset-indexed formula with `C(g^-1 n, g) - C(g^-1, n)` as its cocycle part.
fn literal_component(e: &ExtensionData, c: &Cochain, l: &Cochain, h: usize, m: u64) -> Cochain {
    let g = &e.group;
    let hi = g.inv(h);
    Cochain::from_fn(&e.sub, m, 1, |args| {
        let x = e.normal[args[0]];
        let conj = g.conj(x, h);
        let lam = l.get(&[e.normal_index(conj).unwrap()]) + m - l.get(&args[..1]);
        (lam + c.get(&[g.mul(hi, x), h]) + m - c.get(&[hi, x])) % m
    })
}

#[test]
fn literal_coset_formula_fails_to_be_a_cocycle() {
    // Q8 over its center with Z/2: the literal formula produces non-cocycles on N
    // for some compatible pairs, while the shuffle-derived form never does.
    let e = corpus::q8_over_center();
    let a = CyclicModule::trivial(&e.group, 2);
    let fiber = FiberCohomology::new(&e, &a, 1).unwrap();
    let kres = RestrictionKernel::new(&e, &a);
    let mut failures = 0;
    for i in 0..kres.group().rank() {
        let c = kres.representative(&e.group, i);
        let l = compatible_lambda(&e, &a, &c).unwrap();
        for h in 0..e.group.order() {
            if !fiber.h.is_cocycle(&literal_component(&e, &c, &l, h, 2)) {
                failures += 1;
            }
        }
    }
    println!("literal formula: {failures} non-cocycle components");
    assert!(failures > 0);
}
