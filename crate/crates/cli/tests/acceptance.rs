//! The twelve acceptance criteria at their stated tolerances, one line each.
//!
//! Criterion 7 evaluates the four-term relation exactly as written. It does not hold
//! (the combination converges to 2C(g⁻¹h, g), not to an integer), so it is expected
//! red; the test fails if it ever turns green, since that would contradict the analysis.

use std::io::Write;
use std::time::{Duration, Instant};

use cocycle_core::extension::round_trip_all;
use cocycle_core::seven_term::seven_term_report_checked;
use cocycle_core::spectral::{compare_e1_e2, convergence_check};
use cocycle_core::{cohomology, corpus, CyclicModule};
use cocycle_lab::suites::{cyclic_table, round_trip_bases, CYCLIC_PAIRS, MODULI};
use cocycle_loop::checks::{self, CheckResult};
use cocycle_loop::diffeo::GaussRule;

const EXPECTED_RED: [u32; 1] = [7];

struct Outcome {
    id: u32,
    pass: bool,
    text: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn order_at_least(r: &CheckResult, p: f64) -> bool {
    r.observed_order.is_some_and(|o| o >= p)
}

fn fmt_order(r: &CheckResult) -> String {
    r.observed_order
        .map_or("none".into(), |o| format!("{o:.2}"))
}

fn c1() -> Outcome {
    let (rows, t) = timed(|| cyclic_table(&CYCLIC_PAIRS).unwrap());
    let pass = rows
        .iter()
        .all(|r| r.order == r.gcd as u128 && r.brute_force == Some(r.order))
        && t.as_secs_f64() < 5.0;
    Outcome {
        id: 1,
        pass,
        text: format!(
            "H^1, H^2 of Z/n with Z/m have order gcd(n,m), matching enumeration ({} rows, {t:.2?})",
            rows.len()
        ),
    }
}

fn c2() -> Outcome {
    let (res, t) = timed(|| {
        let mut bad = Vec::new();
        for name in corpus::NAMES {
            let ext = corpus::by_name(name).unwrap();
            for m in MODULI {
                let rep =
                    seven_term_report_checked(&ext, &CyclicModule::trivial(&ext.group, m), 11)
                        .unwrap();
                if !rep.nodes.iter().all(|n| n.exact) {
                    bad.push(format!("{name}/Z{m}"));
                }
            }
        }
        bad
    });
    let pass = res.is_empty() && t.as_secs_f64() < 120.0;
    Outcome {
        id: 2,
        pass,
        text: format!(
            "seven-term exactness on 4 extensions x A in {{Z/2, Z/4}} (failures {res:?}, {t:.2?})"
        ),
    }
}

fn c3() -> Outcome {
    let mut rows = 0;
    let mut bad = Vec::new();
    for name in corpus::NAMES {
        let ext = corpus::by_name(name).unwrap();
        for m in MODULI {
            let a = CyclicModule::trivial(&ext.group, m);
            let cmp = compare_e1_e2(&ext, &a, 3).unwrap();
            let conv = convergence_check(&ext, &a, 3).unwrap();
            rows += cmp.len() + conv.len();
            bad.extend(
                cmp.iter()
                    .chain(&conv)
                    .filter(|r| !r.agree)
                    .map(|r| format!("{name}/Z{m} E{}^{},{}", r.r, r.p, r.q)),
            );
        }
    }
    Outcome { id: 3, pass: bad.is_empty(), text: format!("E2 orders and stable pages against filtration quotients, p+q <= 3 ({rows} rows, mismatches {bad:?})") }
}

fn c4() -> Outcome {
    let (r, t) = timed(|| checks::delta_c_study(&[64, 128, 256]).unwrap());
    let pass = order_at_least(&r, 1.5) && t.as_secs_f64() < 60.0;
    Outcome {
        id: 4,
        pass,
        text: format!(
            "delta C residual {:.2e} at 256^2, observed order {} ({t:.2?})",
            r.residual,
            fmt_order(&r)
        ),
    }
}

fn c5() -> Outcome {
    let r = checks::torus_check(256);
    Outcome {
        id: 5,
        pass: (r.value + 1.0).abs() <= 1e-3,
        text: format!("torus pair C = {:.12} against -1 at 256^2", r.value),
    }
}

fn int_line(id: u32, what: &str, r: &CheckResult) -> Outcome {
    let d = r.nearest_int_distance.unwrap();
    Outcome {
        id,
        pass: d <= 1e-2 && order_at_least(r, 1.0),
        text: format!(
            "{what}: nearest-integer distance {d:.2e} at {:?}, observed order {}",
            r.grids,
            fmt_order(r)
        ),
    }
}

fn c6() -> Outcome {
    int_line(
        6,
        "C(g,h) + delta Lambda(g,h)",
        &checks::coboundary_relation_check(&[16, 32, 64], 0),
    )
}

fn c7() -> Outcome {
    let r = checks::conjugation_relation_check(&[16, 32, 64], 0);
    let mut o = int_line(7, "four-term relation as written", &r);
    o.text.push_str(&format!(
        "; equals 2C(g^-1 h, g) = {:.5}",
        r.detail["two_c_ginv_h_g"]
    ));
    o
}

fn c8() -> Outcome {
    let r = checks::wzw_check(64, 0);
    let (l1, shift, k) = (
        r.detail["lambda_generator"],
        r.detail["shift_by_generator"],
        r.detail["lambda_constant"],
    );
    let pass = (l1.abs() - 1.0).abs() <= 1e-2 && (shift.abs() - 1.0).abs() <= 2e-2 && k == 0.0;
    Outcome {
        id: 8,
        pass,
        text: format!(
            "Lambda(L1) = {l1:.5}, Lambda(K L1) - Lambda(K) = {shift:.5}, Lambda(const) = {k}"
        ),
    }
}

fn c9() -> Outcome {
    let s = checks::stokes_check(256, 0);
    let i = checks::infinitesimal_check(128, 0);
    let ratios = [i.detail["ratio_coarse"], i.detail["ratio_fine"]];
    let pass = s.detail["estimate_margin"] >= 0.0 && ratios.iter().all(|r| (3.0..=5.0).contains(r));
    Outcome {
        id: 9,
        pass,
        text: format!(
            "Stokes gap {:.2e} within estimate (margin {:.2e}); epsilon-halving ratios {:.3}, {:.3}; limit sign {:+}",
            s.residual, s.detail["estimate_margin"], ratios[0], ratios[1], i.detail["sign"]
        ),
    }
}

fn c10() -> Outcome {
    let r = checks::diffeo_cover_check(GaussRule::default());
    let pass = (r.value + 0.5).abs() <= 1e-6 && r.detail["delta_chi"] <= 1e-8;
    Outcome {
        id: 10,
        pass,
        text: format!(
            "chi(rotations) = {:.15}, delta chi {:.2e}",
            r.value, r.detail["delta_chi"]
        ),
    }
}

fn c11() -> Outcome {
    let r = checks::bott_virasoro_check(&[8, 12, 16]).unwrap();
    let pass = r.detail["rotation_value"] == 0.0 && order_at_least(&r, 1.5);
    Outcome {
        id: 11,
        pass,
        text: format!(
            "rotations give {}; delta residual mod Z {:.2e} at n = 16, observed order {}",
            r.detail["rotation_value"],
            r.residual,
            fmt_order(&r)
        ),
    }
}

fn c12() -> Outcome {
    let mut total = 0;
    let mut pass = true;
    for (_, base) in round_trip_bases() {
        for m in MODULI {
            let h2 = cohomology(&base, &CyclicModule::trivial(&base, m), 2).unwrap();
            let trips = round_trip_all(&base, m).unwrap();
            pass &= trips.len() as u128 == h2.order() && trips.iter().all(|t| t.pass);
            total += trips.len();
        }
    }
    Outcome { id: 12, pass, text: format!("extension round trip over all of H^2(Q; Z/m), Q in {{Z/2, Z/2xZ/2}}, m in {{2, 4}} ({total} classes)") }
}

#[test]
fn acceptance() {
    let outcomes = [
        c1(),
        c2(),
        c3(),
        c4(),
        c5(),
        c6(),
        c7(),
        c8(),
        c9(),
        c10(),
        c11(),
        c12(),
    ];
    let mut out = std::io::stdout().lock();
    for o in &outcomes {
        writeln!(
            out,
            "criterion {:>2}: {}  {}",
            o.id,
            if o.pass { "PASS" } else { "FAIL" },
            o.text
        )
        .unwrap();
    }
    let green = outcomes.iter().filter(|o| o.pass).count();
    writeln!(
        out,
        "acceptance: {green}/12 pass; expected red: {EXPECTED_RED:?}"
    )
    .unwrap();
    for o in &outcomes {
        assert_eq!(
            o.pass,
            !EXPECTED_RED.contains(&o.id),
            "criterion {}: {}",
            o.id,
            o.text
        );
    }
}
