//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Timings are wall-clock for the work named in each criterion.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use ratblow::blowdown::{blowdown_invariants, boundary_image, boundary_lens, h1_presentation, signed_residue, BlowdownConfig};
use ratblow::construction::pencil::{fiber_class, LINES, MEMBERS};
use ratblow::construction::verify::{canonical_document, verify_paper, VerifyOptions};
use ratblow::hj::{hj_expand, hj_value, meridian_coefficients, recognize_wahl, wahl_chain, HjChain, HjFraction, WahlParams};
use ratblow::surface::{CenterSpec, MarkedSurface};
use ratblow::zlinalg::{determinant, plumbing_matrix, snf, IntMatrix};

const C6_1: [i64; 5] = [8, 2, 2, 2, 2];
const C110_67: [i64; 11] = [2, 3, 5, 7, 2, 2, 3, 2, 2, 3, 3];
const PENCIL_BLOWUPS: usize = 9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn expand(p: i64, q: i64) -> HjChain {
    hj_expand(HjFraction::new(p, q).unwrap())
}

fn criterion_1() -> Outcome {
    let ((a, b, wa, wb), dt) = timed(|| {
        let a = expand(36, 5);
        let b = expand(12100, 7369);
        let wa = recognize_wahl(&a);
        let wb = recognize_wahl(&b);
        (a, b, wa, wb)
    });
    let pass = a.coefficients() == C6_1
        && b.coefficients() == C110_67
        && wa.map(|w| (w.n, w.a)) == Some((6, 1))
        && wb.map(|w| (w.n, w.a)) == Some((110, 67))
        && dt < Duration::from_millis(1);
    outcome(pass, format!("36/5 -> {:?} {:?}, 12100/7369 -> {:?} {:?} in {dt:?}", a.coefficients(), wa, b.coefficients(), wb))
}

fn criterion_2() -> Outcome {
    let (res, dt) = timed(|| {
        let short = meridian_coefficients(&HjChain::new(C6_1.to_vec()).unwrap()).unwrap();
        let long = meridian_coefficients(&HjChain::new(C110_67.to_vec()).unwrap()).unwrap();
        let mut bad = Vec::new();
        for p in 2..=200i64 {
            for q in (1..p).filter(|q| p.gcd(q) == 1) {
                if meridian_coefficients(&expand(p, q)).unwrap().order != p {
                    bad.push((p, q));
                }
            }
        }
        (short, long, bad)
    });
    let (short, long, bad) = res;
    let pass = short.coefficients == [1, 8, 15, 22, 29]
        && short.order == 36
        && long.order == 12100
        && bad.is_empty()
        && dt < Duration::from_secs(1);
    outcome(
        pass,
        format!("{:?}/{}, long order {}, {} bad pairs for p <= 200, in {dt:?}", short.coefficients, short.order, long.order, bad.len()),
    )
}

fn criterion_3() -> Outcome {
    let doc = canonical_document();
    let (res, dt) = timed(|| {
        let z = doc.build_surface(None).unwrap();
        let b = blowdown_invariants(&z, &doc.chains);
        (z.invariants(), b)
    });
    let (z, b) = res;
    let Ok(b) = b else { return outcome(false, format!("blow-down failed: {b:?}")) };
    let pass = (z.blowups, z.b2, z.euler, z.k2) == (22, 23, 25, -13)
        && (b.euler, b.signature, b.b2_plus, b.k2, b.chi_h) == (9, -5, 1, 3, 1)
        && dt < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "Z: N={} b2={} e={} K^2={}; blow-down: e={} sigma={} b2+={} K^2={} chi_h={}; {dt:?}",
            z.blowups, z.b2, z.euler, z.k2, b.euler, b.signature, b.b2_plus, b.k2, b.chi_h
        ),
    )
}

fn criterion_4() -> Outcome {
    let doc = canonical_document();
    let z = doc.build_surface(None).unwrap();
    let (long, short) = (doc.chains[0].clone(), doc.chains[1].clone());
    let (res, dt) = timed(|| {
        let full = h1_presentation(&BlowdownConfig::new(z.clone(), doc.chains.clone(), Vec::new())).unwrap();
        let w = h1_presentation(&BlowdownConfig::new(z.clone(), vec![long], vec![short.clone()])).unwrap();
        let alpha = w.meridian_class(&short.name, &short.curves[0]).unwrap();
        let lens = boundary_lens(&z, &short).unwrap();
        (full, w, alpha, lens)
    });
    let (full, w, alpha, lens) = res;
    let shape = (full.relations.rows(), full.relations.cols());
    let pass = full.group().to_string() == "Z/2"
        && w.group().to_string() == "Z/2"
        && !alpha.is_zero()
        && alpha.order == Some(BigInt::from(2))
        && lens.complement.to_string() == "L(36,-5)"
        && shape.0 <= 25
        && shape.1 <= 16
        && dt < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "H1 = {}, H1(W) = {}, alpha order {:?}, boundary {}, presentation {}x{}, {dt:?}",
            full.group(),
            w.group(),
            alpha.order.map(|o| o.to_string()),
            lens.complement,
            shape.0,
            shape.1
        ),
    )
}

fn criterion_5() -> Outcome {
    let doc = canonical_document();
    let z = doc.build_surface(None).unwrap();
    let (long, short) = (&doc.chains[0], &doc.chains[1]);
    let (found, dt) = timed(|| {
        let mut found = Vec::new();
        for c in &doc.blowups[PENCIL_BLOWUPS..] {
            let e = &z.curve(&c.label).unwrap().class;
            if long.curves.iter().all(|x| z.curve(x).unwrap().class.dot(e) == 0) {
                let r = signed_residue(boundary_image(&z, e, short).unwrap(), 36);
                if r.abs() == 2 {
                    found.push(format!("{} -> {r}", c.label));
                }
            }
        }
        found
    });
    outcome(!found.is_empty() && dt < Duration::from_secs(1), format!("witnesses {found:?} mod 36, {dt:?}"))
}

fn criterion_6() -> Outcome {
    let (r, dt) = timed(|| verify_paper(&VerifyOptions { assignment: None, all_solutions: true }));
    let Some(s) = &r.solutions else { return outcome(false, "no solution summary") };
    let pass = s.pencils >= 1
        && !s.solutions.is_empty()
        && s.consistent
        && s.canonical_included
        && r.passed
        && dt < Duration::from_secs(300);
    outcome(
        pass,
        format!(
            "{} pencil(s), {} solution(s), consistent={}, canonical included={}, {dt:?}",
            s.pencils,
            s.solutions.len(),
            s.consistent,
            s.canonical_included
        ),
    )
}

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(-9i64..=9, r * c)
            .prop_map(move |v| IntMatrix::from_rows(c, &v.chunks(c).map(<[i64]>::to_vec).collect::<Vec<_>>()).unwrap())
    })
}

fn snf_contract(m: &IntMatrix) -> bool {
    let r = snf(m);
    let product_ok = r.u.mul(m).and_then(|x| x.mul(&r.v)).is_ok_and(|x| x == r.d);
    let unimodular = determinant(&r.u).unwrap().abs().is_one() && determinant(&r.v).unwrap().abs().is_one();
    let diagonal = (0..r.d.rows()).all(|i| (0..r.d.cols()).all(|j| i == j || r.d.get(i, j).is_zero()));
    let d = r.diagonal();
    let divides = d.iter().all(|x| !x.is_negative())
        && d.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() });
    product_ok && unimodular && diagonal && divides
}

fn plumbing_det(c: &[i64]) -> BigInt {
    determinant(&plumbing_matrix(c)).unwrap().abs()
}

fn wahl_closure(moves: usize) -> Vec<Vec<i64>> {
    let mut seen = std::collections::BTreeSet::from([vec![4]]);
    let mut frontier = vec![vec![4]];
    for _ in 0..moves {
        let mut next = Vec::new();
        for c in &frontier {
            let mut left = vec![2];
            left.extend(c);
            *left.last_mut().unwrap() += 1;
            let mut right = c.clone();
            right[0] += 1;
            right.push(2);
            for s in [left, right] {
                if seen.insert(s.clone()) {
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    seen.into_iter().collect()
}

/// Blow-up bilinearity and `2e + 3σ = K²` along one random construction.
fn random_construction_ok(degrees: &[i64], picks: &[(u8, Option<u8>)]) -> bool {
    let mut s = MarkedSurface::projective_plane();
    for (i, &d) in degrees.iter().enumerate() {
        s = s.add_plane_curve(&format!("C{i}"), d).unwrap();
    }
    for (k, &(mask, node)) in picks.iter().enumerate() {
        let names: Vec<String> = s.curve_names().map(str::to_string).collect();
        let node_of = node.map(|j| names[j as usize % names.len()].clone());
        let simple: Vec<&str> = names
            .iter()
            .enumerate()
            .filter(|(i, n)| mask & (1 << (i % 8)) != 0 && Some(n.as_str()) != node_of.as_deref())
            .map(|(_, n)| n.as_str())
            .take(3)
            .collect();
        let mut c = CenterSpec::new(format!("e{}", k + 1), &simple);
        c.node_of = node_of;
        let Ok(t) = s.blow_up(&c) else { continue };
        for a in &names {
            for b in &names {
                if s.pair(a, b).unwrap() - t.pair(a, b).unwrap() != c.multiplicity(a) * c.multiplicity(b) {
                    return false;
                }
            }
            if t.pair(&c.label, a).unwrap() != c.multiplicity(a) {
                return false;
            }
        }
        s = t;
    }
    let inv = s.invariants();
    2 * inv.euler + 3 * inv.signature == inv.k2 && s.canonical_class().square() == inv.k2
}

fn criterion_7() -> Outcome {
    let (res, dt) = timed(|| {
        let mut notes = Vec::new();
        let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
        let snf_ok = runner.run(&small_matrix(), |m| {
            prop_assert!(snf_contract(&m));
            Ok(())
        });
        notes.push(format!("snf x1000 {}", if snf_ok.is_ok() { "ok" } else { "FAILED" }));

        let mut hj_ok = true;
        let mut det_ok = true;
        let mut pairs = 0;
        for p in 2..=200i64 {
            for q in (1..p).filter(|q| p.gcd(q) == 1) {
                let c = expand(p, q);
                pairs += 1;
                hj_ok &= hj_value(&c).ok() == HjFraction::new(p, q).ok();
                det_ok &= plumbing_det(c.coefficients()) == BigInt::from(p);
            }
        }
        notes.push(format!("hj roundtrip on {pairs} pairs {}", if hj_ok { "ok" } else { "FAILED" }));

        let closure = wahl_closure(10);
        let mut wahl_ok = closure.contains(&C6_1.to_vec()) && closure.contains(&C110_67.to_vec());
        for s in &closure {
            let c = HjChain::new(s.clone()).unwrap();
            match recognize_wahl(&c) {
                Some(w) => {
                    wahl_ok &= wahl_chain(w).ok() == Some(c.clone());
                    det_ok &= plumbing_det(s) == BigInt::from(w.n * w.n);
                }
                None => wahl_ok = false,
            }
        }
        wahl_ok &= WahlParams::new(110, 67).is_ok();
        notes.push(format!("wahl closure of {} strings {}", closure.len(), if wahl_ok { "ok" } else { "FAILED" }));
        notes.push(format!("plumbing determinants {}", if det_ok { "ok" } else { "FAILED" }));

        let mut runner = TestRunner::new(Config { cases: 400, failure_persistence: None, ..Config::default() });
        let strategy = (
            prop::collection::vec(1i64..=4, 1..=4),
            prop::collection::vec((any::<u8>(), prop::option::weighted(0.3, any::<u8>())), 0..12),
        );
        let blowup_ok = runner.run(&strategy, |(d, p)| {
            prop_assert!(random_construction_ok(&d, &p));
            Ok(())
        });
        notes.push(format!("random blow-ups x400 {}", if blowup_ok.is_ok() { "ok" } else { "FAILED" }));
        (snf_ok.is_ok() && hj_ok && wahl_ok && det_ok && blowup_ok.is_ok(), notes)
    });
    let (ok, notes) = res;
    outcome(ok && dt < Duration::from_secs(30), format!("{}; {dt:?}", notes.join(", ")))
}

fn criterion_8() -> Outcome {
    let doc = canonical_document();
    let (res, dt) = timed(|| {
        let y = doc.build_surface(Some(PENCIL_BLOWUPS)).unwrap();
        let f = fiber_class(&y);
        let i7: Vec<&str> = LINES.iter().copied().chain(["E1", "E2", "E3", "E4"]).collect();
        // Euler number of a cycle of n spheres is n; a nodal cubic contributes 1.
        let nodal = ["F1", "F2", "F3"].iter().filter(|n| y.genus_a(n).ok() == Some(1) && y.curve(n).unwrap().node_budget == 1).count();
        let budget = i7.len() as i64 + MEMBERS.len() as i64 + nodal as i64;
        let k_is_minus_f = (&y.canonical_class() + &f).coefficients().iter().all(|&x| x == 0);
        let sections = ["E5", "E6", "E7", "E8", "E9"];
        let sections_ok = sections.iter().enumerate().all(|(i, a)| {
            y.self_int(a).unwrap() == -1
                && y.curve(a).unwrap().class.dot(&f) == 1
                && sections[i + 1..].iter().all(|b| y.pair(a, b).unwrap() == 0)
        });
        (y.invariants().euler, budget, f.square(), k_is_minus_f, sections_ok)
    });
    let (e, budget, f2, k, sections) = res;
    let pass = e == 12 && budget == 12 && f2 == 0 && k && sections && dt < Duration::from_secs(1);
    outcome(pass, format!("e(Y)={e}, 7+2+3 budget={budget}, F^2={f2}, K=-F {k}, five (-1)-sections {sections}, {dt:?}"))
}

fn main() {
    let criteria: [(u8, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        let o = f();
        println!("criterion {n}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {}/8 criteria pass", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
