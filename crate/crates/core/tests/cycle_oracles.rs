//! Quasi search against a literal product loop, and the condition checks
//! on the moduli with known outcomes.

use fermat_hodge::cycles::{
    check_condition, is_quasi_decomposable, scan_fourfolds, standard_elements, EquationPool, LevelStore, Outcome,
};
use fermat_hodge::hilbert::{hilbert_basis, BasisOptions};
use fermat_hodge::monoid::{is_member, level_one, Modulus, MonoidVector};

fn md(m: u32) -> Modulus {
    Modulus::new(m).unwrap()
}

/// The product loop over `(b, c, d)` with `c, d` among the levels `1..=y`.
fn triple_loop(x: &MonoidVector, ones: &[MonoidVector], possible: &[MonoidVector]) -> bool {
    for b in ones {
        let s = x.add(b);
        for c in possible {
            for d in possible {
                if s == c.add(d) && c != x && d != x {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn subtraction_search_matches_triple_loop() {
    for m in 2..=12 {
        let m = md(m);
        let basis = hilbert_basis(m, &BasisOptions::completion());
        let top = basis.max_level().max(2);
        let store = LevelStore::build(m, top);
        let ones = level_one(m);
        let eq = EquationPool::new(m);
        // Every basis element, plus every member of the two lowest levels.
        let mut targets = basis.elements.clone();
        targets.extend(store.level(2).unwrap().iter().cloned());
        for x in &targets {
            let y = x.level();
            let possible: Vec<MonoidVector> = (1..=y).flat_map(|k| store.level(k).unwrap().to_vec()).collect();
            let expect = triple_loop(x, &ones, &possible);
            let by_store = is_quasi_decomposable(x, m, &ones, &store).unwrap();
            let by_eq = is_quasi_decomposable(x, m, &ones, &eq).unwrap();
            assert_eq!(by_store.is_some(), expect, "m={m} x={x}");
            assert_eq!(by_store, by_eq, "m={m} x={x}");
            if let Some(w) = by_eq {
                assert!(w.certifies(x, m));
            }
        }
    }
}

#[test]
fn condition_holds_up_to_twenty() {
    for m in 2..=20 {
        let r = check_condition(md(m), None, false, &BasisOptions::completion()).unwrap();
        assert!(r.verdict, "m={m}");
        assert!(r.basis_complete);
    }
}

#[test]
fn twenty_one_and_twenty_seven_with_exclusion() {
    for m in [21, 27] {
        let r = check_condition(md(m), None, true, &BasisOptions::completion()).unwrap();
        assert!(r.verdict, "m={m}");
        assert!(r.checked > 0);
    }
}

#[test]
fn thirty_three_counterexample() {
    let m = md(33);
    let x = MonoidVector::from_residues(m, &[7, 10, 13, 19, 22, 28], 3);
    assert!(is_member(&x, m).unwrap());
    let r = check_condition(m, Some(4), true, &BasisOptions::completion()).unwrap();
    let o = r.outcomes.iter().find(|o| o.vector == x).expect("listed as indecomposable");
    assert_eq!(o.outcome, Outcome::Fail);
    assert!(!standard_elements(m).contains(&x));
}

#[test]
fn fourfold_scan_coprime_to_six() {
    let entries = scan_fourfolds(5, 60, Some(6), None).unwrap();
    assert_eq!(entries.iter().map(|e| e.m).collect::<Vec<_>>(), [5, 7, 11, 13, 17, 19, 23, 25, 29, 31, 35, 37, 41, 43, 47, 49, 53, 55, 59]);
    for e in &entries {
        let r = e.report.as_ref().unwrap_or_else(|| panic!("m={} {:?}", e.m, e.error));
        assert!(r.verdict, "m={}", e.m);
    }
}

#[test]
fn scan_is_deterministic() {
    let a = scan_fourfolds(20, 34, None, None).unwrap();
    let b = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| scan_fourfolds(20, 34, None, None).unwrap());
    assert_eq!(a, b);
}
