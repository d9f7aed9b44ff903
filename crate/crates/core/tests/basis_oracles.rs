//! Independent checks of level enumeration and of the two basis algorithms.

use std::collections::HashSet;

use fermat_hodge::hilbert::{hilbert_basis, phi, Algorithm, BasisOptions};
use fermat_hodge::monoid::{enumerate_level, is_member, Modulus, MonoidVector};

fn md(m: u32) -> Modulus {
    Modulus::new(m).unwrap()
}

/// Every vector of the box `{0..=2y}^{m-1}` that passes `is_member` at level `y`.
fn box_scan(m: Modulus, y: u32) -> Vec<MonoidVector> {
    let n = m.get() as usize - 1;
    let top = 2 * y;
    let mut x = vec![0u32; n];
    let mut out = Vec::new();
    loop {
        let v = MonoidVector::new(x.clone(), y);
        if is_member(&v, m).unwrap() {
            out.push(v);
        }
        let mut k = 0;
        while k < n && x[k] == top {
            x[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
        x[k] += 1;
    }
    out.sort_by(|a, b| a.x().cmp(b.x()));
    out
}

#[test]
fn enumeration_matches_box_scan() {
    for m in 2..=8 {
        for y in 1..=3 {
            // The box grows as (2y+1)^(m-1); keep the scan below ~5e6 points.
            if (2 * y as u64 + 1).pow(m - 1) > 5_000_000 {
                continue;
            }
            assert_eq!(enumerate_level(md(m), y), box_scan(md(m), y), "m = {m}, y = {y}");
        }
    }
}

#[test]
fn enumeration_sizes_are_consistent() {
    for m in 2..=16 {
        for y in 1..=3 {
            let level = enumerate_level(md(m), y);
            let distinct: HashSet<_> = level.iter().cloned().collect();
            assert_eq!(distinct.len(), level.len());
            for v in &level {
                assert_eq!(v.size(), 2 * y as u64);
                assert!(is_member(v, md(m)).unwrap());
            }
            assert!(level.windows(2).all(|w| w[0].x() < w[1].x()));
        }
    }
}

#[test]
fn levelwise_equals_completion_up_to_twenty() {
    for m in 2..=20 {
        let full = hilbert_basis(md(m), &BasisOptions::completion());
        assert!(full.complete);
        let top = phi(&full).unwrap();
        let opts = BasisOptions { algorithm: Algorithm::Levelwise, max_level: Some(top + 1), ..Default::default() };
        let lw = hilbert_basis(md(m), &opts);
        assert_eq!(lw.max_level_seen, top + 1);
        assert_eq!(lw.elements, full.elements, "m = {m}");
    }
}

#[test]
fn basis_is_minimal() {
    for m in 2..=21 {
        let b = hilbert_basis(md(m), &BasisOptions::completion());
        let set: HashSet<_> = b.elements.iter().cloned().collect();
        for (i, c) in b.elements.iter().enumerate() {
            for d in &b.elements[i..] {
                assert!(!set.contains(&c.add(d)), "m = {m}: {c} + {d} is listed");
            }
        }
    }
}

/// Every element of `M_m(y)`, `y <= 4`, is a sum of basis elements.
#[test]
fn basis_generates_low_levels() {
    for m in 2..=12 {
        let b = hilbert_basis(md(m), &BasisOptions::completion());
        let mut reachable: Vec<HashSet<MonoidVector>> = vec![HashSet::new(); 5];
        for y in 1..=4u32 {
            let mut here: HashSet<MonoidVector> = b.at_level(y).cloned().collect();
            for yc in 1..y {
                for c in b.elements.iter().filter(|c| c.level() == yc) {
                    for d in reachable[(y - yc) as usize].iter() {
                        here.insert(c.add(d));
                    }
                }
            }
            let level: HashSet<_> = enumerate_level(md(m), y).into_iter().collect();
            assert_eq!(here, level, "m = {m}, y = {y}");
            reachable[y as usize] = here;
        }
    }
}

#[test]
fn prime_and_four_are_generated_in_level_one() {
    for m in [3, 5, 7, 11, 13, 4] {
        let b = hilbert_basis(md(m), &BasisOptions::completion());
        assert!(b.elements.iter().all(|v| v.level() == 1), "m = {m}");
        assert_eq!(phi(&b).unwrap(), 1);
    }
    // Conversely phi(m) = 1 needs the basis inside M_m(1).
    for m in 2..=30 {
        let b = hilbert_basis(md(m), &BasisOptions::completion());
        assert_eq!(phi(&b).unwrap() == 1, b.elements.iter().all(|v| v.level() == 1));
    }
}
