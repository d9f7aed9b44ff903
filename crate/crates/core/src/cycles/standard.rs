//! Monoid elements of the standard cycles.
//!
//! For an odd prime `p | m` with `d = m/p` and a seed `i`, the residues
//! `i, i+d, ..., i+(p-1)d, m-p*i` (mod `m`) give a candidate of level
//! `(p+1)/2`; for `p = 2` the candidate is `(i, i+d, m-i, m-i-d)` at level 2.
//! Candidates with a zero residue are dropped. Both a candidate and its
//! double are kept, each only if it lies in `M_m`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::monoid::{is_member, Modulus, MonoidVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StandardProvenance {
    pub p: u32,
    pub i: u32,
    pub doubled: bool,
}

impl StandardProvenance {
    /// The `p = 2` form is a reconstruction and carries less weight.
    pub fn low_confidence(&self) -> bool {
        self.p == 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardSet {
    pub m: Modulus,
    /// Each vector with the first construction that produced it.
    pub entries: BTreeMap<MonoidVector, StandardProvenance>,
}

impl StandardSet {
    pub fn contains(&self, v: &MonoidVector) -> bool {
        self.entries.contains_key(v)
    }

    pub fn provenance(&self, v: &MonoidVector) -> Option<StandardProvenance> {
        self.entries.get(v).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &MonoidVector> {
        self.entries.keys()
    }
}

/// Residues of the candidate for `(p, i)`, or `None` when one is zero.
pub fn standard_residues(m: Modulus, p: u32, i: u32) -> Option<Vec<u32>> {
    let mm = m.get();
    let d = mm / p;
    if (p * i).is_multiple_of(mm) {
        return None;
    }
    let r: Vec<u32> = if p == 2 {
        vec![i % mm, (i + d) % mm, (mm - i) % mm, (2 * mm - i - d) % mm]
    } else {
        let mut r: Vec<u32> = (0..p).map(|k| (i + k * d) % mm).collect();
        r.push((mm * p - p * i) % mm);
        r
    };
    (!r.contains(&0)).then_some(r)
}

pub fn standard_elements(m: Modulus) -> StandardSet {
    let mut entries = BTreeMap::new();
    if !m.is_prime() {
        for p in m.prime_factors() {
            let level = if p == 2 { 2 } else { p.div_ceil(2) };
            for i in 1..m.get() {
                let Some(r) = standard_residues(m, p, i) else { continue };
                let v = MonoidVector::from_residues(m, &r, level);
                for (doubled, w) in [(false, v.clone()), (true, v.scale(2))] {
                    if is_member(&w, m).unwrap_or(false) {
                        entries.entry(w).or_insert(StandardProvenance { p, i, doubled });
                    }
                }
            }
        }
    }
    StandardSet { m, entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(m: u32) -> Modulus {
        Modulus::new(m).unwrap()
    }

    #[test]
    fn construction_examples() {
        assert_eq!(standard_residues(md(9), 3, 1), Some(vec![1, 4, 7, 6]));
        assert_eq!(standard_residues(md(25), 5, 1), Some(vec![1, 6, 11, 16, 21, 20]));
        assert_eq!(standard_residues(md(9), 3, 3), None);

        let s9 = standard_elements(md(9));
        let v = MonoidVector::from_residues(md(9), &[1, 4, 7, 6], 2);
        assert_eq!(s9.provenance(&v), Some(StandardProvenance { p: 3, i: 1, doubled: false }));
        assert!(s9.contains(&v.scale(2)));

        let s25 = standard_elements(md(25));
        assert!(s25.contains(&MonoidVector::from_residues(md(25), &[1, 6, 11, 16, 21, 20], 3)));
        assert!(standard_elements(md(7)).is_empty());
    }

    #[test]
    fn vectors_are_members() {
        for m in 4..=40 {
            let s = standard_elements(md(m));
            for v in s.vectors() {
                assert!(is_member(v, md(m)).unwrap(), "m={m} {v}");
            }
        }
    }

    #[test]
    fn prime_square_levels() {
        for p in [3u32, 5] {
            let s = standard_elements(md(p * p));
            assert!(!s.is_empty());
            for (v, prov) in &s.entries {
                if !prov.doubled {
                    assert_eq!(v.level(), p.div_ceil(2));
                }
            }
        }
    }

    #[test]
    fn vector_33_is_not_standard() {
        let m = md(33);
        let x = MonoidVector::from_residues(m, &[7, 10, 13, 19, 22, 28], 3);
        assert!(!standard_elements(m).contains(&x));
    }
}
