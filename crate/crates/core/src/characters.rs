//! Characters `alpha = (a_0, ..., a_{n+1})` of the Fermat group and the
//! Hodge labels among them.
//!
//! A character here always has nonzero entries summing to zero mod `m`
//! (membership in `U^n_m`). It is a Hodge label when `n` is even and its
//! weight `|t alpha|` equals `n/2 + 1` for every unit `t`. Labels are
//! compared up to permutation, so the canonical representative keeps its
//! entries sorted ascending.

use std::fmt;
use std::ops::ControlFlow;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::hilbert::{for_each_submultiset, is_decomposable};
use crate::monoid::{enumerate_level, is_member, units, Modulus, MonoidVector};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    m: Modulus,
    entries: Vec<u32>,
}

impl Character {
    pub fn new(m: Modulus, entries: Vec<u32>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidCharacter(format!("needs at least two entries, got {}", entries.len())));
        }
        if let Some(&bad) = entries.iter().find(|&&a| a == 0 || a >= m.get()) {
            return Err(Error::InvalidCharacter(format!("entry {bad} is not a nonzero residue mod {m}")));
        }
        let sum: u64 = entries.iter().map(|&a| a as u64).sum();
        if !sum.is_multiple_of(m.get() as u64) {
            return Err(Error::InvalidCharacter(format!("entries sum to {sum}, not 0 mod {m}")));
        }
        Ok(Character { m, entries })
    }

    /// Parses `a_0,a_1,...`, with or without surrounding parentheses.
    pub fn parse(m: Modulus, s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let entries = body
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("bad character {s:?}")))?;
        Character::new(m, entries)
    }

    pub fn modulus(&self) -> Modulus {
        self.m
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// `n`, where the character has `n + 2` entries.
    pub fn dimension(&self) -> usize {
        self.entries.len() - 2
    }

    /// Entries sorted ascending.
    pub fn canonical(&self) -> Character {
        let mut entries = self.entries.clone();
        entries.sort_unstable();
        Character { m: self.m, entries }
    }

    /// Equality up to permutation of the entries.
    pub fn is_permutation_of(&self, other: &Character) -> bool {
        self.m == other.m && self.canonical().entries == other.canonical().entries
    }

    /// Entrywise product `t * alpha` mod `m`.
    pub fn scaled(&self, t: u32) -> Result<Character> {
        if !units(self.m).contains(t) {
            return Err(Error::NotUnit { m: self.m.get(), t });
        }
        let entries = self.entries.iter().map(|&a| self.m.residue(a as u64 * t as u64)).collect();
        Ok(Character { m: self.m, entries })
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// A character verified to lie in `B^n_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HodgeLabel(Character);

impl HodgeLabel {
    pub fn character(&self) -> &Character {
        &self.0
    }

    pub fn into_character(self) -> Character {
        self.0
    }
}

impl TryFrom<Character> for HodgeLabel {
    type Error = Error;
    fn try_from(alpha: Character) -> Result<Self> {
        if is_hodge_label(&alpha) {
            Ok(HodgeLabel(alpha))
        } else {
            Err(Error::NotHodgeLabel(alpha.to_string()))
        }
    }
}

impl fmt::Display for HodgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `|t alpha| = sum_i <t a_i> / m`, exactly.
pub fn weight(alpha: &Character, t: u32) -> Result<Ratio<u64>> {
    let m = alpha.m;
    if !units(m).contains(t) {
        return Err(Error::NotUnit { m: m.get(), t });
    }
    let num: u64 = alpha.entries.iter().map(|&a| m.residue(a as u64 * t as u64) as u64).sum();
    Ok(Ratio::new(num, m.get() as u64))
}

pub fn is_hodge_label(alpha: &Character) -> bool {
    let n = alpha.dimension();
    if !n.is_multiple_of(2) {
        return false;
    }
    let target = Ratio::from_integer(n as u64 / 2 + 1);
    units(alpha.m).as_slice().iter().all(|&t| weight(alpha, t).is_ok_and(|w| w == target))
}

/// `{alpha}`: residue counts with level `n/2 + 1`.
pub fn to_monoid(alpha: &Character) -> Result<MonoidVector> {
    if !is_hodge_label(alpha) {
        return Err(Error::NotHodgeLabel(alpha.to_string()));
    }
    Ok(MonoidVector::from_residues(alpha.m, &alpha.entries, alpha.dimension() as u32 / 2 + 1))
}

/// The sorted character with residue `k` repeated `x_k` times.
pub fn from_monoid(v: &MonoidVector, m: Modulus) -> Result<HodgeLabel> {
    if !is_member(v, m)? {
        return Err(Error::NotMember { m: m.get(), vector: v.to_string() });
    }
    Ok(HodgeLabel(Character { m, entries: v.residues() }))
}

/// Canonical representatives of `B^n_m`, sorted; with `expand_orbits` every
/// distinct ordering of each representative is listed instead.
pub fn enumerate_hodge_labels(m: Modulus, n: u32, expand_orbits: bool) -> Result<Vec<HodgeLabel>> {
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("dimension n = {n} must be even")));
    }
    let mut out: Vec<HodgeLabel> = enumerate_level(m, n / 2 + 1)
        .iter()
        .map(|v| HodgeLabel(Character { m, entries: v.residues() }))
        .collect();
    if expand_orbits {
        out = out.into_iter().flat_map(|l| permutations(&l.0.entries).map(move |e| HodgeLabel(Character { m, entries: e }))).collect();
    }
    out.sort();
    Ok(out)
}

/// Distinct permutations of a sorted slice, in lexicographic order.
fn permutations(sorted: &[u32]) -> impl Iterator<Item = Vec<u32>> {
    let mut cur = Some(sorted.to_vec());
    std::iter::from_fn(move || {
        let out = cur.take()?;
        let mut next = out.clone();
        // Standard next-permutation step.
        let n = next.len();
        if let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| next[i] < next[i + 1]) {
            let j = (i + 1..n).rev().find(|&j| next[j] > next[i]).unwrap();
            next.swap(i, j);
            next[i + 1..].reverse();
            cur = Some(next);
        }
        Some(out)
    })
}

/// `beta' * gamma'`: concatenation.
pub fn star_join(beta: &Character, gamma: &Character) -> Result<Character> {
    if beta.m != gamma.m {
        return Err(Error::ModulusMismatch(beta.m.get(), gamma.m.get()));
    }
    let mut entries = beta.entries.clone();
    entries.extend_from_slice(&gamma.entries);
    Character::new(beta.m, entries)
}

/// `beta # gamma`: drop the two last entries, which must cancel, and
/// concatenate the rest.
pub fn hash_join(beta: &Character, gamma: &Character) -> Result<Character> {
    if beta.m != gamma.m {
        return Err(Error::ModulusMismatch(beta.m.get(), gamma.m.get()));
    }
    let m = beta.m;
    let (b, c) = (*beta.entries.last().unwrap(), *gamma.entries.last().unwrap());
    if m.residue(b as u64 + c as u64) != 0 {
        return Err(Error::Join(format!("last entries {b} and {c} do not cancel mod {m}")));
    }
    let mut entries = beta.entries[..beta.entries.len() - 1].to_vec();
    entries.extend_from_slice(&gamma.entries[..gamma.entries.len() - 1]);
    Character::new(m, entries)
}

/// A split `alpha ~ beta' * gamma'` into Hodge labels, found through a
/// decomposition of `{alpha}`.
pub fn satisfies_p1(alpha: &HodgeLabel) -> Result<Option<(HodgeLabel, HodgeLabel)>> {
    let m = alpha.0.m;
    let v = to_monoid(&alpha.0)?;
    let Some(w) = is_decomposable(&v, m)? else { return Ok(None) };
    Ok(Some((from_monoid(&w.c, m)?, from_monoid(&w.d, m)?)))
}

/// A split `alpha ~ beta # gamma` with `beta in B^r_m`, `gamma in B^s_m`,
/// `r, s >= 2` even. The cancelled pair is `(j, m - j)`, `j` ascending.
pub fn satisfies_p2(alpha: &HodgeLabel) -> Option<(HodgeLabel, HodgeLabel)> {
    let m = alpha.0.m;
    let n = alpha.0.dimension();
    if n < 4 {
        return None;
    }
    let v = MonoidVector::from_residues(m, &alpha.0.entries, 0);
    let mut found = None;
    for j in 1..m.get() {
        for r in (2..=n - 2).step_by(2) {
            let flow = for_each_submultiset(v.x(), r as u64 + 1, &mut |part| {
                let mut beta = MonoidVector::new(part.to_vec(), 0).residues();
                beta.push(j);
                let rest = v.checked_sub(&MonoidVector::new(part.to_vec(), 0)).unwrap();
                let mut gamma = rest.residues();
                gamma.push(m.get() - j);
                let beta = Character { m, entries: beta };
                let gamma = Character { m, entries: gamma };
                if is_zero_sum(&beta) && is_hodge_label(&beta) && is_zero_sum(&gamma) && is_hodge_label(&gamma) {
                    found = Some((HodgeLabel(beta), HodgeLabel(gamma)));
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            });
            if flow.is_break() {
                return found;
            }
        }
    }
    None
}

fn is_zero_sum(c: &Character) -> bool {
    c.entries.iter().map(|&a| a as u64).sum::<u64>() % c.m.get() as u64 == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(m: u32) -> Modulus {
        Modulus::new(m).unwrap()
    }

    fn ch(m: u32, e: &[u32]) -> Character {
        Character::new(md(m), e.to_vec()).unwrap()
    }

    fn label(m: u32, e: &[u32]) -> HodgeLabel {
        HodgeLabel::try_from(ch(m, e)).unwrap()
    }

    #[test]
    fn weights() {
        let a = ch(3, &[1, 1, 2, 2]);
        assert_eq!(weight(&a, 1).unwrap(), Ratio::from_integer(2));
        assert_eq!(weight(&a, 2).unwrap(), Ratio::from_integer(2));
        assert_eq!(weight(&ch(4, &[1, 3]), 1).unwrap(), Ratio::from_integer(1));
        assert_eq!(weight(&ch(4, &[1, 3]), 2), Err(Error::NotUnit { m: 4, t: 2 }));
        assert_eq!(weight(&ch(9, &[1, 2, 6]), 2).unwrap(), Ratio::from_integer(1));
        assert_eq!(weight(&ch(9, &[1, 2, 6]), 1).unwrap(), Ratio::from_integer(1));
    }

    #[test]
    fn hodge_label_examples() {
        assert!(is_hodge_label(&ch(3, &[1, 1, 2, 2])));
        assert!(is_hodge_label(&ch(4, &[1, 3])));
        assert!(!is_hodge_label(&ch(3, &[1, 1, 1])));
        assert!(Character::new(md(3), vec![1, 0, 2]).is_err());
        assert!(Character::new(md(3), vec![1, 1]).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let show = |m, n| {
            enumerate_hodge_labels(md(m), n, false).unwrap().iter().map(|l| l.to_string()).collect::<Vec<_>>()
        };
        assert_eq!(show(3, 2), ["1,1,2,2"]);
        assert_eq!(show(4, 0), ["1,3", "2,2"]);
        assert_eq!(show(5, 0), ["1,4", "2,3"]);
        let orbits = enumerate_hodge_labels(md(3), 2, true).unwrap();
        assert_eq!(orbits.len(), 6);
        assert!(enumerate_hodge_labels(md(3), 3, false).is_err());
    }

    #[test]
    fn monoid_correspondence_examples() {
        assert_eq!(to_monoid(&ch(3, &[1, 1, 2, 2])).unwrap().to_string(), "2,2;2");
        assert_eq!(to_monoid(&ch(4, &[1, 3])).unwrap().to_string(), "1,0,1;1");
        assert_eq!(to_monoid(&ch(4, &[2, 2])).unwrap().to_string(), "0,2,0;1");
        assert!(matches!(to_monoid(&ch(3, &[1, 1, 1])), Err(Error::NotHodgeLabel(_))));

        let back = |m, s: &str| from_monoid(&s.parse().unwrap(), md(m)).unwrap().to_string();
        assert_eq!(back(3, "2,2;2"), "1,1,2,2");
        assert_eq!(back(4, "1,0,1;1"), "1,3");
        let x33 = MonoidVector::from_residues(md(33), &[7, 10, 13, 19, 22, 28], 3);
        assert_eq!(from_monoid(&x33, md(33)).unwrap().to_string(), "7,10,13,19,22,28");
        assert!(from_monoid(&"1,1,0;1".parse().unwrap(), md(4)).is_err());
    }

    #[test]
    fn joins() {
        assert_eq!(star_join(&ch(3, &[1, 2]), &ch(3, &[1, 2])).unwrap(), ch(3, &[1, 2, 1, 2]));
        assert_eq!(star_join(&ch(4, &[1, 3]), &ch(4, &[2, 2])).unwrap(), ch(4, &[1, 3, 2, 2]));
        assert_eq!(star_join(&ch(3, &[1, 1, 1]), &ch(3, &[2, 2, 2])).unwrap(), ch(3, &[1, 1, 1, 2, 2, 2]));
        assert_eq!(star_join(&ch(3, &[1, 2]), &ch(4, &[1, 3])), Err(Error::ModulusMismatch(3, 4)));

        assert_eq!(hash_join(&ch(3, &[1, 1, 2, 2]), &ch(3, &[2, 2, 1, 1])).unwrap(), ch(3, &[1, 1, 2, 2, 2, 1]));
        assert!(matches!(hash_join(&ch(4, &[1, 3]), &ch(4, &[1, 3])), Err(Error::Join(_))));
        assert_eq!(hash_join(&ch(4, &[2, 2]), &ch(4, &[2, 2])).unwrap(), ch(4, &[2, 2]));
    }

    #[test]
    fn p1_examples() {
        let (b, g) = satisfies_p1(&label(3, &[1, 2, 1, 2])).unwrap().unwrap();
        assert_eq!(b.to_string(), "1,2");
        assert_eq!(g.to_string(), "1,2");
        assert_eq!(satisfies_p1(&label(4, &[1, 3])).unwrap(), None);
    }

    #[test]
    fn p2_examples() {
        assert_eq!(satisfies_p2(&label(4, &[2, 2])), None);
        let alpha = label(3, &[1, 1, 2, 2, 2, 1]);
        let (b, g) = satisfies_p2(&alpha).unwrap();
        assert!(hash_join(b.character(), g.character()).unwrap().is_permutation_of(alpha.character()));
        assert!(b.character().is_permutation_of(&ch(3, &[1, 1, 2, 2])));
        assert!(g.character().is_permutation_of(&ch(3, &[2, 2, 1, 1])));
        assert_eq!(satisfies_p2(&label(33, &[7, 10, 13, 19, 22, 28])), None);
    }

    #[test]
    fn unit_action_preserves_labels() {
        for m in 3..=12 {
            for n in [0, 2, 4] {
                for l in enumerate_hodge_labels(md(m), n, false).unwrap() {
                    for &t in units(md(m)).as_slice() {
                        assert!(is_hodge_label(&l.character().scaled(t).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn permutations_are_distinct() {
        let p: Vec<_> = permutations(&[1, 1, 2]).collect();
        assert_eq!(p, vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]);
    }
}
