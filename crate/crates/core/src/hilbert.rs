//! Indecomposable elements of `M_m` and the invariant `phi(m)`.
//!
//! Two independent routes compute the Hilbert basis:
//!
//! * [`Algorithm::Levelwise`] enumerates `M_m(1), M_m(2), ...` in `x`-space and
//!   keeps the vectors that dominate no smaller basis element. It is exact up
//!   to the last enumerated level but cannot tell on its own when to stop.
//! * [`Algorithm::Completion`] runs a project-and-lift completion on the
//!   odd-part lattice (see [`crate::lattice`]) and terminates with the full
//!   basis, so its result is certified complete.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Budget, Exhausted, OddLattice};
use crate::monoid::{enumerate_level, is_member, level_one, member_unchecked, units, Modulus, MonoidVector, UnitSet};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Levelwise,
    #[default]
    Completion,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "levelwise" => Ok(Algorithm::Levelwise),
            "completion" => Ok(Algorithm::Completion),
            other => Err(Error::Parse(format!("unknown algorithm {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct BasisOptions {
    pub algorithm: Algorithm,
    /// Stop the levelwise scan after this level.
    pub max_level: Option<u32>,
    /// A level known to bound every indecomposable; a levelwise scan that
    /// reaches it is marked complete.
    pub trusted_bound: Option<u32>,
    pub budget: Budget,
}

impl BasisOptions {
    pub fn completion() -> Self {
        BasisOptions::default()
    }

    pub fn levelwise(max_level: Option<u32>) -> Self {
        BasisOptions { algorithm: Algorithm::Levelwise, max_level, ..Default::default() }
    }
}

/// The indecomposable elements found for `M_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertBasis {
    pub m: Modulus,
    pub algorithm: Algorithm,
    /// Sorted by level, then lexicographically.
    pub elements: Vec<MonoidVector>,
    /// Every indecomposable of `M_m` is in `elements`.
    pub complete: bool,
    /// All indecomposables of level `<= max_level_seen` are in `elements`.
    pub max_level_seen: u32,
    pub exhausted: Option<Exhausted>,
}

impl HilbertBasis {
    pub fn contains(&self, v: &MonoidVector) -> bool {
        self.elements.binary_search(v).is_ok()
    }

    pub fn at_level(&self, y: u32) -> impl Iterator<Item = &MonoidVector> {
        self.elements.iter().filter(move |v| v.level() == y)
    }

    /// Largest level among the elements found so far.
    pub fn max_level(&self) -> u32 {
        self.elements.iter().map(|v| v.level()).max().unwrap_or(0)
    }

    /// Whether the indecomposables of every level `<= y` are known.
    pub fn covers_level(&self, y: u32) -> bool {
        self.complete || self.max_level_seen >= y
    }
}

/// A split `v = c + d` with both parts in `M_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionWitness {
    pub c: MonoidVector,
    pub d: MonoidVector,
}

/// Calls `f` on every `c <= v` with `sum c = size`, lexicographically
/// ascending in `c`.
pub(crate) fn for_each_submultiset<F>(v: &[u32], size: u64, f: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[u32]) -> ControlFlow<()>,
{
    let mut suffix = vec![0u64; v.len() + 1];
    for i in (0..v.len()).rev() {
        suffix[i] = suffix[i + 1] + v[i] as u64;
    }
    let mut c = vec![0u32; v.len()];
    fn go<F: FnMut(&[u32]) -> ControlFlow<()>>(
        i: usize,
        left: u64,
        v: &[u32],
        suffix: &[u64],
        c: &mut [u32],
        f: &mut F,
    ) -> ControlFlow<()> {
        if left == 0 {
            return f(c);
        }
        if i == v.len() || suffix[i] < left {
            return ControlFlow::Continue(());
        }
        let hi = (v[i] as u64).min(left);
        // Keep enough room for the remaining coordinates.
        let lo = left.saturating_sub(suffix[i + 1]);
        for k in lo..=hi {
            c[i] = k as u32;
            go(i + 1, left - k, v, suffix, c, f)?;
        }
        c[i] = 0;
        ControlFlow::Continue(())
    }
    go(0, size, v, &suffix, &mut c, f)
}

/// A decomposition `v = c + d` in `M_m`, searching `c` by ascending level and
/// then lexicographically; `None` if `v` is indecomposable.
pub fn is_decomposable(v: &MonoidVector, m: Modulus) -> Result<Option<DecompositionWitness>> {
    if !is_member(v, m)? {
        return Err(Error::NotMember { m: m.get(), vector: v.to_string() });
    }
    let u = units(m);
    Ok(find_split(v, m, &u))
}

fn find_split(v: &MonoidVector, m: Modulus, u: &UnitSet) -> Option<DecompositionWitness> {
    let mut found = None;
    for yc in 1..=v.level() / 2 {
        let flow = for_each_submultiset(v.x(), 2 * yc as u64, &mut |c| {
            let c = MonoidVector::new(c.to_vec(), yc);
            // v - c satisfies the equations by linearity once c does.
            if member_unchecked(&c, m, u) {
                let d = v.checked_sub(&c).expect("c <= v");
                found = Some(DecompositionWitness { c, d });
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        if flow.is_break() {
            break;
        }
    }
    found
}

/// Indecomposables of `M_m` by the selected algorithm.
pub fn hilbert_basis(m: Modulus, opts: &BasisOptions) -> HilbertBasis {
    match opts.algorithm {
        Algorithm::Completion => completion_basis(m, &opts.budget),
        Algorithm::Levelwise => levelwise_basis(m, opts),
    }
}

/// Largest modulus the completion handles (64 lattice coordinates).
pub const COMPLETION_MAX_MODULUS: u32 = 129;

fn completion_basis(m: Modulus, budget: &Budget) -> HilbertBasis {
    let partial = |reason| HilbertBasis {
        m,
        algorithm: Algorithm::Completion,
        elements: level_one(m),
        complete: false,
        max_level_seen: 1,
        exhausted: Some(reason),
    };
    if m.get() > COMPLETION_MAX_MODULUS {
        return partial(Exhausted::Dimension);
    }
    let lattice = OddLattice::new(m);
    let graver = match lattice.graver_basis(budget) {
        Ok(g) => g,
        Err(reason) => return partial(reason),
    };
    let mut set: BTreeSet<MonoidVector> = level_one(m).into_iter().collect();
    set.extend(graver.iter().filter_map(|g| lattice.to_monoid(g)));
    let elements: Vec<MonoidVector> = set.into_iter().collect();
    let max_level_seen = elements.iter().map(|v| v.level()).max().unwrap_or(1);
    HilbertBasis { m, algorithm: Algorithm::Completion, elements, complete: true, max_level_seen, exhausted: None }
}

/// Whether `x` (level >= 2) contains a pair `{i, m-i}` or `{m/2, m/2}`.
fn has_pair(x: &[u32]) -> bool {
    let n = x.len();
    (0..n).any(|i| x[i] > 0 && x[n - 1 - i] > if i == n - 1 - i { 1 } else { 0 })
}

fn levelwise_basis(m: Modulus, opts: &BasisOptions) -> HilbertBasis {
    let mut elements: Vec<MonoidVector> = Vec::new();
    let mut max_found = 0u32;
    let mut last_new = 0u32;
    let mut y = 0u32;
    let mut exhausted = None;
    let limit = match (opts.max_level, opts.trusted_bound) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    loop {
        if limit.is_some_and(|l| y >= l) {
            break;
        }
        // Stop once twice the largest level seen has passed without news.
        if limit.is_none() && y >= 2 * max_found && y > 0 && last_new * 2 <= y {
            break;
        }
        if opts.budget.timed_out() {
            exhausted = Some(Exhausted::Time);
            break;
        }
        let level = enumerate_level(m, y + 1);
        if opts.budget.max_candidates.is_some_and(|cap| level.len() > cap) {
            exhausted = Some(Exhausted::Candidates);
            break;
        }
        y += 1;
        let lower = elements.len();
        for v in level {
            let indecomposable = if y == 1 {
                true
            } else if has_pair(v.x()) {
                false
            } else {
                !elements[..lower].iter().any(|c| c.level() >= 2 && c.le(&v))
            };
            if indecomposable {
                elements.push(v);
            }
        }
        if elements.len() > lower {
            last_new = y;
            max_found = y;
        }
    }
    elements.sort();
    let complete = exhausted.is_none() && opts.trusted_bound.is_some_and(|b| y >= b);
    HilbertBasis { m, algorithm: Algorithm::Levelwise, elements, complete, max_level_seen: y, exhausted }
}

/// `phi(m)`: the largest level of an indecomposable element.
pub fn phi(basis: &HilbertBasis) -> Result<u32> {
    if !basis.complete {
        return Err(Error::Incomplete { m: basis.m.get(), max_level_seen: basis.max_level() });
    }
    Ok(basis.max_level())
}

/// `2 (phi(m) - 1)`: checking dimensions up to this bound covers all `n`.
pub fn required_dimension_bound(basis: &HilbertBasis) -> Result<u32> {
    Ok(2 * (phi(basis)? - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(m: u32) -> Modulus {
        Modulus::new(m).unwrap()
    }

    fn v(s: &str) -> MonoidVector {
        s.parse().unwrap()
    }

    #[test]
    fn decomposition_examples() {
        let w = is_decomposable(&v("1,2,1;2"), md(4)).unwrap().unwrap();
        let mut parts = [w.c.clone(), w.d.clone()];
        parts.sort();
        assert_eq!(parts, [v("0,2,0;1"), v("1,0,1;1")]);
        assert_eq!(w.c.add(&w.d), v("1,2,1;2"));

        assert_eq!(is_decomposable(&v("1,1;1"), md(3)).unwrap(), None);
        let x33 = MonoidVector::from_residues(md(33), &[7, 10, 13, 19, 22, 28], 3);
        assert_eq!(is_decomposable(&x33, md(33)).unwrap(), None);
        assert!(matches!(is_decomposable(&v("1,1,0;1"), md(4)), Err(Error::NotMember { .. })));
    }

    #[test]
    fn small_bases() {
        let b5 = hilbert_basis(md(5), &BasisOptions::completion());
        assert!(b5.complete);
        assert_eq!(b5.elements, vec![v("0,1,1,0;1"), v("1,0,0,1;1")]);
        let b4 = hilbert_basis(md(4), &BasisOptions::completion());
        assert_eq!(b4.elements, vec![v("0,2,0;1"), v("1,0,1;1")]);
        let b2 = hilbert_basis(md(2), &BasisOptions::completion());
        assert_eq!(b2.elements, vec![v("2;1")]);
        assert_eq!(phi(&b2).unwrap(), 1);
        assert_eq!(hilbert_basis(md(9), &BasisOptions::completion()).max_level(), 2);
    }

    #[test]
    fn phi_and_dimension_bound() {
        let b7 = hilbert_basis(md(7), &BasisOptions::completion());
        assert_eq!(phi(&b7).unwrap(), 1);
        let b5 = hilbert_basis(md(5), &BasisOptions::completion());
        assert_eq!(required_dimension_bound(&b5).unwrap(), 0);
        let b21 = hilbert_basis(md(21), &BasisOptions::completion());
        assert_eq!(phi(&b21).unwrap(), 3);
        assert_eq!(required_dimension_bound(&b21).unwrap(), 4);
    }

    #[test]
    fn incomplete_basis_refuses_phi() {
        let partial = hilbert_basis(md(12), &BasisOptions::levelwise(Some(2)));
        assert!(!partial.complete);
        assert_eq!(partial.max_level_seen, 2);
        assert!(matches!(phi(&partial), Err(Error::Incomplete { m: 12, .. })));
        let capped = hilbert_basis(
            md(30),
            &BasisOptions { budget: Budget::unlimited().with_max_candidates(5), ..Default::default() },
        );
        assert!(!capped.complete);
        assert_eq!(capped.exhausted, Some(Exhausted::Candidates));
    }

    #[test]
    fn trusted_bound_certifies_levelwise() {
        let opts = BasisOptions { algorithm: Algorithm::Levelwise, trusted_bound: Some(3), ..Default::default() };
        let b = hilbert_basis(md(6), &opts);
        assert!(b.complete);
        assert_eq!(phi(&b).unwrap(), 3);
    }

    #[test]
    fn levelwise_heuristic_stop_is_not_certified() {
        let b = hilbert_basis(md(10), &BasisOptions::levelwise(None));
        assert!(!b.complete);
        assert_eq!(b.max_level(), 3);
        assert!(b.max_level_seen >= 6);
    }

    #[test]
    fn submultisets_in_lex_order() {
        let mut seen = Vec::new();
        let _ = for_each_submultiset(&[1, 2, 1], 2, &mut |c| {
            seen.push(c.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(seen, vec![vec![0, 1, 1], vec![0, 2, 0], vec![1, 0, 1], vec![1, 1, 0]]);
    }
}
