//! The Diophantine monoid `M_m`.
//!
//! An element is a vector `(x_1, ..., x_{m-1}; y)` of non-negative integers
//! with `y >= 1` such that `sum_i <t*i> x_i = m*y` for every unit `t` mod `m`,
//! `<k>` denoting the representative of `k` in `1..m-1`. The entry `x_k`
//! counts how often the residue `k` occurs in the associated character.
//!
//! Entries are `u32` and all weighted sums are accumulated in `u64` with
//! checked arithmetic, so any `m < 2^32` and level `y < 2^31` is handled
//! without silent wraparound.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Degree of the Fermat variety; always at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus(m));
        }
        Ok(Modulus(m))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// `<k>`: the residue of `k` in `0..m`.
    #[inline]
    pub(crate) fn residue(self, k: u64) -> u32 {
        (k % self.0 as u64) as u32
    }

    pub fn is_prime(self) -> bool {
        is_prime(self.0)
    }

    /// Distinct prime divisors, ascending.
    pub fn prime_factors(self) -> Vec<u32> {
        prime_factors(self.0)
    }
}

impl TryFrom<u32> for Modulus {
    type Error = Error;
    fn try_from(m: u32) -> Result<Self> {
        Modulus::new(m)
    }
}

impl From<Modulus> for u32 {
    fn from(m: Modulus) -> u32 {
        m.0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The unit group `(Z/m)^*`, as a sorted list of representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitSet {
    m: Modulus,
    units: Vec<u32>,
}

impl UnitSet {
    pub fn modulus(&self) -> Modulus {
        self.m
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.units
    }

    pub fn contains(&self, t: u32) -> bool {
        self.units.binary_search(&t).is_ok()
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// Units `t <= m/2`. The constraint for `m - t` follows from the one for
    /// `t` together with `sum x_i = 2y`.
    pub(crate) fn lower_half(&self) -> impl Iterator<Item = u32> + '_ {
        let m = self.m.get();
        self.units.iter().copied().filter(move |&t| 2 * (t as u64) <= m as u64)
    }
}

/// Residues in `1..m` coprime to `m`, ascending.
pub fn units(m: Modulus) -> UnitSet {
    let n = m.get();
    let units = (1..n).filter(|&t| gcd(t as u64, n as u64) == 1).collect();
    UnitSet { m, units }
}

/// An element `(x_1, ..., x_{m-1}; y)` of `M_m`, or a candidate for one.
///
/// Ordered by level first, then lexicographically on `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonoidVector {
    x: Vec<u32>,
    y: u32,
}

impl MonoidVector {
    pub fn new(x: Vec<u32>, y: u32) -> Self {
        MonoidVector { x, y }
    }

    pub fn zero(m: Modulus) -> Self {
        MonoidVector { x: vec![0; m.get() as usize - 1], y: 0 }
    }

    /// Count vector of a list of residues; residues are taken mod `m` and zeros dropped.
    pub fn from_residues(m: Modulus, residues: &[u32], y: u32) -> Self {
        let mut x = vec![0; m.get() as usize - 1];
        for &r in residues {
            let r = m.residue(r as u64);
            if r != 0 {
                x[r as usize - 1] += 1;
            }
        }
        MonoidVector { x, y }
    }

    /// `x_1..x_{m-1}`; index `k-1` holds the count of residue `k`.
    pub fn x(&self) -> &[u32] {
        &self.x
    }

    /// Count of residue `k` (`1 <= k <= m-1`).
    pub fn count(&self, k: u32) -> u32 {
        self.x[k as usize - 1]
    }

    pub fn level(&self) -> u32 {
        self.y
    }

    pub fn modulus(&self) -> Result<Modulus> {
        Modulus::new(self.x.len() as u32 + 1)
    }

    /// Number of residues, `sum x_i`.
    pub fn size(&self) -> u64 {
        self.x.iter().map(|&v| v as u64).sum()
    }

    /// Residues with multiplicity, ascending.
    pub fn residues(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.size() as usize);
        for (i, &c) in self.x.iter().enumerate() {
            out.extend(std::iter::repeat_n(i as u32 + 1, c as usize));
        }
        out
    }

    /// Componentwise `self <= other`, levels included.
    pub fn le(&self, other: &MonoidVector) -> bool {
        self.x.len() == other.x.len()
            && self.y <= other.y
            && self.x.iter().zip(&other.x).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MonoidVector) -> MonoidVector {
        debug_assert_eq!(self.x.len(), other.x.len());
        MonoidVector {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            y: self.y + other.y,
        }
    }

    /// `self - other`, or `None` if some entry would go negative.
    pub fn checked_sub(&self, other: &MonoidVector) -> Option<MonoidVector> {
        if !other.le(self) {
            return None;
        }
        Some(MonoidVector {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a - b).collect(),
            y: self.y - other.y,
        })
    }

    pub fn scale(&self, k: u32) -> MonoidVector {
        MonoidVector { x: self.x.iter().map(|a| a * k).collect(), y: self.y * k }
    }
}

impl Ord for MonoidVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.y.cmp(&other.y).then_with(|| self.x.cmp(&other.x))
    }
}

impl PartialOrd for MonoidVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical text form `x1,...,x_{m-1};y`.
impl fmt::Display for MonoidVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.x.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ";{}", self.y)
    }
}

impl FromStr for MonoidVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (xs, y) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("missing ';' in {s:?}")))?;
        let y = y.trim().parse().map_err(|_| Error::Parse(format!("bad level in {s:?}")))?;
        let x = xs
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("bad entry in {s:?}")))?;
        Ok(MonoidVector { x, y })
    }
}

impl Serialize for MonoidVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MonoidVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn check_shape(v: &MonoidVector, m: Modulus) -> Result<()> {
    let expected = m.get() as usize - 1;
    if v.x.len() != expected {
        return Err(Error::Shape { m: m.get(), expected, found: v.x.len() });
    }
    Ok(())
}

/// `sum_i <t*i> x_i`, or `None` on overflow.
fn twisted_weight(x: &[u32], t: u32, m: Modulus) -> Option<u64> {
    let mut acc = 0u64;
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        let r = m.residue(t as u64 * (i as u64 + 1)) as u64;
        acc = acc.checked_add(r.checked_mul(xi as u64)?)?;
    }
    Some(acc)
}

/// Whether `v` satisfies every unit constraint with `y >= 1`.
pub fn is_member(v: &MonoidVector, m: Modulus) -> Result<bool> {
    check_shape(v, m)?;
    Ok(member_unchecked(v, m, &units(m)))
}

pub(crate) fn member_unchecked(v: &MonoidVector, m: Modulus, units: &UnitSet) -> bool {
    if v.y == 0 {
        return false;
    }
    let target = m.get() as u64 * v.y as u64;
    if v.size() != 2 * v.y as u64 {
        return false;
    }
    units.lower_half().all(|t| twisted_weight(&v.x, t, m) == Some(target))
}

/// Precomputed residue tables for the level enumeration.
struct LevelSearch {
    /// `rows[k][i-1] = <t_k * i>` for each lower-half unit `t_k`.
    rows: Vec<Vec<u64>>,
    /// `lo[k][j]`, `hi[k][j]`: min/max of `rows[k]` over indices `1..=j`.
    lo: Vec<Vec<u64>>,
    hi: Vec<Vec<u64>>,
    target: u64,
}

impl LevelSearch {
    fn new(m: Modulus, y: u32) -> Self {
        let n = m.get() as usize - 1;
        let rows: Vec<Vec<u64>> = units(m)
            .lower_half()
            .map(|t| (1..=n).map(|i| m.residue(t as u64 * i as u64) as u64).collect())
            .collect();
        let mut lo = Vec::with_capacity(rows.len());
        let mut hi = Vec::with_capacity(rows.len());
        for row in &rows {
            let mut l = vec![u64::MAX; n + 1];
            let mut h = vec![0u64; n + 1];
            for j in 1..=n {
                l[j] = l[j - 1].min(row[j - 1]);
                h[j] = h[j - 1].max(row[j - 1]);
            }
            lo.push(l);
            hi.push(h);
        }
        LevelSearch { rows, lo, hi, target: m.get() as u64 * y as u64 }
    }

    /// Whether `remaining` further residues drawn from `1..=j` can still
    /// bring every partial weight to the target.
    fn feasible(&self, weights: &[u64], remaining: u64, j: usize) -> bool {
        if remaining == 0 {
            return weights.iter().all(|&w| w == self.target);
        }
        if j == 0 {
            return false;
        }
        weights.iter().enumerate().all(|(k, &w)| {
            w + remaining * self.lo[k][j] <= self.target && self.target <= w + remaining * self.hi[k][j]
        })
    }

    /// Depth-first search assigning `x_i` for `i = j, j-1, ..., 1`.
    fn dfs(&self, j: usize, remaining: u64, weights: &mut Vec<u64>, x: &mut Vec<u32>, y: u32, out: &mut Vec<MonoidVector>) {
        if j == 0 {
            if remaining == 0 && weights.iter().all(|&w| w == self.target) {
                out.push(MonoidVector { x: x.clone(), y });
            }
            return;
        }
        for c in 0..=remaining {
            for (k, w) in weights.iter_mut().enumerate() {
                *w += c * self.rows[k][j - 1];
            }
            let over = weights.iter().any(|&w| w > self.target);
            if !over && self.feasible(weights, remaining - c, j - 1) {
                x[j - 1] = c as u32;
                self.dfs(j - 1, remaining - c, weights, x, y, out);
                x[j - 1] = 0;
            }
            for (k, w) in weights.iter_mut().enumerate() {
                *w -= c * self.rows[k][j - 1];
            }
            if over {
                break;
            }
        }
    }
}

/// All elements of `M_m(y)`, lexicographically ascending in `x`.
///
/// Depth-first over `x_{m-1}, ..., x_1`, pruned by the remaining-budget
/// bounds of every constraint; the top-level branches run in parallel and
/// the result is sorted, so the output does not depend on thread count.
pub fn enumerate_level(m: Modulus, y: u32) -> Vec<MonoidVector> {
    if y == 0 {
        return Vec::new();
    }
    let search = LevelSearch::new(m, y);
    let n = m.get() as usize - 1;
    let total = 2 * y as u64;
    let mut out: Vec<MonoidVector> = (0..=total)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut weights: Vec<u64> = search.rows.iter().map(|row| c * row[n - 1]).collect();
            let mut found = Vec::new();
            if weights.iter().all(|&w| w <= search.target)
                && search.feasible(&weights, total - c, n - 1)
            {
                let mut x = vec![0u32; n];
                x[n - 1] = c as u32;
                search.dfs(n - 1, total - c, &mut weights, &mut x, y, &mut found);
            }
            found
        })
        .collect();
    out.sort_unstable_by(|a, b| a.x.cmp(&b.x));
    out
}

/// `M_m(1)`: the pairs `{a, m-a}` for `1 <= a <= m/2`, in canonical order.
pub fn level_one(m: Modulus) -> Vec<MonoidVector> {
    enumerate_level(m, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(m: u32) -> Modulus {
        Modulus::new(m).unwrap()
    }

    #[test]
    fn units_small() {
        assert_eq!(units(md(4)).as_slice(), &[1, 3]);
        assert_eq!(units(md(7)).as_slice(), &[1, 2, 3, 4, 5, 6]);
        assert_eq!(units(md(12)).as_slice(), &[1, 5, 7, 11]);
        assert_eq!(Modulus::new(1), Err(Error::InvalidModulus(1)));
        assert_eq!(Modulus::new(0), Err(Error::InvalidModulus(0)));
    }

    #[test]
    fn units_closed_under_negation() {
        for m in 2..60 {
            let u = units(md(m));
            assert!(u.contains(1));
            for &t in u.as_slice() {
                assert!(u.contains(m - t) || m == 2);
            }
        }
    }

    #[test]
    fn membership_examples() {
        let v33 = MonoidVector::from_residues(md(33), &[7, 10, 13, 19, 22, 28], 3);
        assert!(is_member(&v33, md(33)).unwrap());
        assert!(is_member(&"1,0,1;1".parse().unwrap(), md(4)).unwrap());
        assert!(!is_member(&"1,1,0;1".parse().unwrap(), md(4)).unwrap());
        for m in 2..10 {
            assert!(!is_member(&MonoidVector::zero(md(m)), md(m)).unwrap());
        }
        let err = is_member(&"1,1;1".parse().unwrap(), md(4)).unwrap_err();
        assert!(matches!(err, Error::Shape { expected: 3, found: 2, .. }));
    }

    #[test]
    fn small_levels() {
        let show = |m, y| enumerate_level(md(m), y).iter().map(|v| v.to_string()).collect::<Vec<_>>();
        assert_eq!(show(3, 1), ["1,1;1"]);
        assert_eq!(show(4, 1), ["0,2,0;1", "1,0,1;1"]);
        assert_eq!(show(2, 1), ["2;1"]);
        assert!(enumerate_level(md(5), 0).is_empty());
    }

    #[test]
    fn level_one_is_residue_pairs() {
        for m in 2..=40 {
            let l1 = level_one(md(m));
            assert_eq!(l1.len() as u32, m / 2, "m = {m}");
            for v in &l1 {
                let r = v.residues();
                assert_eq!(r.len(), 2);
                assert_eq!(r[0] + r[1], m);
            }
        }
    }

    #[test]
    fn text_form_roundtrip() {
        let v: MonoidVector = "0,2,0;1".parse().unwrap();
        assert_eq!(v.x(), &[0, 2, 0]);
        assert_eq!(v.level(), 1);
        assert_eq!(v.to_string(), "0,2,0;1");
        assert!("1,2".parse::<MonoidVector>().is_err());
        assert!("1,a;2".parse::<MonoidVector>().is_err());
    }

    #[test]
    fn prime_helpers() {
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(prime_factors(97), vec![97]);
        assert!(is_prime(97) && !is_prime(91) && !is_prime(1));
    }
}
