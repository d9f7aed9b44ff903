//! Quasi-decomposability: `x + b = c + d` with `b in M_m(1)` and
//! `c, d in M_m`, both different from `x`.

use std::collections::HashSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::for_each_submultiset;
use crate::monoid::{enumerate_level, is_member, member_unchecked, units, Modulus, MonoidVector, UnitSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiWitness {
    pub b: MonoidVector,
    pub c: MonoidVector,
    pub d: MonoidVector,
}

impl QuasiWitness {
    /// Checks `x + b = c + d`, `c, d != x`, and membership of `b, c, d`.
    pub fn certifies(&self, x: &MonoidVector, m: Modulus) -> bool {
        let member = |v: &MonoidVector| is_member(v, m).unwrap_or(false);
        self.b.level() == 1
            && x.add(&self.b) == self.c.add(&self.d)
            && self.c != *x
            && self.d != *x
            && member(&self.b)
            && member(&self.c)
            && member(&self.d)
    }
}

/// Membership oracle for the elements `c` tried by the search.
pub trait Pool: Sync {
    /// Fails when the pool cannot answer for level `y`.
    fn require_level(&self, y: u32) -> Result<()>;
    /// `v` is assumed to have the right shape and `v.level() >= 1`.
    fn contains(&self, v: &MonoidVector) -> bool;
}

/// Answers membership by evaluating the defining equations.
pub struct EquationPool {
    m: Modulus,
    units: UnitSet,
}

impl EquationPool {
    pub fn new(m: Modulus) -> Self {
        EquationPool { m, units: units(m) }
    }
}

impl Pool for EquationPool {
    fn require_level(&self, _y: u32) -> Result<()> {
        Ok(())
    }

    fn contains(&self, v: &MonoidVector) -> bool {
        member_unchecked(v, self.m, &self.units)
    }
}

/// Explicitly enumerated levels `M_m(1), ..., M_m(k)`.
pub struct LevelStore {
    m: Modulus,
    levels: Vec<Vec<MonoidVector>>,
    index: Vec<HashSet<Vec<u32>>>,
}

impl LevelStore {
    pub fn build(m: Modulus, max_level: u32) -> Self {
        LevelStore::from_levels(m, (1..=max_level).map(|y| enumerate_level(m, y)).collect())
    }

    /// `levels[k]` must be the full level `k + 1`.
    pub fn from_levels(m: Modulus, levels: Vec<Vec<MonoidVector>>) -> Self {
        let index = levels.iter().map(|l| l.iter().map(|v| v.x().to_vec()).collect()).collect();
        LevelStore { m, levels, index }
    }

    pub fn modulus(&self) -> Modulus {
        self.m
    }

    pub fn max_level(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn level(&self, y: u32) -> Option<&[MonoidVector]> {
        self.levels.get((y as usize).checked_sub(1)?).map(Vec::as_slice)
    }
}

impl Pool for LevelStore {
    fn require_level(&self, y: u32) -> Result<()> {
        if y > self.max_level() {
            return Err(Error::IncompletePool { m: self.m.get(), available: self.max_level(), required: y });
        }
        Ok(())
    }

    fn contains(&self, v: &MonoidVector) -> bool {
        let y = v.level() as usize;
        y >= 1 && self.index.get(y - 1).is_some_and(|s| s.contains(v.x()))
    }
}

/// Searches `b` in `level_one` order, then `c` by ascending level and
/// lexicographically among the sub-multisets of `x + b`.
pub fn is_quasi_decomposable(
    x: &MonoidVector,
    m: Modulus,
    level_one: &[MonoidVector],
    pool: &dyn Pool,
) -> Result<Option<QuasiWitness>> {
    if !is_member(x, m)? {
        return Err(Error::NotMember { m: m.get(), vector: x.to_string() });
    }
    let y = x.level();
    pool.require_level(y)?;
    let mut found = None;
    for b in level_one {
        let s = x.add(b);
        // (c, d) and (d, c) are both witnesses, so y_c <= y_d suffices.
        for yc in 1..=y.div_ceil(2) {
            let flow = for_each_submultiset(s.x(), 2 * yc as u64, &mut |c| {
                let c = MonoidVector::new(c.to_vec(), yc);
                if c == *x || c == *b || !pool.contains(&c) {
                    return ControlFlow::Continue(());
                }
                let d = s.checked_sub(&c).expect("c <= x + b");
                found = Some(QuasiWitness { b: b.clone(), c, d });
                ControlFlow::Break(())
            });
            if flow.is_break() {
                return Ok(found);
            }
        }
    }
    Ok(None)
}
