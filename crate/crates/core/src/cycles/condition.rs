//! Conditions `(P^n_m)` and `(P_m)`: every indecomposable of level at least
//! 3 (and at most `n/2 + 1` for `(P^n_m)`) is quasi-decomposable.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quasi::{is_quasi_decomposable, EquationPool, QuasiWitness};
use super::standard::{standard_elements, StandardProvenance};
use crate::error::{Error, Result};
use crate::hilbert::{hilbert_basis, BasisOptions, HilbertBasis};
use crate::monoid::{gcd, level_one, Modulus, MonoidVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Quasi { witness: QuasiWitness },
    Standard { provenance: StandardProvenance },
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementOutcome {
    pub vector: MonoidVector,
    pub outcome: Outcome,
    /// Whether a quasi witness exists, independently of the standard set.
    pub quasi: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub m: Modulus,
    pub n: Option<u32>,
    pub exclude_standard: bool,
    pub min_level: u32,
    /// `None` for `(P_m)`.
    pub max_level: Option<u32>,
    pub outcomes: Vec<ElementOutcome>,
    pub verdict: bool,
    pub basis_complete: bool,
    pub checked: usize,
    pub quasi_count: usize,
    pub standard_count: usize,
    pub fail_count: usize,
    /// Failures had the standard set not been excluded.
    pub fail_count_without_exclusion: usize,
}

impl ConditionReport {
    pub fn failures(&self) -> impl Iterator<Item = &MonoidVector> {
        self.outcomes.iter().filter(|o| o.outcome == Outcome::Fail).map(|o| &o.vector)
    }

    /// Some exclusion relied on a doubled or `p = 2` standard element.
    pub fn uses_weak_standards(&self) -> bool {
        self.outcomes.iter().any(|o| match &o.outcome {
            Outcome::Standard { provenance } => provenance.doubled || provenance.low_confidence(),
            _ => false,
        })
    }
}

/// Computes the basis with `opts` and checks the condition on it.
pub fn check_condition(m: Modulus, n: Option<u32>, exclude_standard: bool, opts: &BasisOptions) -> Result<ConditionReport> {
    check_n(n)?;
    let basis = hilbert_basis(m, opts);
    check_basis(&basis, n, exclude_standard)
}

fn check_n(n: Option<u32>) -> Result<()> {
    match n {
        Some(n) if n % 2 != 0 => Err(Error::InvalidArgument(format!("dimension n = {n} must be even"))),
        _ => Ok(()),
    }
}

pub fn check_basis(basis: &HilbertBasis, n: Option<u32>, exclude_standard: bool) -> Result<ConditionReport> {
    check_n(n)?;
    let m = basis.m;
    let max_level = n.map(|n| n / 2 + 1);
    let covered = match max_level {
        Some(y) => basis.covers_level(y),
        None => basis.complete,
    };
    if !covered {
        return Err(Error::Incomplete { m: m.get(), max_level_seen: basis.max_level_seen });
    }
    let standards = standard_elements(m);
    let ones = level_one(m);
    let pool = EquationPool::new(m);
    let targets: Vec<&MonoidVector> =
        basis.elements.iter().filter(|v| v.level() >= 3 && max_level.is_none_or(|y| v.level() <= y)).collect();
    let outcomes = targets
        .par_iter()
        .map(|&v| {
            let witness = is_quasi_decomposable(v, m, &ones, &pool)?;
            let quasi = witness.is_some();
            let outcome = match (exclude_standard.then(|| standards.provenance(v)).flatten(), witness) {
                (Some(provenance), _) => Outcome::Standard { provenance },
                (None, Some(witness)) => Outcome::Quasi { witness },
                (None, None) => Outcome::Fail,
            };
            Ok(ElementOutcome { vector: v.clone(), outcome, quasi })
        })
        .collect::<Result<Vec<_>>>()?;
    let count = |f: fn(&ElementOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count();
    let fail_count = count(|o| o.outcome == Outcome::Fail);
    Ok(ConditionReport {
        m,
        n,
        exclude_standard,
        min_level: 3,
        max_level,
        verdict: fail_count == 0,
        basis_complete: basis.complete,
        checked: outcomes.len(),
        quasi_count: count(|o| matches!(o.outcome, Outcome::Quasi { .. })),
        standard_count: count(|o| matches!(o.outcome, Outcome::Standard { .. })),
        fail_count,
        fail_count_without_exclusion: count(|o| !o.quasi),
        outcomes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub m: u32,
    pub report: Option<ConditionReport>,
    /// Why no report was produced, e.g. an exhausted budget.
    pub error: Option<String>,
}

/// `(P^4_m)` with standard exclusion for each `m` in range, optionally only
/// those coprime to `coprime_to`. Only levels up to 3 are needed, so the
/// basis comes from a levelwise scan unless `opts` says otherwise.
pub fn scan_fourfolds(m_from: u32, m_to: u32, coprime_to: Option<u32>, opts: Option<&BasisOptions>) -> Result<Vec<ScanEntry>> {
    if m_from < 2 || m_from > m_to {
        return Err(Error::InvalidArgument(format!("bad range {m_from}..{m_to}")));
    }
    let default = BasisOptions::levelwise(Some(3));
    let opts = opts.unwrap_or(&default);
    let ms: Vec<u32> = (m_from..=m_to).filter(|&m| coprime_to.is_none_or(|c| gcd(m as u64, c as u64) == 1)).collect();
    Ok(ms
        .par_iter()
        .map(|&m| {
            let result = Modulus::new(m).and_then(|md| check_condition(md, Some(4), true, opts));
            match result {
                Ok(report) => ScanEntry { m, report: Some(report), error: None },
                Err(e) => ScanEntry { m, report: None, error: Some(e.to_string()) },
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(m: u32) -> Modulus {
        Modulus::new(m).unwrap()
    }

    #[test]
    fn small_moduli_hold() {
        for m in [12, 13, 15] {
            let r = check_condition(md(m), None, false, &BasisOptions::completion()).unwrap();
            assert!(r.verdict, "m={m}");
        }
        let r = check_condition(md(13), None, false, &BasisOptions::completion()).unwrap();
        assert_eq!(r.checked, 0);
    }

    #[test]
    fn m33_fails_on_the_known_vector() {
        let r = check_condition(md(33), Some(4), true, &BasisOptions::completion()).unwrap();
        assert!(!r.verdict);
        let x = MonoidVector::from_residues(md(33), &[7, 10, 13, 19, 22, 28], 3);
        assert!(r.failures().any(|v| *v == x));
    }

    #[test]
    fn witnesses_certify() {
        let r = check_condition(md(21), None, true, &BasisOptions::completion()).unwrap();
        assert!(r.verdict);
        for o in &r.outcomes {
            if let Outcome::Quasi { witness } = &o.outcome {
                assert!(witness.certifies(&o.vector, md(21)));
            }
        }
    }

    #[test]
    fn incomplete_basis_is_rejected() {
        let b = hilbert_basis(md(12), &BasisOptions::levelwise(Some(3)));
        assert!(matches!(check_basis(&b, None, false), Err(Error::Incomplete { .. })));
        assert!(check_basis(&b, Some(4), false).is_ok());
        assert!(matches!(check_basis(&b, Some(6), false), Err(Error::Incomplete { .. })));
        assert!(check_basis(&b, Some(3), false).is_err());
    }

    #[test]
    fn scan_examples() {
        let s = scan_fourfolds(5, 35, Some(6), None).unwrap();
        assert!(s.iter().all(|e| e.report.as_ref().is_some_and(|r| r.verdict)));
        let s = scan_fourfolds(33, 33, None, None).unwrap();
        assert!(!s[0].report.as_ref().unwrap().verdict);
        let s = scan_fourfolds(3, 3, None, None).unwrap();
        assert_eq!(s[0].report.as_ref().unwrap().checked, 0);

        let r = scan_fourfolds(25, 25, None, None).unwrap().remove(0).report.unwrap();
        assert!(r.verdict);
        assert!(r.standard_count > 0);
        assert!(r.fail_count_without_exclusion > 0);
    }
}
