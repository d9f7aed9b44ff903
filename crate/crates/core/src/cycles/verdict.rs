//! Which known result, if any, settles the Hodge conjecture for `X^n_m`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::condition::{check_condition, ConditionReport};
use crate::error::{Error, Result};
use crate::hilbert::BasisOptions;
use crate::lattice::Budget;
use crate::monoid::{gcd, is_prime, Modulus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PROVEN_DIM_LE_2")]
    ProvenDimLe2,
    #[serde(rename = "PROVEN_PRIME_OR_4")]
    ProvenPrimeOr4,
    #[serde(rename = "PROVEN_PRIME_SQUARE")]
    ProvenPrimeSquare,
    #[serde(rename = "PROVEN_M_LE_20")]
    ProvenMLe20,
    #[serde(rename = "PROVEN_M_21_27")]
    ProvenM2127,
    #[serde(rename = "PROVEN_FOURFOLD_COPRIME_6")]
    ProvenFourfoldCoprime6,
    #[serde(rename = "PROVEN_BY_PNM_CHECK")]
    ProvenByPnmCheck,
    #[serde(rename = "UNDETERMINED")]
    Undetermined,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::ProvenDimLe2 => "PROVEN_DIM_LE_2",
            Status::ProvenPrimeOr4 => "PROVEN_PRIME_OR_4",
            Status::ProvenPrimeSquare => "PROVEN_PRIME_SQUARE",
            Status::ProvenMLe20 => "PROVEN_M_LE_20",
            Status::ProvenM2127 => "PROVEN_M_21_27",
            Status::ProvenFourfoldCoprime6 => "PROVEN_FOURFOLD_COPRIME_6",
            Status::ProvenByPnmCheck => "PROVEN_BY_PNM_CHECK",
            Status::Undetermined => "UNDETERMINED",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub m: Modulus,
    pub n: u32,
    pub status: Status,
    pub justification: String,
    pub report: Option<ConditionReport>,
}

/// The listed theorem covering `(m, n)`, if any.
pub fn theorem_status(m: Modulus, n: u32) -> Option<(Status, &'static str)> {
    let mm = m.get();
    let root = (mm as f64).sqrt().round() as u32;
    if n <= 2 {
        Some((Status::ProvenDimLe2, "the Hodge conjecture holds in dimension n <= 2 for every m"))
    } else if m.is_prime() || mm == 4 {
        Some((Status::ProvenPrimeOr4, "M_m is generated by M_m(1) when m is prime or m = 4"))
    } else if root * root == mm && is_prime(root) {
        Some((Status::ProvenPrimeSquare, "for m = p^2 the classes are spanned by standard cycles"))
    } else if mm <= 20 {
        Some((Status::ProvenMLe20, "condition (P_m) holds for every m <= 20"))
    } else if mm == 21 || mm == 27 {
        Some((Status::ProvenM2127, "condition (P_m) holds for m = 21 and m = 27 after excluding standard elements"))
    } else if n == 4 && gcd(mm as u64, 6) == 1 {
        Some((Status::ProvenFourfoldCoprime6, "the Hodge conjecture holds for Fermat fourfolds with gcd(m, 6) = 1"))
    } else {
        None
    }
}

/// Falls back to checking `(P^n_m)` with standard exclusion, first on the
/// full basis and then on a levelwise scan up to `n/2 + 1`.
pub fn verdict(m: Modulus, n: u32, budget: &Budget) -> Result<VerdictReport> {
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("dimension n = {n} must be even")));
    }
    if let Some((status, why)) = theorem_status(m, n) {
        return Ok(VerdictReport { m, n, status, justification: why.to_string(), report: None });
    }
    let attempts = [
        BasisOptions { budget: *budget, ..BasisOptions::completion() },
        BasisOptions { budget: *budget, ..BasisOptions::levelwise(Some(n / 2 + 1)) },
    ];
    let mut last_error = None;
    for opts in &attempts {
        match check_condition(m, Some(n), true, opts) {
            Ok(report) => {
                let (status, justification) = if report.verdict {
                    (Status::ProvenByPnmCheck, format!("every non-standard indecomposable of level 3..={} is quasi-decomposable", n / 2 + 1))
                } else {
                    (Status::Undetermined, format!("{} indecomposable(s) are neither standard nor quasi-decomposable", report.fail_count))
                };
                return Ok(VerdictReport { m, n, status, justification, report: Some(report) });
            }
            Err(e) => last_error = Some(e),
        }
    }
    let justification = format!("no theorem applies and the condition check did not finish: {}", last_error.expect("two attempts"));
    Ok(VerdictReport { m, n, status: Status::Undetermined, justification, report: None })
}
