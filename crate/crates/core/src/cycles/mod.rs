//! Quasi-decomposability, standard elements, the conditions `(P^n_m)` and
//! `(P_m)`, and the verdict engine built on them.

pub mod condition;
pub mod newton;
pub mod quasi;
pub mod standard;
pub mod verdict;

pub use condition::{check_basis, check_condition, scan_fourfolds, ConditionReport, ElementOutcome, Outcome, ScanEntry};
pub use newton::{newton_identity_check, newton_sides};
pub use quasi::{is_quasi_decomposable, EquationPool, LevelStore, Pool, QuasiWitness};
pub use standard::{standard_elements, StandardProvenance, StandardSet};
pub use verdict::{verdict, Status, VerdictReport};
