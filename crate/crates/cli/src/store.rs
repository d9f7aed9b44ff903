//! Cached access to the library computations.

use fermat_hodge::cycles::{check_basis, standard_elements, ConditionReport, StandardSet};
use fermat_hodge::hilbert::{hilbert_basis, Algorithm, BasisOptions, HilbertBasis};
use fermat_hodge::lattice::Budget;
use fermat_hodge::monoid::{enumerate_level, Modulus, MonoidVector};
use fermat_hodge::Result;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::cache::{Cache, Key, Kind, Lookup};

pub struct Store {
    pub cache: Option<Cache>,
    pub budget: Budget,
    pub verbose: bool,
}

impl Store {
    fn note(&self, key: &Key, what: &str) {
        if self.verbose {
            if let Some(c) = &self.cache {
                eprintln!("cache {what}: {}", c.path(key).display());
            }
        }
    }

    fn cached<T>(&self, key: &Key, decode: impl Fn(&str) -> Option<T>) -> Option<T> {
        let cache = self.cache.as_ref()?;
        match cache.get(key) {
            (Lookup::Hit, Some(p)) => match decode(&p) {
                Some(v) => {
                    self.note(key, "hit");
                    Some(v)
                }
                None => None,
            },
            (Lookup::Invalid, _) => {
                self.note(key, "invalid, recomputing");
                None
            }
            _ => None,
        }
    }

    fn store(&self, key: &Key, payload: &str) {
        if let Some(c) = &self.cache {
            match c.put(key, payload) {
                Ok(()) => self.note(key, "write"),
                Err(e) => eprintln!("warning: cache write failed for {}: {e}", c.path(key).display()),
            }
        }
    }

    fn json_cached<T: Serialize + DeserializeOwned>(&self, key: &Key, compute: impl FnOnce() -> (T, bool)) -> T {
        if let Some(v) = self.cached(key, |p| serde_json::from_str(p).ok()) {
            return v;
        }
        let (v, keep) = compute();
        if keep {
            self.store(key, &serde_json::to_string(&v).expect("serializable"));
        }
        v
    }

    pub fn level(&self, m: Modulus, y: u32) -> Vec<MonoidVector> {
        let key = Key::level(m.get(), y);
        let decode = |p: &str| p.lines().map(|l| l.parse().ok()).collect::<Option<Vec<MonoidVector>>>();
        if let Some(v) = self.cached(&key, decode) {
            return v;
        }
        let v = enumerate_level(m, y);
        let payload: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        self.store(&key, &payload.join("\n"));
        v
    }

    /// Bases that ran into the budget are returned but not stored.
    pub fn basis(&self, m: Modulus, algorithm: Algorithm, max_level: Option<u32>) -> HilbertBasis {
        let variant = match (algorithm, max_level) {
            (Algorithm::Completion, _) => "completion".to_string(),
            (Algorithm::Levelwise, None) => "levelwise".to_string(),
            (Algorithm::Levelwise, Some(l)) => format!("levelwise-l{l}"),
        };
        let key = Key::new(Kind::Basis, m.get()).with_variant(variant);
        let opts = BasisOptions { algorithm, max_level, trusted_bound: None, budget: self.budget };
        self.json_cached(&key, || {
            let b = hilbert_basis(m, &opts);
            let keep = b.exhausted.is_none();
            (b, keep)
        })
    }

    pub fn standards(&self, m: Modulus) -> StandardSet {
        let key = Key::new(Kind::Standard, m.get());
        self.json_cached(&key, || (standard_elements(m), true))
    }

    /// The full basis when it finishes in budget; for `Some(n)` a levelwise
    /// scan up to `n/2 + 1` otherwise.
    pub fn basis_for(&self, m: Modulus, n: Option<u32>) -> HilbertBasis {
        let full = self.basis(m, Algorithm::Completion, None);
        match n {
            Some(n) if !full.covers_level(n / 2 + 1) => self.basis(m, Algorithm::Levelwise, Some(n / 2 + 1)),
            _ => full,
        }
    }

    pub fn report(&self, basis: &HilbertBasis, n: Option<u32>, exclude_standard: bool) -> Result<ConditionReport> {
        let variant = format!(
            "{}-{}-{}",
            n.map_or("all".to_string(), |n| format!("n{n}")),
            if exclude_standard { "excl" } else { "incl" },
            match (basis.algorithm, basis.complete) {
                (_, true) => "full".to_string(),
                (_, false) => format!("l{}", basis.max_level_seen),
            }
        );
        let key = Key::new(Kind::Report, basis.m.get()).with_variant(variant);
        if let Some(r) = self.cached(&key, |p| serde_json::from_str(p).ok()) {
            return Ok(r);
        }
        let r = check_basis(basis, n, exclude_standard)?;
        self.store(&key, &serde_json::to_string(&r).expect("serializable"));
        Ok(r)
    }
}
