//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a JSON string. The demo never sets a deadline (there
//! is no clock on `wasm32-unknown-unknown`); the candidate cap bounds work.

use serde_json::json;
use wasm_bindgen::prelude::*;

use fermat_hodge::characters::enumerate_hodge_labels;
use fermat_hodge::hilbert::{hilbert_basis, phi, BasisOptions};
use fermat_hodge::lattice::Budget;
use fermat_hodge::monoid::Modulus;

/// Largest modulus the page accepts.
pub const MAX_M: u32 = 47;
const MAX_CANDIDATES: usize = 2_000_000;

fn modulus(m: u32) -> Result<Modulus, String> {
    if m > MAX_M {
        return Err(format!("m = {m} exceeds the demo limit {MAX_M}"));
    }
    Modulus::new(m).map_err(|e| e.to_string())
}

fn options() -> BasisOptions {
    BasisOptions { budget: Budget::unlimited().with_max_candidates(MAX_CANDIDATES), ..BasisOptions::completion() }
}

pub fn basis_json(m: u32) -> Result<String, String> {
    let m = modulus(m)?;
    let b = hilbert_basis(m, &options());
    Ok(json!({
        "m": m,
        "complete": b.complete,
        "phi": phi(&b).ok(),
        "elements": b.elements,
    })
    .to_string())
}

pub fn phi_series_json(from: u32, to: u32) -> Result<String, String> {
    if from > to {
        return Err(format!("empty range {from}..{to}"));
    }
    let mut points = Vec::new();
    for m in from.max(2)..=to {
        let b = hilbert_basis(modulus(m)?, &options());
        points.push(json!({ "m": m, "phi": phi(&b).ok() }));
    }
    Ok(serde_json::Value::Array(points).to_string())
}

pub fn hodge_labels_json(m: u32, n: u32) -> Result<String, String> {
    let labels = enumerate_hodge_labels(modulus(m)?, n, false).map_err(|e| e.to_string())?;
    let labels: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
    Ok(json!({ "m": m, "n": n, "labels": labels }).to_string())
}

#[wasm_bindgen]
pub fn basis(m: u32) -> Result<String, JsError> {
    basis_json(m).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn phi_series(from: u32, to: u32) -> Result<String, JsError> {
    phi_series_json(from, to).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn hodge_labels(m: u32, n: u32) -> Result<String, JsError> {
    hodge_labels_json(m, n).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exports_produce_json() {
        let v: serde_json::Value = serde_json::from_str(&basis_json(4).unwrap()).unwrap();
        assert_eq!(v["elements"], json!(["0,2,0;1", "1,0,1;1"]));
        let s: serde_json::Value = serde_json::from_str(&phi_series_json(5, 9).unwrap()).unwrap();
        let phis: Vec<u64> = s.as_array().unwrap().iter().map(|p| p["phi"].as_u64().unwrap()).collect();
        assert_eq!(phis, [1, 3, 1, 3, 2]);
        let h: serde_json::Value = serde_json::from_str(&hodge_labels_json(3, 2).unwrap()).unwrap();
        assert_eq!(h["labels"], json!(["1,1,2,2"]));
        assert!(basis_json(1).is_err());
        assert!(basis_json(200).is_err());
        assert!(hodge_labels_json(5, 3).is_err());
    }
}
