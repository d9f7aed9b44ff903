use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use fermat_hodge::characters::enumerate_hodge_labels;
use fermat_hodge::cycles::{self, is_quasi_decomposable, ConditionReport, LevelStore, Outcome};
use fermat_hodge::hilbert::{is_decomposable, phi as phi_of, Algorithm, HilbertBasis};
use fermat_hodge::monoid::{gcd, is_member, Modulus, MonoidVector};
use fermat_hodge::{Error, Result};

use crate::cache::SCHEMA_VERSION;
use crate::store::Store;
use crate::{Format, INCOMPLETE, OK, USAGE, VERIFY_FAILED};

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Incomplete { .. } | Error::IncompletePool { .. } => INCOMPLETE,
        _ => USAGE,
    }
}

/// `(x_1, ..., x_{m-1}, y)`.
pub fn tuple_form(v: &MonoidVector) -> String {
    let parts: Vec<String> = v.x().iter().chain(std::iter::once(&v.level())).map(u32::to_string).collect();
    format!("({})", parts.join(", "))
}

fn json_doc(v: impl Serialize) -> String {
    let mut v = serde_json::to_value(v).expect("serializable");
    if let Value::Object(map) = &mut v {
        map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    }
    serde_json::to_string_pretty(&v).expect("serializable")
}

fn csv_doc(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

fn emit(s: &str) {
    if s.ends_with('\n') {
        print!("{s}");
    } else {
        println!("{s}");
    }
}

pub fn basis(store: &Store, m: u32, algorithm: Algorithm, max_level: Option<u32>, format: Format) -> Result<u8> {
    let m = Modulus::new(m)?;
    let b = store.basis(m, algorithm, max_level);
    let phi = phi_of(&b).ok();
    let out = match format {
        Format::Json => json_doc(json!({
            "m": m,
            "algorithm": b.algorithm,
            "complete": b.complete,
            "max_level_seen": b.max_level_seen,
            "exhausted": b.exhausted,
            "phi": phi,
            "count": b.elements.len(),
            "elements": b.elements,
        })),
        Format::Csv => csv_doc(&["level", "vector"], b.elements.iter().map(|v| vec![v.level().to_string(), v.to_string()])),
        Format::Text => {
            let mut s = format!(
                "# m={} algorithm={} complete={} max_level_seen={} elements={}\n",
                m,
                algorithm_name(b.algorithm),
                b.complete,
                b.max_level_seen,
                b.elements.len()
            );
            for v in &b.elements {
                s.push_str(&format!("{v}\n"));
            }
            s
        }
    };
    emit(&out);
    Ok(if b.complete { OK } else { INCOMPLETE })
}

fn algorithm_name(a: Algorithm) -> &'static str {
    match a {
        Algorithm::Completion => "completion",
        Algorithm::Levelwise => "levelwise",
    }
}

fn incomplete_note(b: &HilbertBasis) -> String {
    match b.exhausted {
        Some(e) => format!("incomplete ({e:?} budget exhausted, max level seen {})", b.max_level_seen).to_lowercase(),
        None => format!("incomplete (max level seen {})", b.max_level_seen),
    }
}

pub fn phi(store: &Store, m: u32, format: Format) -> Result<u8> {
    let m = Modulus::new(m)?;
    let b = store.basis(m, Algorithm::Completion, None);
    let phi = phi_of(&b).ok();
    let out = match format {
        Format::Json => json_doc(json!({ "m": m, "phi": phi, "complete": b.complete })),
        Format::Csv => csv_doc(&["m", "phi", "complete"], [row(m.get(), phi, b.complete)]),
        Format::Text => phi.map_or_else(|| incomplete_note(&b), |p| p.to_string()),
    };
    emit(&out);
    Ok(if b.complete { OK } else { INCOMPLETE })
}

fn row(m: u32, phi: Option<u32>, complete: bool) -> Vec<String> {
    vec![m.to_string(), phi.map_or(String::new(), |p| p.to_string()), complete.to_string()]
}

#[derive(Serialize)]
struct PhiRow {
    m: u32,
    phi: Option<u32>,
    complete: bool,
}

pub fn phi_table(store: &Store, from: u32, to: u32, format: Format) -> Result<u8> {
    if from < 2 || from > to {
        return Err(Error::InvalidArgument(format!("need 2 <= from <= to, got {from}..{to}")));
    }
    let rows: Vec<PhiRow> = (from..=to)
        .into_par_iter()
        .map(|m| {
            let b = store.basis(Modulus::new(m).expect("m >= 2"), Algorithm::Completion, None);
            PhiRow { m, phi: phi_of(&b).ok(), complete: b.complete }
        })
        .collect();
    let out = match format {
        Format::Json => json_doc(json!({ "rows": rows })),
        Format::Csv | Format::Text => csv_doc(&["m", "phi", "complete"], rows.iter().map(|r| row(r.m, r.phi, r.complete))),
    };
    emit(&out);
    Ok(if rows.iter().all(|r| r.complete) { OK } else { INCOMPLETE })
}

fn outcome_cells(o: &Outcome) -> (&'static str, String) {
    match o {
        Outcome::Quasi { witness } => ("QUASI", format!("b={} c={} d={}", witness.b, witness.c, witness.d)),
        Outcome::Standard { provenance: p } => ("STANDARD", format!("p={} i={} doubled={}", p.p, p.i, p.doubled)),
        Outcome::Fail => ("FAIL", String::new()),
    }
}

fn report_summary(r: &ConditionReport) -> String {
    format!(
        "checked={} quasi={} standard={} fail={} fail_without_exclusion={} verdict={}",
        r.checked, r.quasi_count, r.standard_count, r.fail_count, r.fail_count_without_exclusion, r.verdict
    )
}

pub fn check(store: &Store, m: u32, n: Option<u32>, exclude_standard: bool, format: Format) -> Result<u8> {
    let m = Modulus::new(m)?;
    if let Some(n) = n.filter(|n| n % 2 != 0) {
        return Err(Error::InvalidArgument(format!("dimension n = {n} must be even")));
    }
    let basis = store.basis_for(m, n);
    let r = store.report(&basis, n, exclude_standard)?;
    let out = match format {
        Format::Json => json_doc(&r),
        Format::Csv => csv_doc(
            &["vector", "level", "outcome", "detail"],
            r.outcomes.iter().map(|o| {
                let (kind, detail) = outcome_cells(&o.outcome);
                vec![o.vector.to_string(), o.vector.level().to_string(), kind.to_string(), detail]
            }),
        ),
        Format::Text => {
            let levels = r.max_level.map_or("3..".to_string(), |y| format!("3..={y}"));
            let mut s = format!(
                "# m={} n={} exclude_standard={} levels={}\n",
                m,
                n.map_or("all".to_string(), |n| n.to_string()),
                exclude_standard,
                levels
            );
            s.push_str(&report_summary(&r));
            s.push('\n');
            for o in &r.outcomes {
                let (kind, detail) = outcome_cells(&o.outcome);
                if !matches!(o.outcome, Outcome::Quasi { .. }) {
                    s.push_str(&format!("{kind} {} {detail}\n", tuple_form(&o.vector)).replace(" \n", "\n"));
                }
            }
            s
        }
    };
    emit(&out);
    Ok(OK)
}

#[derive(Serialize)]
struct ScanRow {
    m: u32,
    verdict: Option<bool>,
    checked: Option<usize>,
    quasi: Option<usize>,
    standard: Option<usize>,
    fail: Option<usize>,
    fail_without_exclusion: Option<usize>,
    failures: Vec<MonoidVector>,
    error: Option<String>,
}

pub fn scan(store: &Store, from: u32, to: u32, coprime_to: Option<u32>, format: Format) -> Result<u8> {
    if from < 2 || from > to {
        return Err(Error::InvalidArgument(format!("need 2 <= from <= to, got {from}..{to}")));
    }
    let ms: Vec<u32> = (from..=to).filter(|&m| coprime_to.is_none_or(|c| gcd(m as u64, c as u64) == 1)).collect();
    let rows: Vec<ScanRow> = ms
        .par_iter()
        .map(|&m| {
            let md = Modulus::new(m).expect("m >= 2");
            let basis = store.basis(md, Algorithm::Levelwise, Some(3));
            match store.report(&basis, Some(4), true) {
                Ok(r) => ScanRow {
                    m,
                    verdict: Some(r.verdict),
                    checked: Some(r.checked),
                    quasi: Some(r.quasi_count),
                    standard: Some(r.standard_count),
                    fail: Some(r.fail_count),
                    fail_without_exclusion: Some(r.fail_count_without_exclusion),
                    failures: r.failures().cloned().collect(),
                    error: None,
                },
                Err(e) => ScanRow {
                    m,
                    verdict: None,
                    checked: None,
                    quasi: None,
                    standard: None,
                    fail: None,
                    fail_without_exclusion: None,
                    failures: Vec::new(),
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let holds = rows.iter().filter(|r| r.verdict == Some(true)).count();
    let fails = rows.iter().filter(|r| r.verdict == Some(false)).count();
    let incomplete = rows.len() - holds - fails;
    let opt = |v: Option<usize>| v.map_or(String::new(), |v| v.to_string());
    let out = match format {
        Format::Json => json_doc(json!({
            "from": from,
            "to": to,
            "coprime_to": coprime_to,
            "rows": rows,
            "summary": { "moduli": rows.len(), "true": holds, "false": fails, "incomplete": incomplete, "all_true": holds == rows.len() },
        })),
        Format::Csv => csv_doc(
            &["m", "verdict", "checked", "quasi", "standard", "fail", "fail_without_exclusion", "error"],
            rows.iter().map(|r| {
                vec![
                    r.m.to_string(),
                    r.verdict.map_or(String::new(), |v| v.to_string()),
                    opt(r.checked),
                    opt(r.quasi),
                    opt(r.standard),
                    opt(r.fail),
                    opt(r.fail_without_exclusion),
                    r.error.clone().unwrap_or_default(),
                ]
            }),
        ),
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                match (&r.verdict, &r.error) {
                    (Some(v), _) => {
                        s.push_str(&format!(
                            "m={} checked={} quasi={} standard={} fail={} fail_without_exclusion={} verdict={}\n",
                            r.m,
                            opt(r.checked),
                            opt(r.quasi),
                            opt(r.standard),
                            opt(r.fail),
                            opt(r.fail_without_exclusion),
                            v
                        ));
                        for f in &r.failures {
                            s.push_str(&format!("  FAIL {}\n", tuple_form(f)));
                        }
                    }
                    (None, e) => s.push_str(&format!("m={} incomplete: {}\n", r.m, e.as_deref().unwrap_or(""))),
                }
            }
            s.push_str(&format!(
                "summary: moduli={} true={} false={} incomplete={} all_true={}\n",
                rows.len(),
                holds,
                fails,
                incomplete,
                holds == rows.len()
            ));
            s
        }
    };
    emit(&out);
    Ok(if incomplete == 0 { OK } else { INCOMPLETE })
}

pub fn hodge(m: u32, n: u32, orbits: bool, format: Format) -> Result<u8> {
    let m = Modulus::new(m)?;
    let labels = enumerate_hodge_labels(m, n, orbits)?;
    let strs: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
    let out = match format {
        Format::Json => json_doc(json!({ "m": m, "n": n, "orbits": orbits, "count": strs.len(), "labels": strs })),
        Format::Csv => csv_doc(&["label"], strs.iter().map(|s| vec![s.clone()])),
        Format::Text => strs.iter().map(|s| format!("({s})\n")).collect(),
    };
    emit(&out);
    Ok(OK)
}

pub fn verdict(store: &Store, m: u32, n: u32, format: Format) -> Result<u8> {
    let m = Modulus::new(m)?;
    let v = cycles::verdict(m, n, &store.budget)?;
    let out = match format {
        Format::Json => json_doc(json!({
            "m": v.m,
            "n": v.n,
            "status": v.status,
            "justification": v.justification,
            "report": v.report.as_ref().map(|r| json!({
                "verdict": r.verdict,
                "checked": r.checked,
                "fail": r.fail_count,
                "failures": r.failures().collect::<Vec<_>>(),
            })),
        })),
        Format::Csv => csv_doc(&["m", "n", "status", "justification"], [vec![
            m.to_string(),
            n.to_string(),
            v.status.to_string(),
            v.justification.clone(),
        ]]),
        Format::Text => format!("{}\n{}", v.status, v.justification),
    };
    emit(&out);
    Ok(OK)
}

/// The element of `M_33(3)` with residues 7, 10, 13, 19, 22, 28.
pub fn vector_33() -> MonoidVector {
    MonoidVector::from_residues(Modulus::new(33).expect("valid"), &[7, 10, 13, 19, 22, 28], 3)
}

pub fn verify_33(store: &Store) -> Result<u8> {
    let m = Modulus::new(33)?;
    let x = vector_33();
    let member = is_member(&x, m)?;
    let basis = store.basis(m, Algorithm::Completion, None);
    let indecomposable = member && is_decomposable(&x, m)?.is_none() && (!basis.complete || basis.contains(&x));
    let standard = store.standards(m).contains(&x);
    let quasi = if member {
        let levels: Vec<Vec<MonoidVector>> = (1..=x.level()).map(|y| store.level(m, y)).collect();
        let pool = LevelStore::from_levels(m, levels);
        let ones = pool.level(1).expect("level 1").to_vec();
        is_quasi_decomposable(&x, m, &ones, &pool)?.is_some()
    } else {
        true
    };
    let mark = |ok: bool| if ok { "confirmed" } else { "FAILED" };
    println!("member of M_33(3): {} {}", mark(member), tuple_form(&x));
    println!("indecomposable: {}", mark(indecomposable));
    println!("not standard: {}", mark(!standard));
    println!("not quasi-decomposable: {}", mark(!quasi));
    Ok(if member && indecomposable && !standard && !quasi { OK } else { VERIFY_FAILED })
}

pub fn newton(d: u32, trials: u32, seed: u64, format: Format) -> Result<u8> {
    let holds = cycles::newton_identity_check(d, trials, seed)?;
    let out = match format {
        Format::Json => json_doc(json!({ "d": d, "trials": trials, "seed": seed, "holds": holds })),
        Format::Csv => csv_doc(&["d", "trials", "seed", "holds"], [vec![
            d.to_string(),
            trials.to_string(),
            seed.to_string(),
            holds.to_string(),
        ]]),
        Format::Text => holds.to_string(),
    };
    emit(&out);
    Ok(if holds { OK } else { VERIFY_FAILED })
}
