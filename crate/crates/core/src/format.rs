//! The JSON matrix file:
//!
//! ```text
//! {"genus": g, "variable": "n" | null,
//!  "alpha": [[entry, ...], ...], "beta": [...], "gamma": [...],
//!  "label": "..."}
//! ```
//!
//! An entry is a JSON integer or a polynomial string such as `"3+2n"`.
//! Output is canonical: integers for constant entries that fit in `i64`,
//! strings otherwise, one row per line.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::diagram::{DiagramError, Family, TrisectionMatrix};
use crate::exactalg::{AlgError, HClass, IntPoly, SymplecticSpace};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{family}_{row}, column {col}: {source}")]
    Entry { family: Family, row: usize, col: usize, source: AlgError },
    #[error("{family}_{row}, column {col}: expected integer or polynomial string")]
    EntryType { family: Family, row: usize, col: usize },
    #[error("unsupported variable {0:?}; only \"n\" is supported")]
    Variable(String),
    #[error("entry {0} depends on n but \"variable\" is null")]
    UndeclaredVariable(String),
    #[error(transparent)]
    Shape(#[from] DiagramError),
}

#[derive(Deserialize)]
struct RawMatrix {
    genus: usize,
    #[serde(default)]
    variable: Option<String>,
    alpha: Vec<Vec<Value>>,
    beta: Vec<Vec<Value>>,
    gamma: Vec<Vec<Value>>,
    #[serde(default)]
    label: String,
}

fn parse_entry(v: &Value) -> Option<Result<IntPoly, AlgError>> {
    match v {
        Value::Number(num) => {
            let text = num.to_string();
            Some(text.parse::<BigInt>().map(IntPoly::constant).map_err(|_| AlgError::PolySyntax(text)))
        }
        Value::String(s) => Some(s.parse()),
        _ => None,
    }
}

pub fn parse_matrix(text: &str) -> Result<TrisectionMatrix, FormatError> {
    let raw: RawMatrix = serde_json::from_str(text)?;
    if let Some(var) = &raw.variable {
        if var != "n" {
            return Err(FormatError::Variable(var.clone()));
        }
    }
    let mut fams: Vec<Vec<HClass>> = Vec::with_capacity(3);
    for (family, rows) in Family::ALL.into_iter().zip([&raw.alpha, &raw.beta, &raw.gamma]) {
        let mut out = Vec::with_capacity(rows.len());
        for (r, row) in rows.iter().enumerate() {
            let mut entries = Vec::with_capacity(row.len());
            for (c, v) in row.iter().enumerate() {
                let (row, col) = (r + 1, c + 1);
                let p = parse_entry(v)
                    .ok_or(FormatError::EntryType { family, row, col })?
                    .map_err(|source| FormatError::Entry { family, row, col, source })?;
                if raw.variable.is_none() && !p.is_constant() {
                    return Err(FormatError::UndeclaredVariable(p.to_string()));
                }
                entries.push(p);
            }
            out.push(HClass(entries));
        }
        fams.push(out);
    }
    let gamma = fams.pop().unwrap();
    let beta = fams.pop().unwrap();
    let alpha = fams.pop().unwrap();
    Ok(TrisectionMatrix::new(SymplecticSpace::new(raw.genus), alpha, beta, gamma)?.with_label(raw.label))
}

pub fn entry_json(p: &IntPoly) -> String {
    match p.as_constant().and_then(|c| c.to_i64()) {
        Some(i) => i.to_string(),
        None => serde_json::to_string(&p.to_string()).unwrap(),
    }
}

pub fn row_json(r: &HClass) -> String {
    let parts: Vec<String> = r.entries().iter().map(entry_json).collect();
    format!("[{}]", parts.join(", "))
}

/// Canonical text of a matrix file, newline-terminated.
pub fn write_matrix(d: &TrisectionMatrix) -> String {
    let mut s = String::new();
    s.push_str("{\n");
    s.push_str(&format!("  \"genus\": {},\n", d.genus()));
    let var = if d.is_symbolic() { "\"n\"" } else { "null" };
    s.push_str(&format!("  \"variable\": {var},\n"));
    for f in Family::ALL {
        let rows = d.family(f);
        if rows.is_empty() {
            s.push_str(&format!("  \"{f}\": [],\n"));
            continue;
        }
        s.push_str(&format!("  \"{f}\": [\n"));
        for (i, r) in rows.iter().enumerate() {
            let sep = if i + 1 == rows.len() { "" } else { "," };
            s.push_str(&format!("    {}{sep}\n", row_json(r)));
        }
        s.push_str("  ],\n");
    }
    s.push_str(&format!("  \"label\": {}\n", serde_json::to_string(d.label()).unwrap()));
    s.push_str("}\n");
    s
}

/// One-line form, used for `expect inline=` in certificates.
pub fn write_matrix_compact(d: &TrisectionMatrix) -> String {
    let fam = |f: Family| {
        let rows: Vec<String> = d.family(f).iter().map(row_json).collect();
        format!("[{}]", rows.join(","))
    };
    let var = if d.is_symbolic() { "\"n\"" } else { "null" };
    format!(
        "{{\"genus\":{},\"variable\":{var},\"alpha\":{},\"beta\":{},\"gamma\":{},\"label\":{}}}",
        d.genus(),
        fam(Family::Alpha),
        fam(Family::Beta),
        fam(Family::Gamma),
        serde_json::to_string(d.label()).unwrap()
    )
}

/// Serializes like [`serialize_bigints`].
pub struct IntList<'a>(pub &'a [BigInt]);

impl Serialize for IntList<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_bigints(self.0, s)
    }
}

/// Integers as JSON numbers when they fit in `i64`, else as strings.
pub fn serialize_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_i64() {
            Some(i) => seq.serialize_element(&i)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
  "genus": 1,
  "variable": "n",
  "alpha": [
    [1, "3+2n"]
  ],
  "beta": [
    [1, 0]
  ],
  "gamma": [
    [0, "-2-2*n"]
  ],
  "label": "sample"
}
"#;

    #[test]
    fn parse_and_canonical_write() {
        let d = parse_matrix(SAMPLE).unwrap();
        assert_eq!(d.row(Family::Alpha, 0).0[1], IntPoly::linear(3, 2));
        assert_eq!(d.row(Family::Gamma, 0).0[1], IntPoly::linear(-2, -2));
        let out = write_matrix(&d);
        assert!(out.contains("[0, \"-2-2n\"]"));
        assert_eq!(parse_matrix(&out).unwrap(), d);
        assert_eq!(write_matrix(&parse_matrix(&out).unwrap()), out);
        assert_eq!(parse_matrix(&write_matrix_compact(&d)).unwrap(), d);
    }

    #[test]
    fn constant_matrix_has_null_variable() {
        let d = parse_matrix(SAMPLE).unwrap().evaluate(1);
        let out = write_matrix(&d);
        assert!(out.contains("\"variable\": null"));
        assert!(out.contains("[1, 5]"));
    }

    #[test]
    fn errors() {
        let undeclared = SAMPLE.replace("\"variable\": \"n\"", "\"variable\": null");
        assert!(matches!(parse_matrix(&undeclared), Err(FormatError::UndeclaredVariable(_))));
        let other_var = SAMPLE.replace("\"variable\": \"n\"", "\"variable\": \"m\"");
        assert!(matches!(parse_matrix(&other_var), Err(FormatError::Variable(_))));
        let bad = SAMPLE.replace("3+2n", "3+2x");
        assert!(matches!(
            parse_matrix(&bad),
            Err(FormatError::Entry { family: Family::Alpha, row: 1, col: 2, .. })
        ));
        let float = SAMPLE.replace("[1, 0]", "[1.5, 0]");
        assert!(parse_matrix(&float).is_err());
        let short = SAMPLE.replace("[1, 0]", "[1]");
        assert!(matches!(parse_matrix(&short), Err(FormatError::Shape(_))));
    }
}
