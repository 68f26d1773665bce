//! JSON input: one algebra by structure constants and named modules over
//! it by action matrices.
//!
//! ```json
//! {
//!   "algebra": {"p": 2, "dim": 2, "unit": [1, 1],
//!               "mult": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]},
//!   "modules": {"S0": {"algebra_ref": "algebra", "dim": 1,
//!                      "action": [[[1]], [[0]]]}}
//! }
//! ```
//!
//! `mult[i][j]` holds the coordinates of `e_i e_j`; `action[i]` is the
//! row-major matrix by which `e_i` acts on column vectors. The optional
//! `algebra.name` (default `algebra`) is what `algebra_ref` must name.
//! Unknown keys are rejected, and every diagnostic carries the JSON path of
//! the offending value.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use crate::algmod::{validate_algebra, validate_module, Algebra, Module};
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Mat};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    algebra: RawAlgebra,
    #[serde(default)]
    modules: BTreeMap<String, RawModule>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    #[serde(default)]
    name: Option<String>,
    p: u64,
    dim: usize,
    unit: Vec<u64>,
    mult: Vec<Vec<Vec<u64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    algebra_ref: String,
    dim: usize,
    action: Vec<Vec<Vec<u64>>>,
}

/// A parsed and validated input document.
#[derive(Debug, Clone)]
pub struct Input {
    pub algebra: Arc<Algebra>,
    /// Modules by name, in name order.
    pub modules: BTreeMap<String, Module>,
}

impl Input {
    pub fn module(&self, name: &str) -> Result<&Module> {
        self.modules.get(name).ok_or_else(|| {
            let known: Vec<&str> = self.modules.keys().map(String::as_str).collect();
            Error::Input(format!(
                "no module `{name}` in input (available: {})",
                known.join(", ")
            ))
        })
    }
}

fn located(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Input(format!("{path}: {msg}"))
}

fn check_len<T>(path: &str, v: &[T], want: usize) -> Result<()> {
    if v.len() != want {
        return Err(located(
            path,
            format!("expected {want} entries, found {}", v.len()),
        ));
    }
    Ok(())
}

fn entry(f: FieldSpec, path: &str, x: u64) -> Result<u16> {
    if x >= f.p() as u64 {
        return Err(located(
            path,
            format!("entry {x} is not reduced mod {}", f.p()),
        ));
    }
    Ok(x as u16)
}

fn vector(f: FieldSpec, path: &str, v: &[u64], len: usize) -> Result<Vec<u16>> {
    check_len(path, v, len)?;
    v.iter()
        .enumerate()
        .map(|(k, &x)| entry(f, &format!("{path}[{k}]"), x))
        .collect()
}

/// Parses a JSON document. Serde diagnostics carry line and column;
/// semantic ones carry the JSON path.
pub fn parse_str(text: &str) -> Result<Input> {
    let raw: RawInput =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed input: {e}")))?;
    let ra = raw.algebra;
    let field = FieldSpec::new(ra.p)
        .map_err(|_| located("algebra.p", format!("{} is not a prime below 2^16", ra.p)))?;
    let n = ra.dim;
    if n == 0 {
        return Err(located("algebra.dim", "must be positive"));
    }
    let unit = vector(field, "algebra.unit", &ra.unit, n)?;
    check_len("algebra.mult", &ra.mult, n)?;
    let mut mult = Vec::with_capacity(n * n * n);
    for (i, row) in ra.mult.iter().enumerate() {
        check_len(&format!("algebra.mult[{i}]"), row, n)?;
        for (j, v) in row.iter().enumerate() {
            mult.extend(vector(field, &format!("algebra.mult[{i}][{j}]"), v, n)?);
        }
    }
    let name = ra.name.unwrap_or_else(|| "algebra".to_string());
    let algebra = Arc::new(Algebra::new(field, n, mult, unit, name.clone())?);
    validate_algebra(&algebra).map_err(|v| {
        located(
            "algebra",
            format!("axiom violated: {v} {}", violation_triple(&v)),
        )
    })?;

    let mut modules = BTreeMap::new();
    for (mname, rm) in raw.modules {
        let base = format!("modules.{mname}");
        if rm.algebra_ref != name {
            return Err(located(
                &format!("{base}.algebra_ref"),
                format!("`{}` does not name the algebra `{name}`", rm.algebra_ref),
            ));
        }
        let d = rm.dim;
        check_len(&format!("{base}.action"), &rm.action, n)?;
        let mut action = Vec::with_capacity(n);
        for (i, mat) in rm.action.iter().enumerate() {
            let mpath = format!("{base}.action[{i}]");
            check_len(&mpath, mat, d)?;
            let mut data = Vec::with_capacity(d * d);
            for (r, row) in mat.iter().enumerate() {
                data.extend(vector(field, &format!("{mpath}[{r}]"), row, d)?);
            }
            action.push(Mat::from_vec(field, d, d, data)?);
        }
        let m = Module::new(algebra.clone(), d, action)?;
        validate_module(&m).map_err(|v| located(&base, format!("module axiom violated: {v}")))?;
        modules.insert(mname, m);
    }
    Ok(Input { algebra, modules })
}

pub fn parse_file(path: &std::path::Path) -> Result<Input> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_str(&text)
}

/// The basis triple at which an axiom fails, `(i, j, k)` for
/// associativity and `(i)` for a unit law.
pub fn violation_triple(v: &crate::algmod::AlgebraViolation) -> String {
    use crate::algmod::AlgebraViolation::*;
    match v {
        Associativity { i, j, k } => format!("at ({i}, {j}, {k})"),
        LeftUnit { i } | RightUnit { i } => format!("at ({i})"),
    }
}
