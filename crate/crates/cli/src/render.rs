//! Text rendering and the JSON envelope.

use std::fmt::Write;

use serde_json::{json, Value};
use summand_core::linalg::{Mat, Subspace};
use summand_core::summands::SummandPoset;

pub const SCHEMA: u32 = 1;

/// `{"schema": 1, "command": ..., <key>: body}` on one line.
pub fn envelope(command: &str, key: &str, body: Value) -> String {
    let mut v = json!({ "schema": SCHEMA, "command": command });
    v[key] = body;
    serde_json::to_string(&v).expect("reports serialize")
}

/// Rows separated by `;`, entries by spaces.
pub fn mat(m: &Mat) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(u16::to_string).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

/// RREF basis rows, or `0` for the zero subspace.
pub fn subspace(s: &Subspace) -> String {
    if s.is_zero() {
        "0".into()
    } else {
        mat(s.basis())
    }
}

pub fn dims(p: &SummandPoset, idx: &[usize]) -> String {
    let d: Vec<String> = idx
        .iter()
        .map(|&i| p.element(i).dim().to_string())
        .collect();
    format!("({})", d.join(", "))
}

/// Element list followed by the covering relation, each end annotated with
/// its dimension.
pub fn hasse(p: &SummandPoset) -> String {
    let mut s = String::new();
    let edges = p.hasse_edges();
    let _ = writeln!(
        s,
        "summands: {} elements, {} hasse edges",
        p.len(),
        edges.len()
    );
    for (i, e) in p.elements().iter().enumerate() {
        let _ = writeln!(s, "  #{i} dim {}  {}", e.dim(), subspace(e));
    }
    let _ = writeln!(s, "hasse edges (lower -> upper):");
    for (i, j) in edges {
        let _ = writeln!(
            s,
            "  #{i} (dim {}) -> #{j} (dim {})",
            p.element(i).dim(),
            p.element(j).dim()
        );
    }
    s
}
