use crate::error::{Error, Result};

use super::Mat;

/// Outcome of [`solve_linear`]. Inconsistency is a value, not a fault.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    Consistent {
        /// One solution column per right-hand-side column (`n x k`).
        particular: Mat,
        /// Canonical RREF basis of the homogeneous solutions, as rows.
        nullspace: Mat,
    },
    Inconsistent {
        /// First right-hand-side column with no solution.
        column: usize,
    },
}

impl LinearSolution {
    pub fn is_consistent(&self) -> bool {
        matches!(self, LinearSolution::Consistent { .. })
    }
}

/// Solves `coeffs * X = rhs` for `X`.
pub fn solve_linear(coeffs: &Mat, rhs: &Mat) -> Result<LinearSolution> {
    if coeffs.rows() != rhs.rows() {
        return Err(Error::Dimension(format!(
            "{} equations but {} right-hand-side rows",
            coeffs.rows(),
            rhs.rows()
        )));
    }
    let n = coeffs.cols();
    let k = rhs.cols();
    let e = coeffs.hstack(rhs).rref_with_pivots();
    if let Some(&bad) = e.pivots.iter().find(|&&c| c >= n) {
        return Ok(LinearSolution::Inconsistent { column: bad - n });
    }
    let mut particular = Mat::zeros(coeffs.field(), n, k);
    for (i, &pc) in e.pivots.iter().enumerate() {
        for j in 0..k {
            particular.set(pc, j, e.rref.get(i, n + j));
        }
    }
    Ok(LinearSolution::Consistent {
        particular,
        nullspace: coeffs.nullspace(),
    })
}
