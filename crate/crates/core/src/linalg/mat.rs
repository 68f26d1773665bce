use std::fmt;

use crate::error::{Error, Result};

use super::FieldSpec;

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat[{}x{} over {}]", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            write!(f, "\n  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Result of [`Mat::rref_with_pivots`].
#[derive(Debug, Clone)]
pub struct Echelon {
    /// Full-size reduced row-echelon form; rows past `rank` are zero.
    pub rref: Mat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Mat {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Mat {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major residues, rejecting entries `>= p`.
    pub fn from_vec(field: FieldSpec, rows: usize, cols: usize, data: Vec<u16>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|&x| x >= field.p()) {
            return Err(Error::Input(format!(
                "entry {} at ({}, {}) is not reduced mod {}",
                data[pos],
                pos / cols.max(1),
                pos % cols.max(1),
                field.p()
            )));
        }
        Ok(Mat {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from arbitrary integers, reducing them mod p.
    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Mat::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &x) in row.iter().enumerate() {
                m.data[r * cols + c] = field.reduce_signed(x);
            }
        }
        m
    }

    pub fn from_rows(field: FieldSpec, cols: usize, rows: &[Vec<u16>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row.iter().map(|&x| x % field.p()));
        }
        Mat {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn diagonal(field: FieldSpec, diag: &[u16]) -> Self {
        let n = diag.len();
        let mut m = Mat::zeros(field, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d % field.p();
        }
        m
    }

    #[inline]
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn data(&self) -> &[u16] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u16) {
        self.data[r * self.cols + c] = v % self.field.p();
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u16> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u16>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == u16::from(r == c)))
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        assert_eq!(self.field, other.field);
        let p = self.field.p() as u64;
        let n = other.cols;
        let mut out = Mat::zeros(self.field, self.rows, n);
        let mut acc = vec![0u64; n];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                for (slot, &b) in acc.iter_mut().zip(other.row(k)) {
                    *slot += a * b as u64;
                }
                // keep accumulators bounded
                if k % 4096 == 4095 {
                    acc.iter_mut().for_each(|x| *x %= p);
                }
            }
            for (c, &a) in acc.iter().enumerate() {
                out.data[r * n + c] = (a % p) as u16;
            }
        }
        out
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[u16]) -> Vec<u16> {
        assert_eq!(self.cols, v.len());
        let p = self.field.p() as u64;
        (0..self.rows)
            .map(|r| {
                let s: u64 = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                (s % p) as u16
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.zip_with(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.zip_with(other, |f, a, b| f.sub(a, b))
    }

    fn zip_with(&self, other: &Mat, op: impl Fn(FieldSpec, u16, u16) -> u16) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Mat {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| op(f, a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: u16) -> Mat {
        let f = self.field;
        Mat {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, s)).collect(),
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: u16, other: &Mat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if s == 0 {
            return;
        }
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add(*a, f.mul(s, b));
        }
    }

    pub fn pow(&self, mut e: usize) -> Mat {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Mat::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Mat {
            field: self.field,
            rows: self.rows,
            cols,
            data,
        }
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[r * out.cols + c] = self.get(r, c);
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.data[(r + self.rows) * out.cols + c + self.cols] = other.get(r, c);
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Mat {
            field: self.field,
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.field, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.data[r * idx.len() + j] = self.get(r, c);
            }
        }
        out
    }

    pub fn reshape(&self, rows: usize, cols: usize) -> Mat {
        assert_eq!(rows * cols, self.data.len());
        Mat {
            field: self.field,
            rows,
            cols,
            data: self.data.clone(),
        }
    }

    /// Reduced row-echelon form with pivot columns.
    pub fn rref_with_pivots(&self) -> Echelon {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..cols {
            if pr == rows {
                break;
            }
            let Some(sel) = (pr..rows).find(|&r| m[r * cols + c] != 0) else {
                continue;
            };
            if sel != pr {
                for k in 0..cols {
                    m.swap(sel * cols + k, pr * cols + k);
                }
            }
            let inv = f.inv(m[pr * cols + c]).expect("nonzero pivot");
            if inv != 1 {
                for k in c..cols {
                    m[pr * cols + k] = f.mul(m[pr * cols + k], inv);
                }
            }
            let (before, rest) = m.split_at_mut(pr * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            let eliminate = |row: &mut [u16]| {
                let factor = row[c];
                if factor != 0 {
                    for k in c..cols {
                        row[k] = f.sub_mul(row[k], factor, pivot_row[k]);
                    }
                }
            };
            before.chunks_mut(cols).for_each(eliminate);
            after.chunks_mut(cols).for_each(eliminate);
            pivots.push(c);
            pr += 1;
        }
        Echelon {
            rref: Mat {
                field: f,
                rows,
                cols,
                data: m,
            },
            rank: pr,
            pivots,
        }
    }

    /// The unique reduced row-echelon form and the rank.
    pub fn rref(&self) -> (Mat, usize) {
        let e = self.rref_with_pivots();
        (e.rref, e.rank)
    }

    pub fn rank(&self) -> usize {
        if self.rows > self.cols {
            // eliminating along the short side is cheaper
            return self.transpose().rref_with_pivots().rank;
        }
        self.rref_with_pivots().rank
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Inverse, or `None` when the matrix is singular.
    pub fn inverse(&self) -> Option<Mat> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(self.field, n));
        let e = aug.rref_with_pivots();
        if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
            return None;
        }
        let right: Vec<usize> = (n..2 * n).collect();
        Some(e.rref.select_cols(&right))
    }

    /// Basis (rows, canonical RREF) of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Mat {
        let e = self.rref_with_pivots();
        nullspace_from_echelon(&e, self.cols)
    }
}

/// The kernel basis read off an echelon form, already in RREF.
pub(crate) fn nullspace_from_echelon(e: &Echelon, cols: usize) -> Mat {
    let f = e.rref.field;
    let mut is_pivot = vec![false; cols];
    for &c in &e.pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    // Each free column gives one kernel vector. Sorting by free column in
    // reverse yields leading entries in increasing column order once the
    // basis is re-reduced below.
    let mut basis = Mat::zeros(f, free.len(), cols);
    for (i, &fc) in free.iter().enumerate() {
        basis.data[i * cols + fc] = 1;
        for (r, &pc) in e.pivots.iter().enumerate() {
            let v = e.rref.get(r, fc);
            basis.data[i * cols + pc] = f.neg(v);
        }
    }
    let (rref, rank) = basis.rref();
    debug_assert_eq!(rank, free.len());
    rref
}
