use crate::error::{Error, Result};

use super::{FieldSpec, Mat};

/// A subspace of GF(p)^n held by its RREF basis (no zero rows).
///
/// The representation is canonical: two subspaces are equal iff their
/// bases are entry-identical. The derived ordering compares dimension first,
/// then the basis entries, which gives every deterministic listing in the
/// crate its order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    basis: Mat,
}

impl serde::Serialize for Subspace {
    /// The RREF basis rows.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq((0..self.dim()).map(|r| self.basis.row(r)))
    }
}

impl Subspace {
    /// Span of the rows of `generators`.
    pub fn from_span(generators: &Mat) -> Self {
        let e = generators.rref_with_pivots();
        let keep: Vec<usize> = (0..e.rank).collect();
        Subspace {
            basis: e.rref.select_rows(&keep),
        }
    }

    pub fn from_vectors(field: FieldSpec, ambient: usize, vectors: &[Vec<u16>]) -> Self {
        Subspace::from_span(&Mat::from_rows(field, ambient, vectors))
    }

    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            basis: Mat::zeros(field, 0, ambient),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            basis: Mat::identity(field, ambient),
        }
    }

    /// Column space of `m`.
    pub fn image_of(m: &Mat) -> Self {
        Subspace::from_span(&m.transpose())
    }

    /// `{x : m x = 0}`.
    pub fn kernel_of(m: &Mat) -> Self {
        Subspace {
            basis: m.nullspace(),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|r| {
                self.basis
                    .row(r)
                    .iter()
                    .position(|&x| x != 0)
                    .expect("RREF basis has no zero rows")
            })
            .collect()
    }

    /// Residue of `v` after clearing every pivot coordinate.
    pub fn reduce(&self, v: &[u16]) -> Vec<u16> {
        let f = self.field();
        let mut out = v.to_vec();
        for (r, pc) in self.pivots().into_iter().enumerate() {
            let c = v[pc];
            if c != 0 {
                for (o, &b) in out.iter_mut().zip(self.basis.row(r)) {
                    *o = f.sub_mul(*o, c, b);
                }
            }
        }
        out
    }

    pub fn contains_vec(&self, v: &[u16]) -> bool {
        assert_eq!(v.len(), self.ambient_dim());
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the RREF basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &[u16]) -> Option<Vec<u16>> {
        if !self.contains_vec(v) {
            return None;
        }
        Some(self.pivots().into_iter().map(|pc| v[pc]).collect())
    }

    /// `sum_i coords[i] * basis[i]`.
    pub fn embed(&self, coords: &[u16]) -> Vec<u16> {
        assert_eq!(coords.len(), self.dim());
        let f = self.field();
        let mut out = vec![0u16; self.ambient_dim()];
        for (r, &c) in coords.iter().enumerate() {
            if c != 0 {
                for (o, &b) in out.iter_mut().zip(self.basis.row(r)) {
                    *o = f.add(*o, f.mul(c, b));
                }
            }
        }
        out
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() || self.field() != other.field() {
            return Err(Error::Dimension(format!(
                "subspaces of {}^{} and {}^{}",
                self.field(),
                self.ambient_dim(),
                other.field(),
                other.ambient_dim()
            )));
        }
        Ok(())
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        other.dim() <= self.dim() && (0..other.dim()).all(|r| self.contains_vec(other.basis.row(r)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace::from_span(&self.basis.vstack(&other.basis)))
    }

    /// Zassenhaus intersection: reduce `[[A, A], [B, 0]]`; the rows whose
    /// left half vanishes span `A ∩ B` in their right half.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let n = self.ambient_dim();
        let f = self.field();
        let top = self.basis.hstack(&self.basis);
        let bottom = other.basis.hstack(&Mat::zeros(f, other.dim(), n));
        let e = top.vstack(&bottom).rref_with_pivots();
        let rows: Vec<Vec<u16>> = (0..e.rank)
            .filter(|&r| e.pivots[r] >= n)
            .map(|r| e.rref.row(r)[n..].to_vec())
            .collect();
        Ok(Subspace::from_vectors(f, n, &rows))
    }

    /// A complement spanned by the standard basis vectors at non-pivot
    /// columns, so `self ⊕ c` is the ambient space.
    pub fn complement_extension(&self) -> Subspace {
        let n = self.ambient_dim();
        let piv = self.pivots();
        let rows: Vec<Vec<u16>> = (0..n)
            .filter(|c| !piv.contains(c))
            .map(|c| {
                let mut v = vec![0; n];
                v[c] = 1;
                v
            })
            .collect();
        Subspace::from_vectors(self.field(), n, &rows)
    }

    /// Whether `self ∩ other = 0` and `self + other` is everything.
    pub fn is_complement_of(&self, other: &Subspace) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.dim() + other.dim() == self.ambient_dim()
            && self.basis.vstack(&other.basis).rank() == self.ambient_dim()
    }

    /// Image of the subspace under `m` acting on column vectors.
    pub fn image_under(&self, m: &Mat) -> Subspace {
        let rows: Vec<Vec<u16>> = (0..self.dim())
            .map(|r| m.mul_vec(self.basis.row(r)))
            .collect();
        Subspace::from_vectors(self.field(), m.rows(), &rows)
    }

    /// Whether every matrix in `action` maps the subspace into itself.
    pub fn is_invariant(&self, action: &[Mat]) -> bool {
        action
            .iter()
            .all(|a| (0..self.dim()).all(|r| self.contains_vec(&a.mul_vec(self.basis.row(r)))))
    }

    /// Re-expresses a subspace `inner ⊆ self` in the coordinates of `self`.
    pub fn relative(&self, inner: &Subspace) -> Option<Subspace> {
        let rows = (0..inner.dim())
            .map(|r| self.coords(inner.basis.row(r)))
            .collect::<Option<Vec<_>>>()?;
        Some(Subspace::from_vectors(self.field(), self.dim(), &rows))
    }

    /// Inverse of [`Subspace::relative`].
    pub fn absolute(&self, inner: &Subspace) -> Subspace {
        assert_eq!(inner.ambient_dim(), self.dim());
        let rows: Vec<Vec<u16>> = (0..inner.dim())
            .map(|r| self.embed(inner.basis.row(r)))
            .collect();
        Subspace::from_vectors(self.field(), self.ambient_dim(), &rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(p: u16, n: usize, rows: &[&[u16]]) -> Subspace {
        let rows: Vec<Vec<u16>> = rows.iter().map(|r| r.to_vec()).collect();
        Subspace::from_vectors(FieldSpec::gf(p), n, &rows)
    }

    #[test]
    fn coordinate_axes_over_gf2() {
        let a = span(2, 2, &[&[1, 0]]);
        let b = span(2, 2, &[&[0, 1]]);
        assert!(a.intersection(&b).unwrap().is_zero());
        assert!(a.sum(&b).unwrap().is_full());
    }

    #[test]
    fn equal_subspaces() {
        let a = span(3, 3, &[&[1, 2, 0], &[0, 1, 1]]);
        assert_eq!(a.intersection(&a).unwrap(), a);
        assert_eq!(a.sum(&a).unwrap(), a);
    }

    #[test]
    fn lines_in_gf3_plane() {
        let a = span(3, 2, &[&[1, 1]]);
        let b = span(3, 2, &[&[1, 0]]);
        // oracle: the three elements of each line
        let line = |v: [u16; 2]| -> Vec<[u16; 2]> {
            (0..3).map(|t| [(v[0] * t) % 3, (v[1] * t) % 3]).collect()
        };
        let la = line([1, 1]);
        let common: Vec<_> = line([1, 0])
            .into_iter()
            .filter(|x| la.contains(x))
            .collect();
        assert_eq!(common, vec![[0, 0]]);
        assert!(a.intersection(&b).unwrap().is_zero());
        assert_eq!(a.sum(&b).unwrap().dim(), 2);
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = span(2, 2, &[&[1, 0]]);
        let b = span(2, 3, &[&[1, 0, 0]]);
        assert!(a.sum(&b).is_err());
        assert!(a.intersection(&b).is_err());
    }

    #[test]
    fn canonical_form_ignores_spanning_set() {
        let a = span(5, 3, &[&[1, 2, 3], &[2, 0, 1]]);
        let b = span(5, 3, &[&[3, 2, 4], &[1, 2, 3], &[4, 4, 2]]);
        assert_eq!(a, b);
    }

    #[test]
    fn relative_and_absolute_round_trip() {
        let outer = span(3, 4, &[&[1, 0, 2, 0], &[0, 1, 1, 1]]);
        let inner = span(3, 4, &[&[1, 1, 0, 1]]);
        let rel = outer.relative(&inner).unwrap();
        assert_eq!(rel.ambient_dim(), 2);
        assert_eq!(outer.absolute(&rel), inner);
        assert!(outer.relative(&span(3, 4, &[&[0, 0, 0, 1]])).is_none());
    }
}

/// Incremental echelon basis used for spinning: inserting a vector reports
/// whether it was independent of everything inserted so far.
#[derive(Debug, Clone)]
pub(crate) struct SpanBuilder {
    field: FieldSpec,
    ambient: usize,
    rows: Vec<Vec<u16>>,
    pivots: Vec<usize>,
}

impl SpanBuilder {
    pub(crate) fn new(field: FieldSpec, ambient: usize) -> Self {
        SpanBuilder {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows and keeps it if nonzero.
    pub(crate) fn insert(&mut self, v: &[u16]) -> bool {
        let f = self.field;
        let mut w = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = w[pc];
            if c != 0 {
                for (x, &b) in w.iter_mut().zip(row) {
                    *x = f.sub_mul(*x, c, b);
                }
            }
        }
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[pc]).expect("nonzero");
        w.iter_mut().for_each(|x| *x = f.mul(*x, inv));
        self.rows.push(w);
        self.pivots.push(pc);
        true
    }

    pub(crate) fn finish(self) -> Subspace {
        Subspace::from_vectors(self.field, self.ambient, &self.rows)
    }
}
