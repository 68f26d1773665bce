use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Mat, SpanBuilder};

/// Finite-dimensional associative unital algebra over GF(p), given by
/// structure constants `e_i e_j = sum_k c[i][j][k] e_k`.
pub struct Algebra {
    field: FieldSpec,
    dim: usize,
    mult: Vec<u16>,
    unit: Vec<u16>,
    name: String,
    generators: OnceLock<Vec<usize>>,
    pub(crate) structure: OnceLock<Arc<crate::decomp::AlgebraStructure>>,
}

impl Clone for Algebra {
    fn clone(&self) -> Self {
        Algebra {
            field: self.field,
            dim: self.dim,
            mult: self.mult.clone(),
            unit: self.unit.clone(),
            name: self.name.clone(),
            generators: self.generators.clone(),
            structure: self.structure.clone(),
        }
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.dim == other.dim
            && self.mult == other.mult
            && self.unit == other.unit
    }
}

impl Eq for Algebra {}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("name", &self.name)
            .field("field", &self.field)
            .field("dim", &self.dim)
            .finish_non_exhaustive()
    }
}

/// First failing algebra axiom. Indices are 0-based basis positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraViolation {
    Associativity { i: usize, j: usize, k: usize },
    LeftUnit { i: usize },
    RightUnit { i: usize },
}

impl fmt::Display for AlgebraViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraViolation::Associativity { i, j, k } => {
                write!(f, "(e{i} e{j}) e{k} != e{i} (e{j} e{k})")
            }
            AlgebraViolation::LeftUnit { i } => write!(f, "1 e{i} != e{i}"),
            AlgebraViolation::RightUnit { i } => write!(f, "e{i} 1 != e{i}"),
        }
    }
}

impl Algebra {
    /// Builds an algebra from flattened structure constants
    /// (`mult[(i * n + j) * n + k] = c[i][j][k]`). Shapes and residues are
    /// checked here; the algebra axioms are checked by [`validate_algebra`].
    pub fn new(
        field: FieldSpec,
        dim: usize,
        mult: Vec<u16>,
        unit: Vec<u16>,
        name: impl Into<String>,
    ) -> Result<Self> {
        if mult.len() != dim * dim * dim {
            return Err(Error::Input(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                mult.len()
            )));
        }
        if unit.len() != dim {
            return Err(Error::Input(format!(
                "unit has {} coordinates, algebra has dimension {dim}",
                unit.len()
            )));
        }
        if let Some(x) = mult.iter().chain(&unit).find(|&&x| x >= field.p()) {
            return Err(Error::Input(format!(
                "entry {x} is not reduced mod {}",
                field.p()
            )));
        }
        Ok(Algebra {
            field,
            dim,
            mult,
            unit,
            name: name.into(),
            generators: OnceLock::new(),
            structure: OnceLock::new(),
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn unit(&self) -> &[u16] {
        &self.unit
    }

    #[inline]
    pub fn constant(&self, i: usize, j: usize, k: usize) -> u16 {
        self.mult[(i * self.dim + j) * self.dim + k]
    }

    /// `c[i][j][..]`, the coordinates of `e_i e_j`.
    pub fn product_of_basis(&self, i: usize, j: usize) -> &[u16] {
        let start = (i * self.dim + j) * self.dim;
        &self.mult[start..start + self.dim]
    }

    /// Nested `c[i][j][k]` for serialization.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<u16>>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.product_of_basis(i, j).to_vec())
                    .collect()
            })
            .collect()
    }

    pub fn mul(&self, a: &[u16], b: &[u16]) -> Vec<u16> {
        let f = self.field;
        let mut out = vec![0u16; self.dim];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = f.mul(x, y);
                for (o, &c) in out.iter_mut().zip(self.product_of_basis(i, j)) {
                    *o = f.add(*o, f.mul(xy, c));
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u16> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    /// Matrix of left multiplication by `e_i` on column coordinate vectors.
    pub fn left_mult(&self, i: usize) -> Mat {
        let mut m = Mat::zeros(self.field, self.dim, self.dim);
        for j in 0..self.dim {
            for k in 0..self.dim {
                m.set(k, j, self.constant(i, j, k));
            }
        }
        m
    }

    /// Matrix of right multiplication by `e_i`: `v ↦ v e_i`.
    pub fn right_mult(&self, i: usize) -> Mat {
        let mut m = Mat::zeros(self.field, self.dim, self.dim);
        for j in 0..self.dim {
            for k in 0..self.dim {
                m.set(k, j, self.constant(j, i, k));
            }
        }
        m
    }

    /// Basis indices generating the algebra as a unital algebra, chosen
    /// greedily in index order. Spinning and intertwiner equations only
    /// need these.
    pub fn generators(&self) -> &[usize] {
        self.generators.get_or_init(|| {
            let mut chosen = Vec::new();
            let mut span = self.subalgebra_span(&chosen);
            for i in 0..self.dim {
                if span.dim() == self.dim {
                    break;
                }
                let mut trial = span.clone();
                if trial.insert(&self.basis_vector(i)) {
                    chosen.push(i);
                    span = self.subalgebra_span(&chosen);
                }
            }
            chosen
        })
    }

    /// Span of all products of the chosen basis elements, including 1.
    fn subalgebra_span(&self, gens: &[usize]) -> SpanBuilder {
        let mut span = SpanBuilder::new(self.field, self.dim);
        let mut queue = vec![self.unit.clone()];
        while let Some(v) = queue.pop() {
            if span.insert(&v) {
                for &g in gens {
                    queue.push(self.mul(&self.basis_vector(g), &v));
                }
            }
        }
        span
    }
}

/// Checks associativity on every basis triple, then the two unit laws.
pub fn validate_algebra(a: &Algebra) -> std::result::Result<(), AlgebraViolation> {
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            let ij = a.product_of_basis(i, j).to_vec();
            for k in 0..n {
                let left = a.mul(&ij, &a.basis_vector(k));
                let right = a.mul(&a.basis_vector(i), a.product_of_basis(j, k));
                if left != right {
                    return Err(AlgebraViolation::Associativity { i, j, k });
                }
            }
        }
    }
    for i in 0..n {
        let e = a.basis_vector(i);
        if a.mul(a.unit(), &e) != e {
            return Err(AlgebraViolation::LeftUnit { i });
        }
        if a.mul(&e, a.unit()) != e {
            return Err(AlgebraViolation::RightUnit { i });
        }
    }
    Ok(())
}
