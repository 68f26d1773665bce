use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Mat, SpanBuilder, Subspace};

use super::Algebra;

/// Finite left module over an [`Algebra`]: one `dim x dim` action matrix per
/// basis element, acting on column vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct Module {
    algebra: Arc<Algebra>,
    dim: usize,
    action: Vec<Mat>,
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Module")
            .field("algebra", &self.algebra.name())
            .field("dim", &self.dim)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleViolation {
    /// Wrong number of action matrices or a matrix of the wrong shape.
    Shape(String),
    /// `ρ(e_i) ρ(e_j) != sum_k c[i][j][k] ρ(e_k)`.
    Relation { i: usize, j: usize },
    /// `ρ(1) != I`.
    Unit,
}

impl fmt::Display for ModuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleViolation::Shape(s) => write!(f, "shape: {s}"),
            ModuleViolation::Relation { i, j } => {
                write!(
                    f,
                    "rho(e{i}) rho(e{j}) does not match the structure constants"
                )
            }
            ModuleViolation::Unit => write!(f, "rho(1) is not the identity"),
        }
    }
}

impl Module {
    /// Wraps action matrices without checking the module axioms; see
    /// [`validate_module`].
    pub fn new(algebra: Arc<Algebra>, dim: usize, action: Vec<Mat>) -> Result<Self> {
        let m = Module {
            algebra,
            dim,
            action,
        };
        if let Err(ModuleViolation::Shape(s)) = m.check_shapes() {
            return Err(Error::Input(s));
        }
        Ok(m)
    }

    fn check_shapes(&self) -> std::result::Result<(), ModuleViolation> {
        if self.action.len() != self.algebra.dim() {
            return Err(ModuleViolation::Shape(format!(
                "{} action matrices for an algebra of dimension {}",
                self.action.len(),
                self.algebra.dim()
            )));
        }
        for (i, a) in self.action.iter().enumerate() {
            if a.rows() != self.dim || a.cols() != self.dim {
                return Err(ModuleViolation::Shape(format!(
                    "action matrix {i} is {}x{}, module has dimension {}",
                    a.rows(),
                    a.cols(),
                    self.dim
                )));
            }
            if a.field() != self.algebra.field() {
                return Err(ModuleViolation::Shape(format!(
                    "action matrix {i} is over the wrong field"
                )));
            }
        }
        Ok(())
    }

    pub fn zero(algebra: Arc<Algebra>) -> Self {
        let f = algebra.field();
        let action = (0..algebra.dim()).map(|_| Mat::zeros(f, 0, 0)).collect();
        Module {
            algebra,
            dim: 0,
            action,
        }
    }

    /// The algebra acting on itself by left multiplication.
    pub fn regular(algebra: Arc<Algebra>) -> Self {
        let action = (0..algebra.dim()).map(|i| algebra.left_mult(i)).collect();
        Module {
            dim: algebra.dim(),
            algebra,
            action,
        }
    }

    /// `A^k`.
    pub fn free(algebra: Arc<Algebra>, rank: usize) -> Self {
        let reg = Module::regular(algebra.clone());
        (0..rank).fold(Module::zero(algebra), |acc, _| acc.direct_sum(&reg))
    }

    /// Linear dual of the right regular module, made a left module by
    /// `(a f)(v) = f(v a)`.
    pub fn dual_of_right_regular(algebra: Arc<Algebra>) -> Self {
        let action = (0..algebra.dim())
            .map(|i| algebra.right_mult(i).transpose())
            .collect();
        Module {
            dim: algebra.dim(),
            algebra,
            action,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn action(&self) -> &[Mat] {
        &self.action
    }

    /// Action matrices of the algebra generators only.
    pub fn generator_action(&self) -> Vec<&Mat> {
        self.algebra
            .generators()
            .iter()
            .map(|&g| &self.action[g])
            .collect()
    }

    /// `ρ(a)` for an algebra element given by coordinates.
    pub fn act_by(&self, a: &[u16]) -> Mat {
        let mut out = Mat::zeros(self.field(), self.dim, self.dim);
        for (i, &c) in a.iter().enumerate() {
            out.add_scaled(c, &self.action[i]);
        }
        out
    }

    pub fn direct_sum(&self, other: &Module) -> Module {
        assert!(
            Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra,
            "direct sum over different algebras"
        );
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.block_diag(b))
            .collect();
        Module {
            algebra: self.algebra.clone(),
            dim: self.dim + other.dim,
            action,
        }
    }

    /// Conjugates the action by an invertible change of basis `g`
    /// (`ρ'(a) = g ρ(a) g^-1`), so `g` is an isomorphism onto the result.
    pub fn conjugate(&self, g: &Mat) -> Result<Module> {
        let inv = g
            .inverse()
            .ok_or_else(|| Error::Input("change of basis is singular".into()))?;
        let action = self.action.iter().map(|a| g.mul(a).mul(&inv)).collect();
        Ok(Module {
            algebra: self.algebra.clone(),
            dim: self.dim,
            action,
        })
    }

    /// Smallest invariant subspace containing `vectors`.
    pub fn spin(&self, vectors: &[Vec<u16>]) -> Subspace {
        let gens = self.generator_action();
        let mut span = SpanBuilder::new(self.field(), self.dim);
        let mut queue: Vec<Vec<u16>> = vectors.iter().rev().cloned().collect();
        while let Some(v) = queue.pop() {
            if span.insert(&v) {
                for g in &gens {
                    queue.push(g.mul_vec(&v));
                }
            }
        }
        span.finish()
    }

    pub fn is_submodule(&self, s: &Subspace) -> bool {
        s.ambient_dim() == self.dim && s.is_invariant(&self.action)
    }

    fn require_submodule(&self, s: &Subspace) -> Result<()> {
        if s.ambient_dim() != self.dim {
            return Err(Error::Dimension(format!(
                "subspace of a {}-dimensional space in a module of dimension {}",
                s.ambient_dim(),
                self.dim
            )));
        }
        if !s.is_invariant(&self.action) {
            return Err(Error::NotInvariant);
        }
        Ok(())
    }

    /// The submodule `s` as a module in the coordinates of its RREF basis.
    pub fn restrict(&self, s: &Subspace) -> Result<Module> {
        self.require_submodule(s)?;
        let k = s.dim();
        let action = self
            .action
            .iter()
            .map(|a| {
                let mut r = Mat::zeros(self.field(), k, k);
                for j in 0..k {
                    let img = a.mul_vec(s.basis().row(j));
                    let c = s.coords(&img).expect("invariant subspace");
                    for (i, x) in c.into_iter().enumerate() {
                        r.set(i, j, x);
                    }
                }
                r
            })
            .collect();
        Ok(Module {
            algebra: self.algebra.clone(),
            dim: k,
            action,
        })
    }

    /// `M / s`, in coordinates of the standard complement spanned by the
    /// non-pivot columns of `s`.
    pub fn quotient(&self, s: &Subspace) -> Result<Module> {
        self.require_submodule(s)?;
        let piv = s.pivots();
        let free: Vec<usize> = (0..self.dim).filter(|c| !piv.contains(c)).collect();
        let q = free.len();
        let action = self
            .action
            .iter()
            .map(|a| {
                let mut r = Mat::zeros(self.field(), q, q);
                for (j, &fc) in free.iter().enumerate() {
                    let img = s.reduce(&a.column(fc));
                    for (i, &c) in free.iter().enumerate() {
                        r.set(i, j, img[c]);
                    }
                }
                r
            })
            .collect();
        Ok(Module {
            algebra: self.algebra.clone(),
            dim: q,
            action,
        })
    }
}

/// Checks shapes, the multiplication relations on all basis pairs, and
/// `ρ(1) = I`.
pub fn validate_module(m: &Module) -> std::result::Result<(), ModuleViolation> {
    m.check_shapes()?;
    let a = m.algebra();
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            let lhs = m.action[i].mul(&m.action[j]);
            let rhs = m.act_by(a.product_of_basis(i, j));
            if lhs != rhs {
                return Err(ModuleViolation::Relation { i, j });
            }
        }
    }
    if !m.act_by(a.unit()).is_identity() {
        return Err(ModuleViolation::Unit);
    }
    Ok(())
}

/// Convenience wrapper matching the free function naming of the other
/// operations.
pub fn spin(m: &Module, vectors: &[Vec<u16>]) -> Subspace {
    m.spin(vectors)
}

pub fn quotient_module(m: &Module, s: &Subspace) -> Result<Module> {
    m.quotient(s)
}
