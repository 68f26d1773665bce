use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ring_size, Config, ISO_RANDOM_TRIALS};
use crate::error::{budget, Error, Result};
use crate::exec;
use crate::linalg::Mat;

use super::Module;

fn same_algebra(m1: &Module, m2: &Module) -> Result<()> {
    if Arc::ptr_eq(m1.algebra(), m2.algebra()) || m1.algebra() == m2.algebra() {
        Ok(())
    } else {
        Err(Error::Dimension("modules over different algebras".into()))
    }
}

/// Intertwiners `X` (`dim m2 x dim m1`) with `X ρ1(a) = ρ2(a) X`, as the rows
/// of a canonical RREF matrix; row `t` reshapes to the `t`-th basis matrix.
pub fn hom_basis(m1: &Module, m2: &Module) -> Result<Mat> {
    same_algebra(m1, m2)?;
    let (d1, d2) = (m1.dim(), m2.dim());
    let f = m1.field();
    let unknowns = d1 * d2;
    if unknowns == 0 {
        return Ok(Mat::zeros(f, 0, 0));
    }
    let gens = m1.algebra().generators();
    let mut eqs = Mat::zeros(f, gens.len() * unknowns, unknowns);
    for (gi, &g) in gens.iter().enumerate() {
        let (r1, r2) = (&m1.action()[g], &m2.action()[g]);
        for r in 0..d2 {
            for c in 0..d1 {
                let row = gi * unknowns + r * d1 + c;
                for k in 0..d1 {
                    let v = r1.get(k, c);
                    if v != 0 {
                        let u = r * d1 + k;
                        eqs.set(row, u, f.add(eqs.get(row, u), v));
                    }
                }
                for k in 0..d2 {
                    let v = r2.get(r, k);
                    if v != 0 {
                        let u = k * d1 + c;
                        eqs.set(row, u, f.sub(eqs.get(row, u), v));
                    }
                }
            }
        }
    }
    Ok(eqs.nullspace())
}

/// Basis of `Hom(m1, m2)` as matrices.
pub fn hom_space(m1: &Module, m2: &Module) -> Result<Vec<Mat>> {
    let b = hom_basis(m1, m2)?;
    Ok((0..b.rows())
        .map(|t| {
            Mat::from_rows(b.field(), b.cols(), &[b.row(t).to_vec()]).reshape(m2.dim(), m1.dim())
        })
        .collect())
}

pub fn hom_dim(m1: &Module, m2: &Module) -> Result<usize> {
    Ok(hom_basis(m1, m2)?.rows())
}

pub fn is_intertwiner(x: &Mat, m1: &Module, m2: &Module) -> bool {
    x.rows() == m2.dim()
        && x.cols() == m1.dim()
        && m1
            .action()
            .iter()
            .zip(m2.action())
            .all(|(a, b)| x.mul(a) == b.mul(x))
}

/// Why two modules were certified non-isomorphic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonIsoCertificate {
    Dimension {
        left: usize,
        right: usize,
    },
    /// `rank ρ1(e_i) != rank ρ2(e_i)`.
    ActionRank {
        element: usize,
    },
    /// The four hom-space dimensions of an isomorphic pair must agree.
    HomDimension {
        hom_12: usize,
        hom_21: usize,
        end_1: usize,
        end_2: usize,
    },
    /// Every element of the hom space was tried; none is invertible.
    Exhausted {
        searched: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoVerdict {
    /// Carries an invertible intertwiner `m1 -> m2`.
    Isomorphic(Mat),
    NotIsomorphic(NonIsoCertificate),
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }

    pub fn witness(&self) -> Option<&Mat> {
        match self {
            IsoVerdict::Isomorphic(w) => Some(w),
            IsoVerdict::NotIsomorphic(_) => None,
        }
    }
}

fn combine(basis: &Mat, coeffs: &[u16], rows: usize, cols: usize) -> Mat {
    let f = basis.field();
    let mut flat = vec![0u16; basis.cols()];
    for (t, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            for (x, &b) in flat.iter_mut().zip(basis.row(t)) {
                *x = f.add(*x, f.mul(c, b));
            }
        }
    }
    Mat::from_rows(f, rows * cols, &[flat]).reshape(rows, cols)
}

pub(crate) fn digits(mut idx: u64, p: u16, len: usize) -> Vec<u16> {
    let mut out = vec![0u16; len];
    // most significant digit first, so increasing idx is lexicographic
    for slot in out.iter_mut().rev() {
        *slot = (idx % p as u64) as u16;
        idx /= p as u64;
    }
    out
}

/// Decides `m1 ≅ m2`.
///
/// Cheap certificates first (dimension, ranks of the action, hom-space
/// dimensions), then seeded random combinations of `Hom(m1, m2)`, then an
/// exhaustive scan of the hom space when `p^d` is within the iso budget.
pub fn is_isomorphic(m1: &Module, m2: &Module, cfg: &Config) -> Result<IsoVerdict> {
    same_algebra(m1, m2)?;
    if m1.dim() != m2.dim() {
        return Ok(IsoVerdict::NotIsomorphic(NonIsoCertificate::Dimension {
            left: m1.dim(),
            right: m2.dim(),
        }));
    }
    let n = m1.dim();
    if n == 0 {
        return Ok(IsoVerdict::Isomorphic(Mat::zeros(m1.field(), 0, 0)));
    }
    if m1 == m2 {
        return Ok(IsoVerdict::Isomorphic(Mat::identity(m1.field(), n)));
    }
    for (i, (a, b)) in m1.action().iter().zip(m2.action()).enumerate() {
        if a.rank() != b.rank() {
            return Ok(IsoVerdict::NotIsomorphic(NonIsoCertificate::ActionRank {
                element: i,
            }));
        }
    }
    let h12 = hom_basis(m1, m2)?;
    let dims = (
        h12.rows(),
        hom_dim(m2, m1)?,
        hom_dim(m1, m1)?,
        hom_dim(m2, m2)?,
    );
    if !(dims.0 == dims.1 && dims.1 == dims.2 && dims.2 == dims.3) {
        return Ok(IsoVerdict::NotIsomorphic(NonIsoCertificate::HomDimension {
            hom_12: dims.0,
            hom_21: dims.1,
            end_1: dims.2,
            end_2: dims.3,
        }));
    }
    let h = h12.rows();
    let p = m1.field().p();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_1505);
    for _ in 0..ISO_RANDOM_TRIALS {
        let coeffs: Vec<u16> = (0..h).map(|_| rng.gen_range(0..p)).collect();
        let x = combine(&h12, &coeffs, n, n);
        if x.is_invertible() {
            debug_assert!(is_intertwiner(&x, m1, m2));
            return Ok(IsoVerdict::Isomorphic(x));
        }
    }

    exhaust(&h12, n, cfg)
}

/// Scans every combination of the rows of `basis` (each a flattened
/// `n x n` matrix) for an invertible one.
fn exhaust(basis: &Mat, n: usize, cfg: &Config) -> Result<IsoVerdict> {
    let (p, h) = (basis.field().p(), basis.rows());
    let size = ring_size(p, h);
    if size > cfg.iso_limit as u128 {
        return Err(budget("isomorphism search", size, cfg.iso_limit));
    }
    let found = exec::find_first(cfg.exec, 1..size as u64, |idx| {
        let x = combine(basis, &digits(idx, p, h), n, n);
        x.is_invertible().then_some(x)
    });
    Ok(match found {
        Some((_, x)) => IsoVerdict::Isomorphic(x),
        None => IsoVerdict::NotIsomorphic(NonIsoCertificate::Exhausted {
            searched: size as u64,
        }),
    })
}
