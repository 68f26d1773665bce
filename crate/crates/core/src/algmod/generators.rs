//! Built-in algebras and modules for the test corpus.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Subspace};

use super::{Algebra, Module};

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::Input(format!("{name} must be positive")));
    }
    Ok(())
}

fn build(
    field: FieldSpec,
    dim: usize,
    name: String,
    unit: Vec<u16>,
    rule: impl Fn(usize, usize) -> Vec<(usize, u16)>,
) -> Result<Arc<Algebra>> {
    let mut mult = vec![0u16; dim * dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            for (k, c) in rule(i, j) {
                let slot = &mut mult[(i * dim + j) * dim + k];
                *slot = field.add(*slot, c % field.p());
            }
        }
    }
    Algebra::new(field, dim, mult, unit, name).map(Arc::new)
}

fn first_basis_unit(dim: usize) -> Vec<u16> {
    let mut unit = vec![0; dim];
    unit[0] = 1;
    unit
}

/// Group algebra of the abelian group `Z/o_1 x ... x Z/o_r`, basis indexed
/// by group elements in mixed radix with the first factor fastest.
pub fn group_algebra_abelian(p: u64, orders: &[usize]) -> Result<Arc<Algebra>> {
    let field = FieldSpec::new(p)?;
    if orders.is_empty() {
        return Err(Error::Input(
            "group needs at least one cyclic factor".into(),
        ));
    }
    for &o in orders {
        positive("group order", o)?;
    }
    let dim: usize = orders.iter().product();
    let digits = |mut x: usize| -> Vec<usize> {
        orders
            .iter()
            .map(|&o| {
                let d = x % o;
                x /= o;
                d
            })
            .collect()
    };
    let index = |ds: &[usize]| -> usize {
        ds.iter()
            .zip(orders)
            .rev()
            .fold(0, |acc, (&d, &o)| acc * o + d)
    };
    let name = if orders.len() == 1 {
        format!("cyclic_group:p={p},n={}", orders[0])
    } else {
        let os: Vec<String> = orders.iter().map(|o| o.to_string()).collect();
        format!("abelian_group:p={p},orders={}", os.join("x"))
    };
    build(field, dim, name, first_basis_unit(dim), |i, j| {
        let (di, dj) = (digits(i), digits(j));
        let sum: Vec<usize> = di
            .iter()
            .zip(&dj)
            .zip(orders)
            .map(|((a, b), o)| (a + b) % o)
            .collect();
        vec![(index(&sum), 1)]
    })
}

/// `GF(p)[C_n]`.
pub fn group_algebra_cyclic(p: u64, n: usize) -> Result<Arc<Algebra>> {
    group_algebra_abelian(p, &[n])
}

/// `GF(p)^k` with orthogonal idempotent basis.
pub fn product_fields(p: u64, k: usize) -> Result<Arc<Algebra>> {
    let field = FieldSpec::new(p)?;
    positive("k", k)?;
    build(
        field,
        k,
        format!("product_fields:p={p},k={k}"),
        vec![1; k],
        |i, j| {
            if i == j {
                vec![(i, 1)]
            } else {
                vec![]
            }
        },
    )
}

/// `GF(p)[x]/(x^k)` with basis `1, x, ..., x^(k-1)`.
pub fn truncated_poly(p: u64, k: usize) -> Result<Arc<Algebra>> {
    let field = FieldSpec::new(p)?;
    positive("k", k)?;
    build(
        field,
        k,
        format!("truncated_poly:p={p},k={k}"),
        first_basis_unit(k),
        |i, j| {
            if i + j < k {
                vec![(i + j, 1)]
            } else {
                vec![]
            }
        },
    )
}

/// Upper-triangular `n x n` matrices `T_n(GF(p))`, basis `E_ij` (`i <= j`)
/// listed row by row.
pub fn upper_triangular(p: u64, n: usize) -> Result<Arc<Algebra>> {
    let field = FieldSpec::new(p)?;
    positive("n", n)?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let pos = |i: usize, j: usize| pairs.iter().position(|&q| q == (i, j)).unwrap();
    let unit = pairs.iter().map(|&(i, j)| u16::from(i == j)).collect();
    build(
        field,
        pairs.len(),
        format!("upper_triangular:p={p},n={n}"),
        unit,
        |x, y| {
            let ((i, j), (k, l)) = (pairs[x], pairs[y]);
            if j == k {
                vec![(pos(i, l), 1)]
            } else {
                vec![]
            }
        },
    )
}

/// Random submodule of a free module: random vectors of `A^k` are spun one
/// at a time until the submodule reaches `target_dim`. Deterministic in
/// `seed`; valid by construction.
pub fn random_module(a: &Arc<Algebra>, seed: u64, target_dim: usize) -> Result<Module> {
    positive("target_dim", target_dim)?;
    let k = target_dim.div_ceil(a.dim()).max(1);
    let free = Module::free(a.clone(), k);
    let p = a.field().p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens: Vec<Vec<u16>> = Vec::new();
    let mut sub = Subspace::zero(a.field(), free.dim());
    while sub.dim() < target_dim {
        let v: Vec<u16> = (0..free.dim()).map(|_| rng.gen_range(0..p)).collect();
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        gens.push(v);
        sub = free.spin(&gens);
    }
    free.restrict(&sub)
}

/// Simple modules of `a`: composition factors of the regular module, up to
/// isomorphism, in the order first encountered.
pub fn simple_modules_of(a: &Arc<Algebra>, cfg: &crate::Config) -> Result<Vec<Module>> {
    Ok(crate::decomp::algebra_structure(a, cfg)?.simples.clone())
}
