use std::sync::Arc;

use serde::Serialize;

use crate::algmod::{digits, hom_dim, hom_space, is_isomorphic, Algebra, Module};
use crate::config::{ring_size, Config};
use crate::endo::{endomorphism_ring, is_local};
use crate::error::{budget, Error, Result};
use crate::exec;
use crate::linalg::{solve_linear, LinearSolution, Mat, Subspace};

use super::split::indecomposable_decomposition;

/// Algebra-level data computed once and cached on the algebra.
#[derive(Debug)]
pub struct AlgebraStructure {
    /// Jacobson radical as a subspace of the algebra.
    pub radical: Subspace,
    /// Simple modules up to isomorphism, in the order they first occur as
    /// composition factors of the regular module.
    pub simples: Vec<Module>,
    /// `dim End(S_i)`.
    pub simple_end_dims: Vec<usize>,
    /// Complete family of primitive orthogonal idempotents of the algebra,
    /// each with its indecomposable projective `A e` and the index of the
    /// simple top of `A e`.
    pub primitives: Vec<Primitive>,
    pub local: bool,
    pub self_injective: bool,
}

#[derive(Debug)]
pub struct Primitive {
    pub idempotent: Vec<u16>,
    pub ideal: Subspace,
    pub projective: Module,
    pub top: usize,
}

impl AlgebraStructure {
    /// The indecomposable projective covering simple `i`.
    pub fn projective_of(&self, i: usize) -> &Module {
        &self
            .primitives
            .iter()
            .find(|p| p.top == i)
            .expect("every simple is a top")
            .projective
    }
}

pub fn algebra_structure(a: &Arc<Algebra>, cfg: &Config) -> Result<Arc<AlgebraStructure>> {
    if let Some(s) = a.structure.get() {
        return Ok(s.clone());
    }
    let s = Arc::new(compute_structure(a, cfg)?);
    Ok(a.structure.get_or_init(|| s).clone())
}

fn compute_structure(a: &Arc<Algebra>, cfg: &Config) -> Result<AlgebraStructure> {
    let reg = Module::regular(a.clone());
    let factors = composition_factors(&reg, cfg)?;
    let mut simples: Vec<Module> = Vec::new();
    for s in factors {
        let mut known = false;
        for t in &simples {
            if is_isomorphic(&s, t, cfg)?.is_isomorphic() {
                known = true;
                break;
            }
        }
        if !known {
            simples.push(s);
        }
    }
    let f = a.field();
    let n = a.dim();
    let mut radical = Subspace::full(f, n);
    for s in &simples {
        radical = radical.intersection(&annihilator(s))?;
    }
    let simple_end_dims = simples
        .iter()
        .map(|s| hom_dim(s, s))
        .collect::<Result<Vec<_>>>()?;

    let parts = indecomposable_decomposition(&reg, cfg)?.parts;
    // 1 = sum of its components along A = ⊕ A e_k, and those components
    // are the primitive idempotents.
    let stacked = parts
        .iter()
        .fold(Mat::zeros(f, 0, n), |acc, p| acc.vstack(p.basis()));
    let unit = Mat::from_rows(f, 1, &a.unit().iter().map(|&u| vec![u]).collect::<Vec<_>>());
    let coords = match solve_linear(&stacked.transpose(), &unit)? {
        LinearSolution::Consistent { particular, .. } => particular.column(0),
        LinearSolution::Inconsistent { .. } => {
            return Err(Error::CheckFailed(
                "regular decomposition does not span the algebra".into(),
            ))
        }
    };
    let rad_of = |m: &Module| radical_submodule(m, &radical);
    let mut primitives = Vec::new();
    let mut offset = 0;
    for ideal in parts {
        let k = ideal.dim();
        let idempotent = ideal.embed(&coords[offset..offset + k]);
        offset += k;
        let projective = reg.restrict(&ideal)?;
        let top_module = projective.quotient(&rad_of(&projective))?;
        let mut top = None;
        for (i, s) in simples.iter().enumerate() {
            if is_isomorphic(&top_module, s, cfg)?.is_isomorphic() {
                top = Some(i);
                break;
            }
        }
        let top =
            top.ok_or_else(|| Error::CheckFailed("projective top is not a known simple".into()))?;
        primitives.push(Primitive {
            idempotent,
            ideal,
            projective,
            top,
        });
    }
    let local = is_local(&endomorphism_ring(&reg)?, cfg)?;
    let dual = Module::dual_of_right_regular(a.clone());
    let self_injective = is_isomorphic(&reg, &dual, cfg)?.is_isomorphic();
    Ok(AlgebraStructure {
        radical,
        simples,
        simple_end_dims,
        primitives,
        local,
        self_injective,
    })
}

/// `{a : ρ_S(a) = 0}` as a subspace of the algebra.
fn annihilator(s: &Module) -> Subspace {
    let n = s.algebra().dim();
    let d = s.dim();
    let mut m = Mat::zeros(s.field(), d * d, n);
    for (i, rho) in s.action().iter().enumerate() {
        for (k, &x) in rho.data().iter().enumerate() {
            m.set(k, i, x);
        }
    }
    Subspace::kernel_of(&m)
}

/// `J M` for `J` given as a subspace of the algebra.
fn radical_submodule(m: &Module, radical: &Subspace) -> Subspace {
    let mut rows = Vec::new();
    for r in 0..radical.dim() {
        let j = m.act_by(radical.basis().row(r));
        for c in 0..m.dim() {
            rows.push(j.column(c));
        }
    }
    Subspace::from_vectors(m.field(), m.dim(), &rows)
}

/// `J(A) M`.
pub fn radical_of(m: &Module, cfg: &Config) -> Result<Subspace> {
    let st = algebra_structure(m.algebra(), cfg)?;
    Ok(radical_submodule(m, &st.radical))
}

/// A proper nonzero submodule, found by spinning every projective point in
/// lexicographic order; `None` for simple and zero modules.
fn proper_submodule(m: &Module, cfg: &Config) -> Result<Option<Subspace>> {
    let n = m.dim();
    if n <= 1 {
        return Ok(None);
    }
    let p = m.field().p();
    let size = ring_size(p, n);
    if size > cfg.idempotent_limit as u128 {
        return Err(budget(
            "composition series scan",
            size,
            cfg.idempotent_limit,
        ));
    }
    let hit = exec::find_first(cfg.exec, 1..size as u64, |idx| {
        let v = digits(idx, p, n);
        if v.iter().find(|&&x| x != 0) != Some(&1) {
            return None;
        }
        let s = m.spin(&[v]);
        (s.dim() < n).then_some(s)
    });
    Ok(hit.map(|(_, s)| s))
}

/// Composition factors, bottom of the series first.
pub fn composition_factors(m: &Module, cfg: &Config) -> Result<Vec<Module>> {
    if m.is_zero() {
        return Ok(Vec::new());
    }
    match proper_submodule(m, cfg)? {
        None => Ok(vec![m.clone()]),
        Some(sub) => {
            let mut out = composition_factors(&m.restrict(&sub)?, cfg)?;
            out.extend(composition_factors(&m.quotient(&sub)?, cfg)?);
            Ok(out)
        }
    }
}

/// Multiplicity of each simple in a semisimple module.
fn semisimple_multiplicities(x: &Module, st: &AlgebraStructure) -> Result<Vec<usize>> {
    st.simples
        .iter()
        .zip(&st.simple_end_dims)
        .map(|(s, &e)| Ok(hom_dim(s, x)? / e))
        .collect()
}

/// Composition length, summed over the layers `J^i M / J^(i+1) M`; each
/// layer is semisimple, so its length is read off hom dimensions from the
/// simples.
pub fn module_length(m: &Module, cfg: &Config) -> Result<usize> {
    let st = algebra_structure(m.algebra(), cfg)?;
    let mut layer = Subspace::full(m.field(), m.dim());
    let mut total = 0;
    while !layer.is_zero() {
        let lm = m.restrict(&layer)?;
        let below = radical_submodule(&lm, &st.radical);
        let top = lm.quotient(&below)?;
        total += semisimple_multiplicities(&top, &st)?.iter().sum::<usize>();
        layer = layer.absolute(&below);
    }
    Ok(total)
}

pub fn is_semisimple(m: &Module, cfg: &Config) -> Result<bool> {
    Ok(radical_of(m, cfg)?.is_zero())
}

/// A projective cover `P -> M` with `P = ⊕ A e_i`, one summand per simple
/// in the top of `M`.
#[derive(Debug, Clone)]
pub struct ProjectiveCover {
    pub projective: Module,
    /// `dim M x dim P`.
    pub map: Mat,
    /// Which primitive each summand of `P` comes from.
    pub summands: Vec<usize>,
}

pub fn projective_cover(m: &Module, cfg: &Config) -> Result<ProjectiveCover> {
    let st = algebra_structure(m.algebra(), cfg)?;
    let f = m.field();
    let n = m.dim();
    let mut reached = radical_submodule(m, &st.radical);
    let mut projective = Module::zero(m.algebra().clone());
    let mut columns: Vec<Vec<u16>> = Vec::new();
    let mut summands = Vec::new();
    for (i, prim) in st.primitives.iter().enumerate() {
        let e_m = Subspace::image_of(&m.act_by(&prim.idempotent));
        for r in 0..e_m.dim() {
            if reached.is_full() {
                break;
            }
            let v = e_m.basis().row(r);
            if reached.contains_vec(v) {
                continue;
            }
            reached = reached.sum(&m.spin(&[v.to_vec()]))?;
            for w in 0..prim.ideal.dim() {
                columns.push(m.act_by(prim.ideal.basis().row(w)).mul_vec(v));
            }
            projective = projective.direct_sum(&prim.projective);
            summands.push(i);
        }
    }
    debug_assert!(reached.is_full());
    let map = Mat::from_rows(f, n, &columns).transpose();
    let map = if columns.is_empty() {
        Mat::zeros(f, n, 0)
    } else {
        map
    };
    Ok(ProjectiveCover {
        projective,
        map,
        summands,
    })
}

/// `ker(P -> M)` for the projective cover.
pub fn syzygy(m: &Module, cfg: &Config) -> Result<Module> {
    let cover = projective_cover(m, cfg)?;
    cover.projective.restrict(&Subspace::kernel_of(&cover.map))
}

/// Whether `M` is projective: the identity of `M` lifts through its cover,
/// i.e. some `s ∈ Hom(M, P)` has `π s = 1`.
pub fn is_projective(m: &Module, cfg: &Config) -> Result<bool> {
    if m.is_zero() {
        return Ok(true);
    }
    let cover = projective_cover(m, cfg)?;
    let f = m.field();
    let n = m.dim();
    let sections = hom_space(m, &cover.projective)?;
    if sections.is_empty() {
        return Ok(false);
    }
    let mut coeffs = Mat::zeros(f, n * n, sections.len());
    for (t, s) in sections.iter().enumerate() {
        for (k, &x) in cover.map.mul(s).data().iter().enumerate() {
            coeffs.set(k, t, x);
        }
    }
    let id = Mat::identity(f, n);
    let rhs = Mat::from_rows(
        f,
        1,
        &id.data().iter().map(|&x| vec![x]).collect::<Vec<_>>(),
    );
    Ok(solve_linear(&coeffs, &rhs)?.is_consistent())
}

/// A grade in `ℕ ∪ {∞}`; `∞` means beyond the cutoff in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Grade {
    Finite(usize),
    BeyondCutoff,
}

impl Grade {
    pub fn finite(self) -> Option<usize> {
        match self {
            Grade::Finite(v) => Some(v),
            Grade::BeyondCutoff => None,
        }
    }
}

impl std::fmt::Display for Grade {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Grade::Finite(v) => write!(f, "{v}"),
            Grade::BeyondCutoff => write!(f, "inf"),
        }
    }
}

impl Serialize for Grade {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Grade::Finite(v) => s.serialize_u64(*v as u64),
            Grade::BeyondCutoff => s.serialize_str("inf"),
        }
    }
}

/// Projective dimension by iterated minimal projective covers: the number
/// of syzygy steps until the kernel vanishes.
pub fn pdim(m: &Module, cutoff: usize, cfg: &Config) -> Result<Grade> {
    let mut k = m.clone();
    for step in 0..=cutoff {
        let next = syzygy(&k, cfg)?;
        if next.is_zero() {
            return Ok(Grade::Finite(step));
        }
        k = next;
    }
    Ok(Grade::BeyondCutoff)
}
