//! The endomorphism ring of a module as a finite ring: its idempotents, the
//! idempotent order, orthogonal families, and locality.

use std::ops::ControlFlow;

use serde::Serialize;

use crate::algmod::{digits, hom_basis, Module};
use crate::config::{ring_size, Config};
use crate::error::{budget, Result};
use crate::exec;
use crate::linalg::{FieldSpec, Mat, SpanBuilder};

/// `End(M)` with a basis of intertwining matrices and the structure
/// constants of composition in that basis.
#[derive(Debug, Clone)]
pub struct EndoRing {
    module: Module,
    /// Flattened position of the leading entry of each basis matrix.
    pivots: Vec<usize>,
    basis: Vec<Mat>,
    /// `mult[i * d + j]` = coordinates of `basis[i] * basis[j]`.
    mult: Vec<Vec<u16>>,
    unit: Vec<u16>,
}

impl EndoRing {
    pub fn module(&self) -> &Module {
        &self.module
    }

    pub fn field(&self) -> FieldSpec {
        self.module.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `|E| = p^d`, saturating.
    pub fn size(&self) -> u128 {
        ring_size(self.field().p(), self.dim())
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    pub fn unit(&self) -> &[u16] {
        &self.unit
    }

    pub fn product_coords(&self, i: usize, j: usize) -> &[u16] {
        &self.mult[i * self.dim() + j]
    }

    /// Matrix realisation of a coefficient vector.
    pub fn element(&self, coeffs: &[u16]) -> Mat {
        let m = self.module.dim();
        let mut out = Mat::zeros(self.field(), m, m);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            out.add_scaled(*c, b);
        }
        out
    }

    /// Coordinates of an endomorphism, or `None` if `x` does not commute with
    /// the action.
    pub fn coords(&self, x: &Mat) -> Option<Vec<u16>> {
        let coeffs: Vec<u16> = self.pivots.iter().map(|&c| x.data()[c]).collect();
        (self.element(&coeffs) == *x).then_some(coeffs)
    }

    pub fn mul_coords(&self, a: &[u16], b: &[u16]) -> Vec<u16> {
        let f = self.field();
        let d = self.dim();
        let mut out = vec![0u16; d];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = f.mul(x, y);
                for (o, &c) in out.iter_mut().zip(&self.mult[i * d + j]) {
                    *o = f.add(*o, f.mul(xy, c));
                }
            }
        }
        out
    }

    fn require_enumerable(&self, cfg: &Config, what: &'static str) -> Result<()> {
        let size = self.size();
        if size > cfg.idempotent_limit as u128 {
            return Err(budget(what, size, cfg.idempotent_limit));
        }
        Ok(())
    }
}

pub fn endomorphism_ring(m: &Module) -> Result<EndoRing> {
    let flat = hom_basis(m, m)?;
    let n = m.dim();
    let f = m.field();
    let d = flat.rows();
    let pivots: Vec<usize> = (0..d)
        .map(|r| flat.row(r).iter().position(|&x| x != 0).expect("RREF row"))
        .collect();
    let basis: Vec<Mat> = (0..d)
        .map(|r| Mat::from_rows(f, n * n, &[flat.row(r).to_vec()]).reshape(n, n))
        .collect();
    let read = |x: &Mat| -> Vec<u16> { pivots.iter().map(|&c| x.data()[c]).collect() };
    let mut mult = Vec::with_capacity(d * d);
    for bi in &basis {
        for bj in &basis {
            mult.push(read(&bi.mul(bj)));
        }
    }
    let unit = if n == 0 {
        Vec::new()
    } else {
        read(&Mat::identity(f, n))
    };
    let e = EndoRing {
        module: m.clone(),
        pivots,
        basis,
        mult,
        unit,
    };
    debug_assert!(e.unit.is_empty() || e.element(&e.unit).is_identity());
    Ok(e)
}

/// An idempotent of `End(M)`: coefficients and matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Idempotent {
    pub coeffs: Vec<u16>,
    #[serde(skip)]
    pub matrix: Mat,
}

impl Idempotent {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// `1 - e`.
    pub fn complement(&self, e: &EndoRing) -> Idempotent {
        let f = e.field();
        let coeffs: Vec<u16> = e
            .unit()
            .iter()
            .zip(&self.coeffs)
            .map(|(&u, &c)| f.sub(u, c))
            .collect();
        let matrix = e.element(&coeffs);
        Idempotent { coeffs, matrix }
    }
}

/// `a ≤ b` iff `ab = a = ba`.
pub fn idempotent_leq(a: &Idempotent, b: &Idempotent) -> bool {
    a.matrix.mul(&b.matrix) == a.matrix && b.matrix.mul(&a.matrix) == a.matrix
}

/// Depth-first solver for `x^2 = x` over the coefficient space.
///
/// With `x = sum x_i b_i` fixed on a prefix, the square of the prefix and the
/// cross terms `L b_j + b_j L` for every later `j` are updated incrementally.
/// Coordinate `t` of the square is final once no later basis index
/// contributes to it; it is compared with `x_t` at the first level where
/// both are known, which prunes the search early for triangular-looking
/// structure constants.
struct IdempotentSearch<'a> {
    ring: &'a EndoRing,
    /// `sym[k][j] = T[k][j] + T[j][k]` for `j > k`.
    sym: Vec<Vec<Vec<u16>>>,
    /// `checks[level]` lists coordinates to compare after `level` choices.
    checks: Vec<Vec<usize>>,
}

#[derive(Clone)]
struct Node {
    x: Vec<u16>,
    square: Vec<u16>,
    /// `cross[j]` for every `j >= level`, stored at index `j`.
    cross: Vec<Vec<u16>>,
}

impl<'a> IdempotentSearch<'a> {
    fn new(ring: &'a EndoRing) -> Self {
        let d = ring.dim();
        let f = ring.field();
        let sym = (0..d)
            .map(|k| {
                (0..d)
                    .map(|j| {
                        ring.product_coords(k, j)
                            .iter()
                            .zip(ring.product_coords(j, k))
                            .map(|(&a, &b)| f.add(a, b))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut last = vec![0usize; d];
        for i in 0..d {
            for j in 0..d {
                for (t, &c) in ring.product_coords(i, j).iter().enumerate() {
                    if c != 0 {
                        last[t] = last[t].max(i.max(j) + 1);
                    }
                }
            }
        }
        let mut checks = vec![Vec::new(); d + 1];
        for t in 0..d {
            checks[last[t].max(t + 1)].push(t);
        }
        IdempotentSearch { ring, sym, checks }
    }

    fn root(&self) -> Node {
        let d = self.ring.dim();
        Node {
            x: Vec::with_capacity(d),
            square: vec![0; d],
            cross: vec![vec![0; d]; d],
        }
    }

    /// Extends `node` (at level `node.x.len()`) by coefficient `a`; `None`
    /// when a finalised coordinate already disagrees.
    fn step(&self, node: &Node, a: u16) -> Option<Node> {
        let f = self.ring.field();
        let k = node.x.len();
        let mut x = node.x.clone();
        x.push(a);
        let a2 = f.mul(a, a);
        let kk = self.ring.product_coords(k, k);
        let square: Vec<u16> = node
            .square
            .iter()
            .zip(&node.cross[k])
            .zip(kk)
            .map(|((&s, &c), &t)| f.add(f.add(s, f.mul(a, c)), f.mul(a2, t)))
            .collect();
        for &t in &self.checks[k + 1] {
            if square[t] != x[t] {
                return None;
            }
        }
        let mut cross = node.cross.clone();
        if a != 0 {
            for (cj, sj) in cross.iter_mut().zip(&self.sym[k]).skip(k + 1) {
                for (c, &s) in cj.iter_mut().zip(sj) {
                    *c = f.add(*c, f.mul(a, s));
                }
            }
        }
        Some(Node { x, square, cross })
    }

    fn walk<F>(&self, node: Node, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[u16]) -> ControlFlow<()>,
    {
        if node.x.len() == self.ring.dim() {
            return visit(&node.x);
        }
        for a in 0..self.ring.field().p() {
            if let Some(child) = self.step(&node, a) {
                self.walk(child, visit)?;
            }
        }
        ControlFlow::Continue(())
    }

    /// Surviving nodes at `depth`, in lexicographic order.
    fn frontier(&self, depth: usize) -> Vec<Node> {
        let mut level = vec![self.root()];
        for _ in 0..depth {
            level = level
                .iter()
                .flat_map(|n| (0..self.ring.field().p()).filter_map(move |a| self.step(n, a)))
                .collect();
        }
        level
    }

    fn split_depth(&self) -> usize {
        let p = self.ring.field().p() as u64;
        let d = self.ring.dim();
        let mut depth = 0;
        let mut width = 1u64;
        while depth < d && width < 256 {
            width *= p;
            depth += 1;
        }
        depth
    }
}

/// All solutions of `x^2 = x` in lexicographic coefficient order, 0 and 1
/// included.
pub fn enumerate_idempotents(e: &EndoRing, cfg: &Config) -> Result<Vec<Idempotent>> {
    e.require_enumerable(cfg, "idempotent enumeration")?;
    let search = IdempotentSearch::new(e);
    let frontier = search.frontier(search.split_depth());
    let chunks = exec::map(cfg.exec, &frontier, |node| {
        let mut found = Vec::new();
        let _ = search.walk(node.clone(), &mut |x| {
            found.push(x.to_vec());
            ControlFlow::Continue(())
        });
        found
    });
    Ok(chunks
        .into_iter()
        .flatten()
        .map(|coeffs| Idempotent {
            matrix: e.element(&coeffs),
            coeffs,
        })
        .collect())
}

/// The lexicographically first idempotent other than 0 and 1.
pub fn first_nontrivial_idempotent(e: &EndoRing, cfg: &Config) -> Result<Option<Idempotent>> {
    e.require_enumerable(cfg, "idempotent enumeration")?;
    let search = IdempotentSearch::new(e);
    let frontier = search.frontier(search.split_depth());
    let trivial = |x: &[u16]| x.iter().all(|&c| c == 0) || x == e.unit();
    let hit = exec::find_first(cfg.exec, 0..frontier.len() as u64, |i| {
        let mut found = None;
        let _ = search.walk(frontier[i as usize].clone(), &mut |x| {
            if trivial(x) {
                ControlFlow::Continue(())
            } else {
                found = Some(x.to_vec());
                ControlFlow::Break(())
            }
        });
        found
    });
    Ok(hit.map(|(_, coeffs)| Idempotent {
        matrix: e.element(&coeffs),
        coeffs,
    }))
}

/// Pairwise orthogonal idempotents; `complete` iff they sum to 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrthogonalFamily {
    pub members: Vec<Idempotent>,
    pub complete: bool,
}

impl OrthogonalFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_orthogonal(&self) -> bool {
        self.members.iter().enumerate().all(|(i, a)| {
            self.members
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || a.matrix.mul(&b.matrix).is_zero())
        })
    }
}

/// A complete orthogonal family of nonzero idempotents of maximum size,
/// found by exhaustive backtracking. Its size is `KSℓ(End(M))`.
pub fn max_orthogonal_family(e: &EndoRing, cfg: &Config) -> Result<OrthogonalFamily> {
    let n = e.module().dim();
    let idems: Vec<Idempotent> = enumerate_idempotents(e, cfg)?
        .into_iter()
        .filter(|i| !i.is_zero())
        .collect();
    let ranks: Vec<usize> = idems.iter().map(Idempotent::rank).collect();

    struct State<'a> {
        idems: &'a [Idempotent],
        ranks: &'a [usize],
        n: usize,
        best: Vec<usize>,
        found: bool,
    }

    fn orthogonal(a: &Mat, b: &Mat) -> bool {
        a.mul(b).is_zero() && b.mul(a).is_zero()
    }

    fn search(st: &mut State, chosen: &mut Vec<usize>, rank_sum: usize, candidates: &[usize]) {
        if rank_sum == st.n {
            if !st.found || chosen.len() > st.best.len() {
                st.best = chosen.clone();
                st.found = true;
            }
            return;
        }
        let bound = chosen.len() + candidates.len().min(st.n - rank_sum);
        if st.found && bound <= st.best.len() {
            return;
        }
        for (pos, &c) in candidates.iter().enumerate() {
            if rank_sum + st.ranks[c] > st.n {
                continue;
            }
            let next: Vec<usize> = candidates[pos + 1..]
                .iter()
                .copied()
                .filter(|&o| orthogonal(&st.idems[c].matrix, &st.idems[o].matrix))
                .collect();
            chosen.push(c);
            search(st, chosen, rank_sum + st.ranks[c], &next);
            chosen.pop();
            if st.found && st.best.len() == st.n {
                return;
            }
        }
    }

    let mut st = State {
        idems: &idems,
        ranks: &ranks,
        n,
        best: Vec::new(),
        found: false,
    };
    let all: Vec<usize> = (0..idems.len()).collect();
    search(&mut st, &mut Vec::new(), 0, &all);
    assert!(st.found, "{{1}} is always a complete family");
    Ok(OrthogonalFamily {
        members: st.best.iter().map(|&i| idems[i].clone()).collect(),
        complete: true,
    })
}

/// Exhaustive locality test: `E` is local iff its non-units form an
/// additive subgroup. Non-units are closed under scalars, so this holds iff
/// their number equals `p` to the dimension of their span.
pub fn is_local(e: &EndoRing, cfg: &Config) -> Result<bool> {
    e.require_enumerable(cfg, "unit classification")?;
    let d = e.dim();
    if d == 0 {
        return Ok(false);
    }
    let p = e.field().p();
    let size = e.size() as u64;
    let m = e.module().dim();
    // Invertibility of x can be read from its matrix on M or from left
    // multiplication on E itself; use whichever is smaller.
    let left_regular = d < m;
    let is_unit = |coeffs: &[u16]| -> bool {
        if left_regular {
            let mut l = Mat::zeros(e.field(), d, d);
            for j in 0..d {
                let mut bj = vec![0u16; d];
                bj[j] = 1;
                for (k, v) in e.mul_coords(coeffs, &bj).into_iter().enumerate() {
                    l.set(k, j, v);
                }
            }
            l.is_invertible()
        } else {
            e.element(coeffs).is_invertible()
        }
    };
    const CHUNK: u64 = 1024;
    let chunks = size.div_ceil(CHUNK) as usize;
    let parts = exec::map_range(cfg.exec, 0..chunks, |c| {
        let mut span = SpanBuilder::new(e.field(), d);
        let mut count = 0u64;
        let start = c as u64 * CHUNK;
        for idx in start..(start + CHUNK).min(size) {
            let x = digits(idx, p, d);
            if !is_unit(&x) {
                count += 1;
                span.insert(&x);
            }
        }
        (count, span.finish())
    });
    let mut total = 0u64;
    let mut span = SpanBuilder::new(e.field(), d);
    for (count, s) in parts {
        total += count;
        for r in 0..s.dim() {
            span.insert(s.basis().row(r));
        }
    }
    Ok(ring_size(p, span.dim()) == total as u128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algmod::{product_fields, truncated_poly, Module};
    use crate::linalg::Subspace;

    fn regular_product() -> Module {
        Module::regular(product_fields(2, 2).unwrap())
    }

    fn regular_dual_numbers() -> Module {
        Module::regular(truncated_poly(2, 2).unwrap())
    }

    fn simple_product() -> Module {
        let m = regular_product();
        m.restrict(&Subspace::from_vectors(m.field(), 2, &[vec![1, 0]]))
            .unwrap()
    }

    /// Oracle: square every element of the ring.
    fn brute_idempotents(e: &EndoRing) -> Vec<Vec<u16>> {
        let p = e.field().p();
        (0..e.size() as u64)
            .map(|i| digits(i, p, e.dim()))
            .filter(|x| {
                let m = e.element(x);
                m.mul(&m) == m
            })
            .collect()
    }

    #[test]
    fn end_of_regular_product_is_diagonal() {
        let e = endomorphism_ring(&regular_product()).unwrap();
        assert_eq!(e.dim(), 2);
        for b in e.basis() {
            for r in 0..2 {
                for c in 0..2 {
                    if r != c {
                        assert_eq!(b.get(r, c), 0);
                    }
                }
            }
        }
    }

    #[test]
    fn end_of_regular_dual_numbers_is_two_dimensional_commutative() {
        let e = endomorphism_ring(&regular_dual_numbers()).unwrap();
        assert_eq!(e.dim(), 2);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(e.product_coords(i, j), e.product_coords(j, i));
            }
        }
    }

    #[test]
    fn end_of_simple_is_scalars() {
        let e = endomorphism_ring(&simple_product()).unwrap();
        assert_eq!(e.dim(), 1);
    }

    #[test]
    fn idempotents_of_regular_product() {
        let e = endomorphism_ring(&regular_product()).unwrap();
        let found: Vec<_> = enumerate_idempotents(&e, &Config::default())
            .unwrap()
            .into_iter()
            .map(|i| i.coeffs)
            .collect();
        assert_eq!(found.len(), 4);
        assert_eq!(found, brute_idempotents(&e));
    }

    #[test]
    fn idempotents_of_dual_numbers_are_trivial() {
        let e = endomorphism_ring(&regular_dual_numbers()).unwrap();
        let found = enumerate_idempotents(&e, &Config::default()).unwrap();
        assert_eq!(found.len(), 2);
        assert!(found.iter().any(Idempotent::is_zero));
        assert!(found.iter().any(|i| i.matrix.is_identity()));
    }

    #[test]
    fn idempotent_order_examples() {
        let e = endomorphism_ring(&regular_product()).unwrap();
        let idems = enumerate_idempotents(&e, &Config::default()).unwrap();
        let by = |diag: [u16; 2]| {
            idems
                .iter()
                .find(|i| i.matrix == Mat::diagonal(e.field(), &diag))
                .unwrap()
                .clone()
        };
        let (zero, e11, e22, one) = (by([0, 0]), by([1, 0]), by([0, 1]), by([1, 1]));
        assert!(idempotent_leq(&e11, &one));
        assert!(!idempotent_leq(&e11, &e22));
        for i in &idems {
            assert!(idempotent_leq(&zero, i));
        }
    }

    #[test]
    fn max_families() {
        let cfg = Config::default();
        let f =
            max_orthogonal_family(&endomorphism_ring(&regular_product()).unwrap(), &cfg).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.complete && f.is_orthogonal());
        let f = max_orthogonal_family(&endomorphism_ring(&regular_dual_numbers()).unwrap(), &cfg)
            .unwrap();
        assert_eq!(f.len(), 1);
        let f =
            max_orthogonal_family(&endomorphism_ring(&simple_product()).unwrap(), &cfg).unwrap();
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn locality_examples() {
        let cfg = Config::default();
        assert!(is_local(&endomorphism_ring(&regular_dual_numbers()).unwrap(), &cfg).unwrap());
        assert!(!is_local(&endomorphism_ring(&regular_product()).unwrap(), &cfg).unwrap());
        assert!(is_local(&endomorphism_ring(&simple_product()).unwrap(), &cfg).unwrap());
    }

    #[test]
    fn zero_module_has_one_idempotent_and_empty_family() {
        let a = product_fields(2, 2).unwrap();
        let e = endomorphism_ring(&Module::zero(a)).unwrap();
        let cfg = Config::default();
        assert_eq!(enumerate_idempotents(&e, &cfg).unwrap().len(), 1);
        assert_eq!(max_orthogonal_family(&e, &cfg).unwrap().len(), 0);
        assert!(!is_local(&e, &cfg).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let e = endomorphism_ring(&regular_product()).unwrap();
        let cfg = Config {
            idempotent_limit: 3,
            ..Config::default()
        };
        assert!(matches!(
            enumerate_idempotents(&e, &cfg),
            Err(crate::Error::BudgetExceeded { .. })
        ));
    }
}
