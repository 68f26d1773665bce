//! The poset of direct summands, its chains and independent families, the
//! deviation of finite posets, and lifting summand chains to complements.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algmod::{is_isomorphic, Module};
use crate::config::Config;
use crate::endo::{enumerate_idempotents, EndoRing};
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::Subspace;

/// Fixed-width bit set over poset indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    pub(crate) fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    pub(crate) fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64)
                .filter(move |b| bits >> b & 1 == 1)
                .map(move |b| w * 64 + b)
        })
    }
}

/// All direct summands of a module, ordered by inclusion.
///
/// Elements are canonical subspaces sorted by dimension and then entries,
/// so index 0 is the zero summand and the last index is the whole module.
#[derive(Debug, Clone)]
pub struct SummandPoset {
    module: Module,
    elements: Vec<Subspace>,
    /// A complement of each element, the kernel of its generating idempotent.
    complements: Vec<Subspace>,
    /// `below[j]` holds every `i` with `elements[i] ⊆ elements[j]`.
    below: Vec<Bits>,
}

/// Builds the summand poset from the images of all idempotents of `e`.
pub fn summand_poset(e: &EndoRing, cfg: &Config) -> Result<SummandPoset> {
    let idems = enumerate_idempotents(e, cfg)?;
    let pairs = exec::map(cfg.exec, &idems, |i| {
        let c = i.complement(e);
        (Subspace::image_of(&i.matrix), Subspace::image_of(&c.matrix))
    });
    let mut images: BTreeMap<Subspace, Subspace> = BTreeMap::new();
    for (img, comp) in pairs {
        images.entry(img).or_insert(comp);
    }
    let (elements, complements): (Vec<_>, Vec<_>) = images.into_iter().unzip();
    Ok(SummandPoset::from_parts(
        e.module().clone(),
        elements,
        complements,
        cfg,
    ))
}

impl SummandPoset {
    fn from_parts(
        module: Module,
        elements: Vec<Subspace>,
        complements: Vec<Subspace>,
        cfg: &Config,
    ) -> Self {
        let n = elements.len();
        let below = exec::map_range(cfg.exec, 0..n, |j| {
            let mut b = Bits::new(n);
            for i in 0..=j {
                if elements[i].dim() <= elements[j].dim() && elements[j].contains(&elements[i]) {
                    b.set(i);
                }
            }
            b
        });
        SummandPoset {
            module,
            elements,
            complements,
            below,
        }
    }

    pub fn module(&self) -> &Module {
        &self.module
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Subspace {
        &self.elements[i]
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    /// The complement recorded when element `i` was found.
    pub fn witness_complement(&self, i: usize) -> &Subspace {
        &self.complements[i]
    }

    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        self.elements.binary_search(s).ok()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.below[j].get(i)
    }

    /// Elements contained in element `j`, in index order.
    pub fn down_set(&self, j: usize) -> Vec<usize> {
        self.below[j].iter().collect()
    }

    /// Element `i` as a module in the coordinates of its RREF basis.
    pub fn element_module(&self, i: usize) -> Module {
        self.module
            .restrict(&self.elements[i])
            .expect("summands are invariant")
    }

    /// Minimal nonzero elements: the indecomposable summands.
    pub fn atoms(&self) -> Vec<usize> {
        (1..self.len())
            .filter(|&j| self.below[j].iter().all(|i| i == 0 || i == j))
            .collect()
    }

    /// Poset elements `c` with `elements[a] ⊕ elements[c] = elements[within]`,
    /// in index order.
    pub fn complements_within(&self, a: usize, within: usize) -> Vec<usize> {
        let target = self.elements[within].dim();
        let da = self.elements[a].dim();
        if da > target || !self.leq(a, within) {
            return Vec::new();
        }
        self.below[within]
            .iter()
            .filter(|&c| {
                self.elements[c].dim() + da == target
                    && independent(&self.elements[a], &self.elements[c])
            })
            .collect()
    }

    /// Covering pairs `(i, j)`: `i < j` with nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut edges = Vec::new();
        for j in 0..n {
            let mut shadow = Bits::new(n);
            for i in self.below[j].iter().filter(|&i| i != j) {
                for k in self.below[i].iter().filter(|&k| k != i) {
                    shadow.set(k);
                }
            }
            for i in self.below[j].iter().filter(|&i| i != j) {
                if !shadow.get(i) {
                    edges.push((i, j));
                }
            }
        }
        edges
    }

    pub fn to_finite_poset(&self) -> FinitePoset {
        let n = self.len();
        let leq = (0..n)
            .map(|i| (0..n).map(|j| self.leq(i, j)).collect())
            .collect();
        FinitePoset { size: n, leq }
    }

    /// Hasse diagram with element dimensions, for reports.
    pub fn export(&self) -> PosetExport {
        PosetExport {
            dims: self.elements.iter().map(Subspace::dim).collect(),
            covers: self.hasse_edges(),
        }
    }
}

pub(crate) fn independent(a: &Subspace, b: &Subspace) -> bool {
    a.dim() + b.dim() <= a.ambient_dim() && a.basis().vstack(b.basis()).rank() == a.dim() + b.dim()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PosetExport {
    pub dims: Vec<usize>,
    pub covers: Vec<(usize, usize)>,
}

/// A finite poset given by its relation matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    size: usize,
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Checks reflexivity, antisymmetry and transitivity.
    pub fn new(leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = leq.len();
        if leq.iter().any(|r| r.len() != n) {
            return Err(Error::Input("relation matrix is not square".into()));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(Error::Input(format!("not reflexive at {i}")));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Input(format!("not antisymmetric at ({i}, {j})")));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(Error::Input(format!("not transitive at ({i}, {j}, {k})")));
                    }
                }
            }
        }
        Ok(FinitePoset { size: n, leq })
    }

    pub fn antichain(n: usize) -> Self {
        let leq = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        FinitePoset { size: n, leq }
    }

    pub fn chain(n: usize) -> Self {
        let leq = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        FinitePoset { size: n, leq }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn dual(&self) -> FinitePoset {
        let n = self.size;
        let leq = (0..n)
            .map(|i| (0..n).map(|j| self.leq[j][i]).collect())
            .collect();
        FinitePoset { size: n, leq }
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.size).all(|i| (0..self.size).all(|j| i == j || !self.leq[i][j]))
    }
}

/// Deviation of a finite poset: `-1` when discrete and `0` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviationValue {
    MinusOne,
    Zero,
}

impl DeviationValue {
    pub fn value(self) -> i8 {
        match self {
            DeviationValue::MinusOne => -1,
            DeviationValue::Zero => 0,
        }
    }
}

impl Serialize for DeviationValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

pub fn deviation_finite(p: &FinitePoset) -> DeviationValue {
    if p.is_discrete() {
        DeviationValue::MinusOne
    } else {
        DeviationValue::Zero
    }
}

/// Whether a poset and its dual have the same deviation.
pub fn dual_deviation_check(p: &FinitePoset) -> bool {
    deviation_finite(p) == deviation_finite(&p.dual())
}

/// A chain of poset elements, listed upwards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub length: usize,
    pub witness: Vec<usize>,
}

/// For each element, the number of elements in the longest chain of nonzero
/// summands ending at it, together with a predecessor on such a chain.
pub fn chain_heights(p: &SummandPoset) -> (Vec<usize>, Vec<Option<usize>>) {
    let n = p.len();
    let mut height = vec![0usize; n];
    let mut pred = vec![None; n];
    let mut covers_into: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, j) in p.hasse_edges() {
        covers_into[j].push(i);
    }
    // Indices are sorted by dimension, so covers always point upwards.
    for j in 1..n {
        height[j] = 1;
        for &i in &covers_into[j] {
            if i != 0 && height[i] + 1 > height[j] {
                height[j] = height[i] + 1;
                pred[j] = Some(i);
            }
        }
    }
    (height, pred)
}

/// Longest strictly ascending chain of nonzero summands, by dynamic
/// programming over the covering relation.
pub fn longest_nonzero_chain(p: &SummandPoset) -> Chain {
    let (height, pred) = chain_heights(p);
    let top = p.top();
    let mut witness = Vec::new();
    let mut cur = (height[top] > 0).then_some(top);
    while let Some(c) = cur {
        witness.push(c);
        cur = pred[c];
    }
    witness.reverse();
    Chain {
        length: height[top],
        witness,
    }
}

/// A family of nonzero summands whose sum is direct.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependentFamily {
    pub size: usize,
    pub witness: Vec<usize>,
}

/// Largest independent family of nonzero summands.
///
/// Every member of an independent family contains an indecomposable
/// summand, and shrinking members keeps the sum direct, so the search runs
/// over atoms only. Candidates are filtered against the running sum and
/// the remaining dimension bounds the achievable size.
pub fn max_independent_family(p: &SummandPoset) -> IndependentFamily {
    let atoms = p.atoms();
    let n = p.module().dim();

    struct Search<'a> {
        p: &'a SummandPoset,
        n: usize,
        best: Vec<usize>,
    }

    impl Search<'_> {
        fn bound(&self, chosen: usize, used: usize, candidates: &[usize]) -> usize {
            let mut dims: Vec<usize> = candidates
                .iter()
                .map(|&c| self.p.element(c).dim())
                .collect();
            dims.sort_unstable();
            let mut room = self.n - used;
            let mut extra = 0;
            for d in dims {
                if d > room {
                    break;
                }
                room -= d;
                extra += 1;
            }
            chosen + extra
        }

        fn run(&mut self, chosen: &mut Vec<usize>, sum: &Subspace, candidates: &[usize]) {
            if chosen.len() > self.best.len() {
                self.best = chosen.clone();
            }
            if self.bound(chosen.len(), sum.dim(), candidates) <= self.best.len() {
                return;
            }
            for (pos, &c) in candidates.iter().enumerate() {
                let next_sum = sum.sum(self.p.element(c)).expect("same ambient");
                let next: Vec<usize> = candidates[pos + 1..]
                    .iter()
                    .copied()
                    .filter(|&o| independent(&next_sum, self.p.element(o)))
                    .collect();
                chosen.push(c);
                self.run(chosen, &next_sum, &next);
                chosen.pop();
                if self.best.len() == self.n {
                    return;
                }
            }
        }
    }

    let mut s = Search {
        p,
        n,
        best: Vec::new(),
    };
    let zero = p.element(0).clone();
    s.run(&mut Vec::new(), &zero, &atoms);
    IndependentFamily {
        size: s.best.len(),
        witness: s.best,
    }
}

/// All maximal chains `0 = M_0 < M_1 < ... < M` of the poset, as index lists.
pub fn maximal_chains(p: &SummandPoset) -> Vec<Vec<usize>> {
    let n = p.len();
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, j) in p.hasse_edges() {
        up[i].push(j);
    }
    let mut out = Vec::new();
    let mut stack = vec![vec![0usize]];
    while let Some(path) = stack.pop() {
        let last = *path.last().unwrap();
        if up[last].is_empty() {
            out.push(path);
            continue;
        }
        for &nx in up[last].iter().rev() {
            let mut p2 = path.clone();
            p2.push(nx);
            stack.push(p2);
        }
    }
    out
}

/// Per-step verification record of a chain lift.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftStep {
    /// `M = M_k ⊕ N_k`.
    pub complementary: bool,
    /// `M_{k+1} ∩ N_k` is a summand of `M`.
    pub intersection_is_summand: bool,
    /// `M_{k+1}/M_k ≅ M_{k+1} ∩ N_k ≅ N_k/N_{k+1}`.
    pub three_way_isomorphic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainLift {
    pub complements: Vec<Subspace>,
    pub steps: Vec<LiftStep>,
}

impl ChainLift {
    pub fn all_verified(&self) -> bool {
        self.steps
            .iter()
            .all(|s| s.complementary && s.intersection_is_summand && s.three_way_isomorphic)
    }
}

/// Given summands `M_1 < M_2 < ...`, builds complements `N_1 ⊇ N_2 ⊇ ...`
/// with `M = M_k ⊕ N_k`, by the modular-law recursion
/// `N_k = (M_{k+1} ∩ N_k) ⊕ N_{k+1}`.
pub fn lift_chain_to_complements(
    p: &SummandPoset,
    chain: &[Subspace],
    cfg: &Config,
) -> Result<ChainLift> {
    let mut idx = Vec::with_capacity(chain.len());
    for (k, s) in chain.iter().enumerate() {
        if k > 0 && !(chain[k - 1].dim() < s.dim() && s.contains(&chain[k - 1])) {
            return Err(Error::ChainNotAscending(k));
        }
        idx.push(p.index_of(s).ok_or(Error::NotASummand(k))?);
    }
    if idx.is_empty() {
        return Ok(ChainLift {
            complements: Vec::new(),
            steps: Vec::new(),
        });
    }
    let m = p.module();
    let mut comp = p
        .index_of(p.witness_complement(idx[0]))
        .expect("complements of summands are summands");
    let mut complements = vec![p.element(comp).clone()];
    let mut steps = Vec::new();
    for k in 0..idx.len() {
        let complementary = p.element(idx[k]).is_complement_of(p.element(comp));
        if k + 1 == idx.len() {
            steps.push(LiftStep {
                complementary,
                intersection_is_summand: true,
                three_way_isomorphic: true,
            });
            break;
        }
        let (mk, mk1, nk) = (p.element(idx[k]), p.element(idx[k + 1]), p.element(comp));
        let x = mk1.intersection(nk)?;
        let xi = p.index_of(&x).ok_or(Error::NotASummand(k + 1))?;
        let next = *p.complements_within(xi, comp).first().ok_or_else(|| {
            Error::CheckFailed(format!(
                "no complement of M_{} ∩ N_{} inside N_{}",
                k + 1,
                k,
                k
            ))
        })?;
        let nk1 = p.element(next);
        let outer = m.restrict(mk1)?;
        let q1 = outer.quotient(&mk1.relative(mk).expect("chain is ascending"))?;
        let xm = m.restrict(&x)?;
        let inner = m.restrict(nk)?;
        let q2 = inner.quotient(&nk.relative(nk1).expect("complement lies inside"))?;
        let three_way = is_isomorphic(&q1, &xm, cfg)?.is_isomorphic()
            && is_isomorphic(&xm, &q2, cfg)?.is_isomorphic();
        steps.push(LiftStep {
            complementary,
            intersection_is_summand: true,
            three_way_isomorphic: three_way,
        });
        comp = next;
        complements.push(nk1.clone());
    }
    Ok(ChainLift { complements, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algmod::{product_fields, truncated_poly};
    use crate::endo::endomorphism_ring;
    use crate::linalg::FieldSpec;

    fn poset_of(m: &Module) -> SummandPoset {
        summand_poset(&endomorphism_ring(m).unwrap(), &Config::default()).unwrap()
    }

    fn diamond() -> SummandPoset {
        poset_of(&Module::regular(product_fields(2, 2).unwrap()))
    }

    fn line(v: Vec<u16>) -> Subspace {
        Subspace::from_vectors(FieldSpec::gf(2), v.len(), &[v])
    }

    #[test]
    fn diamond_shape() {
        let p = diamond();
        assert_eq!(p.len(), 4);
        assert!(p.element(0).is_zero() && p.element(3).is_full());
        assert_eq!(p.atoms(), vec![1, 2]);
        let mut edges = p.hasse_edges();
        edges.sort();
        assert_eq!(edges, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn dual_numbers_poset_is_a_two_chain() {
        let p = poset_of(&Module::regular(truncated_poly(2, 2).unwrap()));
        assert_eq!(p.len(), 2);
        assert_eq!(longest_nonzero_chain(&p).length, 1);
        assert_eq!(max_independent_family(&p).size, 1);
    }

    #[test]
    fn zero_module_poset() {
        let p = poset_of(&Module::zero(product_fields(2, 2).unwrap()));
        assert_eq!(p.len(), 1);
        assert_eq!(longest_nonzero_chain(&p).length, 0);
        assert_eq!(max_independent_family(&p).size, 0);
        assert_eq!(maximal_chains(&p), vec![vec![0]]);
    }

    #[test]
    fn diamond_chain_and_family() {
        let p = diamond();
        let c = longest_nonzero_chain(&p);
        assert_eq!(c.length, 2);
        assert_eq!(c.witness.len(), 2);
        assert_eq!(*c.witness.last().unwrap(), 3);
        let f = max_independent_family(&p);
        assert_eq!(f.size, 2);
        assert_eq!(f.witness, vec![1, 2]);
    }

    #[test]
    fn square_of_simple_has_three_lines() {
        let a = product_fields(2, 2).unwrap();
        let reg = Module::regular(a);
        let s = reg.restrict(&line(vec![1, 0])).unwrap();
        let p = poset_of(&s.direct_sum(&s));
        assert_eq!(p.len(), 5);
        assert_eq!(p.atoms().len(), 3);
        assert_eq!(max_independent_family(&p).size, 2);
    }

    #[test]
    fn deviation_examples() {
        assert_eq!(
            deviation_finite(&FinitePoset::antichain(5)),
            DeviationValue::MinusOne
        );
        assert_eq!(
            deviation_finite(&FinitePoset::chain(2)),
            DeviationValue::Zero
        );
        assert_eq!(
            deviation_finite(&diamond().to_finite_poset()),
            DeviationValue::Zero
        );
        assert!(dual_deviation_check(&FinitePoset::chain(3)));
        assert!(dual_deviation_check(&diamond().to_finite_poset()));
        assert!(FinitePoset::new(diamond().to_finite_poset().leq).is_ok());
    }

    #[test]
    fn finite_poset_rejects_cycles() {
        let leq = vec![vec![true, true], vec![true, true]];
        assert!(FinitePoset::new(leq).is_err());
    }

    #[test]
    fn lift_in_diamond() {
        let p = diamond();
        let cfg = Config::default();
        let chain = vec![p.element(0).clone(), line(vec![1, 0]), p.element(3).clone()];
        let lift = lift_chain_to_complements(&p, &chain, &cfg).unwrap();
        assert_eq!(
            lift.complements,
            vec![p.element(3).clone(), line(vec![0, 1]), p.element(0).clone()]
        );
        assert!(lift.all_verified());
    }

    #[test]
    fn lift_trivial_chains() {
        let p = diamond();
        let cfg = Config::default();
        let lift =
            lift_chain_to_complements(&p, &[p.element(0).clone(), p.element(3).clone()], &cfg)
                .unwrap();
        assert_eq!(
            lift.complements,
            vec![p.element(3).clone(), p.element(0).clone()]
        );
        let lift = lift_chain_to_complements(&p, &[p.element(3).clone()], &cfg).unwrap();
        assert_eq!(lift.complements, vec![p.element(0).clone()]);
    }

    #[test]
    fn lift_rejects_bad_chains() {
        let p = diamond();
        let cfg = Config::default();
        let down = [p.element(3).clone(), p.element(0).clone()];
        assert_eq!(
            lift_chain_to_complements(&p, &down, &cfg),
            Err(Error::ChainNotAscending(1))
        );
        let dual = poset_of(&Module::regular(truncated_poly(2, 2).unwrap()));
        let rad = line(vec![0, 1]);
        assert_eq!(
            lift_chain_to_complements(&dual, &[dual.element(0).clone(), rad], &cfg),
            Err(Error::NotASummand(1))
        );
    }
}
