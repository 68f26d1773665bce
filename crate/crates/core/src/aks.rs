//! Exhaustive enumeration of direct sum decompositions and the counts of
//! decompositions, summands and indecomposables up to isomorphism.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::algmod::{is_isomorphic, Module};
use crate::analysis::Analysis;
use crate::config::Config;
use crate::decomp::Decomposition;
use crate::error::{budget, Error, Result};
use crate::exec;
use crate::linalg::Subspace;
use crate::summands::independent;

/// Every decomposition of the module into nonzero poset elements, as sorted
/// index lists, in canonical order (part dimensions, then indices).
pub fn enumerate_in(an: &Analysis) -> Result<Vec<Vec<usize>>> {
    let p = an.poset();
    let n = an.module().dim();
    if n == 0 {
        return Ok(vec![Vec::new()]);
    }
    let limit = an.cfg().decomposition_limit;
    let found = AtomicU64::new(0);

    struct Walk<'a> {
        an: &'a Analysis,
        n: usize,
        limit: u64,
        found: &'a AtomicU64,
    }

    impl Walk<'_> {
        fn run(
            &self,
            chosen: &mut Vec<usize>,
            sum: &Subspace,
            cands: &[usize],
            out: &mut Vec<Vec<usize>>,
        ) -> bool {
            if sum.dim() == self.n {
                out.push(chosen.clone());
                return self.found.fetch_add(1, Ordering::Relaxed) < self.limit;
            }
            let room = self.n - sum.dim();
            let p = self.an.poset();
            for (pos, &c) in cands.iter().enumerate() {
                let next_sum = sum.sum(p.element(c)).expect("same ambient");
                let room_after = room - p.element(c).dim();
                let next: Vec<usize> = cands[pos + 1..]
                    .iter()
                    .copied()
                    .filter(|&o| {
                        p.element(o).dim() <= room_after && independent(&next_sum, p.element(o))
                    })
                    .collect();
                if room_after > 0 && next.is_empty() {
                    continue;
                }
                chosen.push(c);
                let ok = self.run(chosen, &next_sum, &next, out);
                chosen.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
    }

    let walk = Walk {
        an,
        n,
        limit,
        found: &found,
    };
    let firsts: Vec<usize> = (1..p.len()).collect();
    let branches = exec::map(an.cfg().exec, &firsts, |&c| {
        let mut out = Vec::new();
        let rest: Vec<usize> = (c + 1..p.len())
            .filter(|&o| {
                p.element(c).dim() + p.element(o).dim() <= n
                    && independent(p.element(c), p.element(o))
            })
            .collect();
        let ok = walk.run(&mut vec![c], p.element(c), &rest, &mut out);
        (ok, out)
    });
    let total = found.load(Ordering::Relaxed);
    if branches.iter().any(|(ok, _)| !ok) || total > limit {
        return Err(budget("decomposition enumeration", total as u128, limit));
    }
    let mut all: Vec<Vec<usize>> = branches.into_iter().flat_map(|(_, o)| o).collect();
    all.sort_by_key(|d| {
        (
            d.iter().map(|&i| p.element(i).dim()).collect::<Vec<_>>(),
            d.clone(),
        )
    });
    Ok(all)
}

pub fn enumerate_decompositions(m: &Module, cfg: &Config) -> Result<Vec<Decomposition>> {
    let an = Analysis::new(m, cfg)?;
    Ok(enumerate_in(&an)?
        .into_iter()
        .map(|d| Decomposition::new(d.iter().map(|&i| an.poset().element(i).clone()).collect()))
        .collect())
}

/// Whether the parts of two decompositions of `m` can be matched
/// bijectively by isomorphism.
pub fn decomposition_isomorphic(
    m: &Module,
    d1: &Decomposition,
    d2: &Decomposition,
    cfg: &Config,
) -> Result<bool> {
    if d1.len() != d2.len() {
        return Ok(false);
    }
    let left: Vec<Module> = d1
        .parts
        .iter()
        .map(|p| m.restrict(p))
        .collect::<Result<_>>()?;
    let right: Vec<Module> = d2
        .parts
        .iter()
        .map(|p| m.restrict(p))
        .collect::<Result<_>>()?;
    // Isomorphism is an equivalence, so greedy matching finds a perfect
    // matching whenever one exists.
    let mut used = vec![false; right.len()];
    for l in &left {
        let mut hit = None;
        for (j, r) in right.iter().enumerate() {
            if !used[j] && is_isomorphic(l, r, cfg)?.is_isomorphic() {
                hit = Some(j);
                break;
            }
        }
        match hit {
            Some(j) => used[j] = true,
            None => return Ok(false),
        }
    }
    Ok(true)
}

/// One class of decompositions under decomposition-isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionClass {
    /// Sorted isomorphism labels of the parts.
    pub part_classes: Vec<usize>,
    pub part_dims: Vec<usize>,
    /// Literal decompositions in the class.
    pub multiplicity: usize,
    pub indecomposable: bool,
    pub representative: Decomposition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AksReport {
    pub aks1: usize,
    pub aks2: usize,
    pub aks3: usize,
    pub aks4: usize,
    pub literal_decompositions: usize,
    pub ks_length: usize,
    /// `sum_{i=1..KSℓ} aks3^i`.
    pub decomposition_bound: u128,
    pub bound_holds: bool,
    /// Pairs `N' ⊊ N` of summands with `N' ≅ N`.
    pub proper_isomorphic_summands: usize,
    /// Partial sums of every decomposition form a strictly ascending chain
    /// of summands, no longer than the number of summand classes.
    pub partial_sum_chains_ok: bool,
    /// Every decomposition refines to the canonical indecomposable one up to
    /// isomorphism.
    pub refinements_agree: bool,
    pub classes: Vec<DecompositionClass>,
}

impl AksReport {
    pub fn consistent(&self) -> bool {
        self.aks2 <= self.aks1
            && self.aks4 <= self.aks3
            && self.aks2 == 1
            && self.bound_holds
            && self.proper_isomorphic_summands == 0
            && self.partial_sum_chains_ok
            && self.refinements_agree
    }
}

fn sorted_labels(an: &Analysis, parts: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut l: Vec<usize> = parts.into_iter().map(|i| an.label(i)).collect();
    l.sort_unstable();
    l
}

pub fn aks_report_in(an: &Analysis) -> Result<AksReport> {
    let p = an.poset();
    let decomps = enumerate_in(an)?;
    let mut classes: BTreeMap<Vec<usize>, DecompositionClass> = BTreeMap::new();
    for d in &decomps {
        let key = sorted_labels(an, d.iter().copied());
        classes
            .entry(key.clone())
            .or_insert_with(|| DecompositionClass {
                part_classes: key,
                part_dims: d.iter().map(|&i| p.element(i).dim()).collect(),
                multiplicity: 0,
                indecomposable: d.iter().all(|&i| an.is_atom(i)),
                representative: Decomposition::new(
                    d.iter().map(|&i| p.element(i).clone()).collect(),
                ),
            })
            .multiplicity += 1;
    }
    let aks1 = classes.len();
    let aks2 = classes.values().filter(|c| c.indecomposable).count();
    let mut all_labels = an.labels().to_vec();
    all_labels.sort_unstable();
    all_labels.dedup();
    let aks3 = all_labels.len();
    let mut atom_labels: Vec<usize> = an.atoms().iter().map(|&i| an.label(i)).collect();
    atom_labels.sort_unstable();
    atom_labels.dedup();
    let aks4 = atom_labels.len();

    let top = p.top();
    let ks = an.ks_of(top);
    let bound: u128 = (1..=ks as u32)
        .map(|i| (aks3 as u128).saturating_pow(i))
        .sum();

    let mut lemma = 0;
    for j in 0..p.len() {
        for i in p.down_set(j) {
            if i != j && an.label(i) == an.label(j) {
                lemma += 1;
            }
        }
    }

    let mut chains_ok = true;
    for d in &decomps {
        let mut acc = p.element(0).clone();
        let mut prev = 0usize;
        for &part in d {
            acc = acc.sum(p.element(part))?;
            match p.index_of(&acc) {
                Some(idx) if acc.dim() > p.element(prev).dim() => prev = idx,
                _ => chains_ok = false,
            }
        }
        chains_ok &= d.len() <= aks3;
    }

    let canonical = sorted_labels(an, an.atom_split(top).iter().copied());
    let refinements_agree = decomps.iter().all(|d| {
        sorted_labels(an, d.iter().flat_map(|&i| an.atom_split(i).iter().copied())) == canonical
    });

    Ok(AksReport {
        aks1,
        aks2,
        aks3,
        aks4,
        literal_decompositions: decomps.len(),
        ks_length: ks,
        decomposition_bound: bound,
        bound_holds: aks1 as u128 <= bound || ks == 0,
        proper_isomorphic_summands: lemma,
        partial_sum_chains_ok: chains_ok,
        refinements_agree,
        classes: classes.into_values().collect(),
    })
}

pub fn aks_report(m: &Module, cfg: &Config) -> Result<AksReport> {
    aks_report_in(&Analysis::new(m, cfg)?)
}

/// Bell numbers `B_0..=B_n` from the Bell triangle.
pub fn bell_numbers(n: usize) -> Vec<u128> {
    let mut out = vec![1u128];
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        out.push(next[0]);
        row = next;
    }
    out
}

pub fn bell_number(n: usize) -> u128 {
    bell_numbers(n)[n]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BellReport {
    /// Number of parts of the fixed indecomposable decomposition.
    pub parts: usize,
    /// Parts pairwise non-isomorphic and every summand a sum of parts.
    pub precondition_met: bool,
    /// Decompositions whose parts are all sums of parts.
    pub refining_decompositions: usize,
    pub bell: u128,
    /// `None` when the precondition fails and the count is not asserted.
    pub holds: Option<bool>,
}

pub fn bell_refinement_check_in(an: &Analysis) -> Result<BellReport> {
    let p = an.poset();
    let top = p.top();
    let parts = an.atom_split(top).to_vec();
    let m = parts.len();
    let labels = sorted_labels(an, parts.iter().copied());
    let distinct = labels.windows(2).all(|w| w[0] != w[1]);
    let sum_of_parts = |x: usize| {
        let inside: usize = parts
            .iter()
            .filter(|&&q| p.leq(q, x))
            .map(|&q| p.element(q).dim())
            .sum();
        inside == p.element(x).dim()
    };
    let precondition = distinct && (0..p.len()).all(sum_of_parts);
    let refining = enumerate_in(an)?
        .iter()
        .filter(|d| d.iter().all(|&x| sum_of_parts(x)))
        .count();
    let bell = bell_number(m);
    Ok(BellReport {
        parts: m,
        precondition_met: precondition,
        refining_decompositions: refining,
        bell,
        holds: precondition.then_some(refining as u128 == bell),
    })
}

pub fn bell_refinement_check(m: &Module, cfg: &Config) -> Result<BellReport> {
    bell_refinement_check_in(&Analysis::new(m, cfg)?)
}

/// Fails with [`Error::CheckFailed`] when an AKS report breaks one of its
/// consistency assertions.
pub fn require_consistent(r: &AksReport) -> Result<()> {
    if r.consistent() {
        Ok(())
    } else {
        Err(Error::CheckFailed(format!(
            "inconsistent AKS report: ({}, {}, {}, {})",
            r.aks1, r.aks2, r.aks3, r.aks4
        )))
    }
}
