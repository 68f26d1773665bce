//! Per-module cache shared by the summand-level checks.
//!
//! Everything that is a function of the isomorphism type of a summand
//! (class membership, grades) is memoised per isomorphism class.

use std::collections::BTreeMap;
use std::sync::Mutex;

use crate::algmod::{is_isomorphic, Module};
use crate::config::Config;
use crate::decomp::{
    class_holds, indecomposable_decomposition, pdim, Grade, KsLengthReport, ModuleClass,
};
use crate::endo::{endomorphism_ring, max_orthogonal_family, EndoRing};
use crate::error::{Error, Result};
use crate::exec;
use crate::summands::{
    chain_heights, longest_nonzero_chain, max_independent_family, summand_poset, SummandPoset,
};

pub struct Analysis {
    cfg: Config,
    endo: EndoRing,
    poset: SummandPoset,
    modules: Vec<Module>,
    atoms: Vec<usize>,
    /// A decomposition of each element into atoms.
    atom_split: Vec<Vec<usize>>,
    heights: Vec<usize>,
    labels: Vec<usize>,
    class_count: usize,
    classes: Mutex<BTreeMap<(ModuleClass, usize), bool>>,
    grades: Mutex<BTreeMap<(usize, usize), Grade>>,
}

impl Analysis {
    pub fn new(m: &Module, cfg: &Config) -> Result<Self> {
        let endo = endomorphism_ring(m)?;
        let poset = summand_poset(&endo, cfg)?;
        let n = poset.len();
        let modules = exec::map_range(cfg.exec, 0..n, |i| poset.element_module(i));
        let atoms = poset.atoms();
        let atom_split = split_into_atoms(&poset, &atoms)?;
        let (heights, _) = chain_heights(&poset);
        let (labels, class_count) = iso_labels(&modules, &atom_split, cfg)?;
        Ok(Analysis {
            cfg: *cfg,
            endo,
            poset,
            modules,
            atoms,
            atom_split,
            heights,
            labels,
            class_count,
            classes: Mutex::new(BTreeMap::new()),
            grades: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn cfg(&self) -> &Config {
        &self.cfg
    }

    pub fn module(&self) -> &Module {
        self.poset.module()
    }

    pub fn endo(&self) -> &EndoRing {
        &self.endo
    }

    pub fn poset(&self) -> &SummandPoset {
        &self.poset
    }

    pub fn element_module(&self, i: usize) -> &Module {
        &self.modules[i]
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn is_atom(&self, i: usize) -> bool {
        self.atoms.binary_search(&i).is_ok()
    }

    /// Indecomposable parts of element `i`, found inside the poset.
    pub fn atom_split(&self, i: usize) -> &[usize] {
        &self.atom_split[i]
    }

    /// KS length of element `i` as the size of its atom decomposition.
    pub fn ks_of(&self, i: usize) -> usize {
        self.atom_split[i].len()
    }

    /// Longest chain of nonzero summands ending at element `i`.
    pub fn height(&self, i: usize) -> usize {
        self.heights[i]
    }

    /// Isomorphism class of element `i`.
    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn ks_report(&self) -> Result<KsLengthReport> {
        let p = &self.poset;
        let decomposition = indecomposable_decomposition(self.module(), &self.cfg)?;
        let chain = longest_nonzero_chain(p);
        let family = max_independent_family(p);
        let orth = max_orthogonal_family(&self.endo, &self.cfg)?;
        KsLengthReport::from_parts(
            decomposition,
            chain
                .witness
                .iter()
                .map(|&i| p.element(i).clone())
                .collect(),
            family
                .witness
                .iter()
                .map(|&i| p.element(i).clone())
                .collect(),
            orth.members.iter().map(|i| i.rank()).collect(),
        )
    }

    /// Class membership of element `i`, memoised per isomorphism class.
    pub fn in_class(&self, c: ModuleClass, i: usize) -> Result<bool> {
        let key = (c, self.labels[i]);
        if let Some(&v) = self.classes.lock().unwrap().get(&key) {
            return Ok(v);
        }
        let v = class_holds(&self.modules[i], c, &self.cfg)?;
        self.classes.lock().unwrap().insert(key, v);
        Ok(v)
    }

    /// Projective dimension of element `i`, memoised per isomorphism class.
    pub fn pdim_of(&self, i: usize, cutoff: usize) -> Result<Grade> {
        let key = (self.labels[i], cutoff);
        if let Some(&g) = self.grades.lock().unwrap().get(&key) {
            return Ok(g);
        }
        let g = pdim(&self.modules[i], cutoff, &self.cfg)?;
        self.grades.lock().unwrap().insert(key, g);
        Ok(g)
    }

    /// Elements inside `within` for which `member` holds.
    pub fn members_within(
        &self,
        within: usize,
        member: &dyn Fn(usize) -> Result<bool>,
    ) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for i in self.poset.down_set(within) {
            if member(i)? {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// A split `within = A ⊕ B` with `A` a largest nonzero member (first in
    /// canonical order among ties, `0` if there is none) and `B` the first
    /// complement of `A` inside `within`.
    pub fn split_by(
        &self,
        within: usize,
        member: &dyn Fn(usize) -> Result<bool>,
    ) -> Result<(usize, usize)> {
        let members = self.members_within(within, member)?;
        let a = members
            .iter()
            .copied()
            .filter(|&i| i != 0)
            .max_by(|&x, &y| {
                self.poset
                    .element(x)
                    .dim()
                    .cmp(&self.poset.element(y).dim())
                    .then(y.cmp(&x))
            })
            .unwrap_or(0);
        let b = *self
            .poset
            .complements_within(a, within)
            .first()
            .ok_or_else(|| {
                Error::CheckFailed("summand without a complement in the poset".into())
            })?;
        Ok((a, b))
    }

    /// Whether some nonzero element inside `b` is a member.
    pub fn has_nonzero_member(
        &self,
        b: usize,
        member: &dyn Fn(usize) -> Result<bool>,
    ) -> Result<bool> {
        for i in self.poset.down_set(b) {
            if i != 0 && member(i)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Atom decompositions bottom-up: an element is an atom, or the first atom
/// below it plus the decomposition of that atom's first complement inside it.
fn split_into_atoms(p: &SummandPoset, atoms: &[usize]) -> Result<Vec<Vec<usize>>> {
    let n = p.len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 1..n {
        if atoms.binary_search(&i).is_ok() {
            out[i] = vec![i];
            continue;
        }
        let a = *atoms
            .iter()
            .find(|&&a| p.leq(a, i))
            .ok_or_else(|| Error::CheckFailed("nonzero summand above no atom".into()))?;
        let c = *p
            .complements_within(a, i)
            .first()
            .ok_or_else(|| Error::CheckFailed("atom without a complement".into()))?;
        let mut parts = vec![a];
        parts.extend_from_slice(&out[c]);
        parts.sort_unstable();
        out[i] = parts;
    }
    Ok(out)
}

/// Isomorphism classes of the poset elements, numbered by first occurrence.
///
/// Elements are bucketed by invariants (dimension, KS length, ranks of the
/// action) and only compared by the full test inside a bucket.
fn iso_labels(
    modules: &[Module],
    atom_split: &[Vec<usize>],
    cfg: &Config,
) -> Result<(Vec<usize>, usize)> {
    let mut buckets: BTreeMap<(usize, usize, Vec<usize>), Vec<usize>> = BTreeMap::new();
    let ranks = exec::map(cfg.exec, modules, |m| {
        m.action().iter().map(|a| a.rank()).collect::<Vec<_>>()
    });
    for (i, r) in ranks.into_iter().enumerate() {
        buckets
            .entry((modules[i].dim(), atom_split[i].len(), r))
            .or_default()
            .push(i);
    }
    let groups: Vec<Vec<usize>> = buckets.into_values().collect();
    let classified = exec::map(cfg.exec, &groups, |g| -> Result<Vec<(usize, usize)>> {
        // (element, its representative)
        let mut reps: Vec<usize> = Vec::new();
        let mut out = Vec::with_capacity(g.len());
        for &i in g {
            let mut found = None;
            for (k, &r) in reps.iter().enumerate() {
                if is_isomorphic(&modules[r], &modules[i], cfg)?.is_isomorphic() {
                    found = Some(k);
                    break;
                }
            }
            let k = found.unwrap_or_else(|| {
                reps.push(i);
                reps.len() - 1
            });
            out.push((i, reps[k]));
        }
        Ok(out)
    });
    let mut rep_of = vec![0usize; modules.len()];
    for part in classified {
        for (i, r) in part? {
            rep_of[i] = r;
        }
    }
    let mut number: BTreeMap<usize, usize> = BTreeMap::new();
    let mut labels = Vec::with_capacity(modules.len());
    for &r in &rep_of {
        let next = number.len();
        labels.push(*number.entry(r).or_insert(next));
    }
    Ok((labels, number.len()))
}
