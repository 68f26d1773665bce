use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algmod::{is_isomorphic, Module};
use crate::analysis::Analysis;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::summands::independent;

use super::structure::{algebra_structure, is_projective, is_semisimple, Grade};

/// Module classes closed under finite direct sums and direct summands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleClass {
    Semisimple,
    Projective,
    Free,
    Injective,
    FiniteLength,
    Fitting,
    PureInjective,
    SigmaPureInjective,
}

impl ModuleClass {
    pub const ALL: [ModuleClass; 8] = [
        ModuleClass::Semisimple,
        ModuleClass::Projective,
        ModuleClass::Free,
        ModuleClass::Injective,
        ModuleClass::FiniteLength,
        ModuleClass::Fitting,
        ModuleClass::PureInjective,
        ModuleClass::SigmaPureInjective,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ModuleClass::Semisimple => "semisimple",
            ModuleClass::Projective => "projective",
            ModuleClass::Free => "free",
            ModuleClass::Injective => "injective",
            ModuleClass::FiniteLength => "finite_length",
            ModuleClass::Fitting => "fitting",
            ModuleClass::PureInjective => "pure_injective",
            ModuleClass::SigmaPureInjective => "sigma_pure_injective",
        }
    }

    /// Classes that contain every finite module.
    pub fn is_trivial_at_finite_scale(self) -> bool {
        matches!(
            self,
            ModuleClass::FiniteLength
                | ModuleClass::Fitting
                | ModuleClass::PureInjective
                | ModuleClass::SigmaPureInjective
        )
    }
}

impl fmt::Display for ModuleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ModuleClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModuleClass::ALL
            .into_iter()
            .find(|c| c.tag() == s)
            .ok_or_else(|| Error::Input(format!("unknown class `{s}`")))
    }
}

/// Errors unless the class is meaningful over this algebra: `free` needs a
/// local algebra and `injective` a self-injective one.
pub fn check_class_supported(m: &Module, c: ModuleClass, cfg: &Config) -> Result<()> {
    let st = algebra_structure(m.algebra(), cfg)?;
    match c {
        ModuleClass::Free if !st.local => Err(Error::ClassUnsupported(format!(
            "free over the non-local algebra {}",
            m.algebra().name()
        ))),
        ModuleClass::Injective if !st.self_injective => Err(Error::ClassUnsupported(format!(
            "injective over the non-self-injective algebra {}",
            m.algebra().name()
        ))),
        _ => Ok(()),
    }
}

/// Membership without the support check.
pub(crate) fn class_holds(m: &Module, c: ModuleClass, cfg: &Config) -> Result<bool> {
    match c {
        ModuleClass::Semisimple => is_semisimple(m, cfg),
        ModuleClass::Projective | ModuleClass::Injective => is_projective(m, cfg),
        ModuleClass::Free => {
            let a = m.algebra();
            if !m.dim().is_multiple_of(a.dim()) || !is_projective(m, cfg)? {
                return Ok(false);
            }
            let free = Module::free(a.clone(), m.dim() / a.dim());
            Ok(is_isomorphic(m, &free, cfg)?.is_isomorphic())
        }
        _ => Ok(true),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassVerdict {
    pub class: ModuleClass,
    pub holds: bool,
    /// Set for classes containing every finite module.
    pub trivially_true: bool,
}

pub fn class_predicate(m: &Module, c: ModuleClass, cfg: &Config) -> Result<ClassVerdict> {
    check_class_supported(m, c, cfg)?;
    Ok(ClassVerdict {
        class: c,
        holds: class_holds(m, c, cfg)?,
        trivially_true: c.is_trivial_at_finite_scale(),
    })
}

/// `M = A ⊕ B` with `A` maximal among summands in the class and `B` free of
/// nonzero summands in the class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaSplit {
    pub class: ModuleClass,
    pub a: Subspace,
    pub b: Subspace,
    /// Exhaustive check that no nonzero summand of `B` is in the class.
    pub b_class_free: bool,
}

pub fn omega_split_in(an: &Analysis, c: ModuleClass) -> Result<OmegaSplit> {
    check_class_supported(an.module(), c, an.cfg())?;
    let member = |i: usize| an.in_class(c, i);
    let (a, b) = an.split_by(an.poset().top(), &member)?;
    Ok(OmegaSplit {
        class: c,
        a: an.poset().element(a).clone(),
        b: an.poset().element(b).clone(),
        b_class_free: !an.has_nonzero_member(b, &member)?,
    })
}

pub fn omega_split(m: &Module, c: ModuleClass, cfg: &Config) -> Result<OmegaSplit> {
    check_class_supported(m, c, cfg)?;
    omega_split_in(&Analysis::new(m, cfg)?, c)
}

/// Every split `M = A ⊕ B` with `A` maximal in the class and `B` any
/// complement, compared up to isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitUniqueness {
    pub class: ModuleClass,
    pub splits: usize,
    /// Complements of a maximal `A` that still contain a class member.
    pub non_free_complements: usize,
    pub a_iso_classes: usize,
    pub b_iso_classes: usize,
    pub unique: bool,
}

pub fn verify_split_uniqueness_in(an: &Analysis, c: ModuleClass) -> Result<SplitUniqueness> {
    check_class_supported(an.module(), c, an.cfg())?;
    let p = an.poset();
    let top = p.top();
    let member = |i: usize| an.in_class(c, i);
    let members = an.members_within(top, &member)?;
    let nonzero: Vec<usize> = members.iter().copied().filter(|&i| i != 0).collect();
    let maximal: Vec<usize> = if nonzero.is_empty() {
        vec![0]
    } else {
        nonzero
            .iter()
            .copied()
            .filter(|&a| !nonzero.iter().any(|&b| b != a && p.leq(a, b)))
            .collect()
    };
    let mut a_labels = Vec::new();
    let mut b_labels = Vec::new();
    let mut splits = 0;
    let mut non_free = 0;
    for &a in &maximal {
        for b in p.complements_within(a, top) {
            splits += 1;
            if an.has_nonzero_member(b, &member)? {
                non_free += 1;
            }
            a_labels.push(an.label(a));
            b_labels.push(an.label(b));
        }
    }
    a_labels.sort_unstable();
    a_labels.dedup();
    b_labels.sort_unstable();
    b_labels.dedup();
    Ok(SplitUniqueness {
        class: c,
        splits,
        non_free_complements: non_free,
        a_iso_classes: a_labels.len(),
        b_iso_classes: b_labels.len(),
        unique: splits > 0 && non_free == 0 && a_labels.len() == 1 && b_labels.len() == 1,
    })
}

pub fn verify_split_uniqueness(
    m: &Module,
    c: ModuleClass,
    cfg: &Config,
) -> Result<SplitUniqueness> {
    check_class_supported(m, c, cfg)?;
    verify_split_uniqueness_in(&Analysis::new(m, cfg)?, c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GradingLaw {
    /// `ξ(A ⊕ B) = max(ξ(A), ξ(B))`.
    MaxLaw,
    /// `ξ(A ⊕ B) <= ξ(A) + ξ(B)`.
    RankLaw,
    /// `ξ(A ⊕ B) = ξ(A) + ξ(B)`.
    Additive,
}

/// A grading of summands by `ℕ ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GradingFunction {
    pub name: &'static str,
    pub law: GradingLaw,
}

impl GradingFunction {
    pub fn pdim() -> Self {
        GradingFunction {
            name: "pdim",
            law: GradingLaw::MaxLaw,
        }
    }

    fn evaluate(&self, an: &Analysis, i: usize, cutoff: usize) -> Result<Grade> {
        match self.name {
            "pdim" => an.pdim_of(i, cutoff),
            other => Err(Error::Input(format!("unknown grading `{other}`"))),
        }
    }

    fn law_holds(&self, whole: Grade, a: Grade, b: Grade) -> bool {
        let add = |x: Grade, y: Grade| match (x, y) {
            (Grade::Finite(x), Grade::Finite(y)) => Grade::Finite(x + y),
            _ => Grade::BeyondCutoff,
        };
        match self.law {
            GradingLaw::MaxLaw => whole == a.max(b),
            GradingLaw::RankLaw => whole <= add(a, b),
            GradingLaw::Additive => whole == add(a, b),
        }
    }
}

impl FromStr for GradingFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pdim" => Ok(GradingFunction::pdim()),
            other => Err(Error::Input(format!("unknown grading `{other}`"))),
        }
    }
}

/// `M = A_0 ⊕ A_1 ⊕ ... ⊕ A_cutoff ⊕ B` with every nonzero `A_v` of grade
/// exactly `v` and `B` collecting what is beyond the cutoff. Grades start
/// at 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratification {
    pub grading: GradingFunction,
    pub cutoff: usize,
    pub buckets: Vec<Subspace>,
    pub bucket_grades: Vec<Option<Grade>>,
    pub infinite: Subspace,
    /// Every nonzero bucket has grade equal to its index.
    pub grades_exact: bool,
    /// No nonzero summand of the infinite bucket has a finite grade.
    pub infinite_bucket_clean: bool,
    /// Summand pairs on which the grading law was checked.
    pub law_pairs_checked: usize,
}

pub fn stratify_in(an: &Analysis, g: GradingFunction, cutoff: usize) -> Result<Stratification> {
    let p = an.poset();
    let grade = |i: usize| g.evaluate(an, i, cutoff);

    let mut law_pairs = 0;
    for x in 1..p.len() {
        let &a = an.atom_split(x).first().expect("nonzero");
        if a == x {
            continue;
        }
        let c = *p
            .complements_within(a, x)
            .first()
            .expect("atoms have complements");
        law_pairs += 1;
        if !g.law_holds(grade(x)?, grade(a)?, grade(c)?) {
            return Err(Error::CheckFailed(format!(
                "grading {} violates its law on a summand of dimension {}",
                g.name,
                p.element(x).dim()
            )));
        }
    }

    let mut current = p.top();
    let mut buckets = Vec::with_capacity(cutoff + 1);
    let mut bucket_grades = Vec::with_capacity(cutoff + 1);
    let mut exact = true;
    for v in 0..=cutoff {
        let member = |i: usize| Ok(grade(i)? <= Grade::Finite(v));
        let (a, b) = an.split_by(current, &member)?;
        let ga = if a == 0 { None } else { Some(grade(a)?) };
        if let Some(gv) = ga {
            exact &= gv == Grade::Finite(v);
        }
        buckets.push(p.element(a).clone());
        bucket_grades.push(ga);
        current = b;
    }
    let finite = |i: usize| Ok(grade(i)? != Grade::BeyondCutoff);
    Ok(Stratification {
        grading: g,
        cutoff,
        buckets,
        bucket_grades,
        infinite: p.element(current).clone(),
        grades_exact: exact,
        infinite_bucket_clean: !an.has_nonzero_member(current, &finite)?,
        law_pairs_checked: law_pairs,
    })
}

pub fn stratify(
    m: &Module,
    g: GradingFunction,
    cutoff: usize,
    cfg: &Config,
) -> Result<Stratification> {
    stratify_in(&Analysis::new(m, cfg)?, g, cutoff)
}

/// KS length is additive on independent summand pairs whose sum is a
/// summand, and indecomposable decompositions share one cardinality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdditivityReport {
    pub pairs_checked: usize,
    pub violations: usize,
    pub indecomposable_cardinalities: Vec<usize>,
    pub holds: bool,
}

pub fn ks_additivity_in(an: &Analysis) -> Result<AdditivityReport> {
    let p = an.poset();
    let n = p.len();
    let mut checked = 0;
    let mut violations = 0;
    for a in 0..n {
        for b in a..n {
            let (sa, sb) = (p.element(a), p.element(b));
            if !independent(sa, sb) {
                continue;
            }
            let Some(s) = p.index_of(&sa.sum(sb)?) else {
                continue;
            };
            checked += 1;
            if an.ks_of(s) != an.ks_of(a) + an.ks_of(b) {
                violations += 1;
            }
        }
    }
    let mut cards: Vec<usize> = crate::aks::enumerate_in(an)?
        .iter()
        .filter(|d| d.iter().all(|&i| an.is_atom(i)))
        .map(Vec::len)
        .collect();
    cards.sort_unstable();
    cards.dedup();
    Ok(AdditivityReport {
        pairs_checked: checked,
        violations,
        holds: violations == 0 && cards.len() <= 1,
        indecomposable_cardinalities: cards,
    })
}

pub fn ks_additivity_check(m: &Module, cfg: &Config) -> Result<AdditivityReport> {
    ks_additivity_in(&Analysis::new(m, cfg)?)
}
