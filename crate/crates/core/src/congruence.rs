//! Semilattice congruences, the relation `N`, class orders and quotients.
//!
//! An equivalence `σ` on `M` (a [`Partition`]) is a congruence when
//! `a σ b` implies `aγc σ bγc` and `cγa σ cγb`. It is a *semilattice*
//! congruence when moreover `aγa σ a` and `aγb σ bγa`. On the classes of a
//! semilattice congruence the class order is
//!
//! ```text
//! (a)σ ≼ (b)σ  ⇔  (aγb)σ = (a)σ for every γ
//! ```
//!
//! and `M/σ` with `≼` is again an ordered Γ-semigroup.
//!
//! "Complete" is not a standard notion for Γ-semigroups; here it means
//! `a ≤ b ⇒ (a, aγb) ∈ σ` for every `γ`. Nothing except the exploratory
//! claim C13 depends on it.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filters::principal_filters;
use crate::set::ElementSet;
use crate::structure::{validate, PoGammaStructure};

/// Largest carrier for which partitions are enumerated (Bell(10) = 115975).
pub const MAX_PARTITION_SCAN: usize = 10;

/// An equivalence on `0..n` by class assignment.
///
/// Class ids are `0..k` and numbered in order of each class's least element,
/// so equal equivalences have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition {
    class_of: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Canonicalizes an arbitrary labelling: elements with equal labels share a class.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let mut class_of = Vec::with_capacity(labels.len());
        let mut reps: Vec<usize> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            match reps.iter().position(|&r| labels[r] == *l) {
                Some(c) => class_of.push(c),
                None => {
                    class_of.push(reps.len());
                    reps.push(i);
                }
            }
        }
        Partition {
            k: reps.len(),
            class_of,
        }
    }

    pub fn discrete(n: usize) -> Self {
        Partition {
            class_of: (0..n).collect(),
            k: n,
        }
    }

    pub fn single(n: usize) -> Self {
        Partition {
            class_of: vec![0; n],
            k: n.min(1),
        }
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    /// Number of classes.
    pub fn class_count(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn class(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn is_discrete(&self) -> bool {
        self.k == self.class_of.len()
    }

    /// Members of each class, indexed by class id.
    pub fn classes(&self) -> Vec<ElementSet> {
        let n = self.len();
        let mut out = vec![ElementSet::empty(n); self.k];
        for (e, &c) in self.class_of.iter().enumerate() {
            out[c].insert(e);
        }
        out
    }

    /// Least element of each class.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.k];
        for (e, &c) in self.class_of.iter().enumerate() {
            reps[c] = reps[c].min(e);
        }
        reps
    }

    /// Intersection of the two equivalence relations.
    pub fn meet(&self, other: &Partition) -> Partition {
        let pairs: Vec<(usize, usize)> = self
            .class_of
            .iter()
            .copied()
            .zip(other.class_of.iter().copied())
            .collect();
        Partition::from_labels(&pairs)
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Partition) -> bool {
        let n = self.len();
        (0..n).all(|a| (a + 1..n).all(|b| !self.same(a, b) || other.same(a, b)))
    }
}

/// The first law a partition breaks, in scan order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum CongruenceWitness {
    /// `a σ b` but `aγc` and `bγc` are in different classes.
    RightCompatibility { a: usize, b: usize, c: usize, gamma: usize },
    /// `a σ b` but `cγa` and `cγb` are in different classes.
    LeftCompatibility { a: usize, b: usize, c: usize, gamma: usize },
    /// `aγa` not in the class of `a`.
    Idempotence { a: usize, gamma: usize },
    /// `aγb` and `bγa` in different classes.
    Commutativity { a: usize, b: usize, gamma: usize },
    /// `a ≤ b` but `aγb` not in the class of `a`.
    Completeness { a: usize, b: usize, gamma: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceCheck {
    pub is_equivalence: bool,
    pub is_congruence: bool,
    pub is_semilattice: bool,
    pub is_complete: bool,
    pub witness: Option<CongruenceWitness>,
}

fn check_shape(s: &PoGammaStructure, p: &Partition) -> Result<()> {
    if p.len() == s.n() {
        Ok(())
    } else {
        Err(Error::PartitionShape { got: p.len(), n: s.n() })
    }
}

/// Decides the congruence, semilattice and completeness laws for `p`.
///
/// Each flag implies the previous one; the witness belongs to the first
/// family that fails.
pub fn check_congruence(s: &PoGammaStructure, p: &Partition) -> Result<CongruenceCheck> {
    check_shape(s, p)?;
    let n = s.n();
    let labels = 0..s.g();

    let compat = (|| {
        for a in 0..n {
            for b in a + 1..n {
                if !p.same(a, b) {
                    continue;
                }
                for c in 0..n {
                    for gamma in labels.clone() {
                        if !p.same(s.op(gamma, a, c), s.op(gamma, b, c)) {
                            return Some(CongruenceWitness::RightCompatibility { a, b, c, gamma });
                        }
                        if !p.same(s.op(gamma, c, a), s.op(gamma, c, b)) {
                            return Some(CongruenceWitness::LeftCompatibility { a, b, c, gamma });
                        }
                    }
                }
            }
        }
        None
    })();

    let semilattice = (|| {
        for a in 0..n {
            for gamma in labels.clone() {
                if !p.same(s.op(gamma, a, a), a) {
                    return Some(CongruenceWitness::Idempotence { a, gamma });
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                for gamma in labels.clone() {
                    if !p.same(s.op(gamma, a, b), s.op(gamma, b, a)) {
                        return Some(CongruenceWitness::Commutativity { a, b, gamma });
                    }
                }
            }
        }
        None
    })();

    let complete = (|| {
        for a in 0..n {
            for b in 0..n {
                if !s.leq(a, b) {
                    continue;
                }
                for gamma in labels.clone() {
                    if !p.same(a, s.op(gamma, a, b)) {
                        return Some(CongruenceWitness::Completeness { a, b, gamma });
                    }
                }
            }
        }
        None
    })();

    let is_congruence = compat.is_none();
    let is_semilattice = is_congruence && semilattice.is_none();
    let is_complete = is_semilattice && complete.is_none();
    Ok(CongruenceCheck {
        is_equivalence: true,
        is_congruence,
        is_semilattice,
        is_complete,
        witness: compat.or(semilattice).or(complete),
    })
}

fn require_semilattice(s: &PoGammaStructure, p: &Partition) -> Result<()> {
    let check = check_congruence(s, p)?;
    if check.is_semilattice {
        Ok(())
    } else {
        Err(Error::NotSemilatticeCongruence(format!("{:?}", check.witness)))
    }
}

/// `a N b ⇔ N(a) = N(b)`.
///
/// The result is re-checked as a semilattice congruence before it is
/// returned; failure there is reported as [`Error::Internal`].
pub fn relation_n(s: &PoGammaStructure) -> Result<Partition> {
    s.require_semigroup("relation_n")?;
    let filters = principal_filters(s);
    let p = Partition::from_labels(&filters);
    let check = check_congruence(s, &p)?;
    if !check.is_semilattice {
        return Err(Error::Internal(format!(
            "N is not a semilattice congruence on {s:?}: {:?}",
            check.witness
        )));
    }
    Ok(p)
}

/// A `k × k` boolean relation on class ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassOrder {
    k: usize,
    rel: Vec<bool>,
}

impl ClassOrder {
    pub fn size(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.rel[i * self.k + j]
    }

    pub fn rows(&self) -> Vec<Vec<bool>> {
        self.rel.chunks(self.k.max(1)).map(<[bool]>::to_vec).collect()
    }

    pub fn is_partial_order(&self) -> bool {
        let k = self.k;
        (0..k).all(|i| self.le(i, i))
            && (0..k).all(|i| (0..k).all(|j| i == j || !(self.le(i, j) && self.le(j, i))))
            && (0..k).all(|i| (0..k).all(|j| !self.le(i, j) || (0..k).all(|l| !self.le(j, l) || self.le(i, l))))
    }
}

/// `≼` on the classes of a semilattice congruence.
pub fn class_order(s: &PoGammaStructure, p: &Partition) -> Result<ClassOrder> {
    require_semilattice(s, p)?;
    let k = p.class_count();
    let reps = p.representatives();
    let absorbs = |a: usize, b: usize| (0..s.g()).all(|gamma| p.same(s.op(gamma, a, b), a));
    let mut rel = vec![false; k * k];
    for i in 0..k {
        for j in 0..k {
            rel[i * k + j] = absorbs(reps[i], reps[j]);
        }
    }
    if cfg!(debug_assertions) {
        for a in 0..s.n() {
            for b in 0..s.n() {
                debug_assert_eq!(
                    absorbs(a, b),
                    rel[p.class(a) * k + p.class(b)],
                    "≼ depends on representatives"
                );
            }
        }
    }
    Ok(ClassOrder { k, rel })
}

/// `M/σ` with the class order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientStructure {
    pub k: usize,
    pub g: usize,
    /// Flattened `g × k × k` tables on class ids.
    pub qop: Vec<usize>,
    pub class_leq: ClassOrder,
    #[serde(skip)]
    structure: PoGammaStructure,
}

impl QuotientStructure {
    pub fn op(&self, gamma: usize, i: usize, j: usize) -> usize {
        self.qop[(gamma * self.k + i) * self.k + j]
    }

    /// The quotient as an ordered structure in its own right.
    pub fn as_structure(&self) -> &PoGammaStructure {
        &self.structure
    }
}

pub fn quotient(s: &PoGammaStructure, p: &Partition) -> Result<QuotientStructure> {
    let class_leq = class_order(s, p)?;
    let (k, g, n) = (p.class_count(), s.g(), s.n());
    let mut qop = vec![usize::MAX; g * k * k];
    for gamma in 0..g {
        for a in 0..n {
            for b in 0..n {
                let cell = &mut qop[(gamma * k + p.class(a)) * k + p.class(b)];
                let value = p.class(s.op(gamma, a, b));
                if *cell == usize::MAX {
                    *cell = value;
                } else if *cell != value {
                    return Err(Error::Internal(format!(
                        "quotient product not well defined at γ={gamma}, representatives ({a},{b})"
                    )));
                }
            }
        }
    }
    let structure = PoGammaStructure::from_flat(k, g, qop.clone(), class_leq.rel.clone(), s.kind())?;
    let report = validate(&structure);
    if !report.is_valid() {
        return Err(if s.is_semigroup() {
            Error::Internal(format!("quotient fails its axioms: {report}"))
        } else {
            Error::Invalid(report)
        });
    }
    Ok(QuotientStructure {
        k,
        g,
        qop,
        class_leq,
        structure,
    })
}

/// `T = { (y)σ : (y)σ ⪰ (x)σ }`, as a set of class ids.
pub fn quotient_upset_t(s: &PoGammaStructure, p: &Partition, x: usize) -> Result<ElementSet> {
    s.check_element(x)?;
    let order = class_order(s, p)?;
    let cx = p.class(x);
    Ok(ElementSet::from_elements(
        order.k,
        (0..order.k).filter(|&j| order.le(cx, j)),
    ))
}

/// Every partition of `0..n` as a class assignment, in lexicographic order.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn grow(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Partition>) {
        if prefix.len() == n {
            out.push(Partition {
                class_of: prefix.clone(),
                k: max,
            });
            return;
        }
        for c in 0..=max {
            prefix.push(c);
            grow(prefix, max.max(c + 1), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::with_capacity(n), 0, n, &mut out);
    out
}

/// Every semilattice congruence of `s`, in lexicographic order of class assignments.
pub fn enumerate_semilattice_congruences(s: &PoGammaStructure) -> Result<Vec<Partition>> {
    if s.n() > MAX_PARTITION_SCAN {
        return Err(Error::TooLarge {
            op: "enumerate_semilattice_congruences",
            what: "n",
            limit: MAX_PARTITION_SCAN,
            got: s.n(),
        });
    }
    Ok(all_partitions(s.n())
        .into_par_iter()
        .filter(|p| check_congruence(s, p).map(|c| c.is_semilattice).unwrap_or(false))
        .collect())
}

/// Intersection of all semilattice congruences (only complete ones when `complete`).
pub fn smallest_semilattice_congruence(s: &PoGammaStructure, complete: bool) -> Result<Partition> {
    let candidates = enumerate_semilattice_congruences(s)?;
    let meet = candidates
        .iter()
        .filter(|p| !complete || check_congruence(s, p).map(|c| c.is_complete).unwrap_or(false))
        .fold(Partition::single(s.n()), |acc, p| acc.meet(p));
    let check = check_congruence(s, &meet)?;
    if !check.is_semilattice || (complete && !check.is_complete) {
        return Err(Error::Internal(format!(
            "intersection of semilattice congruences fails {:?}",
            check.witness
        )));
    }
    Ok(meet)
}
