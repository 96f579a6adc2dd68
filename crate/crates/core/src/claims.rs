//! Executable catalog of the statements under test.
//!
//! Every claim is a decidable predicate over one finite structure,
//! quantified over its elements and (for C10) its semilattice congruences.
//! [`check_claim`] evaluates one claim with full quantifier scans and
//! returns the first failing instance in scan order; [`search_counterexamples`]
//! runs a claim over a whole corpus.
//!
//! Only the [`ClaimKind::Proved`] claims are expected to hold everywhere.
//! The doubted and refuted-proof claims are searched, never asserted.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::congruence::{
    class_order, enumerate_semilattice_congruences, quotient, quotient_upset_t, relation_n,
    smallest_semilattice_congruence, Partition,
};
use crate::enumerate::{enumerate_corpus, enumerate_structures, random_structure, EnumConfig};
use crate::error::{Error, Result};
use crate::filters::{four_sets, is_filter, principal_filters};
use crate::structure::{structural_profile, up_set, PoGammaStructure};

/// Environment variable capping search parallelism; `0` or unset means one thread per core.
pub const THREADS_ENV: &str = "GAMMA_LAB_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClaimId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
    C12,
    C13,
}

/// How much is known about a claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimKind {
    /// Has a proof; any counterexample is a bug in this crate.
    Proved,
    /// Stated without a valid proof and not known to be true.
    Doubted,
    /// A published proof is wrong; the statement itself is unsettled.
    RefutedProof,
    /// A probe of an underspecified statement under a chosen reading.
    Exploratory,
}

impl ClaimId {
    pub const ALL: [ClaimId; 13] = [
        ClaimId::C1,
        ClaimId::C2,
        ClaimId::C3,
        ClaimId::C4,
        ClaimId::C5,
        ClaimId::C6,
        ClaimId::C7,
        ClaimId::C8,
        ClaimId::C9,
        ClaimId::C10,
        ClaimId::C11,
        ClaimId::C12,
        ClaimId::C13,
    ];

    pub fn kind(self) -> ClaimKind {
        use ClaimId::*;
        match self {
            C1 | C2 | C5 | C6 | C7 | C8 | C9 | C10 => ClaimKind::Proved,
            C3 | C4 => ClaimKind::Doubted,
            C11 | C12 => ClaimKind::RefutedProof,
            C13 => ClaimKind::Exploratory,
        }
    }

    pub fn statement(self) -> &'static str {
        use ClaimId::*;
        match self {
            C1 => "(a)N ≼ (b)N ⇒ N(b) ⊆ N(a)",
            C2 => "N(b) = N(a) ⇒ (a)N ≼ (b)N",
            C3 => "N(b) ⊆ N(a) ⇒ (a)N ≼ (b)N",
            C4 => "K(a) = A = B = C for every a",
            C5 => "M is a band ⇒ [a) is a subsemigroup for every a",
            C6 => "N(a) = [a) for every a ⇒ N is the equality relation",
            C7 => "N is the equality relation ⇒ M is a semilattice",
            C8 => "M is a commutative band and a ≤ b ⇔ aγb = a ∀γ ⇒ N(a) = [a) for every a",
            C9 => "a ≤ b ⇒ aγb = a ∀γ implies M is a band",
            C10 => "σ a semilattice congruence ⇒ {(y)σ : (y)σ ⪰ (x)σ} is a filter of M/σ for every x",
            C11 => "N is the equality relation ⇒ N(a) = [a) for every a",
            C12 => "M is a semilattice ⇒ N is the equality relation",
            C13 => "N equals the smallest complete semilattice congruence",
        }
    }

    /// Claims that use `N`, `≼` on `N`-classes or quotients need associativity.
    pub fn needs_semigroup(self) -> bool {
        !matches!(self, ClaimId::C5 | ClaimId::C9)
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownClaim(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
}

/// The failing instance: elements and labels in the order the claim quantifies them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub elements: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<Partition>,
}

impl Witness {
    fn elements(elements: impl Into<Vec<usize>>) -> Self {
        Witness {
            elements: elements.into(),
            labels: Vec::new(),
            partition: None,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "elements {:?}", self.elements)?;
        if !self.labels.is_empty() {
            write!(f, ", labels {:?}", self.labels)?;
        }
        if let Some(p) = &self.partition {
            write!(f, ", partition {:?}", p.class_of())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimVerdict {
    pub claim: ClaimId,
    pub status: Status,
    /// No instance satisfied the hypothesis.
    pub vacuous: bool,
    pub witness: Option<Witness>,
}

impl ClaimVerdict {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }
}

struct Outcome {
    instances: usize,
    witness: Option<Witness>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            instances: 0,
            witness: None,
        }
    }

    // records one instance whose hypothesis holds; keeps the first failure
    fn instance(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.instances += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }
}

/// Evaluates claim `id` on `s`.
pub fn check_claim(id: ClaimId, s: &PoGammaStructure) -> Result<ClaimVerdict> {
    if id.needs_semigroup() {
        s.require_semigroup("claims over N, ≼ and quotients")?;
    }
    let n = s.n();
    let mut out = Outcome::new();
    use ClaimId::*;
    match id {
        C1 | C2 | C3 => {
            let nrel = relation_n(s)?;
            let order = class_order(s, &nrel)?;
            let pf = principal_filters(s);
            for a in 0..n {
                for b in 0..n {
                    let below = order.le(nrel.class(a), nrel.class(b));
                    let w = || Witness::elements([a, b]);
                    match id {
                        C1 if below => out.instance(pf[b].is_subset(&pf[a]), w),
                        C2 if pf[a] == pf[b] => out.instance(below, w),
                        C3 if pf[b].is_subset(&pf[a]) => out.instance(below, w),
                        _ => {}
                    }
                }
            }
        }
        C4 => {
            for a in 0..n {
                let sets = four_sets(s, a)?;
                out.instance(sets.all_equal(), || Witness::elements([a]));
            }
        }
        C5 => {
            if structural_profile(s).is_band {
                for a in 0..n {
                    let check = is_filter(s, &up_set(s, a)?)?;
                    out.instance(check.is_subsemigroup, || Witness::elements([a]));
                }
            }
        }
        C6 => {
            let pf = principal_filters(s);
            if (0..n).all(|a| pf[a] == up_set(s, a).expect("in range")) {
                let nrel = relation_n(s)?;
                out.instance(nrel.is_discrete(), || first_merged_pair(&nrel));
            }
        }
        C7 => {
            let nrel = relation_n(s)?;
            if nrel.is_discrete() {
                out.instance(structural_profile(s).is_semilattice, || semilattice_failure(s));
            }
        }
        C8 => {
            let p = structural_profile(s);
            if p.is_semilattice && p.order_iff {
                for (a, f) in principal_filters(s).iter().enumerate() {
                    out.instance(*f == up_set(s, a)?, || Witness::elements([a]));
                }
            }
        }
        C9 => {
            let p = structural_profile(s);
            if p.order_forward {
                out.instance(p.is_band, || semilattice_failure(s));
            }
        }
        C10 => {
            for p in enumerate_semilattice_congruences(s)? {
                let q = quotient(s, &p)?;
                for x in 0..n {
                    let t = quotient_upset_t(s, &p, x)?;
                    let ok = is_filter(q.as_structure(), &t)?.verdict;
                    out.instance(ok, || Witness {
                        partition: Some(p.clone()),
                        ..Witness::elements([x])
                    });
                }
            }
        }
        C11 => {
            let nrel = relation_n(s)?;
            if nrel.is_discrete() {
                for (a, f) in principal_filters(s).iter().enumerate() {
                    out.instance(*f == up_set(s, a)?, || Witness::elements([a]));
                }
            }
        }
        C12 => {
            if structural_profile(s).is_semilattice {
                let nrel = relation_n(s)?;
                out.instance(nrel.is_discrete(), || first_merged_pair(&nrel));
            }
        }
        C13 => {
            let nrel = relation_n(s)?;
            let smallest = smallest_semilattice_congruence(s, true)?;
            out.instance(nrel == smallest, || {
                let (a, b) = (0..n)
                    .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                    .find(|&(a, b)| nrel.same(a, b) != smallest.same(a, b))
                    .expect("distinct partitions differ on some pair");
                Witness {
                    partition: Some(smallest.clone()),
                    ..Witness::elements([a, b])
                }
            });
        }
    }
    Ok(ClaimVerdict {
        claim: id,
        status: if out.witness.is_none() {
            Status::Holds
        } else {
            Status::Fails
        },
        vacuous: out.instances == 0,
        witness: out.witness,
    })
}

fn first_merged_pair(p: &Partition) -> Witness {
    let n = p.len();
    let pair = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .find(|&(a, b)| p.same(a, b))
        .expect("non-discrete partition merges a pair");
    Witness::elements([pair.0, pair.1])
}

// first failure of aγa = a, then of aγb = bγa
fn semilattice_failure(s: &PoGammaStructure) -> Witness {
    let n = s.n();
    for a in 0..n {
        for gamma in 0..s.g() {
            if s.op(gamma, a, a) != a {
                return Witness {
                    labels: vec![gamma],
                    ..Witness::elements([a])
                };
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for gamma in 0..s.g() {
                if s.op(gamma, a, b) != s.op(gamma, b, a) {
                    return Witness {
                        labels: vec![gamma],
                        ..Witness::elements([a, b])
                    };
                }
            }
        }
    }
    Witness::elements([])
}

/// Where the structures of a search come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Corpus {
    /// Every structure of the shape; with `cumulative`, every smaller `n` and `g` too.
    Exhaustive { cfg: EnumConfig, cumulative: bool },
    /// `count` random structures with seeds `seed, seed + 1, ..`.
    Random { cfg: EnumConfig, count: usize, seed: u64 },
}

impl Corpus {
    pub fn structures(&self) -> Result<Vec<PoGammaStructure>> {
        match *self {
            Corpus::Exhaustive { cfg, cumulative: true } => enumerate_corpus(cfg.n, cfg.g, cfg),
            Corpus::Exhaustive { cfg, cumulative: false } => enumerate_structures(&cfg),
            Corpus::Random { cfg, count, seed } => with_pool(|| {
                (0..count as u64)
                    .into_par_iter()
                    .map(|i| random_structure(&cfg, seed + i))
                    .collect()
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Position in the corpus stream.
    pub index: usize,
    pub structure: PoGammaStructure,
    pub witness: Witness,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub claim: ClaimId,
    pub claim_kind: ClaimKind,
    pub statement: &'static str,
    pub corpus: Option<Corpus>,
    pub structures_checked: usize,
    /// Structures on which the hypothesis never applied.
    pub vacuous: usize,
    /// Structures on which the claim fails (all of them, not only those listed).
    pub failures: usize,
    /// The first `limit` failures in stream order.
    pub counterexamples: Vec<Counterexample>,
    pub limit: usize,
    pub truncated: bool,
    /// Wall-clock time; left out of JSON so reports stay byte-stable.
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Runs `f` on a pool sized by [`THREADS_ENV`].
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0);
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Checks `id` on every structure of `corpus`, keeping the first `limit` failures.
pub fn search_counterexamples(id: ClaimId, corpus: &Corpus, limit: usize) -> Result<SearchReport> {
    let start = Instant::now();
    let structures = corpus.structures()?;
    let mut report = search_structures(id, &structures, limit)?;
    report.corpus = Some(*corpus);
    report.elapsed = start.elapsed();
    Ok(report)
}

/// [`search_counterexamples`] over an explicit list of structures.
pub fn search_structures(id: ClaimId, structures: &[PoGammaStructure], limit: usize) -> Result<SearchReport> {
    let start = Instant::now();
    let verdicts: Vec<ClaimVerdict> =
        with_pool(|| structures.par_iter().map(|s| check_claim(id, s)).collect::<Result<_>>())?;
    let vacuous = verdicts.iter().filter(|v| v.vacuous).count();
    let failing: Vec<(usize, &ClaimVerdict)> = verdicts.iter().enumerate().filter(|(_, v)| !v.holds()).collect();
    let counterexamples = failing
        .iter()
        .take(limit)
        .map(|&(index, v)| Counterexample {
            index,
            structure: structures[index].clone(),
            witness: v.witness.clone().expect("failing verdict has a witness"),
        })
        .collect();
    Ok(SearchReport {
        claim: id,
        claim_kind: id.kind(),
        statement: id.statement(),
        corpus: None,
        structures_checked: structures.len(),
        vacuous,
        failures: failing.len(),
        counterexamples,
        limit,
        truncated: failing.len() > limit,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::samples::*;
    use crate::structure::Kind;

    #[test]
    fn parse_ids() {
        assert_eq!("c4".parse::<ClaimId>().unwrap(), ClaimId::C4);
        assert_eq!(" C13 ".parse::<ClaimId>().unwrap(), ClaimId::C13);
        assert!(matches!("C14".parse::<ClaimId>(), Err(Error::UnknownClaim(_))));
        assert_eq!(ClaimId::ALL.iter().filter(|c| c.kind() == ClaimKind::Proved).count(), 8);
    }

    #[test]
    fn verdict_examples() {
        let chain = chain_min(3, 2);
        let v = check_claim(ClaimId::C5, &chain).unwrap();
        assert!(v.holds() && !v.vacuous);
        let v = check_claim(ClaimId::C7, &left_zero(2, 1)).unwrap();
        assert!(v.holds() && v.vacuous);
        let v = check_claim(ClaimId::C4, &chain).unwrap();
        assert!(v.holds() && !v.vacuous);
    }

    #[test]
    fn every_claim_holds_on_the_three_chain() {
        for id in ClaimId::ALL {
            assert!(check_claim(id, &chain_min(3, 2)).unwrap().holds(), "{id}");
        }
    }

    #[test]
    fn groupoids_only_for_order_claims() {
        let g = left_zero(2, 1).with_kind(Kind::Groupoid);
        assert!(check_claim(ClaimId::C9, &g).is_ok());
        assert!(check_claim(ClaimId::C5, &g).is_ok());
        assert!(matches!(
            check_claim(ClaimId::C1, &g),
            Err(Error::RequiresSemigroup { .. })
        ));
    }

    #[test]
    fn left_zero_is_not_a_semilattice_but_n_merges() {
        // C12's hypothesis fails, C6's hypothesis fails ([0) = {0} ≠ N(0) = M)
        let s = left_zero(2, 2);
        assert!(check_claim(ClaimId::C12, &s).unwrap().vacuous);
        assert!(check_claim(ClaimId::C6, &s).unwrap().vacuous);
    }

    #[test]
    fn small_search_is_deterministic() {
        let corpus = Corpus::Exhaustive {
            cfg: EnumConfig::new(2, 2),
            cumulative: true,
        };
        let a = search_counterexamples(ClaimId::C1, &corpus, 5).unwrap();
        let b = search_counterexamples(ClaimId::C1, &corpus, 5).unwrap();
        assert_eq!(a.failures, 0);
        assert_eq!(a.structures_checked, b.structures_checked);
        assert!(a.structures_checked > 0);
    }
}
