//! Finite ordered Γ-groupoids and Γ-semigroups.
//!
//! A [`PoGammaStructure`] is a carrier `M = {0, .., n-1}`, a label set
//! `Γ = {0, .., g-1}`, one `n × n` operation table per label (entry
//! `(γ, a, b)` is `aγb`) and a partial order `≤` on `M`. Γ is a plain
//! label set: nothing about it is ordered.
//!
//! Construction only checks shapes and ranges. The order axioms, two-sided
//! compatibility and (for [`Kind::Semigroup`]) mixed associativity
//! `(aγb)μc = aγ(bμc)` are checked by [`validate`], which reports every
//! violation with its witnessing tuple.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::set::ElementSet;

/// Whether mixed associativity is part of the axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Groupoid,
    Semigroup,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Groupoid => "groupoid",
            Kind::Semigroup => "semigroup",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PoGammaStructure {
    n: usize,
    g: usize,
    kind: Kind,
    /// Flattened tables, index `(γ * n + a) * n + b`.
    op: Vec<usize>,
    /// Flattened order, index `a * n + b` holds `a ≤ b`.
    leq: Vec<bool>,
}

impl PoGammaStructure {
    /// Builds a structure from flat row-major tables and order.
    ///
    /// `op` has length `g * n * n` (table `γ` occupies the `γ`-th block) and
    /// `leq` has length `n * n`. Only shapes and ranges are checked here.
    pub fn from_flat(n: usize, g: usize, op: Vec<usize>, leq: Vec<bool>, kind: Kind) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("carrier must have at least one element".into()));
        }
        if g == 0 {
            return Err(Error::Shape("label set must have at least one label".into()));
        }
        if op.len() != g * n * n {
            return Err(Error::Shape(format!(
                "expected {} table entries for n={n} g={g}, got {}",
                g * n * n,
                op.len()
            )));
        }
        if leq.len() != n * n {
            return Err(Error::Shape(format!(
                "expected {} order entries for n={n}, got {}",
                n * n,
                leq.len()
            )));
        }
        if let Some((idx, &v)) = op.iter().enumerate().find(|(_, &v)| v >= n) {
            let (gamma, a, b) = (idx / (n * n), idx / n % n, idx % n);
            return Err(Error::Shape(format!(
                "table {gamma} entry ({a},{b}) = {v} is not an element of 0..{n}"
            )));
        }
        Ok(PoGammaStructure { n, g, kind, op, leq })
    }

    /// Builds a structure from nested tables `tables[γ][a][b]` and order rows `leq[a][b]`.
    pub fn from_tables(tables: &[Vec<Vec<usize>>], leq: &[Vec<bool>], kind: Kind) -> Result<Self> {
        let n = leq.len();
        let g = tables.len();
        let mut op = Vec::with_capacity(g * n * n);
        for (gamma, t) in tables.iter().enumerate() {
            if t.len() != n {
                return Err(Error::Shape(format!(
                    "table {gamma} has {} rows, expected {n}",
                    t.len()
                )));
            }
            for (a, row) in t.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::Shape(format!(
                        "table {gamma} row {a} has {} entries, expected {n}",
                        row.len()
                    )));
                }
                op.extend_from_slice(row);
            }
        }
        let mut flat_leq = Vec::with_capacity(n * n);
        for (a, row) in leq.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!(
                    "order row {a} has {} entries, expected {n}",
                    row.len()
                )));
            }
            flat_leq.extend_from_slice(row);
        }
        Self::from_flat(n, g, op, flat_leq, kind)
    }

    /// Builds a structure by evaluating `op(γ, a, b)` and `leq(a, b)` on every index.
    pub fn from_fn(
        n: usize,
        g: usize,
        kind: Kind,
        op: impl Fn(usize, usize, usize) -> usize,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self> {
        let mut table = Vec::with_capacity(g * n * n);
        for gamma in 0..g {
            for a in 0..n {
                for b in 0..n {
                    table.push(op(gamma, a, b));
                }
            }
        }
        let mut order = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                order.push(leq(a, b));
            }
        }
        Self::from_flat(n, g, table, order, kind)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn g(&self) -> usize {
        self.g
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn is_semigroup(&self) -> bool {
        self.kind == Kind::Semigroup
    }

    /// `aγb`.
    #[inline]
    pub fn op(&self, gamma: usize, a: usize, b: usize) -> usize {
        self.op[(gamma * self.n + a) * self.n + b]
    }

    /// `a ≤ b`.
    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn table(&self, gamma: usize) -> &[usize] {
        let nn = self.n * self.n;
        &self.op[gamma * nn..(gamma + 1) * nn]
    }

    pub fn flat_op(&self) -> &[usize] {
        &self.op
    }

    pub fn flat_leq(&self) -> &[bool] {
        &self.leq
    }

    pub fn with_kind(mut self, kind: Kind) -> Self {
        self.kind = kind;
        self
    }

    pub(crate) fn check_element(&self, a: usize) -> Result<()> {
        if a < self.n {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { element: a, n: self.n })
        }
    }

    pub(crate) fn require_semigroup(&self, op: &'static str) -> Result<()> {
        if self.is_semigroup() {
            Ok(())
        } else {
            Err(Error::RequiresSemigroup { op })
        }
    }

    /// Relabels elements by `perm_m` (old → new) and labels by `perm_g` (old → new).
    pub fn relabel(&self, perm_m: &[usize], perm_g: &[usize]) -> Result<Self> {
        let n = self.n;
        if !is_permutation(perm_m, n) || !is_permutation(perm_g, self.g) {
            return Err(Error::Precondition("relabeling maps must be permutations".into()));
        }
        let mut op = vec![0; self.op.len()];
        for gamma in 0..self.g {
            for a in 0..n {
                for b in 0..n {
                    op[(perm_g[gamma] * n + perm_m[a]) * n + perm_m[b]] = perm_m[self.op(gamma, a, b)];
                }
            }
        }
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[perm_m[a] * n + perm_m[b]] = self.leq(a, b);
            }
        }
        Ok(PoGammaStructure {
            n,
            g: self.g,
            kind: self.kind,
            op,
            leq,
        })
    }

    /// Same tables with every order pair reversed.
    pub fn dual_order(&self) -> Self {
        let n = self.n;
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[b * n + a] = self.leq(a, b);
            }
        }
        PoGammaStructure { leq, ..self.clone() }
    }
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

impl fmt::Debug for PoGammaStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PoGammaStructure(n={}, g={}, {}", self.n, self.g, self.kind)?;
        for gamma in 0..self.g {
            write!(f, ", op{gamma}={:?}", self.table(gamma))?;
        }
        let leq: Vec<u8> = self.leq.iter().map(|&b| b as u8).collect();
        write!(f, ", leq={leq:?})")
    }
}

/// One axiom failure together with the tuple that witnesses it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    Reflexivity {
        a: usize,
    },
    Antisymmetry {
        a: usize,
        b: usize,
    },
    Transitivity {
        a: usize,
        b: usize,
        c: usize,
    },
    /// `a ≤ b` but not `aγc ≤ bγc`.
    RightCompatibility {
        a: usize,
        b: usize,
        c: usize,
        gamma: usize,
    },
    /// `a ≤ b` but not `cγa ≤ cγb`.
    LeftCompatibility {
        a: usize,
        b: usize,
        c: usize,
        gamma: usize,
    },
    /// `(aγb)μc ≠ aγ(bμc)`.
    Associativity {
        a: usize,
        gamma: usize,
        b: usize,
        mu: usize,
        c: usize,
    },
}

impl Violation {
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::Reflexivity { .. } => "reflexivity",
            Violation::Antisymmetry { .. } => "antisymmetry",
            Violation::Transitivity { .. } => "transitivity",
            Violation::RightCompatibility { .. } => "right-compatibility",
            Violation::LeftCompatibility { .. } => "left-compatibility",
            Violation::Associativity { .. } => "associativity",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.axiom();
        match *self {
            Violation::Reflexivity { a } => write!(f, "{name} at ({a},{a})"),
            Violation::Antisymmetry { a, b } => write!(f, "{name} at ({a},{b})"),
            Violation::Transitivity { a, b, c } => write!(f, "{name} at ({a},{b},{c})"),
            Violation::RightCompatibility { a, b, c, gamma } | Violation::LeftCompatibility { a, b, c, gamma } => {
                write!(f, "{name} at (a={a},b={b},c={c},γ={gamma})")
            }
            Violation::Associativity { a, gamma, b, mu, c } => {
                write!(f, "{name} at (a={a},γ={gamma},b={b},μ={mu},c={c})")
            }
        }
    }
}

/// Every axiom violation found by [`validate`], in scan order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.violations.as_slice() {
            [] => f.write_str("no violations"),
            [v] => write!(f, "{v}"),
            [v, rest @ ..] => write!(f, "{v} (and {} more)", rest.len()),
        }
    }
}

/// Checks the order axioms, compatibility and, for semigroups, mixed associativity.
pub fn validate(s: &PoGammaStructure) -> ValidationReport {
    let mut violations = Vec::new();
    scan(s, |v| {
        violations.push(v);
        true
    });
    ValidationReport { violations }
}

/// Like [`validate`] but stops at the first violation.
pub fn is_valid(s: &PoGammaStructure) -> bool {
    let mut ok = true;
    scan(s, |_| {
        ok = false;
        false
    });
    ok
}

/// Returns the structure back if it validates, otherwise [`Error::Invalid`].
pub fn validated(s: PoGammaStructure) -> Result<PoGammaStructure> {
    let report = validate(&s);
    if report.is_valid() {
        Ok(s)
    } else {
        Err(Error::Invalid(report))
    }
}

// Calls `sink` for each violation in a fixed order; `sink` returns false to stop.
fn scan(s: &PoGammaStructure, mut sink: impl FnMut(Violation) -> bool) {
    let n = s.n;
    macro_rules! emit {
        ($v:expr) => {
            if !sink($v) {
                return;
            }
        };
    }
    for a in 0..n {
        if !s.leq(a, a) {
            emit!(Violation::Reflexivity { a });
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if s.leq(a, b) && s.leq(b, a) {
                emit!(Violation::Antisymmetry { a, b });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !s.leq(a, b) {
                continue;
            }
            for c in 0..n {
                if s.leq(b, c) && !s.leq(a, c) {
                    emit!(Violation::Transitivity { a, b, c });
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a == b || !s.leq(a, b) {
                continue;
            }
            for c in 0..n {
                for gamma in 0..s.g {
                    if !s.leq(s.op(gamma, a, c), s.op(gamma, b, c)) {
                        emit!(Violation::RightCompatibility { a, b, c, gamma });
                    }
                    if !s.leq(s.op(gamma, c, a), s.op(gamma, c, b)) {
                        emit!(Violation::LeftCompatibility { a, b, c, gamma });
                    }
                }
            }
        }
    }
    if s.kind == Kind::Semigroup {
        for a in 0..n {
            for gamma in 0..s.g {
                for b in 0..n {
                    let ab = s.op(gamma, a, b);
                    for mu in 0..s.g {
                        for c in 0..n {
                            if s.op(mu, ab, c) != s.op(gamma, a, s.op(mu, b, c)) {
                                emit!(Violation::Associativity { a, gamma, b, mu, c });
                            }
                        }
                    }
                }
            }
        }
    }
}

/// The up-set `[a) = { t : a ≤ t }`.
pub fn up_set(s: &PoGammaStructure, a: usize) -> Result<ElementSet> {
    s.check_element(a)?;
    Ok(ElementSet::from_elements(s.n, (0..s.n).filter(|&t| s.leq(a, t))))
}

/// Pairs `(a, b)` with `a < b` and nothing strictly between, in lexicographic order.
pub fn cover_relation(s: &PoGammaStructure) -> Vec<(usize, usize)> {
    let n = s.n;
    let lt = |a: usize, b: usize| a != b && s.leq(a, b);
    let mut covers = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                covers.push((a, b));
            }
        }
    }
    covers
}

/// Elementary laws of a structure, each decided by exhaustive scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructuralProfile {
    /// `aγa = a` for all `a`, `γ`.
    pub is_band: bool,
    /// `aγb = bγa` for all `a`, `b`, `γ`.
    pub is_commutative: bool,
    pub is_semilattice: bool,
    /// `a ≤ b ⇒ aγb = a` for every `γ`.
    pub order_forward: bool,
    /// `a ≤ b ⇔ aγb = a` for every `γ`.
    pub order_iff: bool,
}

pub fn structural_profile(s: &PoGammaStructure) -> StructuralProfile {
    let n = s.n;
    let labels = 0..s.g;
    let is_band = (0..n).all(|a| labels.clone().all(|gm| s.op(gm, a, a) == a));
    let is_commutative = (0..n).all(|a| (0..n).all(|b| labels.clone().all(|gm| s.op(gm, a, b) == s.op(gm, b, a))));
    let absorbs = |a: usize, b: usize| labels.clone().all(|gm| s.op(gm, a, b) == a);
    let order_forward = (0..n).all(|a| (0..n).all(|b| !s.leq(a, b) || absorbs(a, b)));
    let order_iff = order_forward && (0..n).all(|a| (0..n).all(|b| !absorbs(a, b) || s.leq(a, b)));
    StructuralProfile {
        is_band,
        is_commutative,
        is_semilattice: is_band && is_commutative,
        order_forward,
        order_iff,
    }
}

/// Small named structures used throughout the tests and the guide.
pub mod samples {
    use super::*;

    /// The chain `0 < 1 < .. < n-1` with every label acting as `min`.
    pub fn chain_min(n: usize, g: usize) -> PoGammaStructure {
        PoGammaStructure::from_fn(n, g, Kind::Semigroup, |_, a, b| a.min(b), |a, b| a <= b).unwrap()
    }

    /// The chain `n-1 < .. < 0` with every label acting as `max`.
    pub fn chain_max_reversed(n: usize, g: usize) -> PoGammaStructure {
        PoGammaStructure::from_fn(n, g, Kind::Semigroup, |_, a, b| a.max(b), |a, b| a >= b).unwrap()
    }

    /// `aγb = a` for every label, discrete order.
    pub fn left_zero(n: usize, g: usize) -> PoGammaStructure {
        PoGammaStructure::from_fn(n, g, Kind::Semigroup, |_, a, _| a, |a, b| a == b).unwrap()
    }

    /// `aγb = b` for every label, discrete order.
    pub fn right_zero(n: usize, g: usize) -> PoGammaStructure {
        PoGammaStructure::from_fn(n, g, Kind::Semigroup, |_, _, b| b, |a, b| a == b).unwrap()
    }

    /// The one-element structure with `g` labels.
    pub fn trivial(g: usize) -> PoGammaStructure {
        PoGammaStructure::from_fn(1, g, Kind::Semigroup, |_, _, _| 0, |_, _| true).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;

    #[test]
    fn meet_semilattice_is_valid() {
        assert!(validate(&chain_min(2, 1)).is_valid());
        assert!(validate(&trivial(1)).is_valid());
        assert!(validate(&trivial(3)).is_valid());
    }

    #[test]
    fn non_associative_table_reports_first_tuple() {
        let s = PoGammaStructure::from_fn(2, 1, Kind::Semigroup, |_, _, b| 1 - b, |a, b| a == b).unwrap();
        let report = validate(&s);
        assert_eq!(
            report.first(),
            Some(&Violation::Associativity {
                a: 0,
                gamma: 0,
                b: 0,
                mu: 0,
                c: 0
            })
        );
        // the same table is an acceptable groupoid
        assert!(validate(&s.with_kind(Kind::Groupoid)).is_valid());
    }

    #[test]
    fn shape_errors_are_not_axiom_violations() {
        assert!(matches!(
            PoGammaStructure::from_flat(2, 1, vec![0, 0, 0], vec![true; 4], Kind::Semigroup),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            PoGammaStructure::from_flat(2, 1, vec![0, 0, 0, 2], vec![true; 4], Kind::Semigroup),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            PoGammaStructure::from_flat(1, 0, vec![], vec![true], Kind::Semigroup),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn order_axioms() {
        let mut leq = vec![true, true, true, true];
        let s = PoGammaStructure::from_flat(2, 1, vec![0, 0, 0, 0], leq.clone(), Kind::Semigroup).unwrap();
        assert_eq!(validate(&s).violations, vec![Violation::Antisymmetry { a: 0, b: 1 }]);
        leq = vec![false, false, false, true];
        let s = PoGammaStructure::from_flat(2, 1, vec![0, 0, 0, 0], leq, Kind::Semigroup).unwrap();
        assert_eq!(validate(&s).first(), Some(&Violation::Reflexivity { a: 0 }));
        assert_eq!(validate(&s).first().unwrap().to_string(), "reflexivity at (0,0)");
    }

    #[test]
    fn incompatible_order() {
        // 0 ≤ 1 but right-zero-then-swap table breaks compatibility
        let s = PoGammaStructure::from_fn(2, 1, Kind::Groupoid, |_, a, _| 1 - a, |a, b| a <= b).unwrap();
        assert!(matches!(
            validate(&s).first(),
            Some(Violation::RightCompatibility { a: 0, b: 1, .. })
        ));
    }

    #[test]
    fn up_sets() {
        let chain = chain_min(3, 1);
        assert_eq!(up_set(&chain, 1).unwrap().to_vec(), vec![1, 2]);
        assert_eq!(up_set(&chain, 0).unwrap().to_vec(), vec![0, 1, 2]);
        assert_eq!(up_set(&left_zero(3, 1), 0).unwrap().to_vec(), vec![0]);
        assert!(matches!(
            up_set(&chain, 3),
            Err(Error::ElementOutOfRange { element: 3, n: 3 })
        ));
    }

    #[test]
    fn profiles() {
        let p = structural_profile(&chain_min(3, 2));
        assert!(p.is_band && p.is_commutative && p.is_semilattice && p.order_forward && p.order_iff);
        let p = structural_profile(&left_zero(2, 1));
        assert!(p.is_band && !p.is_commutative && !p.is_semilattice);
        let p = structural_profile(&trivial(2));
        assert!(p.is_band && p.is_commutative && p.is_semilattice && p.order_forward && p.order_iff);
    }

    #[test]
    fn relabel_round_trip() {
        let s = crate::enumerate::gamma_from_semigroup(
            &[vec![0, 0, 0], vec![0, 1, 1], vec![0, 1, 2]],
            &[1, 2],
            &[
                vec![true, true, true],
                vec![false, true, true],
                vec![false, false, true],
            ],
        )
        .unwrap();
        let r = s.relabel(&[2, 0, 1], &[1, 0]).unwrap();
        assert!(validate(&r).is_valid());
        let back = r.relabel(&[1, 2, 0], &[1, 0]).unwrap();
        assert_eq!(back, s);
        assert!(s.relabel(&[0, 0, 1], &[0, 1]).is_err());
    }

    #[test]
    fn hasse_covers_of_a_chain() {
        assert_eq!(cover_relation(&chain_min(3, 1)), vec![(0, 1), (1, 2)]);
        assert!(cover_relation(&left_zero(3, 1)).is_empty());
    }
}
