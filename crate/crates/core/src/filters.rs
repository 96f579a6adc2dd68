//! Filters and principal filters.
//!
//! A filter is a nonempty subset `F` that is closed under every product
//! (`x, y ∈ F ⇒ xγy ∈ F`), closed under factors (`xγy ∈ F ⇒ x, y ∈ F`) and
//! upward closed for `≤`. Filters are closed under intersection and the whole
//! carrier is always one, so every seed has a least filter above it; for a
//! single element `a` that is the principal filter `N(a)`.
//!
//! [`principal_filter`] computes `N(a)` as a least fixed point.
//! [`principal_filter_oracle`] computes the same set as the intersection of
//! every filter containing `a` by scanning all subsets; the two share no code.

use rayon::prelude::*;
use serde::Serialize;

use crate::congruence::{class_order, relation_n};
use crate::error::{Error, Result};
use crate::set::ElementSet;
use crate::structure::PoGammaStructure;

/// Largest carrier for which the subset scans ([`all_filters`],
/// [`principal_filter_oracle`]) are allowed.
pub const MAX_SUBSET_SCAN: usize = 20;

/// The first reason a set fails to be a filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum FilterWitness {
    Empty,
    /// `x ∈ F`, `x ≤ y`, `y ∉ F`.
    UpClosure {
        x: usize,
        y: usize,
    },
    /// `x, y ∈ F` but `xγy ∉ F`.
    Product {
        x: usize,
        gamma: usize,
        y: usize,
    },
    /// `xγy ∈ F` but `x ∉ F` or `y ∉ F`.
    Factor {
        x: usize,
        gamma: usize,
        y: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FilterCheck {
    pub is_nonempty: bool,
    pub is_subsemigroup: bool,
    pub is_factor_closed: bool,
    pub is_up_closed: bool,
    pub verdict: bool,
    /// Present iff `verdict` is false. Emptiness is reported first, then
    /// upward closure, then products, then factors.
    pub witness: Option<FilterWitness>,
}

pub fn is_filter(s: &PoGammaStructure, f: &ElementSet) -> Result<FilterCheck> {
    if f.universe() != s.n() {
        return Err(Error::Shape(format!(
            "set lives over {} elements, structure has {}",
            f.universe(),
            s.n()
        )));
    }
    let n = s.n();
    let is_nonempty = !f.is_empty();

    let mut up = None;
    'up: for x in f {
        for y in 0..n {
            if s.leq(x, y) && !f.contains(y) {
                up = Some(FilterWitness::UpClosure { x, y });
                break 'up;
            }
        }
    }

    let mut product = None;
    let mut factor = None;
    for x in 0..n {
        for gamma in 0..s.g() {
            for y in 0..n {
                let xy = s.op(gamma, x, y);
                let both = f.contains(x) && f.contains(y);
                if product.is_none() && both && !f.contains(xy) {
                    product = Some(FilterWitness::Product { x, gamma, y });
                }
                if factor.is_none() && !both && f.contains(xy) {
                    factor = Some(FilterWitness::Factor { x, gamma, y });
                }
            }
        }
    }

    let witness = if !is_nonempty {
        Some(FilterWitness::Empty)
    } else {
        up.or(product).or(factor)
    };
    Ok(FilterCheck {
        is_nonempty,
        is_subsemigroup: product.is_none(),
        is_factor_closed: factor.is_none(),
        is_up_closed: up.is_none(),
        verdict: witness.is_none(),
        witness,
    })
}

/// One of the three generating rules of the filter closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureRule {
    /// Add `xγy` for members `x`, `y`.
    Products,
    /// Add `x` and `y` whenever `xγy` is a member.
    Factors,
    /// Add every `y ≥ x` for a member `x`.
    UpperBounds,
}

/// The smallest filter containing `seed`.
pub fn filter_closure(s: &PoGammaStructure, seed: &ElementSet) -> Result<ElementSet> {
    filter_closure_with(
        s,
        seed,
        [ClosureRule::Products, ClosureRule::Factors, ClosureRule::UpperBounds],
    )
}

/// [`filter_closure`] with an explicit rule application order.
///
/// The least fixed point does not depend on `rules`; only the order in which
/// elements are discovered does.
pub fn filter_closure_with(s: &PoGammaStructure, seed: &ElementSet, rules: [ClosureRule; 3]) -> Result<ElementSet> {
    if seed.universe() != s.n() {
        return Err(Error::Shape(format!(
            "seed lives over {} elements, structure has {}",
            seed.universe(),
            s.n()
        )));
    }
    if seed.is_empty() {
        return Err(Error::EmptySeed);
    }
    let n = s.n();

    // factors[z] lists every (x, y) with xγy = z for some γ
    let mut factors = vec![Vec::new(); n];
    if rules.contains(&ClosureRule::Factors) {
        for gamma in 0..s.g() {
            for x in 0..n {
                for y in 0..n {
                    factors[s.op(gamma, x, y)].push((x, y));
                }
            }
        }
    }

    let mut set = seed.clone();
    let mut work: Vec<usize> = seed.to_vec();
    while let Some(z) = work.pop() {
        for rule in rules {
            match rule {
                ClosureRule::Products => {
                    let members = set.to_vec();
                    for gamma in 0..s.g() {
                        for &m in &members {
                            for p in [s.op(gamma, z, m), s.op(gamma, m, z)] {
                                if set.insert(p) {
                                    work.push(p);
                                }
                            }
                        }
                    }
                }
                ClosureRule::Factors => {
                    for &(x, y) in &factors[z] {
                        for e in [x, y] {
                            if set.insert(e) {
                                work.push(e);
                            }
                        }
                    }
                }
                ClosureRule::UpperBounds => {
                    for y in 0..n {
                        if s.leq(z, y) && set.insert(y) {
                            work.push(y);
                        }
                    }
                }
            }
        }
    }
    Ok(set)
}

/// `N(a)`, the smallest filter containing `a`.
pub fn principal_filter(s: &PoGammaStructure, a: usize) -> Result<ElementSet> {
    s.check_element(a)?;
    filter_closure(s, &ElementSet::singleton(s.n(), a))
}

/// `N(a)` for every element, indexed by element.
pub fn principal_filters(s: &PoGammaStructure) -> Vec<ElementSet> {
    (0..s.n())
        .map(|a| principal_filter(s, a).expect("element in range"))
        .collect()
}

/// Every filter of `s`, ordered by ascending membership bitmask.
pub fn all_filters(s: &PoGammaStructure) -> Result<Vec<ElementSet>> {
    let n = s.n();
    if n > MAX_SUBSET_SCAN {
        return Err(Error::TooLarge {
            op: "all_filters",
            what: "n",
            limit: MAX_SUBSET_SCAN,
            got: n,
        });
    }
    let masks: Vec<u64> = (1u64..1 << n)
        .into_par_iter()
        .filter(|&m| mask_is_filter(s, m))
        .collect();
    Ok(masks.into_iter().map(|m| ElementSet::from_mask(n, m)).collect())
}

/// Intersection of all filters containing `a`, by exhaustive subset scan.
pub fn principal_filter_oracle(s: &PoGammaStructure, a: usize) -> Result<ElementSet> {
    s.check_element(a)?;
    let n = s.n();
    if n > MAX_SUBSET_SCAN {
        return Err(Error::TooLarge {
            op: "principal_filter_oracle",
            what: "n",
            limit: MAX_SUBSET_SCAN,
            got: n,
        });
    }
    let full = (1u64 << n) - 1;
    let bit = 1u64 << a;
    let meet = (1u64..=full)
        .into_par_iter()
        .filter(|&m| m & bit != 0 && mask_is_filter(s, m))
        .reduce(|| full, |x, y| x & y);
    Ok(ElementSet::from_mask(n, meet))
}

fn mask_is_filter(s: &PoGammaStructure, m: u64) -> bool {
    let n = s.n();
    let has = |e: usize| m >> e & 1 == 1;
    if m == 0 {
        return false;
    }
    for x in 0..n {
        for y in 0..n {
            if has(x) && s.leq(x, y) && !has(y) {
                return false;
            }
            for gamma in 0..s.g() {
                let inside = has(s.op(gamma, x, y));
                if inside != (has(x) && has(y)) {
                    return false;
                }
            }
        }
    }
    true
}

/// The four sets compared by the four-set equality claim, for one base element `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FourSets {
    pub base: usize,
    /// `{ b : (b)_N ≻ (a)_N }`.
    pub k: ElementSet,
    /// `K ∩ N(a)`.
    pub a: ElementSet,
    /// Union of the N-classes strictly above `(a)_N`.
    pub b: ElementSet,
    /// `N(a) \ (a)_N`.
    pub c: ElementSet,
    pub k_eq_a: bool,
    pub k_eq_b: bool,
    pub k_eq_c: bool,
}

impl FourSets {
    pub fn all_equal(&self) -> bool {
        self.k_eq_a && self.k_eq_b && self.k_eq_c
    }
}

/// The sets `K(a)`, `A`, `B`, `C` built from `N` and its class order.
///
/// `(b)_N ≻ (a)_N` means `(a)_N ≼ (b)_N` with the two classes distinct.
pub fn four_sets(s: &PoGammaStructure, a: usize) -> Result<FourSets> {
    s.check_element(a)?;
    s.require_semigroup("four_sets")?;
    let n = s.n();
    let nrel = relation_n(s)?;
    let order = class_order(s, &nrel)?;
    let ca = nrel.class(a);
    let above = |b: usize| {
        let cb = nrel.class(b);
        cb != ca && order.le(ca, cb)
    };
    let na = principal_filter(s, a)?;
    let k = ElementSet::from_elements(n, (0..n).filter(|&b| above(b)));
    let a_set = k.intersection(&na);
    let mut b_set = ElementSet::empty(n);
    for (j, members) in nrel.classes().iter().enumerate() {
        if j != ca && order.le(ca, j) {
            b_set = b_set.union(members);
        }
    }
    let class_a = ElementSet::from_elements(n, (0..n).filter(|&e| nrel.class(e) == ca));
    let c = na.difference(&class_a);
    Ok(FourSets {
        base: a,
        k_eq_a: k == a_set,
        k_eq_b: k == b_set,
        k_eq_c: k == c,
        k,
        a: a_set,
        b: b_set,
        c,
    })
}
