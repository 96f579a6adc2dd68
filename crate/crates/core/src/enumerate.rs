//! Structure corpora.
//!
//! * [`enumerate_structures`]: every ordered Γ-semigroup of a given shape,
//!   found by backtracking over table cells with incremental pruning of
//!   mixed associativity, paired with every compatible partial order.
//! * [`canonical_key`]: an isomorphism invariant under simultaneous
//!   relabeling of the carrier and of Γ, by scanning all `n!·g!` relabelings.
//! * [`random_structure`]: seeded generation for shapes too large to enumerate.
//! * [`gamma_from_semigroup`]: `aγb := a·γ·b` for a semigroup `S` and `Γ ⊆ S`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::structure::{validate, Kind, PoGammaStructure};

pub const MAX_EXHAUSTIVE_N: usize = 4;
pub const MAX_EXHAUSTIVE_G: usize = 2;
pub const MAX_CANONICAL_N: usize = 8;
pub const MAX_CANONICAL_G: usize = 3;
/// Carriers above this size get random orders instead of a full order list.
pub const MAX_ORDER_LIST_N: usize = 5;
/// Search nodes a single [`random_structure`] call may visit, over all restarts.
pub const RANDOM_NODE_BUDGET: usize = 2_000_000;
/// Search nodes per randomized restart.
pub const RANDOM_RESTART_NODES: usize = 5_000;
/// Random partial orders tried before falling back to the discrete order.
pub const RANDOM_ORDER_ATTEMPTS: usize = 64;

const UNSET: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderMode {
    AllCompatible,
    DiscreteOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct EnumConfig {
    pub n: usize,
    pub g: usize,
    pub order_mode: OrderMode,
    pub iso_dedup: bool,
    pub kind: Kind,
}

impl EnumConfig {
    /// Semigroups of the given shape, every compatible order, up to isomorphism.
    pub fn new(n: usize, g: usize) -> Self {
        EnumConfig {
            n,
            g,
            order_mode: OrderMode::AllCompatible,
            iso_dedup: true,
            kind: Kind::Semigroup,
        }
    }

    pub fn order_mode(mut self, mode: OrderMode) -> Self {
        self.order_mode = mode;
        self
    }

    pub fn iso_dedup(mut self, on: bool) -> Self {
        self.iso_dedup = on;
        self
    }

    pub fn kind(mut self, kind: Kind) -> Self {
        self.kind = kind;
        self
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 || self.g == 0 {
            return Err(Error::Precondition(format!(
                "need n >= 1 and g >= 1, got n={} g={}",
                self.n, self.g
            )));
        }
        Ok(())
    }
}

/// Every labeled partial order on `0..n`, discrete first.
pub fn all_partial_orders(n: usize) -> Result<Vec<Vec<bool>>> {
    if n > MAX_ORDER_LIST_N {
        return Err(Error::TooLarge {
            op: "all_partial_orders",
            what: "n",
            limit: MAX_ORDER_LIST_N,
            got: n,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let mut leq = vec![false; n * n];
        for a in 0..n {
            leq[a * n + a] = true;
        }
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                leq[a * n + b] = true;
            }
        }
        if is_partial_order(n, &leq) {
            out.push(leq);
        }
    }
    Ok(out)
}

fn is_partial_order(n: usize, leq: &[bool]) -> bool {
    for a in 0..n {
        for b in 0..n {
            if a != b && leq[a * n + b] && leq[b * n + a] {
                return false;
            }
            if leq[a * n + b] && (0..n).any(|c| leq[b * n + c] && !leq[a * n + c]) {
                return false;
            }
        }
    }
    true
}

fn is_compatible(n: usize, g: usize, op: &[usize], leq: &[bool]) -> bool {
    let at = |gamma: usize, a: usize, b: usize| op[(gamma * n + a) * n + b];
    for a in 0..n {
        for b in 0..n {
            if a == b || !leq[a * n + b] {
                continue;
            }
            for c in 0..n {
                for gamma in 0..g {
                    if !leq[at(gamma, a, c) * n + at(gamma, b, c)] || !leq[at(gamma, c, a) * n + at(gamma, c, b)] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Backtracking over the `g·n·n` table cells.
struct TableSearch {
    n: usize,
    g: usize,
    associative: bool,
    op: Vec<usize>,
    nodes: usize,
}

impl TableSearch {
    fn new(n: usize, g: usize, kind: Kind) -> Self {
        TableSearch {
            n,
            g,
            associative: kind == Kind::Semigroup,
            op: vec![UNSET; g * n * n],
            nodes: 0,
        }
    }

    #[inline]
    fn get(&self, gamma: usize, a: usize, b: usize) -> usize {
        self.op[(gamma * self.n + a) * self.n + b]
    }

    // false only when (aγb)μc and aγ(bμc) are both defined and differ
    #[inline]
    fn holds(&self, a: usize, gamma: usize, b: usize, mu: usize, c: usize) -> bool {
        let ab = self.get(gamma, a, b);
        if ab == UNSET {
            return true;
        }
        let lhs = self.get(mu, ab, c);
        if lhs == UNSET {
            return true;
        }
        let bc = self.get(mu, b, c);
        if bc == UNSET {
            return true;
        }
        let rhs = self.get(gamma, a, bc);
        rhs == UNSET || lhs == rhs
    }

    /// Checks every associativity instance that mentions cell `t`.
    fn consistent_at(&self, t: usize) -> bool {
        if !self.associative {
            return true;
        }
        let (n, g) = (self.n, self.g);
        let (g0, a0, b0) = (t / (n * n), t / n % n, t % n);
        for mu in 0..g {
            for c in 0..n {
                // (a0 γ0 b0) μ c
                if !self.holds(a0, g0, b0, mu, c) {
                    return false;
                }
            }
        }
        for gamma in 0..g {
            for a in 0..n {
                // a γ (a0 γ0 b0)
                if !self.holds(a, gamma, a0, g0, b0) {
                    return false;
                }
                for b in 0..n {
                    // (aγb) γ0 b0 where aγb = a0
                    if self.get(gamma, a, b) == a0 && !self.holds(a, gamma, b, g0, b0) {
                        return false;
                    }
                    // a0 γ0 (aμb) where aμb = b0
                    if self.get(gamma, a, b) == b0 && !self.holds(a0, g0, a, gamma, b) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn run<F>(
        &mut self,
        t: usize,
        order: &mut dyn FnMut(usize) -> Vec<usize>,
        budget: usize,
        visit: &mut F,
    ) -> ControlFlow<Option<Error>>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if t == self.op.len() {
            return match visit(&self.op) {
                ControlFlow::Continue(()) => ControlFlow::Continue(()),
                ControlFlow::Break(()) => ControlFlow::Break(None),
            };
        }
        for v in order(t) {
            self.nodes += 1;
            if self.nodes > budget {
                return ControlFlow::Break(Some(Error::BudgetExhausted(budget)));
            }
            self.op[t] = v;
            if self.consistent_at(t) {
                self.run(t + 1, order, budget, visit)?;
            }
        }
        self.op[t] = UNSET;
        ControlFlow::Continue(())
    }
}

/// Every table tuple of the given shape in lexicographic order of the flat tables.
pub fn all_tables(n: usize, g: usize, kind: Kind) -> Vec<Vec<usize>> {
    let mut search = TableSearch::new(n, g, kind);
    let mut out = Vec::new();
    let _ = search.run(0, &mut |_| (0..n).collect(), usize::MAX, &mut |op| {
        out.push(op.to_vec());
        ControlFlow::Continue(())
    });
    out
}

/// Every structure of the shape in `cfg`.
///
/// With `iso_dedup` one structure per isomorphism class is returned (the
/// relabeling that realizes the canonical key), ordered by canonical key.
/// Without it every labeled structure is returned, ordered by canonical key
/// and then by the structure's own encoding.
pub fn enumerate_structures(cfg: &EnumConfig) -> Result<Vec<PoGammaStructure>> {
    cfg.check()?;
    if cfg.n > MAX_EXHAUSTIVE_N {
        return Err(Error::TooLarge {
            op: "enumerate_structures",
            what: "n",
            limit: MAX_EXHAUSTIVE_N,
            got: cfg.n,
        });
    }
    if cfg.g > MAX_EXHAUSTIVE_G {
        return Err(Error::TooLarge {
            op: "enumerate_structures",
            what: "g",
            limit: MAX_EXHAUSTIVE_G,
            got: cfg.g,
        });
    }
    let (n, g) = (cfg.n, cfg.g);
    let orders = match cfg.order_mode {
        OrderMode::AllCompatible => all_partial_orders(n)?,
        OrderMode::DiscreteOnly => vec![discrete_order(n)],
    };
    let mut keyed: BTreeMap<(CanonicalKey, Vec<u8>), PoGammaStructure> = BTreeMap::new();
    for op in all_tables(n, g, cfg.kind) {
        for leq in &orders {
            if !is_compatible(n, g, &op, leq) {
                continue;
            }
            let s = PoGammaStructure::from_flat(n, g, op.clone(), leq.clone(), cfg.kind)?;
            let (key, canon) = canonical_form(&s)?;
            if cfg.iso_dedup {
                keyed.entry((key, Vec::new())).or_insert(canon);
            } else {
                let raw = encode(&s);
                keyed.insert((key, raw), s);
            }
        }
    }
    Ok(keyed.into_values().collect())
}

/// Union of [`enumerate_structures`] over `1..=max_n` and `1..=max_g`, by size then label count.
pub fn enumerate_corpus(max_n: usize, max_g: usize, template: EnumConfig) -> Result<Vec<PoGammaStructure>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for g in 1..=max_g {
            out.extend(enumerate_structures(&EnumConfig { n, g, ..template })?);
        }
    }
    Ok(out)
}

fn discrete_order(n: usize) -> Vec<bool> {
    (0..n * n).map(|i| i / n == i % n).collect()
}

/// Orders structures by their minimal encoding over all relabelings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

fn encode(s: &PoGammaStructure) -> Vec<u8> {
    let mut out = Vec::with_capacity(3 + s.flat_op().len() + s.flat_leq().len());
    out.push(s.kind() as u8);
    out.push(s.n() as u8);
    out.push(s.g() as u8);
    out.extend(s.flat_op().iter().map(|&v| v as u8));
    out.extend(s.flat_leq().iter().map(|&b| b as u8));
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

pub fn canonical_key(s: &PoGammaStructure) -> Result<CanonicalKey> {
    canonical_form(s).map(|(k, _)| k)
}

/// The canonical key together with a relabeled copy of `s` that realizes it.
pub fn canonical_form(s: &PoGammaStructure) -> Result<(CanonicalKey, PoGammaStructure)> {
    let (n, g) = (s.n(), s.g());
    if n > MAX_CANONICAL_N {
        return Err(Error::TooLarge {
            op: "canonical_key",
            what: "n",
            limit: MAX_CANONICAL_N,
            got: n,
        });
    }
    if g > MAX_CANONICAL_G {
        return Err(Error::TooLarge {
            op: "canonical_key",
            what: "g",
            limit: MAX_CANONICAL_G,
            got: g,
        });
    }
    let perms_m = permutations(n);
    let perms_g = permutations(g);
    let mut best: Option<(Vec<u8>, usize, usize)> = None;
    let mut buf = Vec::with_capacity(3 + g * n * n + n * n);
    for (pi, pm) in perms_m.iter().enumerate() {
        let inv_m = invert(pm);
        for (gi, pg) in perms_g.iter().enumerate() {
            let inv_g = invert(pg);
            buf.clear();
            buf.extend_from_slice(&[s.kind() as u8, n as u8, g as u8]);
            let mut order = Ordering::Equal;
            let mut push = |buf: &mut Vec<u8>, v: u8| -> bool {
                if order == Ordering::Equal {
                    if let Some((b, _, _)) = &best {
                        order = v.cmp(&b[buf.len()]);
                    } else {
                        order = Ordering::Less;
                    }
                }
                buf.push(v);
                order != Ordering::Greater
            };
            let mut keep = true;
            'cells: for gamma in 0..g {
                for a in 0..n {
                    for b in 0..n {
                        let v = pm[s.op(inv_g[gamma], inv_m[a], inv_m[b])] as u8;
                        if !push(&mut buf, v) {
                            keep = false;
                            break 'cells;
                        }
                    }
                }
            }
            if keep {
                'order: for a in 0..n {
                    for b in 0..n {
                        if !push(&mut buf, s.leq(inv_m[a], inv_m[b]) as u8) {
                            keep = false;
                            break 'order;
                        }
                    }
                }
            }
            if (keep && order == Ordering::Less) || best.is_none() {
                best = Some((buf.clone(), pi, gi));
            }
        }
    }
    let (key, pi, gi) = best.expect("at least the identity relabeling");
    let canon = s.relabel(&perms_m[pi], &perms_g[gi])?;
    debug_assert_eq!(encode(&canon), key);
    Ok((CanonicalKey(key), canon))
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// A seeded structure of the shape in `cfg`.
///
/// Semigroup tables come from a randomized backtracking search (random value
/// order per cell, associativity pruned incrementally); groupoid tables are
/// uniform. Orders are random partial orders filtered for compatibility,
/// falling back to the discrete order.
pub fn random_structure(cfg: &EnumConfig, seed: u64) -> Result<PoGammaStructure> {
    cfg.check()?;
    let (n, g) = (cfg.n, cfg.g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let op = match cfg.kind {
        Kind::Groupoid => (0..g * n * n).map(|_| rng.gen_range(0..n)).collect(),
        Kind::Semigroup => random_tables(n, g, &mut rng)?,
    };
    let leq = match cfg.order_mode {
        OrderMode::DiscreteOnly => discrete_order(n),
        OrderMode::AllCompatible => random_compatible_order(n, g, &op, &mut rng),
    };
    let s = PoGammaStructure::from_flat(n, g, op, leq, cfg.kind)?;
    let report = validate(&s);
    if !report.is_valid() {
        return Err(Error::Internal(format!("random structure fails validation: {report}")));
    }
    Ok(s)
}

// Randomized backtracking, restarted with a fresh value order whenever one
// attempt exceeds its node cap.
fn random_tables(n: usize, g: usize, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let mut spent = 0;
    while spent < RANDOM_NODE_BUDGET {
        let cap = RANDOM_RESTART_NODES.min(RANDOM_NODE_BUDGET - spent);
        let mut search = TableSearch::new(n, g, Kind::Semigroup);
        let mut order_rng = ChaCha8Rng::seed_from_u64(rng.gen());
        let mut found = None;
        let outcome = search.run(
            0,
            &mut |_| {
                let mut vals: Vec<usize> = (0..n).collect();
                vals.shuffle(&mut order_rng);
                vals
            },
            cap,
            &mut |op| {
                found = Some(op.to_vec());
                ControlFlow::Break(())
            },
        );
        if let Some(op) = found {
            return Ok(op);
        }
        if let ControlFlow::Continue(()) = outcome {
            return Err(Error::Internal("table search space exhausted without a table".into()));
        }
        spent += cap;
    }
    Err(Error::BudgetExhausted(RANDOM_NODE_BUDGET))
}

fn random_compatible_order(n: usize, g: usize, op: &[usize], rng: &mut ChaCha8Rng) -> Vec<bool> {
    for _ in 0..RANDOM_ORDER_ATTEMPTS {
        let mut line: Vec<usize> = (0..n).collect();
        line.shuffle(rng);
        let density: f64 = rng.gen();
        let mut leq = discrete_order(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(density) {
                    leq[line[i] * n + line[j]] = true;
                }
            }
        }
        // transitive closure along the linear extension keeps it antisymmetric
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i * n + k] && leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
        if is_compatible(n, g, op, &leq) {
            return leq;
        }
    }
    discrete_order(n)
}

/// The Γ-semigroup on a semigroup `S` with `Γ ⊆ S` and `aγb := (a·γ)·b`.
///
/// `table[a][b]` is `a·b`, `gammas` lists the elements of `S` used as labels
/// (label `i` is `gammas[i]`), and `order[a][b]` is `a ≤ b`, which must be a
/// compatible partial order on `S`.
pub fn gamma_from_semigroup(table: &[Vec<usize>], gammas: &[usize], order: &[Vec<bool>]) -> Result<PoGammaStructure> {
    if gammas.is_empty() {
        return Err(Error::Precondition("label subset must be nonempty".into()));
    }
    let base = PoGammaStructure::from_tables(&[table.to_vec()], order, Kind::Semigroup)?;
    let n = base.n();
    if let Some(&bad) = gammas.iter().find(|&&x| x >= n) {
        return Err(Error::ElementOutOfRange { element: bad, n });
    }
    let report = validate(&base);
    if !report.is_valid() {
        return Err(Error::Precondition(format!(
            "base semigroup is not an ordered semigroup: {report}"
        )));
    }
    let s = PoGammaStructure::from_fn(
        n,
        gammas.len(),
        Kind::Semigroup,
        |i, a, b| base.op(0, base.op(0, a, gammas[i]), b),
        |a, b| base.leq(a, b),
    )?;
    let report = validate(&s);
    if !report.is_valid() {
        return Err(Error::Internal(format!(
            "constructed Γ-semigroup fails validation: {report}"
        )));
    }
    Ok(s)
}
