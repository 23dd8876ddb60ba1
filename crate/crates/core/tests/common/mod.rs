//! Independent oracles used by the integration tests. None of them call
//! into the support engine or the bounded evaluator.

#![allow(dead_code)]

use std::collections::BTreeSet;

use pts_core::base::AtomicRule;
use pts_core::syntax::{Atom, Formula, Term};

/// Atom sets over at most 8 atoms, as bit masks.
pub type Mask = u32;

/// Closed sets of a rule list over `n` atoms, by brute force.
pub fn closed_sets(n: usize, rules: &[(Mask, usize)]) -> Vec<Mask> {
    (0..1u32 << n)
        .filter(|&s| rules.iter().all(|&(p, c)| p & s != p || s & (1 << c) != 0))
        .collect()
}

/// Every Moore family on `n` atoms: sets of atom sets containing the full
/// set and closed under intersection. Enumerated directly, `n ≤ 3`.
pub fn moore_families(n: usize) -> Vec<Vec<Mask>> {
    assert!(n <= 3);
    let full = (1u32 << n) - 1;
    let universe = 1usize << n;
    let mut out = Vec::new();
    for fam in 0u64..1 << universe {
        let members: Vec<Mask> = (0..universe as u32)
            .filter(|&s| fam & (1 << s) != 0)
            .collect();
        if !members.contains(&full) {
            continue;
        }
        let closed = members
            .iter()
            .all(|&a| members.iter().all(|&b| members.contains(&(a & b))));
        if closed {
            out.push(members);
        }
    }
    out
}

/// Classical value at an atom set, with `⊥` true only at the full set.
/// Quantifiers range over `terms`.
pub fn value_at(
    s: Mask,
    full: Mask,
    f: &Formula,
    index: &dyn Fn(&Atom) -> Option<usize>,
    terms: &[Term],
) -> bool {
    match f {
        Formula::Bot => s == full,
        Formula::Atom(a) => index(a).is_some_and(|i| s & (1 << i) != 0),
        Formula::Imp(a, b) => {
            !value_at(s, full, a, index, terms) || value_at(s, full, b, index, terms)
        }
        Formula::And(a, b) => {
            value_at(s, full, a, index, terms) && value_at(s, full, b, index, terms)
        }
        Formula::Forall(x, body) => terms
            .iter()
            .all(|t| value_at(s, full, &body.replace_free(x, t), index, terms)),
    }
}

/// Support by a family of closed sets: truth at every member.
pub fn supported_by(
    family: &[Mask],
    full: Mask,
    f: &Formula,
    index: &dyn Fn(&Atom) -> Option<usize>,
    terms: &[Term],
) -> bool {
    family.iter().all(|&s| value_at(s, full, f, index, terms))
}

pub fn prop_index(names: &[Atom]) -> impl Fn(&Atom) -> Option<usize> + '_ {
    move |a| names.iter().position(|b| b == a)
}

/// Classical truth table validity.
pub fn tautology(f: &Formula, atoms: &[Atom]) -> bool {
    let n = atoms.len();
    let idx = prop_index(atoms);
    (0..1u32 << n).all(|v| value_at(v, u32::MAX, f, &idx, &[]))
}

/// Rules as masks: premises and conclusion index.
pub fn rule_masks(rules: &[AtomicRule], atoms: &[Atom]) -> Vec<(Mask, usize)> {
    rules
        .iter()
        .map(|r| {
            let p = r
                .premises
                .iter()
                .map(|a| 1u32 << atoms.iter().position(|b| b == a).unwrap())
                .fold(0, |x, y| x | y);
            (p, atoms.iter().position(|b| *b == r.conclusion).unwrap())
        })
        .collect()
}

/// Support over raw bases, computed clause by clause from the definition:
/// the bases are all subsets of a fixed rule list of length at most 8, and
/// a formula's support is a 256-bit set of bases.
pub struct RawOracle {
    pub atoms: usize,
    pub rules: Vec<(Mask, usize)>,
    derivable: Vec<Mask>,
}

pub type Bits = [u64; 4];

impl RawOracle {
    pub fn new(atoms: usize, rules: Vec<(Mask, usize)>) -> RawOracle {
        assert!(rules.len() <= 8);
        let derivable = (0..1usize << rules.len())
            .map(|b| {
                let mut have: Mask = 0;
                loop {
                    let mut next = have;
                    for (i, &(p, c)) in rules.iter().enumerate() {
                        if b & (1 << i) != 0 && p & have == p {
                            next |= 1 << c;
                        }
                    }
                    if next == have {
                        break have;
                    }
                    have = next;
                }
            })
            .collect();
        RawOracle {
            atoms,
            rules,
            derivable,
        }
    }

    pub fn bases(&self) -> usize {
        1 << self.rules.len()
    }

    fn bits_where(&self, f: impl Fn(usize) -> bool) -> Bits {
        let mut out = [0u64; 4];
        for b in 0..self.bases() {
            if f(b) {
                out[b / 64] |= 1 << (b % 64);
            }
        }
        out
    }

    pub fn atom(&self, i: usize) -> Bits {
        self.bits_where(|b| self.derivable[b] & (1 << i) != 0)
    }

    /// `⊥` is supported when every atom is derivable.
    pub fn bot(&self) -> Bits {
        let full = (1u32 << self.atoms) - 1;
        self.bits_where(|b| self.derivable[b] == full)
    }

    pub fn and(a: &Bits, b: &Bits) -> Bits {
        [a[0] & b[0], a[1] & b[1], a[2] & b[2], a[3] & b[3]]
    }

    /// `b ⊩ φ → ψ` iff every `c ⊇ b` supporting `φ` supports `ψ`.
    pub fn imp(&self, a: &Bits, b: &Bits) -> Bits {
        let mut bad = [a[0] & !b[0], a[1] & !b[1], a[2] & !b[2], a[3] & !b[3]];
        // Propagate badness from each base down to its subsets, one rule at a time.
        for i in 0..self.rules.len() {
            let bit = 1usize << i;
            for x in 0..self.bases() {
                if x & bit == 0 && has(&bad, x | bit) {
                    bad[x / 64] |= 1 << (x % 64);
                }
            }
        }
        let mut out = [0u64; 4];
        for x in 0..self.bases() {
            if !has(&bad, x) {
                out[x / 64] |= 1 << (x % 64);
            }
        }
        out
    }

    pub fn eval(&self, f: &Formula, index: &dyn Fn(&Atom) -> Option<usize>) -> Bits {
        match f {
            Formula::Bot => self.bot(),
            Formula::Atom(a) => match index(a) {
                Some(i) => self.atom(i),
                None => [0; 4],
            },
            Formula::And(a, b) => RawOracle::and(&self.eval(a, index), &self.eval(b, index)),
            Formula::Imp(a, b) => self.imp(&self.eval(a, index), &self.eval(b, index)),
            Formula::Forall(..) => panic!("propositional formulas only"),
        }
    }

    /// Violations of `b ⊆ c ∧ b ⊩ φ ⇒ c ⊩ φ`.
    pub fn persistence_violations(&self, s: &Bits) -> u64 {
        let mut n = 0;
        for b in 0..self.bases() {
            if !has(s, b) {
                continue;
            }
            for c in 0..self.bases() {
                if c & b == b && !has(s, c) {
                    n += 1;
                }
            }
        }
        n
    }
}

impl RawOracle {
    /// Violations among covering pairs `b ⊂ b ∪ {r}`. Zero exactly when
    /// there are no violations among all pairs, by transitivity.
    pub fn cover_violations(&self, s: &Bits) -> u64 {
        let mut n = 0;
        for i in 0..self.rules.len() {
            let bit = 1usize << i;
            for b in 0..self.bases() {
                if b & bit == 0 && has(s, b) && !has(s, b | bit) {
                    n += 1;
                }
            }
        }
        n
    }
}

pub fn has(s: &Bits, i: usize) -> bool {
    s[i / 64] & (1 << (i % 64)) != 0
}

/// Every formula of depth at most `depth` over `leaves` with `→`, `∧`.
pub fn formulas(leaves: &[Formula], depth: usize) -> Vec<Formula> {
    let mut level = leaves.to_vec();
    for _ in 0..depth {
        let mut next = leaves.to_vec();
        for a in &level {
            for b in &level {
                next.push(Formula::Imp(Box::new(a.clone()), Box::new(b.clone())));
                next.push(Formula::And(Box::new(a.clone()), Box::new(b.clone())));
            }
        }
        level = next;
    }
    level
}

/// Bounded sentences for the naive enumerator.
#[derive(Clone, Debug)]
pub enum Bounded {
    Eq(Expr, Expr),
    Le(Expr, Expr),
    Not(Box<Bounded>),
    And(Box<Bounded>, Box<Bounded>),
    Or(Box<Bounded>, Box<Bounded>),
    Imp(Box<Bounded>, Box<Bounded>),
    All(String, Expr, Box<Bounded>),
    Ex(String, Expr, Box<Bounded>),
}

#[derive(Clone, Debug)]
pub enum Expr {
    Num(u64),
    Var(String),
    Succ(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn value(&self, env: &[(String, u64)]) -> u64 {
        match self {
            Expr::Num(n) => *n,
            Expr::Var(x) => env.iter().rev().find(|(y, _)| y == x).expect("bound").1,
            Expr::Succ(a) => a.value(env) + 1,
            Expr::Add(a, b) => a.value(env) + b.value(env),
            Expr::Mul(a, b) => a.value(env) * b.value(env),
        }
    }

    pub fn term(&self) -> Term {
        match self {
            Expr::Num(n) => pts_core::syntax::numeral(*n),
            Expr::Var(x) => Term::var(x.clone()),
            Expr::Succ(a) => Term::succ(a.term()),
            Expr::Add(a, b) => Term::plus(a.term(), b.term()),
            Expr::Mul(a, b) => Term::times(a.term(), b.term()),
        }
    }
}

impl Bounded {
    pub fn truth(&self, env: &mut Vec<(String, u64)>) -> bool {
        match self {
            Bounded::Eq(a, b) => a.value(env) == b.value(env),
            Bounded::Le(a, b) => a.value(env) <= b.value(env),
            Bounded::Not(a) => !a.truth(env),
            Bounded::And(a, b) => a.truth(env) && b.truth(env),
            Bounded::Or(a, b) => a.truth(env) || b.truth(env),
            Bounded::Imp(a, b) => !a.truth(env) || b.truth(env),
            Bounded::All(x, t, body) | Bounded::Ex(x, t, body) => {
                let bound = t.value(env);
                let want_all = matches!(self, Bounded::All(..));
                for v in 0..=bound {
                    env.push((x.clone(), v));
                    let r = body.truth(env);
                    env.pop();
                    if want_all && !r {
                        return false;
                    }
                    if !want_all && r {
                        return true;
                    }
                }
                want_all
            }
        }
    }

    pub fn formula(&self) -> Formula {
        match self {
            Bounded::Eq(a, b) => Formula::eq(a.term(), b.term()),
            Bounded::Le(a, b) => Formula::less(a.term(), b.term()),
            Bounded::Not(a) => Formula::not(a.formula()),
            Bounded::And(a, b) => Formula::and(a.formula(), b.formula()),
            Bounded::Or(a, b) => Formula::or(a.formula(), b.formula()),
            Bounded::Imp(a, b) => Formula::imp(a.formula(), b.formula()),
            Bounded::All(x, t, body) => Formula::forall_below(x.clone(), t.term(), body.formula()),
            Bounded::Ex(x, t, body) => Formula::exists_below(x.clone(), t.term(), body.formula()),
        }
    }
}

/// A random bounded sentence; every bound is a numeral at most `max_bound`.
pub fn random_bounded(rng: &mut impl rand::Rng, max_bound: u64, depth: usize) -> Bounded {
    fn expr(rng: &mut impl rand::Rng, vars: &[String], depth: usize) -> Expr {
        let leaf = |rng: &mut dyn rand::RngCore| {
            if !vars.is_empty() && rand::Rng::gen_bool(rng, 0.6) {
                Expr::Var(vars[rand::Rng::gen_range(rng, 0..vars.len())].clone())
            } else {
                Expr::Num(rand::Rng::gen_range(rng, 0..6))
            }
        };
        if depth == 0 || rng.gen_bool(0.4) {
            return leaf(rng);
        }
        match rng.gen_range(0..3) {
            0 => Expr::Succ(Box::new(expr(rng, vars, depth - 1))),
            1 => Expr::Add(
                Box::new(expr(rng, vars, depth - 1)),
                Box::new(expr(rng, vars, depth - 1)),
            ),
            _ => Expr::Mul(
                Box::new(expr(rng, vars, depth - 1)),
                Box::new(expr(rng, vars, depth - 1)),
            ),
        }
    }
    fn go(
        rng: &mut impl rand::Rng,
        vars: &mut Vec<String>,
        max_bound: u64,
        depth: usize,
    ) -> Bounded {
        if depth == 0 || rng.gen_bool(0.15) {
            let (a, b) = (expr(rng, vars, 2), expr(rng, vars, 2));
            return if rng.gen_bool(0.7) {
                Bounded::Eq(a, b)
            } else {
                Bounded::Le(a, b)
            };
        }
        let sub =
            |rng: &mut _, vars: &mut Vec<String>| Box::new(go(rng, vars, max_bound, depth - 1));
        match rng.gen_range(0..7) {
            0 => Bounded::Not(sub(rng, vars)),
            1 => Bounded::And(sub(rng, vars), sub(rng, vars)),
            2 => Bounded::Or(sub(rng, vars), sub(rng, vars)),
            3 => Bounded::Imp(sub(rng, vars), sub(rng, vars)),
            k => {
                let x = format!("v{}", vars.len());
                let bound = Expr::Num(rng.gen_range(0..=max_bound));
                vars.push(x.clone());
                let body = sub(rng, vars);
                vars.pop();
                if k % 2 == 0 {
                    Bounded::All(x, bound, body)
                } else {
                    Bounded::Ex(x, bound, body)
                }
            }
        }
    }
    go(rng, &mut Vec::new(), max_bound, depth)
}

/// Formula pool for coding tests: every formula to the given depth over two
/// arithmetic atoms and `⊥`, closed under `→`, `∧`, `∀x` and `∀y`.
pub fn coding_pool(depth: usize) -> Vec<Formula> {
    let leaves = vec![
        pts_core::syntax::parse_formula("x = 0").unwrap(),
        pts_core::syntax::parse_formula("S(x) + y = y * 0").unwrap(),
    ];
    let mut level = leaves.clone();
    for _ in 0..depth {
        let mut next = leaves.clone();
        for a in &level {
            next.push(Formula::forall("x", a.clone()));
            next.push(Formula::forall("y", a.clone()));
            for b in &level {
                next.push(Formula::imp(a.clone(), b.clone()));
                next.push(Formula::and(a.clone(), b.clone()));
            }
        }
        level = next;
    }
    level
}

pub fn distinct<T: Ord + Clone>(xs: &[T]) -> bool {
    xs.iter().cloned().collect::<BTreeSet<_>>().len() == xs.len()
}
