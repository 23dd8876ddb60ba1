//! Terms and formulas of the arithmetic language.
//!
//! The core connectives are `->`, `/\`, `forall` and `_|_`. Negation,
//! disjunction, existential quantification, `<` and bounded quantifiers are
//! source-level forms (see [`Surface`]) that elaborate into the core.

mod parse;
mod print;
mod surface;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

pub use parse::{parse_formula, parse_formula_in, parse_term_in, ParseError, Symbols};
pub use print::{print_formula, print_formula_unicode, print_term};
pub use surface::Surface;

/// Name of the equality predicate.
pub const EQ: &str = "=";

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Term {
    Zero,
    Succ(Box<Term>),
    Plus(Box<Term>, Box<Term>),
    Times(Box<Term>, Box<Term>),
    Var(String),
    Const(String),
}

/// A predicate applied to terms. Equality is the predicate named `=`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    Atom(Atom),
    Bot,
    Imp(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("term `{0}` is not closed")]
    OpenTerm(String),
    #[error("term contains constant `{0}`, which has no arithmetic value")]
    ConstantInTerm(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn plus(a: Term, b: Term) -> Term {
        Term::Plus(Box::new(a), Box::new(b))
    }

    pub fn times(a: Term, b: Term) -> Term {
        Term::Times(Box::new(a), Box::new(b))
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Zero | Term::Const(_) => true,
            Term::Var(_) => false,
            Term::Succ(t) => t.is_closed(),
            Term::Plus(a, b) | Term::Times(a, b) => a.is_closed() && b.is_closed(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Zero | Term::Const(_) => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Succ(t) => t.collect_vars(out),
            Term::Plus(a, b) | Term::Times(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn contains_var(&self, x: &str) -> bool {
        match self {
            Term::Zero | Term::Const(_) => false,
            Term::Var(v) => v == x,
            Term::Succ(t) => t.contains_var(x),
            Term::Plus(a, b) | Term::Times(a, b) => a.contains_var(x) || b.contains_var(x),
        }
    }

    pub fn has_constants(&self) -> bool {
        match self {
            Term::Zero | Term::Var(_) => false,
            Term::Const(_) => true,
            Term::Succ(t) => t.has_constants(),
            Term::Plus(a, b) | Term::Times(a, b) => a.has_constants() || b.has_constants(),
        }
    }

    /// Replaces every occurrence of variable `x` by `t`.
    pub fn replace_var(&self, x: &str, t: &Term) -> Term {
        match self {
            Term::Var(v) if v == x => t.clone(),
            Term::Zero | Term::Var(_) | Term::Const(_) => self.clone(),
            Term::Succ(a) => Term::succ(a.replace_var(x, t)),
            Term::Plus(a, b) => Term::plus(a.replace_var(x, t), b.replace_var(x, t)),
            Term::Times(a, b) => Term::times(a.replace_var(x, t), b.replace_var(x, t)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Zero | Term::Var(_) | Term::Const(_) => 0,
            Term::Succ(t) => 1 + t.depth(),
            Term::Plus(a, b) | Term::Times(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// If the term is a numeral `S(...S(0)...)`, its value.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0u64;
        let mut cur = self;
        loop {
            match cur {
                Term::Zero => return Some(n),
                Term::Succ(t) => {
                    n += 1;
                    cur = t;
                }
                _ => return None,
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

/// The `n`th numeral: `0` for zero, `S` applied `n` times otherwise.
pub fn numeral(n: u64) -> Term {
    let mut t = Term::Zero;
    for _ in 0..n {
        t = Term::succ(t);
    }
    t
}

/// A closed term denoting `n` whose size is logarithmic in `n`.
///
/// Written in base 256 by Horner's rule, with unary numerals for the digits.
/// Used where a unary numeral for a Gödel number would be astronomically
/// large.
pub fn compact_numeral(n: &BigUint) -> Term {
    if n.bits() <= 8 {
        let small = n.iter_u64_digits().next().unwrap_or(0);
        return numeral(small);
    }
    let digits = n.to_radix_be(256);
    let base = Term::times(numeral(16), numeral(16));
    let mut acc = numeral(u64::from(digits[0]));
    for &d in &digits[1..] {
        let shifted = Term::times(acc, base.clone());
        acc = if d == 0 {
            shifted
        } else {
            Term::plus(shifted, numeral(u64::from(d)))
        };
    }
    acc
}

/// Value of a closed, constant-free term under the standard interpretation.
pub fn eval_closed_term(t: &Term) -> Result<BigUint, SyntaxError> {
    match t {
        Term::Zero => Ok(BigUint::zero()),
        Term::Succ(a) => Ok(eval_closed_term(a)? + BigUint::one()),
        Term::Plus(a, b) => Ok(eval_closed_term(a)? + eval_closed_term(b)?),
        Term::Times(a, b) => Ok(eval_closed_term(a)? * eval_closed_term(b)?),
        Term::Var(v) => Err(SyntaxError::OpenTerm(v.clone())),
        Term::Const(c) => Err(SyntaxError::ConstantInTerm(c.clone())),
    }
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Atom {
        Atom {
            pred: pred.into(),
            args,
        }
    }

    pub fn prop(name: impl Into<String>) -> Atom {
        Atom::new(name, Vec::new())
    }

    pub fn eq(a: Term, b: Term) -> Atom {
        Atom::new(EQ, vec![a, b])
    }

    pub fn is_closed(&self) -> bool {
        self.args.iter().all(Term::is_closed)
    }

    pub fn replace_var(&self, x: &str, t: &Term) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(|a| a.replace_var(x, t)).collect(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(&Formula::Atom(self.clone())))
    }
}

impl Formula {
    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
    }

    pub fn prop(name: impl Into<String>) -> Formula {
        Formula::Atom(Atom::prop(name))
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Atom(Atom::eq(a, b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn forall(x: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(x.into(), Box::new(body))
    }

    /// `~a`, i.e. `a -> _|_`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    /// `a \/ b`, i.e. `~(~a /\ ~b)`.
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
    }

    /// `exists x. a`, i.e. `~forall x. ~a`.
    pub fn exists(x: impl Into<String>, a: Formula) -> Formula {
        Formula::not(Formula::forall(x, Formula::not(a)))
    }

    /// `t < s`, which abbreviates `exists z. t + z = s` for a fresh `z`.
    /// Note that this holds when `t` and `s` are equal.
    pub fn less(t: Term, s: Term) -> Formula {
        let mut avoid = t.free_vars();
        avoid.extend(s.free_vars());
        let z = fresh_var(&avoid);
        Formula::exists(z.clone(), Formula::eq(Term::plus(t, Term::Var(z)), s))
    }

    /// `forall x < t. a`, i.e. `forall x. ((exists y. x + y = t) -> a)`.
    pub fn forall_below(x: impl Into<String>, t: Term, a: Formula) -> Formula {
        let x = x.into();
        let guard = Formula::less(Term::Var(x.clone()), t);
        Formula::forall(x, Formula::imp(guard, a))
    }

    /// `exists x < t. a`, i.e. `~forall x < t. ~a`.
    pub fn exists_below(x: impl Into<String>, t: Term, a: Formula) -> Formula {
        Formula::not(Formula::forall_below(x, t, Formula::not(a)))
    }

    /// Left-nested conjunction of a nonempty list.
    pub fn and_all(mut parts: Vec<Formula>) -> Formula {
        assert!(!parts.is_empty(), "and_all of an empty list");
        let first = parts.remove(0);
        parts.into_iter().fold(first, Formula::and)
    }

    /// Left-nested disjunction of a nonempty list.
    pub fn or_all(mut parts: Vec<Formula>) -> Formula {
        assert!(!parts.is_empty(), "or_all of an empty list");
        let first = parts.remove(0);
        parts.into_iter().fold(first, Formula::or)
    }

    /// If the formula has the shape `a -> _|_`, returns `a`.
    pub fn as_negation(&self) -> Option<&Formula> {
        match self {
            Formula::Imp(a, b) if **b == Formula::Bot => Some(a),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                for t in &a.args {
                    for v in t.free_vars() {
                        if !bound.contains(&v) {
                            out.insert(v);
                        }
                    }
                }
            }
            Formula::Bot => {}
            Formula::Imp(a, b) | Formula::And(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn has_free(&self, x: &str) -> bool {
        match self {
            Formula::Atom(a) => a.args.iter().any(|t| t.contains_var(x)),
            Formula::Bot => false,
            Formula::Imp(a, b) | Formula::And(a, b) => a.has_free(x) || b.has_free(x),
            Formula::Forall(y, body) => y != x && body.has_free(x),
        }
    }

    /// Replaces every free occurrence of `x` by the closed term `t`.
    pub fn substitute(&self, x: &str, t: &Term) -> Result<Formula, SyntaxError> {
        if !t.is_closed() {
            return Err(SyntaxError::OpenTerm(print_term(t)));
        }
        Ok(self.replace_free(x, t))
    }

    /// Replaces free occurrences of `x` by `t` without renaming bound
    /// variables. Only meaningful when `t` is free for `x` (see
    /// [`Formula::is_free_for`]); closed terms always are.
    pub fn replace_free(&self, x: &str, t: &Term) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(a.replace_var(x, t)),
            Formula::Bot => Formula::Bot,
            Formula::Imp(a, b) => Formula::imp(a.replace_free(x, t), b.replace_free(x, t)),
            Formula::And(a, b) => Formula::and(a.replace_free(x, t), b.replace_free(x, t)),
            Formula::Forall(y, body) => {
                if y == x {
                    self.clone()
                } else {
                    Formula::forall(y.clone(), body.replace_free(x, t))
                }
            }
        }
    }

    /// True when no free occurrence of `x` lies under a quantifier binding a
    /// variable of `t`.
    pub fn is_free_for(&self, x: &str, t: &Term) -> bool {
        let tv = t.free_vars();
        self.free_for_inner(x, &tv, false)
    }

    fn free_for_inner(&self, x: &str, tv: &BTreeSet<String>, captured: bool) -> bool {
        match self {
            Formula::Atom(a) => !captured || !a.args.iter().any(|s| s.contains_var(x)),
            Formula::Bot => true,
            Formula::Imp(a, b) | Formula::And(a, b) => {
                a.free_for_inner(x, tv, captured) && b.free_for_inner(x, tv, captured)
            }
            Formula::Forall(y, body) => {
                if y == x {
                    true
                } else {
                    body.free_for_inner(x, tv, captured || tv.contains(y))
                }
            }
        }
    }

    /// Connective depth; atoms and `_|_` have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bot => 0,
            Formula::Imp(a, b) | Formula::And(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Forall(_, body) => 1 + body.depth(),
        }
    }

    /// All atoms occurring in the formula, in order of first occurrence.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::Atom(a) => {
                if !out.contains(&a) {
                    out.push(a);
                }
            }
            Formula::Bot => {}
            Formula::Imp(a, b) | Formula::And(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Forall(_, body) => body.collect_atoms(out),
        }
    }

    pub fn has_constants(&self) -> bool {
        self.atoms()
            .iter()
            .any(|a| a.args.iter().any(Term::has_constants))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

const FRESH_CANDIDATES: [&str; 6] = ["x", "y", "z", "w", "u", "v"];

/// First variable name from `x, y, z, w, u, v, x', y', ...` not in `avoid`.
pub fn fresh_var(avoid: &BTreeSet<String>) -> String {
    let mut primes = String::new();
    loop {
        for c in FRESH_CANDIDATES {
            let name = format!("{c}{primes}");
            if !avoid.contains(&name) {
                return name;
            }
        }
        primes.push('\'');
    }
}
