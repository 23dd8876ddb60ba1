//! Truth of bounded sentences over ℕ, and the Δ0/Σ1/Π1 classifier.
//!
//! A quantifier is bounded when it has the elaborated shape
//! `∀x ((∃z (x + z = t)) → φ)` with `x` not in `t`; the guard
//! `∃z (a + z = b)` itself is recognised as `a ≤ b` and decided directly.
//!
//! Bounded loops are short-circuited when the body is `A → R` and one
//! conjunct of `A` pins down the quantified variable: an equation in which
//! it occurs once, or (in oracle mode) `Elt(p, i, x)` or `Seq(p, x)`. Every
//! other value makes `A` false, so only the pinned value needs testing.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::coding;
use crate::hilbert::Theory;
use crate::syntax::{print_formula, Atom, Formula, Term, EQ};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Defined predicates are decided by the coding and proof-checking code.
    Oracle,
    /// `Seq`, `Elt`, `MP` and `Gen` are replaced by their arithmetic
    /// definitions. `Form` and `Ax` stay primitive.
    Pure,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Budget {
    pub max_steps: u64,
    pub max_depth: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            max_steps: 10_000_000,
            max_depth: 2_000,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbounded quantifier in `{0}`")]
    NotDelta0(String),
    #[error("budget exceeded after {steps} steps")]
    BudgetExceeded { steps: u64 },
    #[error("recursion depth {0} exceeded")]
    DepthExceeded(usize),
    #[error("variable `{0}` is unbound")]
    Unbound(String),
    #[error("constant `{0}` has no arithmetic value")]
    Constant(String),
    #[error("predicate `{0}` with {1} arguments is not interpreted")]
    UnknownPredicate(String, usize),
}

impl EvalError {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            EvalError::BudgetExceeded { .. } | EvalError::DepthExceeded(_)
        )
    }
}

/// `a ≤ b` in its elaborated form `¬∀z ¬(a + z = b)`.
pub fn as_less_eq(f: &Formula) -> Option<(&Term, &Term)> {
    let inner = f.as_negation()?;
    let Formula::Forall(z, body) = inner else {
        return None;
    };
    let Formula::Atom(Atom { pred, args }) = body.as_negation()? else {
        return None;
    };
    if pred != EQ || args.len() != 2 {
        return None;
    }
    let Term::Plus(a, zv) = &args[0] else {
        return None;
    };
    let b = &args[1];
    (**zv == Term::Var(z.clone()) && !a.contains_var(z) && !b.contains_var(z)).then_some((a, b))
}

/// For `∀x (x ≤ t → φ)` with `x` not in `t`, returns `(t, φ)`.
pub fn as_bounded<'a>(x: &str, body: &'a Formula) -> Option<(&'a Term, &'a Formula)> {
    let Formula::Imp(guard, rest) = body else {
        return None;
    };
    let (v, t) = as_less_eq(guard)?;
    (*v == Term::Var(x.to_string()) && !t.contains_var(x)).then_some((t, rest))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Class {
    #[serde(rename = "delta0")]
    Delta0,
    #[serde(rename = "sigma1")]
    Sigma1,
    #[serde(rename = "pi1")]
    Pi1,
    #[serde(rename = "other")]
    Other,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Delta0 => "Δ0",
            Class::Sigma1 => "Σ1",
            Class::Pi1 => "Π1",
            Class::Other => "other",
        })
    }
}

impl Class {
    fn negate(self) -> Class {
        match self {
            Class::Sigma1 => Class::Pi1,
            Class::Pi1 => Class::Sigma1,
            c => c,
        }
    }

    fn join(self, other: Class) -> Class {
        match (self, other) {
            (Class::Delta0, c) | (c, Class::Delta0) => c,
            (a, b) if a == b => a,
            _ => Class::Other,
        }
    }
}

/// Arithmetical complexity, with atoms (including the defined predicates)
/// counted as Δ0.
pub fn classify(f: &Formula) -> Class {
    match f {
        Formula::Atom(_) | Formula::Bot => Class::Delta0,
        Formula::And(a, b) => classify(a).join(classify(b)),
        Formula::Imp(a, b) => {
            if as_less_eq(f).is_some() {
                return Class::Delta0;
            }
            classify(a).negate().join(classify(b))
        }
        Formula::Forall(x, body) => match as_bounded(x, body) {
            Some((_, rest)) => match classify(rest) {
                c @ (Class::Delta0 | Class::Pi1) => c,
                _ => Class::Other,
            },
            None => match classify(body) {
                Class::Delta0 | Class::Pi1 => Class::Pi1,
                _ => Class::Other,
            },
        },
    }
}

pub fn is_delta0(f: &Formula) -> bool {
    classify(f) == Class::Delta0
}

enum Solve {
    Value(BigUint),
    Impossible,
    Unknown,
}

type Env = Vec<(String, BigUint)>;

fn lookup<'e>(env: &'e Env, x: &str) -> Result<&'e BigUint, EvalError> {
    env.iter()
        .rev()
        .find(|(y, _)| y == x)
        .map(|(_, v)| v)
        .ok_or_else(|| EvalError::Unbound(x.to_string()))
}

pub fn term_value(t: &Term, env: &Env) -> Result<BigUint, EvalError> {
    Ok(match t {
        Term::Zero => BigUint::zero(),
        Term::Succ(a) => term_value(a, env)? + 1u32,
        Term::Plus(a, b) => term_value(a, env)? + term_value(b, env)?,
        Term::Times(a, b) => term_value(a, env)? * term_value(b, env)?,
        Term::Var(x) => lookup(env, x)?.clone(),
        Term::Const(c) => return Err(EvalError::Constant(c.clone())),
    })
}

fn occurrences(t: &Term, x: &str) -> usize {
    match t {
        Term::Var(v) => usize::from(v == x),
        Term::Zero | Term::Const(_) => 0,
        Term::Succ(a) => occurrences(a, x),
        Term::Plus(a, b) | Term::Times(a, b) => occurrences(a, x) + occurrences(b, x),
    }
}

/// Solves `t = target` for `x`, which occurs exactly once in `t`.
fn solve(t: &Term, x: &str, target: BigUint, env: &Env) -> Result<Solve, EvalError> {
    match t {
        Term::Var(_) => Ok(Solve::Value(target)),
        Term::Succ(a) => {
            if target.is_zero() {
                Ok(Solve::Impossible)
            } else {
                solve(a, x, target - 1u32, env)
            }
        }
        Term::Plus(a, b) => {
            let (inner, other) = if a.contains_var(x) { (a, b) } else { (b, a) };
            let v = term_value(other, env)?;
            if v > target {
                Ok(Solve::Impossible)
            } else {
                solve(inner, x, target - v, env)
            }
        }
        Term::Times(a, b) => {
            let (inner, other) = if a.contains_var(x) { (a, b) } else { (b, a) };
            let v = term_value(other, env)?;
            if v.is_zero() {
                return Ok(if target.is_zero() {
                    Solve::Unknown
                } else {
                    Solve::Impossible
                });
            }
            let (q, r) = target.div_rem(&v);
            if r.is_zero() {
                solve(inner, x, q, env)
            } else {
                Ok(Solve::Impossible)
            }
        }
        Term::Zero | Term::Const(_) => Ok(Solve::Unknown),
    }
}

fn conjuncts<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::And(a, b) => {
            conjuncts(a, out);
            conjuncts(b, out);
        }
        _ => out.push(f),
    }
}

pub struct Evaluator<'t> {
    mode: Mode,
    theory: &'t Theory,
    budget: Budget,
    steps: u64,
    pure: HashMap<&'static str, (Vec<String>, Formula)>,
}

impl<'t> Evaluator<'t> {
    pub fn new(mode: Mode, theory: &'t Theory, budget: Budget) -> Evaluator<'t> {
        let pure = if mode == Mode::Pure {
            arith::pure_definitions().into_iter().collect()
        } else {
            HashMap::new()
        };
        Evaluator {
            mode,
            theory,
            budget,
            steps: 0,
            pure,
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Truth of a closed bounded sentence.
    pub fn eval(&mut self, f: &Formula) -> Result<bool, EvalError> {
        if let Some(x) = f.free_vars().into_iter().next() {
            return Err(EvalError::Unbound(x));
        }
        self.eval_in(f, &mut Vec::new(), 0)
    }

    /// Truth of a bounded formula whose free variables are all given values.
    pub fn eval_with(
        &mut self,
        f: &Formula,
        values: &[(&str, BigUint)],
    ) -> Result<bool, EvalError> {
        let mut env: Env = values
            .iter()
            .map(|(x, v)| (x.to_string(), v.clone()))
            .collect();
        if let Some(x) = f
            .free_vars()
            .into_iter()
            .find(|x| !env.iter().any(|(y, _)| y == x))
        {
            return Err(EvalError::Unbound(x));
        }
        self.eval_in(f, &mut env, 0)
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        self.steps += 1;
        if self.steps > self.budget.max_steps {
            return Err(EvalError::BudgetExceeded { steps: self.steps });
        }
        Ok(())
    }

    fn eval_in(&mut self, f: &Formula, env: &mut Env, depth: usize) -> Result<bool, EvalError> {
        self.tick()?;
        if depth > self.budget.max_depth {
            return Err(EvalError::DepthExceeded(self.budget.max_depth));
        }
        match f {
            Formula::Bot => Ok(false),
            Formula::Atom(a) => self.atom(a, env, depth),
            Formula::And(a, b) => {
                Ok(self.eval_in(a, env, depth + 1)? && self.eval_in(b, env, depth + 1)?)
            }
            Formula::Imp(a, b) => {
                if let Some((l, r)) = as_less_eq(f) {
                    return Ok(term_value(l, env)? <= term_value(r, env)?);
                }
                Ok(!self.eval_in(a, env, depth + 1)? || self.eval_in(b, env, depth + 1)?)
            }
            Formula::Forall(x, body) => {
                let (t, rest) =
                    as_bounded(x, body).ok_or_else(|| EvalError::NotDelta0(print_formula(f)))?;
                let bound = term_value(t, env)?;
                if let Formula::Imp(guard, _) = rest {
                    match self.pin(x, guard, env)? {
                        Solve::Impossible => return Ok(true),
                        Solve::Value(v) => {
                            if v > bound {
                                return Ok(true);
                            }
                            env.push((x.clone(), v));
                            let out = self.eval_in(rest, env, depth + 1);
                            env.pop();
                            return out;
                        }
                        Solve::Unknown => {}
                    }
                }
                let mut v = BigUint::zero();
                while v <= bound {
                    self.tick()?;
                    env.push((x.clone(), v.clone()));
                    let holds = self.eval_in(rest, env, depth + 1);
                    env.pop();
                    if !holds? {
                        return Ok(false);
                    }
                    v += 1u32;
                }
                Ok(true)
            }
        }
    }

    /// Looks for a conjunct of `guard` that determines `x`.
    fn pin(&mut self, x: &str, guard: &Formula, env: &Env) -> Result<Solve, EvalError> {
        let mut parts = Vec::new();
        conjuncts(guard, &mut parts);
        let var = Term::Var(x.to_string());
        for part in parts {
            let Formula::Atom(a) = part else { continue };
            if a.pred == EQ && a.args.len() == 2 {
                let (l, r) = (&a.args[0], &a.args[1]);
                let (side, other) = match (occurrences(l, x), occurrences(r, x)) {
                    (1, 0) => (l, r),
                    (0, 1) => (r, l),
                    _ => continue,
                };
                let target = term_value(other, env)?;
                match solve(side, x, target, env)? {
                    Solve::Unknown => continue,
                    s => return Ok(s),
                }
            }
            if self.mode != Mode::Oracle {
                continue;
            }
            let free_of_x = |ts: &[Term]| ts.iter().all(|t| !t.contains_var(x));
            match (a.pred.as_str(), a.args.as_slice()) {
                ("Elt", [p, i, y]) if *y == var && free_of_x(&a.args[..2]) => {
                    let p = term_value(p, env)?;
                    let i = term_value(i, env)?;
                    return Ok(match i.to_usize().map(|i| coding::elt(&p, i)) {
                        Some(Ok(v)) => Solve::Value(v),
                        _ => Solve::Impossible,
                    });
                }
                ("Seq", [p, n]) if *n == var && !p.contains_var(x) => {
                    return Ok(Solve::Value(coding::seq_len(&term_value(p, env)?)));
                }
                _ => {}
            }
        }
        Ok(Solve::Unknown)
    }

    fn atom(&mut self, a: &Atom, env: &mut Env, depth: usize) -> Result<bool, EvalError> {
        if a.pred == EQ && a.args.len() == 2 {
            return Ok(term_value(&a.args[0], env)? == term_value(&a.args[1], env)?);
        }
        let vals = a
            .args
            .iter()
            .map(|t| term_value(t, env))
            .collect::<Result<Vec<_>, _>>()?;
        if self.mode == Mode::Pure {
            if let Some((params, def)) = self.pure.get(a.pred.as_str()) {
                if params.len() == vals.len() {
                    let def = def.clone();
                    let mut inner: Env = params.iter().cloned().zip(vals).collect();
                    return self.eval_in(&def, &mut inner, depth + 1);
                }
            }
        }
        oracle_atom(&a.pred, &vals, self.theory)
            .ok_or_else(|| EvalError::UnknownPredicate(a.pred.clone(), a.args.len()))
    }
}

/// Meta-level meaning of the defined predicates.
pub fn oracle_atom(pred: &str, vals: &[BigUint], theory: &Theory) -> Option<bool> {
    Some(match (pred, vals) {
        ("Form", [x]) => coding::is_formula_code(x),
        ("Ax", [x]) => coding::decode_formula(x).is_some_and(|f| theory.is_axiom(&f)),
        ("Seq", [p, n]) => coding::seq_len(p) == *n,
        ("Elt", [p, i, y]) => i
            .to_usize()
            .and_then(|i| coding::elt(p, i).ok())
            .is_some_and(|v| v == *y),
        ("MP", [a, b, c]) => {
            match (
                coding::decode_formula(a),
                coding::decode_formula(b),
                coding::decode_formula(c),
            ) {
                (Some(a), Some(b), Some(c)) => b == Formula::imp(a, c),
                _ => false,
            }
        }
        ("Gen", [a, c]) => match (coding::decode_formula(a), coding::decode_formula(c)) {
            (Some(a), Some(Formula::Forall(_, body))) => *body == a,
            _ => false,
        },
        _ => return None,
    })
}

/// Truth of a closed Δ0 sentence in oracle mode, defined predicates read
/// relative to `theory`.
pub fn eval_delta0(
    f: &Formula,
    mode: Mode,
    theory: &Theory,
    budget: Budget,
) -> Result<bool, EvalError> {
    Evaluator::new(mode, theory, budget).eval(f)
}

/// Truth over ℕ of a closed sentence whose quantifiers are all bounded.
pub fn eval_delta0_truth(f: &Formula) -> Result<bool, EvalError> {
    eval_delta0(f, Mode::Oracle, &Theory::q(), Budget::default())
}
