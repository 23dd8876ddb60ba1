//! Logical axiom schemas and their recognizers.

use std::fmt;

use serde::Serialize;

use crate::syntax::{Atom, Formula, Term, EQ};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum LogicalAxiom {
    /// `φ → (ψ → φ)`
    K,
    /// `(φ → (ψ → χ)) → ((φ → ψ) → (φ → χ))`
    S,
    /// `((φ → ⊥) → ⊥) → φ`
    DoubleNegation,
    /// `φ → (ψ → φ ∧ ψ)`
    AndIntro,
    /// `φ ∧ ψ → φ`
    AndLeft,
    /// `φ ∧ ψ → ψ`
    AndRight,
    /// `∀x φ → φ[x ↦ t]`, `t` free for `x`
    Instantiation,
    /// `∀x (φ → ψ) → (∀x φ → ∀x ψ)`
    Distribution,
    /// `φ → ∀x φ`, `x` not free in `φ`
    VacuousGeneralization,
    /// `t = t`
    Reflexivity,
    /// `s = t → (A → B)`, atoms `A` and `B` equal up to replacing some
    /// occurrences of `s` by `t`
    Congruence,
}

impl fmt::Display for LogicalAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            LogicalAxiom::K => "K",
            LogicalAxiom::S => "S",
            LogicalAxiom::DoubleNegation => "DNE",
            LogicalAxiom::AndIntro => "and-intro",
            LogicalAxiom::AndLeft => "and-left",
            LogicalAxiom::AndRight => "and-right",
            LogicalAxiom::Instantiation => "forall-inst",
            LogicalAxiom::Distribution => "forall-dist",
            LogicalAxiom::VacuousGeneralization => "forall-vac",
            LogicalAxiom::Reflexivity => "eq-refl",
            LogicalAxiom::Congruence => "eq-cong",
        };
        f.write_str(name)
    }
}

fn imp(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Imp(a, b) => Some((a, b)),
        _ => None,
    }
}

fn and(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::And(a, b) => Some((a, b)),
        _ => None,
    }
}

fn forall(f: &Formula) -> Option<(&str, &Formula)> {
    match f {
        Formula::Forall(x, a) => Some((x, a)),
        _ => None,
    }
}

fn eq_atom(f: &Formula) -> Option<(&Term, &Term)> {
    match f {
        Formula::Atom(Atom { pred, args }) if pred == EQ && args.len() == 2 => {
            Some((&args[0], &args[1]))
        }
        _ => None,
    }
}

/// The schema `f` instantiates, if any. Schemas are tried in declaration order.
pub fn logical_axiom(f: &Formula) -> Option<LogicalAxiom> {
    type Recognizer = fn(&Formula) -> bool;
    let checks: [(LogicalAxiom, Recognizer); 11] = [
        (LogicalAxiom::K, is_k),
        (LogicalAxiom::S, is_s),
        (LogicalAxiom::DoubleNegation, is_dne),
        (LogicalAxiom::AndIntro, is_and_intro),
        (LogicalAxiom::AndLeft, |f| is_and_elim(f, true)),
        (LogicalAxiom::AndRight, |f| is_and_elim(f, false)),
        (LogicalAxiom::Instantiation, is_instantiation),
        (LogicalAxiom::Distribution, is_distribution),
        (LogicalAxiom::VacuousGeneralization, is_vacuous),
        (LogicalAxiom::Reflexivity, is_reflexivity),
        (LogicalAxiom::Congruence, is_congruence),
    ];
    checks.iter().find(|(_, check)| check(f)).map(|(ax, _)| *ax)
}

fn is_k(f: &Formula) -> bool {
    imp(f)
        .and_then(|(a, rest)| imp(rest).map(|(_, a2)| a == a2))
        .unwrap_or(false)
}

fn is_s(f: &Formula) -> bool {
    (|| {
        let (l, r) = imp(f)?;
        let (p, qr) = imp(l)?;
        let (q, r1) = imp(qr)?;
        let (pq, pr) = imp(r)?;
        let (p2, q2) = imp(pq)?;
        let (p3, r2) = imp(pr)?;
        Some(p == p2 && p == p3 && q == q2 && r1 == r2)
    })()
    .unwrap_or(false)
}

fn is_dne(f: &Formula) -> bool {
    (|| {
        let (l, phi) = imp(f)?;
        let inner = l.as_negation()?;
        Some(inner.as_negation()? == phi)
    })()
    .unwrap_or(false)
}

fn is_and_intro(f: &Formula) -> bool {
    (|| {
        let (a, rest) = imp(f)?;
        let (b, conj) = imp(rest)?;
        let (a2, b2) = and(conj)?;
        Some(a == a2 && b == b2)
    })()
    .unwrap_or(false)
}

fn is_and_elim(f: &Formula, left: bool) -> bool {
    (|| {
        let (conj, c) = imp(f)?;
        let (a, b) = and(conj)?;
        Some(if left { a == c } else { b == c })
    })()
    .unwrap_or(false)
}

fn is_instantiation(f: &Formula) -> bool {
    (|| {
        let (l, r) = imp(f)?;
        let (x, body) = forall(l)?;
        let mut found = None;
        if !match_instance(body, r, x, &mut found) {
            return Some(false);
        }
        Some(match found {
            Some(t) => body.is_free_for(x, &t),
            None => true,
        })
    })()
    .unwrap_or(false)
}

/// Whether `inst` is `pat` with free `x` replaced by one term, recorded in `found`.
fn match_instance(pat: &Formula, inst: &Formula, x: &str, found: &mut Option<Term>) -> bool {
    match (pat, inst) {
        (Formula::Bot, Formula::Bot) => true,
        (Formula::Atom(a), Formula::Atom(b)) => {
            a.pred == b.pred
                && a.args.len() == b.args.len()
                && a.args
                    .iter()
                    .zip(&b.args)
                    .all(|(s, t)| match_term(s, t, x, found))
        }
        (Formula::Imp(a1, b1), Formula::Imp(a2, b2))
        | (Formula::And(a1, b1), Formula::And(a2, b2)) => {
            match_instance(a1, a2, x, found) && match_instance(b1, b2, x, found)
        }
        (Formula::Forall(y1, b1), Formula::Forall(y2, b2)) => {
            y1 == y2
                && if y1 == x {
                    b1 == b2
                } else {
                    match_instance(b1, b2, x, found)
                }
        }
        _ => false,
    }
}

fn match_term(pat: &Term, inst: &Term, x: &str, found: &mut Option<Term>) -> bool {
    match (pat, inst) {
        (Term::Var(v), _) if v == x => match found {
            Some(t) => t == inst,
            None => {
                *found = Some(inst.clone());
                true
            }
        },
        (Term::Succ(a), Term::Succ(b)) => match_term(a, b, x, found),
        (Term::Plus(a1, b1), Term::Plus(a2, b2)) | (Term::Times(a1, b1), Term::Times(a2, b2)) => {
            match_term(a1, a2, x, found) && match_term(b1, b2, x, found)
        }
        _ => pat == inst,
    }
}

fn is_distribution(f: &Formula) -> bool {
    (|| {
        let (l, r) = imp(f)?;
        let (x, body) = forall(l)?;
        let (phi, psi) = imp(body)?;
        let (al, ar) = imp(r)?;
        let (x1, phi1) = forall(al)?;
        let (x2, psi1) = forall(ar)?;
        Some(x == x1 && x == x2 && phi == phi1 && psi == psi1)
    })()
    .unwrap_or(false)
}

fn is_vacuous(f: &Formula) -> bool {
    (|| {
        let (phi, r) = imp(f)?;
        let (x, phi1) = forall(r)?;
        Some(phi == phi1 && !phi.has_free(x))
    })()
    .unwrap_or(false)
}

fn is_reflexivity(f: &Formula) -> bool {
    eq_atom(f).is_some_and(|(a, b)| a == b)
}

fn is_congruence(f: &Formula) -> bool {
    (|| {
        let (e, rest) = imp(f)?;
        let (s, t) = eq_atom(e)?;
        let (a, b) = imp(rest)?;
        let (Formula::Atom(a), Formula::Atom(b)) = (a, b) else {
            return None;
        };
        Some(
            a.pred == b.pred
                && a.args.len() == b.args.len()
                && a.args
                    .iter()
                    .zip(&b.args)
                    .all(|(u, v)| replaces(u, v, s, t)),
        )
    })()
    .unwrap_or(false)
}

/// `v` arises from `u` by replacing some occurrences of `s` with `t`.
fn replaces(u: &Term, v: &Term, s: &Term, t: &Term) -> bool {
    if u == v || (u == s && v == t) {
        return true;
    }
    match (u, v) {
        (Term::Succ(a), Term::Succ(b)) => replaces(a, b, s, t),
        (Term::Plus(a1, b1), Term::Plus(a2, b2)) | (Term::Times(a1, b1), Term::Times(a2, b2)) => {
            replaces(a1, a2, s, t) && replaces(b1, b2, s, t)
        }
        _ => false,
    }
}
