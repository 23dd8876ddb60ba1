//! Finite vocabularies: the stage on which bases live and support is decided.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::syntax::{print_term, Atom, Symbols, Term};

const RESERVE_PREFIX: &str = "_r";

/// Predicates with arities, a finite list of closed terms, and a number of
/// fresh nullary "reserve" atoms that no query may mention.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Vocabulary {
    pub predicates: Vec<(String, usize)>,
    pub terms: Vec<Term>,
    pub reserve: usize,
}

#[derive(Serialize)]
pub struct VocabularySummary {
    pub predicates: Vec<String>,
    pub terms: Vec<String>,
    pub reserve: usize,
    pub atoms: usize,
}

impl Vocabulary {
    /// Nullary atoms only, e.g. `["p", "q"]`.
    pub fn propositional<S: AsRef<str>>(names: &[S], reserve: usize) -> Vocabulary {
        Vocabulary {
            predicates: names.iter().map(|n| (n.as_ref().to_string(), 0)).collect(),
            terms: Vec::new(),
            reserve,
        }
    }

    pub fn reserve_atom(i: usize) -> Atom {
        Atom::prop(format!("{RESERVE_PREFIX}{i}"))
    }

    pub fn is_reserve_name(name: &str) -> bool {
        name.strip_prefix(RESERVE_PREFIX)
            .is_some_and(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
    }

    /// Atoms built from the declared predicates and terms, in declaration order.
    pub fn query_atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        for (pred, arity) in &self.predicates {
            for args in tuples(&self.terms, *arity) {
                out.push(Atom::new(pred.clone(), args));
            }
        }
        out
    }

    /// The full atom universe: query atoms followed by the reserve atoms.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = self.query_atoms();
        out.extend((0..self.reserve).map(Vocabulary::reserve_atom));
        out
    }

    pub fn contains_atom(&self, a: &Atom) -> bool {
        if Vocabulary::is_reserve_name(&a.pred) && a.args.is_empty() {
            let idx: usize = a.pred[RESERVE_PREFIX.len()..].parse().unwrap_or(usize::MAX);
            return idx < self.reserve;
        }
        self.predicates
            .iter()
            .any(|(p, n)| *p == a.pred && *n == a.args.len())
            && a.args.iter().all(|t| self.terms.contains(t))
    }

    pub fn is_query_atom(&self, a: &Atom) -> bool {
        !Vocabulary::is_reserve_name(&a.pred) && self.contains_atom(a)
    }

    /// Parsing context in which the vocabulary's constants are constants.
    pub fn symbols(&self) -> Symbols {
        let mut constants = BTreeSet::new();
        for t in &self.terms {
            collect_constants(t, &mut constants);
        }
        Symbols {
            constants,
            predicates: None,
        }
    }

    pub fn summary(&self) -> VocabularySummary {
        VocabularySummary {
            predicates: self
                .predicates
                .iter()
                .map(|(p, n)| format!("{p}/{n}"))
                .collect(),
            terms: self.terms.iter().map(print_term).collect(),
            reserve: self.reserve,
            atoms: self.atoms().len(),
        }
    }
}

fn collect_constants(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Const(c) => {
            out.insert(c.clone());
        }
        Term::Succ(a) => collect_constants(a, out),
        Term::Plus(a, b) | Term::Times(a, b) => {
            collect_constants(a, out);
            collect_constants(b, out);
        }
        Term::Zero | Term::Var(_) => {}
    }
}

/// All `arity`-tuples over `terms`, in lexicographic order.
pub(crate) fn tuples(terms: &[Term], arity: usize) -> Vec<Vec<Term>> {
    let mut out: Vec<Vec<Term>> = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(out.len() * terms.len());
        for prefix in &out {
            for t in terms {
                let mut v = prefix.clone();
                v.push(t.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}
