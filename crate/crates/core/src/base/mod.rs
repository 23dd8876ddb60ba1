//! Atomic-rule bases and derivability in a base.
//!
//! Derivability is the least set of atoms closed under the rules of the
//! base, computed by a worklist fixpoint. Iteration order is fixed, so the
//! derivation trees handed out are reproducible.

mod dsl;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::syntax::{Atom, Term};
use crate::vocab::{tuples, Vocabulary};

pub use dsl::{parse_base_file, serialize_base, BaseFile, DslError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaseError {
    #[error("atom `{0}` is not closed")]
    OpenAtom(String),
    #[error("atom `{0}` is not in the vocabulary")]
    OutOfVocabulary(String),
}

/// `P1, ..., Pn => C` over closed atoms. Premises form a set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AtomicRule {
    pub premises: BTreeSet<Atom>,
    pub conclusion: Atom,
}

impl AtomicRule {
    pub fn new(premises: impl IntoIterator<Item = Atom>, conclusion: Atom) -> AtomicRule {
        AtomicRule {
            premises: premises.into_iter().collect(),
            conclusion,
        }
    }

    /// An axiom `=> C`.
    pub fn fact(conclusion: Atom) -> AtomicRule {
        AtomicRule::new([], conclusion)
    }

    pub fn validate(&self) -> Result<(), BaseError> {
        for a in self
            .premises
            .iter()
            .chain(std::iter::once(&self.conclusion))
        {
            if !a.is_closed() {
                return Err(BaseError::OpenAtom(a.to_string()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for AtomicRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prem: Vec<String> = self.premises.iter().map(ToString::to_string).collect();
        if prem.is_empty() {
            write!(f, "=> {}", self.conclusion)
        } else {
            write!(f, "{} => {}", prem.join(", "), self.conclusion)
        }
    }
}

/// A rule whose atoms may contain variables, such as `H(x) => M(x)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RuleSchema {
    pub premises: Vec<Atom>,
    pub conclusion: Atom,
}

impl RuleSchema {
    pub fn variables(&self) -> BTreeSet<String> {
        let mut vars = BTreeSet::new();
        for a in self
            .premises
            .iter()
            .chain(std::iter::once(&self.conclusion))
        {
            for t in &a.args {
                vars.extend(t.free_vars());
            }
        }
        vars
    }

    /// One ground rule per assignment of vocabulary terms to the schema's
    /// variables.
    pub fn instantiate(&self, v: &Vocabulary) -> BTreeSet<AtomicRule> {
        let vars: Vec<String> = self.variables().into_iter().collect();
        let mut out = BTreeSet::new();
        for assignment in tuples(&v.terms, vars.len()) {
            let ground = |a: &Atom| {
                vars.iter()
                    .zip(&assignment)
                    .fold(a.clone(), |acc, (x, t)| acc.replace_var(x, t))
            };
            out.insert(AtomicRule::new(
                self.premises.iter().map(ground),
                ground(&self.conclusion),
            ));
        }
        out
    }
}

/// A finite set of ground atomic rules.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Base {
    rules: BTreeSet<AtomicRule>,
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rules.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl Base {
    pub fn empty() -> Base {
        Base::default()
    }

    pub fn new(rules: impl IntoIterator<Item = AtomicRule>) -> Result<Base, BaseError> {
        let rules: BTreeSet<AtomicRule> = rules.into_iter().collect();
        for r in &rules {
            r.validate()?;
        }
        Ok(Base { rules })
    }

    pub fn rules(&self) -> &BTreeSet<AtomicRule> {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn insert(&mut self, rule: AtomicRule) -> Result<bool, BaseError> {
        rule.validate()?;
        Ok(self.rules.insert(rule))
    }

    pub fn union(&self, other: &Base) -> Base {
        Base {
            rules: self.rules.union(&other.rules).cloned().collect(),
        }
    }

    pub fn is_subset(&self, other: &Base) -> bool {
        self.rules.is_subset(&other.rules)
    }

    /// Checks that every atom mentioned by a rule lies in `v`.
    pub fn check_vocabulary(&self, v: &Vocabulary) -> Result<(), BaseError> {
        for r in &self.rules {
            for a in r.premises.iter().chain(std::iter::once(&r.conclusion)) {
                if !v.contains_atom(a) {
                    return Err(BaseError::OutOfVocabulary(a.to_string()));
                }
            }
        }
        Ok(())
    }

    /// The set of atoms derivable in the base.
    pub fn closure(&self) -> BTreeSet<Atom> {
        self.saturate().into_keys().collect()
    }

    pub fn derives(&self, a: &Atom) -> bool {
        self.saturate().contains_key(a)
    }

    /// Like [`Base::derives`], but rejects atoms outside the vocabulary.
    pub fn derives_in(&self, a: &Atom, v: &Vocabulary) -> Result<bool, BaseError> {
        if !a.is_closed() {
            return Err(BaseError::OpenAtom(a.to_string()));
        }
        if !v.contains_atom(a) {
            return Err(BaseError::OutOfVocabulary(a.to_string()));
        }
        Ok(self.derives(a))
    }

    pub fn derivation_tree(&self, a: &Atom) -> Option<Derivation> {
        let firing = self.saturate();
        firing.contains_key(a).then(|| build_tree(a, &firing))
    }

    /// Maps each derivable atom to the rule that first derived it.
    fn saturate(&self) -> BTreeMap<Atom, &AtomicRule> {
        let rules: Vec<&AtomicRule> = self.rules.iter().collect();
        let mut waiting: BTreeMap<&Atom, Vec<usize>> = BTreeMap::new();
        let mut missing: Vec<usize> = rules.iter().map(|r| r.premises.len()).collect();
        let mut queue: VecDeque<usize> = VecDeque::new();
        for (i, r) in rules.iter().enumerate() {
            if r.premises.is_empty() {
                queue.push_back(i);
            }
            for p in &r.premises {
                waiting.entry(p).or_default().push(i);
            }
        }
        let mut firing: BTreeMap<Atom, &AtomicRule> = BTreeMap::new();
        while let Some(i) = queue.pop_front() {
            let concl = &rules[i].conclusion;
            if firing.contains_key(concl) {
                continue;
            }
            firing.insert(concl.clone(), rules[i]);
            if let Some(dependents) = waiting.get(concl) {
                for &j in dependents {
                    missing[j] -= 1;
                    if missing[j] == 0 {
                        queue.push_back(j);
                    }
                }
            }
        }
        firing
    }
}

fn build_tree(a: &Atom, firing: &BTreeMap<Atom, &AtomicRule>) -> Derivation {
    let rule = firing[a];
    Derivation {
        conclusion: a.clone(),
        rule: rule.clone(),
        children: rule
            .premises
            .iter()
            .map(|p| build_tree(p, firing))
            .collect(),
    }
}

/// A derivation in a base: a leaf is an application of a premise-free rule,
/// an inner node applies a rule to derivations of its premises.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    pub conclusion: Atom,
    pub rule: AtomicRule,
    pub children: Vec<Derivation>,
}

impl Derivation {
    /// Independently re-checks the tree against `b`.
    pub fn check(&self, b: &Base) -> bool {
        if !b.rules.contains(&self.rule) || self.rule.conclusion != self.conclusion {
            return false;
        }
        let roots: BTreeSet<&Atom> = self.children.iter().map(|c| &c.conclusion).collect();
        roots.len() == self.children.len()
            && roots == self.rule.premises.iter().collect()
            && self.children.iter().all(|c| c.check(b))
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(Derivation::height)
            .max()
            .unwrap_or(0)
    }

    /// Multi-line rendering, premises indented under their conclusion.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, indent: usize, out: &mut String) {
        let tag = if self.children.is_empty() {
            "Ref"
        } else {
            "App"
        };
        out.push_str(&format!(
            "{}{} [{}]\n",
            "  ".repeat(indent),
            self.conclusion,
            tag
        ));
        for c in &self.children {
            c.render_into(indent + 1, out);
        }
    }
}

/// The Socrates base: `=> H(s)` and the schema `H(x) => M(x)` over `{s}`.
pub fn socrates() -> (Vocabulary, Base) {
    let s = Term::constant("s");
    let v = Vocabulary {
        predicates: vec![("H".into(), 1), ("M".into(), 1)],
        terms: vec![s.clone()],
        reserve: 0,
    };
    let schema = RuleSchema {
        premises: vec![Atom::new("H", vec![Term::var("x")])],
        conclusion: Atom::new("M", vec![Term::var("x")]),
    };
    let mut rules = schema.instantiate(&v);
    rules.insert(AtomicRule::fact(Atom::new("H", vec![s])));
    (v, Base::new(rules).expect("ground rules"))
}
