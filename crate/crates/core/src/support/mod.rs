//! Support in a base, decided over a finite vocabulary.
//!
//! The clauses:
//!
//! * an atom is supported when it is derivable;
//! * `⊥` is supported when every atom of the universe is derivable;
//! * `φ ∧ ψ` when both are;
//! * `φ → ψ` when every extension supporting `φ` supports `ψ`;
//! * `∀x φ` when every vocabulary-term instance is supported.
//!
//! Extensions range over rule sets on the atom universe, reserve atoms
//! included. The engine works with the closed-set family of a base (see
//! [`lattice`]) and computes, for each formula, the set of families that
//! support it.

pub mod lattice;

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::base::{AtomicRule, Base, BaseError};
use crate::syntax::{print_formula, Atom, Formula};
use crate::vocab::Vocabulary;
pub use lattice::{AtomSet, FamilyId, FamilySet, Lattice};

/// Largest atom universe (query plus reserve atoms) the engine accepts.
pub const MAX_ATOMS: usize = 4;

/// Only formulas up to this depth are memoized; deeper ones are recomputed
/// from their memoized parts.
const MEMO_DEPTH: usize = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SupportError {
    #[error("the vocabulary has {0} atoms; at most {MAX_ATOMS} are supported")]
    TooManyAtoms(usize),
    #[error("formula `{0}` is not closed")]
    OpenFormula(String),
    #[error("atom `{0}` is not in the vocabulary")]
    OutOfVocabulary(String),
    #[error("reserve atom `{0}` may not occur in a query")]
    ReserveInQuery(String),
    #[error("the base already supports `{0}`")]
    AlreadySupported(String),
    #[error("no maxiconsistent extension refutes `{0}` within the rule universe")]
    NoMaxiconsistentExtension(String),
    #[error(transparent)]
    Base(#[from] BaseError),
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct SupportStats {
    pub atoms: usize,
    pub families: usize,
    pub memo_entries: usize,
    pub sat_computations: u64,
}

/// One step of a support trace: a subformula and whether the base supports it.
#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    pub formula: String,
    pub supported: bool,
}

pub struct SupportEngine {
    vocab: Vocabulary,
    atoms: Vec<Atom>,
    lattice: Lattice,
    atom_sat: Vec<FamilySet>,
    bot_sat: FamilySet,
    memo: HashMap<Formula, FamilySet>,
    computations: u64,
}

impl SupportEngine {
    pub fn new(vocab: Vocabulary) -> Result<SupportEngine, SupportError> {
        let atoms = vocab.atoms();
        if atoms.len() > MAX_ATOMS {
            return Err(SupportError::TooManyAtoms(atoms.len()));
        }
        let lattice = Lattice::new(atoms.len());
        let atom_sat = (0..atoms.len())
            .map(|i| lattice.all_contain(1 << i))
            .collect();
        let mut bot_sat = lattice.empty_set();
        bot_sat.insert(lattice.bottom());
        Ok(SupportEngine {
            vocab,
            atoms,
            lattice,
            atom_sat,
            bot_sat,
            memo: HashMap::new(),
            computations: 0,
        })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// The atom universe, in bit order.
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn stats(&self) -> SupportStats {
        SupportStats {
            atoms: self.atoms.len(),
            families: self.lattice.len(),
            memo_entries: self.memo.len(),
            sat_computations: self.computations,
        }
    }

    fn atom_index(&self, a: &Atom) -> Option<usize> {
        self.atoms.iter().position(|b| b == a)
    }

    pub fn atom_set(&self, atoms: &BTreeSet<Atom>) -> AtomSet {
        atoms
            .iter()
            .filter_map(|a| self.atom_index(a))
            .fold(0, |m, i| m | 1 << i)
    }

    fn rule_masks(&self, b: &Base) -> Result<Vec<(AtomSet, AtomSet)>, SupportError> {
        b.check_vocabulary(&self.vocab)?;
        Ok(b.rules()
            .iter()
            .map(|r| {
                let c = self.atom_index(&r.conclusion).expect("checked") as AtomSet;
                (self.atom_set(&r.premises), c)
            })
            .collect())
    }

    /// The family of atom sets closed under the rules of `b`.
    pub fn family_of(&self, b: &Base) -> Result<FamilyId, SupportError> {
        Ok(self.lattice.family_of_rules(&self.rule_masks(b)?))
    }

    /// A base whose closed sets are exactly the family `f`.
    pub fn canonical_base(&self, f: FamilyId) -> Base {
        let rules = self.lattice.canonical_rules(f).into_iter().map(|(p, c)| {
            let premises = (0..self.atoms.len())
                .filter(|i| p >> i & 1 == 1)
                .map(|i| self.atoms[i].clone());
            AtomicRule::new(premises, self.atoms[c as usize].clone())
        });
        Base::new(rules).expect("ground atoms")
    }

    /// Rejects open formulas and atoms outside the query vocabulary.
    pub fn check_query(&self, f: &Formula) -> Result<(), SupportError> {
        if !f.is_closed() {
            return Err(SupportError::OpenFormula(print_formula(f)));
        }
        self.check_atoms(f)
    }

    fn check_atoms(&self, f: &Formula) -> Result<(), SupportError> {
        match f {
            Formula::Bot => Ok(()),
            Formula::Atom(a) => self.check_atom(a),
            Formula::Imp(a, b) | Formula::And(a, b) => {
                self.check_atoms(a)?;
                self.check_atoms(b)
            }
            Formula::Forall(x, body) => {
                for t in &self.vocab.terms {
                    self.check_atoms(&body.replace_free(x, t))?;
                }
                Ok(())
            }
        }
    }

    fn check_atom(&self, a: &Atom) -> Result<(), SupportError> {
        if Vocabulary::is_reserve_name(&a.pred) {
            return Err(SupportError::ReserveInQuery(a.to_string()));
        }
        if !a.is_closed() {
            return Err(SupportError::OpenFormula(a.to_string()));
        }
        if !self.vocab.is_query_atom(a) {
            return Err(SupportError::OutOfVocabulary(a.to_string()));
        }
        Ok(())
    }

    /// The set of families supporting `f`. Assumes [`Self::check_query`] passed.
    pub fn sat(&mut self, f: &Formula) -> FamilySet {
        match f {
            Formula::Bot => return self.bot_sat.clone(),
            Formula::Atom(a) => {
                return match self.atom_index(a) {
                    Some(i) => self.atom_sat[i].clone(),
                    None => self.lattice.empty_set(),
                }
            }
            _ => {}
        }
        if let Some(s) = self.memo.get(f) {
            return s.clone();
        }
        self.computations += 1;
        let out = match f {
            Formula::And(a, b) => self.sat(a).and(&self.sat(b)),
            Formula::Imp(a, b) => {
                let (sa, sb) = (self.sat(a), self.sat(b));
                self.lattice.implication(&sa, &sb)
            }
            Formula::Forall(x, body) => {
                let mut acc = self.lattice.full_family_set();
                for t in self.vocab.terms.clone() {
                    acc.and_assign(&self.sat(&body.replace_free(x, &t)));
                }
                acc
            }
            Formula::Bot | Formula::Atom(_) => unreachable!(),
        };
        if f.depth() <= MEMO_DEPTH {
            self.memo.insert(f.clone(), out.clone());
        }
        out
    }

    /// Whether the family `fam` supports `f`, without computing the full
    /// support set of `f` itself.
    pub fn supports_at(&mut self, fam: FamilyId, f: &Formula) -> bool {
        match f {
            Formula::Bot => fam == self.lattice.bottom(),
            Formula::Atom(_) => self.sat(f).contains(fam),
            Formula::And(a, b) => self.supports_at(fam, a) && self.supports_at(fam, b),
            Formula::Imp(a, b) => {
                let (sa, sb) = (self.sat(a), self.sat(b));
                !self.lattice.subfamilies(fam).meets_without(&sa, &sb)
            }
            Formula::Forall(x, body) => self
                .vocab
                .terms
                .clone()
                .iter()
                .all(|t| self.supports_at(fam, &body.replace_free(x, t))),
        }
    }

    pub fn supports(&mut self, b: &Base, f: &Formula) -> Result<bool, SupportError> {
        self.check_query(f)?;
        let fam = self.family_of(b)?;
        Ok(self.supports_at(fam, f))
    }

    /// Every extension of `b` supporting all of `delta` supports `f`.
    pub fn supports_under(
        &mut self,
        b: &Base,
        delta: &[Formula],
        f: &Formula,
    ) -> Result<bool, SupportError> {
        if delta.is_empty() {
            return self.supports(b, f);
        }
        for d in delta {
            self.check_query(d)?;
        }
        self.check_query(f)?;
        let fam = self.family_of(b)?;
        let mut hyp = self.lattice.subfamilies(fam).clone();
        for d in delta {
            hyp.and_assign(&self.sat(d));
        }
        let concl = self.sat(f);
        Ok(hyp.is_subset(&concl))
    }

    pub fn valid(&mut self, gamma: &[Formula], f: &Formula) -> Result<bool, SupportError> {
        self.supports_under(&Base::empty(), gamma, f)
    }

    pub fn is_consistent(&self, b: &Base) -> Result<bool, SupportError> {
        Ok(self.family_of(b)? != self.lattice.bottom())
    }

    /// Consistent, and every extension is inconsistent or support-equivalent.
    /// At the level of families: exactly two closed sets, one of them `𝔸`.
    pub fn is_maxiconsistent(&self, b: &Base) -> Result<bool, SupportError> {
        Ok(self.is_maxiconsistent_family(self.family_of(b)?))
    }

    pub fn is_maxiconsistent_family(&self, fam: FamilyId) -> bool {
        self.lattice.size(fam) == 2
    }

    /// A maxiconsistent base containing `b` that does not support `f`.
    pub fn extend_to_maxiconsistent(
        &mut self,
        b: &Base,
        f: &Formula,
    ) -> Result<Base, SupportError> {
        self.check_query(f)?;
        let fam = self.family_of(b)?;
        if self.supports_at(fam, f) {
            return Err(SupportError::AlreadySupported(print_formula(f)));
        }
        if self.is_maxiconsistent_family(fam) {
            return Ok(b.clone());
        }
        let full = self.lattice.full_set();
        let mut candidates: Vec<AtomSet> =
            self.lattice.members(fam).filter(|&s| s != full).collect();
        candidates.sort_by_key(|&s| (std::cmp::Reverse(s.count_ones()), s));
        for s in candidates {
            let m = self.lattice.pair(s);
            if !self.supports_at(m, f) {
                return Ok(b.union(&self.canonical_base(m)));
            }
        }
        Err(SupportError::NoMaxiconsistentExtension(print_formula(f)))
    }

    /// One canonical base per maxiconsistent support class, in family order.
    pub fn enumerate_maxiconsistent(&self) -> Vec<Base> {
        (0..self.lattice.len())
            .filter(|&f| self.is_maxiconsistent_family(f))
            .map(|f| self.canonical_base(f))
            .collect()
    }

    /// Support verdicts for every distinct subformula of `f`, innermost first.
    pub fn trace(&mut self, b: &Base, f: &Formula) -> Result<Vec<TraceStep>, SupportError> {
        self.check_query(f)?;
        let fam = self.family_of(b)?;
        let mut subs = Vec::new();
        collect_subformulas(f, &mut subs);
        Ok(subs
            .into_iter()
            .filter(|g| g.is_closed())
            .map(|g| TraceStep {
                formula: print_formula(&g),
                supported: self.supports_at(fam, &g),
            })
            .collect())
    }
}

fn collect_subformulas(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::Imp(a, b) | Formula::And(a, b) => {
            collect_subformulas(a, out);
            collect_subformulas(b, out);
        }
        Formula::Forall(_, body) => collect_subformulas(body, out),
        Formula::Atom(_) | Formula::Bot => {}
    }
    if !out.contains(f) {
        out.push(f.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::socrates;
    use crate::syntax::{parse_formula, parse_formula_in};

    fn prop(names: &[&str], reserve: usize) -> SupportEngine {
        SupportEngine::new(Vocabulary::propositional(names, reserve)).unwrap()
    }

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn base(rules: &[(&[&str], &str)]) -> Base {
        Base::new(
            rules
                .iter()
                .map(|(p, c)| AtomicRule::new(p.iter().map(|a| Atom::prop(*a)), Atom::prop(*c))),
        )
        .unwrap()
    }

    #[test]
    fn atomic_and_bottom_clauses() {
        let mut e = prop(&["A"], 0);
        assert!(e.supports(&base(&[(&[], "A")]), &f("A")).unwrap());
        assert!(!e.supports(&Base::empty(), &f("_|_")).unwrap());
        assert!(e.supports(&base(&[(&[], "A")]), &f("_|_")).unwrap());
        assert!(e.supports(&Base::empty(), &f("A -> A")).unwrap());
    }

    #[test]
    fn supports_under_examples() {
        let mut e = prop(&["A", "B"], 0);
        let empty = Base::empty();
        assert!(e.supports_under(&empty, &[f("A")], &f("A")).unwrap());
        assert!(e.supports_under(&empty, &[f("A /\\ B")], &f("A")).unwrap());
        assert!(!e.supports_under(&empty, &[f("A")], &f("B")).unwrap());
        assert!(!e.supports(&base(&[(&[], "A")]), &f("B")).unwrap());
    }

    #[test]
    fn validity_examples() {
        let mut e = prop(&["p"], 1);
        assert!(e.valid(&[], &f("p \\/ ~p")).unwrap());
        assert!(e.valid(&[f("p")], &f("p")).unwrap());
        assert!(!e.valid(&[], &f("p")).unwrap());
        // Without a reserve atom ⊥ coincides with p, so ¬p becomes p → p.
        let mut bare = prop(&["p"], 0);
        assert!(bare.valid(&[], &f("~p")).unwrap());
        assert!(!e.valid(&[], &f("~p")).unwrap());
    }

    #[test]
    fn consistency() {
        let e = prop(&["A"], 0);
        assert!(e.is_consistent(&Base::empty()).unwrap());
        assert!(!e.is_consistent(&base(&[(&[], "A")])).unwrap());
        // H(s) and M(s) exhaust the Socrates universe unless it is padded.
        let (mut v, b) = socrates();
        assert!(!SupportEngine::new(v.clone())
            .unwrap()
            .is_consistent(&b)
            .unwrap());
        v.reserve = 1;
        assert!(SupportEngine::new(v).unwrap().is_consistent(&b).unwrap());
    }

    #[test]
    fn maxiconsistency() {
        let e = prop(&["A", "B"], 0);
        assert!(!e.is_maxiconsistent(&Base::empty()).unwrap());
        assert!(!e
            .is_maxiconsistent(&base(&[(&[], "A"), (&[], "B")]))
            .unwrap());
        assert!(e.is_maxiconsistent(&base(&[(&[], "A")])).unwrap());
        assert_eq!(e.enumerate_maxiconsistent().len(), 3);
        assert_eq!(prop(&["A"], 0).enumerate_maxiconsistent().len(), 1);
        assert!(prop(&[], 0).enumerate_maxiconsistent().is_empty());
    }

    #[test]
    fn extension_examples() {
        let mut e = prop(&["A", "B"], 0);
        let m = e.extend_to_maxiconsistent(&Base::empty(), &f("A")).unwrap();
        assert!(e.is_maxiconsistent(&m).unwrap());
        assert!(m.derives(&Atom::prop("B")));
        assert!(!m.derives(&Atom::prop("A")));

        let already = base(&[(&[], "B")]);
        assert_eq!(
            e.extend_to_maxiconsistent(&already, &f("A")).unwrap(),
            already
        );
        assert!(matches!(
            e.extend_to_maxiconsistent(&already, &f("B")),
            Err(SupportError::AlreadySupported(_))
        ));
    }

    #[test]
    fn quantifier_over_vocabulary_terms() {
        let (v, b) = socrates();
        let syms = v.symbols();
        let mut e = SupportEngine::new(v).unwrap();
        let all_mortal = parse_formula_in("forall x. H(x) -> M(x)", &syms).unwrap();
        assert!(e.supports(&b, &all_mortal).unwrap());
        assert!(e
            .supports(&b, &parse_formula_in("exists x. M(x)", &syms).unwrap())
            .unwrap());
        assert!(!e.supports(&Base::empty(), &all_mortal).unwrap());
    }

    #[test]
    fn query_errors() {
        let mut e = prop(&["A"], 1);
        let b = Base::empty();
        assert!(matches!(
            e.supports(&b, &f("B")),
            Err(SupportError::OutOfVocabulary(_))
        ));
        assert!(matches!(
            e.supports(&b, &f("_r0")),
            Err(SupportError::ReserveInQuery(_))
        ));
        assert!(matches!(
            e.supports(&b, &f("x = x")),
            Err(SupportError::OpenFormula(_))
        ));
        assert!(matches!(
            SupportEngine::new(Vocabulary::propositional(&["a", "b", "c"], 2)),
            Err(SupportError::TooManyAtoms(5))
        ));
    }

    #[test]
    fn trace_lists_subformulas() {
        let mut e = prop(&["A"], 0);
        let steps = e.trace(&Base::empty(), &f("A -> A")).unwrap();
        assert_eq!(steps.len(), 2);
        assert!(!steps[0].supported);
        assert!(steps[1].supported);
    }
}
