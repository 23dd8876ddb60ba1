//! A Hilbert-style system: logical axiom schemas, a finite list of theory
//! axioms, modus ponens and unrestricted generalization.

mod axioms;
mod builder;
mod file;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{parse_formula, Formula};

pub use crate::delta0::eval_delta0_truth;
pub use axioms::{logical_axiom, LogicalAxiom};
pub use builder::{prove_numeral_atom, ProofBuilder, NUMERAL_BOUND};
pub use file::{parse_proof, print_proof, ProofFileError};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum AxiomKind {
    Logical(LogicalAxiom),
    /// Index into the theory's axiom list.
    Theory(usize),
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomKind::Logical(ax) => write!(f, "{ax}"),
            AxiomKind::Theory(i) => write!(f, "theory axiom {}", i + 1),
        }
    }
}

/// A theory: a name and finitely many non-logical axioms. The logical
/// schemas are shared by all theories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    pub name: String,
    pub axioms: Vec<Formula>,
}

const Q_AXIOMS: [&str; 7] = [
    "forall x. ~(S(x) = 0)",
    "forall x. forall y. S(x) = S(y) -> x = y",
    "forall x. ~(x = 0) -> exists y. x = S(y)",
    "forall x. x + 0 = x",
    "forall x. forall y. x + S(y) = S(x + y)",
    "forall x. x * 0 = 0",
    "forall x. forall y. x * S(y) = x * y + x",
];

impl Theory {
    /// Pure logic: no axioms beyond the logical schemas.
    pub fn logic() -> Theory {
        Theory {
            name: "logic".into(),
            axioms: Vec::new(),
        }
    }

    /// Robinson arithmetic.
    pub fn q() -> Theory {
        Theory {
            name: "q".into(),
            axioms: Q_AXIOMS
                .iter()
                .map(|s| parse_formula(s).expect("Q axioms parse"))
                .collect(),
        }
    }

    pub fn by_name(name: &str) -> Option<Theory> {
        match name {
            "q" | "Q" => Some(Theory::q()),
            "logic" => Some(Theory::logic()),
            _ => None,
        }
    }

    pub fn with_axiom(mut self, f: Formula) -> Theory {
        self.axioms.push(f);
        self
    }

    pub fn axiom_kind(&self, f: &Formula) -> Option<AxiomKind> {
        if let Some(i) = self.axioms.iter().position(|a| a == f) {
            return Some(AxiomKind::Theory(i));
        }
        logical_axiom(f).map(AxiomKind::Logical)
    }

    pub fn is_axiom(&self, f: &Formula) -> bool {
        self.axiom_kind(f).is_some()
    }
}

/// Justification hint as written in a proof file. Line numbers are 0-based.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Hint {
    Axiom,
    /// `Mp(j, l)`: line `j` is `φ`, line `l` is `φ → ψ`.
    Mp(usize, usize),
    Gen(usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProofLine {
    pub formula: Formula,
    pub hint: Option<Hint>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
}

impl Proof {
    pub fn from_formulas(formulas: impl IntoIterator<Item = Formula>) -> Proof {
        Proof {
            lines: formulas
                .into_iter()
                .map(|formula| ProofLine {
                    formula,
                    hint: None,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn formulas(&self) -> Vec<Formula> {
        self.lines.iter().map(|l| l.formula.clone()).collect()
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }
}

/// How a line was justified by the checker. Line numbers are 0-based.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Justification {
    Axiom(AxiomKind),
    Mp(usize, usize),
    Gen(usize),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom(k) => write!(f, "axiom ({k})"),
            Justification::Mp(j, l) => write!(f, "mp {},{}", j + 1, l + 1),
            Justification::Gen(j) => write!(f, "gen {}", j + 1),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Rejection {
    NotAxiom,
    BadMp,
    BadGen,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rejection::NotAxiom => "not an axiom and not obtained by a rule from earlier lines",
            Rejection::BadMp => "modus ponens does not apply to the cited earlier lines",
            Rejection::BadGen => "generalization does not apply to the cited earlier line",
        })
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ProofError {
    #[error("the proof has no lines")]
    Empty,
    /// `line` is 0-based; displayed 1-based.
    #[error("line {}: {reason}", line + 1)]
    Rejected { line: usize, reason: Rejection },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checked {
    pub conclusion: Formula,
    pub justifications: Vec<Justification>,
    /// Lines whose hint was wrong although another justification exists.
    pub wrong_hints: Vec<usize>,
}

fn hint_holds(lines: &[ProofLine], i: usize, hint: Hint, theory: &Theory) -> Option<Justification> {
    let f = &lines[i].formula;
    match hint {
        Hint::Axiom => theory.axiom_kind(f).map(Justification::Axiom),
        Hint::Mp(j, l) => {
            let ok = j < i
                && l < i
                && lines[l].formula == Formula::imp(lines[j].formula.clone(), f.clone());
            ok.then_some(Justification::Mp(j, l))
        }
        Hint::Gen(j) => {
            let ok = j < i && matches!(f, Formula::Forall(_, body) if **body == lines[j].formula);
            ok.then_some(Justification::Gen(j))
        }
    }
}

/// Checks every line; returns the last line on success.
pub fn check_proof(p: &Proof, theory: &Theory) -> Result<Checked, ProofError> {
    if p.is_empty() {
        return Err(ProofError::Empty);
    }
    let mut first_index: HashMap<&Formula, usize> = HashMap::new();
    let mut justifications = Vec::with_capacity(p.len());
    let mut wrong_hints = Vec::new();
    for (i, line) in p.lines.iter().enumerate() {
        let f = &line.formula;
        let hinted = line.hint.and_then(|h| hint_holds(&p.lines, i, h, theory));
        let found = hinted.or_else(|| {
            if let Some(k) = theory.axiom_kind(f) {
                return Some(Justification::Axiom(k));
            }
            for (l, prev) in p.lines[..i].iter().enumerate() {
                if let Formula::Imp(a, b) = &prev.formula {
                    if **b == *f {
                        if let Some(&j) = first_index.get(&**a) {
                            return Some(Justification::Mp(j, l));
                        }
                    }
                }
            }
            if let Formula::Forall(_, body) = f {
                if let Some(&j) = first_index.get(&**body) {
                    return Some(Justification::Gen(j));
                }
            }
            None
        });
        match found {
            Some(j) => {
                if line.hint.is_some() && hinted.is_none() {
                    wrong_hints.push(i);
                }
                justifications.push(j);
            }
            None => {
                let reason = match line.hint {
                    Some(Hint::Mp(..)) => Rejection::BadMp,
                    Some(Hint::Gen(_)) => Rejection::BadGen,
                    _ => Rejection::NotAxiom,
                };
                return Err(ProofError::Rejected { line: i, reason });
            }
        }
        first_index.entry(f).or_insert(i);
    }
    Ok(Checked {
        conclusion: p.lines[p.len() - 1].formula.clone(),
        justifications,
        wrong_hints,
    })
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("prefix length {k} is outside 1..={len}")]
pub struct PrefixError {
    pub k: usize,
    pub len: usize,
}

/// The first `k` lines.
pub fn prefix(p: &Proof, k: usize) -> Result<Proof, PrefixError> {
    if k == 0 || k > p.len() {
        return Err(PrefixError { k, len: p.len() });
    }
    Ok(Proof {
        lines: p.lines[..k].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn skk() -> Proof {
        let a = "0 = 0";
        Proof::from_formulas(
            [
                format!(
                    "({a} -> (({a} -> {a}) -> {a})) -> (({a} -> ({a} -> {a})) -> ({a} -> {a}))"
                ),
                format!("{a} -> (({a} -> {a}) -> {a})"),
                format!("({a} -> ({a} -> {a})) -> ({a} -> {a})"),
                format!("{a} -> ({a} -> {a})"),
                format!("{a} -> {a}"),
            ]
            .iter()
            .map(|s| f(s)),
        )
    }

    #[test]
    fn q_has_the_standard_axioms() {
        let q = Theory::q();
        assert_eq!(q.axioms.len(), 7);
        assert!(q.axioms.contains(&f("forall x. ~(S(x) = 0)")));
        assert!(q
            .axioms
            .contains(&f("forall x. forall y. (S(x) = S(y) -> x = y)")));
    }

    #[test]
    fn skk_proof_checks() {
        let c = check_proof(&skk(), &Theory::q()).unwrap();
        assert_eq!(c.conclusion, f("0 = 0 -> 0 = 0"));
        assert_eq!(c.justifications[2], Justification::Mp(1, 0));
        assert_eq!(c.justifications[4], Justification::Mp(3, 2));
    }

    #[test]
    fn single_axiom_line() {
        let p = Proof::from_formulas([f("forall x. ~(S(x) = 0)")]);
        let c = check_proof(&p, &Theory::q()).unwrap();
        assert_eq!(
            c.justifications,
            vec![Justification::Axiom(AxiomKind::Theory(0))]
        );
        assert!(check_proof(&p, &Theory::logic()).is_err());
    }

    #[test]
    fn forward_references_are_rejected() {
        let mut p = skk();
        p.lines.swap(1, 2);
        p.lines[1].hint = Some(Hint::Mp(2, 0));
        assert_eq!(
            check_proof(&p, &Theory::q()),
            Err(ProofError::Rejected {
                line: 1,
                reason: Rejection::BadMp
            })
        );
    }

    #[test]
    fn wrong_hints_are_reported_not_fatal() {
        let mut p = skk();
        p.lines[4].hint = Some(Hint::Gen(0));
        let c = check_proof(&p, &Theory::q()).unwrap();
        assert_eq!(c.wrong_hints, vec![4]);
    }

    #[test]
    fn generalization_is_unrestricted() {
        let p = Proof::from_formulas([f("x = x"), f("forall x. x = x")]);
        let c = check_proof(&p, &Theory::logic()).unwrap();
        assert_eq!(c.justifications[1], Justification::Gen(0));
    }

    #[test]
    fn prefixes() {
        let p = skk();
        assert_eq!(prefix(&p, p.len()).unwrap(), p);
        for k in 1..=p.len() {
            let q = prefix(&p, k).unwrap();
            assert_eq!(q.len(), k);
            assert_eq!(
                check_proof(&q, &Theory::q()).unwrap().conclusion,
                p.lines[k - 1].formula
            );
        }
        assert!(prefix(&p, 0).is_err());
        assert!(prefix(&p, 6).is_err());
    }

    #[test]
    fn extra_axioms_keep_proofs_valid() {
        let t = Theory::q().with_axiom(f("0 = S(0)"));
        assert!(check_proof(&skk(), &t).is_ok());
    }
}
