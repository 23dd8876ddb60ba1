//! Programmatic proof construction, and proofs deciding equations between
//! numerals in Q.

use std::collections::HashMap;

use thiserror::Error;

use super::{Hint, Proof, ProofLine, Theory};
use crate::syntax::{numeral, Formula, Term};

/// Largest numeral `prove_numeral_atom` accepts.
pub const NUMERAL_BOUND: u64 = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("numeral {0} exceeds the bound {NUMERAL_BOUND}")]
pub struct BoundExceeded(pub u64);

/// Appends lines with hints; a formula already present is not repeated.
#[derive(Default)]
pub struct ProofBuilder {
    lines: Vec<ProofLine>,
    index: HashMap<Formula, usize>,
}

impl ProofBuilder {
    pub fn new() -> ProofBuilder {
        ProofBuilder::default()
    }

    fn push(&mut self, f: Formula, hint: Hint) -> usize {
        if let Some(&i) = self.index.get(&f) {
            return i;
        }
        let i = self.lines.len();
        self.index.insert(f.clone(), i);
        self.lines.push(ProofLine {
            formula: f,
            hint: Some(hint),
        });
        i
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.lines[i].formula
    }

    /// Adds an axiom (logical or of the theory; the checker decides).
    pub fn axiom(&mut self, f: Formula) -> usize {
        self.push(f, Hint::Axiom)
    }

    /// From line `a` (`φ`) and line `ab` (`φ → ψ`), adds `ψ`.
    pub fn mp(&mut self, a: usize, ab: usize) -> usize {
        let psi = match self.formula(ab) {
            Formula::Imp(l, r) if **l == *self.formula(a) => (**r).clone(),
            other => panic!("mp: `{other}` is not an implication from line {a}"),
        };
        self.push(psi, Hint::Mp(a, ab))
    }

    pub fn gen(&mut self, i: usize, x: &str) -> usize {
        let f = Formula::forall(x, self.formula(i).clone());
        self.push(f, Hint::Gen(i))
    }

    /// From `∀x φ` at line `i`, adds `φ[x ↦ t]`.
    pub fn instantiate(&mut self, i: usize, t: &Term) -> usize {
        let Formula::Forall(x, body) = self.formula(i).clone() else {
            panic!("instantiate: line {i} is not universal");
        };
        let inst = body.replace_free(&x, t);
        let ax = self.axiom(Formula::imp(self.formula(i).clone(), inst));
        self.mp(i, ax)
    }

    /// From `φ → ψ` and `ψ → χ`, adds `φ → χ`.
    pub fn imp_trans(&mut self, ab: usize, bc: usize) -> usize {
        let (Formula::Imp(a, b), Formula::Imp(b2, c)) =
            (self.formula(ab).clone(), self.formula(bc).clone())
        else {
            panic!("imp_trans needs two implications");
        };
        assert_eq!(b, b2, "imp_trans: middle formulas differ");
        let (a, c) = (*a, *c);
        let k = self.axiom(Formula::imp(
            self.formula(bc).clone(),
            Formula::imp(a.clone(), self.formula(bc).clone()),
        ));
        let a_bc = self.mp(bc, k);
        let s = self.axiom(Formula::imp(
            self.formula(a_bc).clone(),
            Formula::imp(self.formula(ab).clone(), Formula::imp(a, c)),
        ));
        let step = self.mp(a_bc, s);
        self.mp(ab, step)
    }

    pub fn finish(self) -> Proof {
        Proof { lines: self.lines }
    }

    /// Ends the proof at line `i`, dropping later lines.
    pub fn finish_at(mut self, i: usize) -> Proof {
        self.lines.truncate(i + 1);
        Proof { lines: self.lines }
    }
}

/// A Q-proof of `m̄ = n̄` if `m = n`, and of `¬(m̄ = n̄)` otherwise.
pub fn prove_numeral_atom(m: u64, n: u64) -> Result<Proof, BoundExceeded> {
    for v in [m, n] {
        if v > NUMERAL_BOUND {
            return Err(BoundExceeded(v));
        }
    }
    let mut b = ProofBuilder::new();
    if m == n {
        let i = b.axiom(Formula::eq(numeral(m), numeral(n)));
        return Ok(b.finish_at(i));
    }
    let q = Theory::q();
    let low = m.min(n);
    let k = m.max(n) - low;
    // ¬(S^k 0 = 0) from the first axiom.
    let q1 = b.axiom(q.axioms[0].clone());
    let mut cur = b.instantiate(q1, &numeral(k - 1));
    if m < n {
        cur = flip(&mut b, cur, &numeral(k));
    }
    // Lift through successors with the injectivity axiom.
    let q2 = b.axiom(q.axioms[1].clone());
    for step in 0..low {
        let (a, c) = if m > n {
            (numeral(k + step), numeral(step))
        } else {
            (numeral(step), numeral(k + step))
        };
        let inner = b.instantiate(q2, &a);
        let inj = b.instantiate(inner, &c);
        cur = b.imp_trans(inj, cur);
    }
    Ok(b.finish_at(cur))
}

/// From `¬(t = 0)` at line `neg`, derives `¬(0 = t)`.
fn flip(b: &mut ProofBuilder, neg: usize, t: &Term) -> usize {
    let zt = Formula::eq(Term::Zero, t.clone());
    let zz = Formula::eq(Term::Zero, Term::Zero);
    let tz = Formula::eq(t.clone(), Term::Zero);
    // 0 = t → (0 = 0 → t = 0)
    let cong = b.axiom(Formula::imp(
        zt.clone(),
        Formula::imp(zz.clone(), tz.clone()),
    ));
    let s = b.axiom(Formula::imp(
        b.formula(cong).clone(),
        Formula::imp(
            Formula::imp(zt.clone(), zz.clone()),
            Formula::imp(zt.clone(), tz),
        ),
    ));
    let dist = b.mp(cong, s);
    let refl = b.axiom(zz.clone());
    let k = b.axiom(Formula::imp(zz.clone(), Formula::imp(zt, zz)));
    let weak = b.mp(refl, k);
    let sym = b.mp(weak, dist);
    b.imp_trans(sym, neg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::check_proof;

    #[test]
    fn examples() {
        let q = Theory::q();
        let p = prove_numeral_atom(2, 2).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(
            check_proof(&p, &q).unwrap().conclusion,
            Formula::eq(numeral(2), numeral(2))
        );

        let p = prove_numeral_atom(0, 1).unwrap();
        let goal = Formula::not(Formula::eq(Term::Zero, numeral(1)));
        assert_eq!(check_proof(&p, &q).unwrap().conclusion, goal);

        let p = prove_numeral_atom(3, 5).unwrap();
        let goal = Formula::not(Formula::eq(numeral(3), numeral(5)));
        assert_eq!(check_proof(&p, &q).unwrap().conclusion, goal);
    }

    #[test]
    fn hints_are_accurate() {
        for (m, n) in [(4, 1), (1, 4), (0, 3), (3, 0)] {
            let c = check_proof(&prove_numeral_atom(m, n).unwrap(), &Theory::q()).unwrap();
            assert!(c.wrong_hints.is_empty());
        }
    }

    #[test]
    fn bound() {
        assert!(prove_numeral_atom(NUMERAL_BOUND + 1, 0).is_err());
    }
}
