//! Proof files: one numbered line per formula, with an optional hint.
//!
//! ```text
//! # comment
//! 1: forall x. ~(S(x) = 0)                 # axiom
//! 2: (forall x. ~(S(x) = 0)) -> ~(S(0) = 0) # axiom
//! 3: ~(S(0) = 0)                           # mp 1,2
//! ```
//!
//! In `mp j,l` line `j` is the antecedent and line `l` the implication.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Hint, Proof, ProofLine};
use crate::syntax::{parse_formula, print_formula};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProofFileError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
}

fn err(line: usize, msg: impl Into<String>) -> ProofFileError {
    ProofFileError::Line {
        line,
        msg: msg.into(),
    }
}

pub fn parse_proof(text: &str) -> Result<Proof, ProofFileError> {
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (body, hint) = match trimmed.split_once('#') {
            Some((b, h)) => (b, Some(parse_hint(h.trim(), line)?)),
            None => (trimmed, None),
        };
        let (num, formula) = body
            .split_once(':')
            .ok_or_else(|| err(line, "expected `k: FORMULA`"))?;
        let k: usize = num
            .trim()
            .parse()
            .map_err(|_| err(line, format!("bad line number `{}`", num.trim())))?;
        if k != lines.len() + 1 {
            return Err(err(
                line,
                format!("expected line number {}, found {k}", lines.len() + 1),
            ));
        }
        let formula = parse_formula(formula.trim()).map_err(|e| err(line, e.to_string()))?;
        lines.push(ProofLine { formula, hint });
    }
    Ok(Proof { lines })
}

fn parse_hint(h: &str, line: usize) -> Result<Hint, ProofFileError> {
    let mut words = h.split_whitespace();
    let kind = words.next().unwrap_or("");
    let rest: String = words.collect::<Vec<_>>().join("");
    let num = |s: &str| -> Result<usize, ProofFileError> {
        match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n - 1),
            _ => Err(err(line, format!("bad line reference `{s}`"))),
        }
    };
    match kind {
        "axiom" => Ok(Hint::Axiom),
        "mp" => {
            let (j, l) = rest
                .split_once(',')
                .ok_or_else(|| err(line, "mp needs two line numbers"))?;
            Ok(Hint::Mp(num(j)?, num(l)?))
        }
        "gen" => Ok(Hint::Gen(num(&rest)?)),
        _ => Err(err(line, format!("unknown hint `{h}`"))),
    }
}

pub fn print_proof(p: &Proof) -> String {
    let mut out = String::new();
    for (i, l) in p.lines.iter().enumerate() {
        let _ = write!(out, "{}: {}", i + 1, print_formula(&l.formula));
        match l.hint {
            Some(Hint::Axiom) => out.push_str(" # axiom"),
            Some(Hint::Mp(j, k)) => {
                let _ = write!(out, " # mp {},{}", j + 1, k + 1);
            }
            Some(Hint::Gen(j)) => {
                let _ = write!(out, " # gen {}", j + 1);
            }
            None => {}
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{check_proof, Theory};

    const Q1: &str = "# Q1 instance\n1: forall x. ~(S(x) = 0) # axiom\n2: (forall x. ~(S(x) = 0)) -> ~(S(0) = 0) # axiom\n3: ~(S(0) = 0) # mp 1, 2\n";

    #[test]
    fn parse_and_check() {
        let p = parse_proof(Q1).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.lines[2].hint, Some(Hint::Mp(0, 1)));
        assert!(check_proof(&p, &Theory::q()).is_ok());
    }

    #[test]
    fn print_round_trips() {
        let p = parse_proof(Q1).unwrap();
        assert_eq!(parse_proof(&print_proof(&p)).unwrap(), p);
    }

    #[test]
    fn numbering_errors() {
        assert!(parse_proof("2: 0 = 0\n").is_err());
        assert!(parse_proof("1: 0 = 0 # mp 0,1\n").is_err());
        assert!(parse_proof("1 0 = 0\n").is_err());
    }
}
