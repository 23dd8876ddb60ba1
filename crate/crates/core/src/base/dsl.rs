//! Plain-text base files.
//!
//! ```text
//! # Socrates
//! vocab: preds H/1, M/1
//! vocab: terms s
//! vocab: reserve 1
//! rule: => H(s)
//! rule: H(x) => M(x)
//! ```
//!
//! Identifiers listed under `vocab: terms` are constants; any other
//! identifier inside a rule is a schema variable and is instantiated over the
//! declared terms. Without a `preds` line the predicates are read off the
//! rules; without a `terms` line the terms are the closed rule arguments.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use super::{AtomicRule, Base, BaseError, RuleSchema};
use crate::syntax::{parse_formula_in, parse_term_in, print_term, Atom, Formula, Symbols, Term};
use crate::vocab::Vocabulary;

#[derive(Debug, Error)]
pub enum DslError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error(transparent)]
    Base(#[from] BaseError),
}

fn line_err(line: usize, msg: impl Into<String>) -> DslError {
    DslError::Line {
        line,
        msg: msg.into(),
    }
}

/// A parsed base file: its vocabulary, the schemas as written, and the
/// ground base obtained by instantiating them.
#[derive(Clone, Debug)]
pub struct BaseFile {
    pub vocabulary: Vocabulary,
    pub schemas: Vec<RuleSchema>,
    pub base: Base,
}

struct RawRule {
    line: usize,
    premises: Vec<String>,
    conclusion: String,
}

pub fn parse_base_file(text: &str) -> Result<BaseFile, DslError> {
    let mut preds: Option<Vec<(String, usize)>> = None;
    let mut terms: Option<Vec<Term>> = None;
    let mut reserve = 0usize;
    let mut raw = Vec::new();

    for (idx, full) in text.lines().enumerate() {
        let line = idx + 1;
        let content = full.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("vocab:") {
            let rest = rest.trim();
            if let Some(list) = rest.strip_prefix("preds") {
                preds = Some(parse_preds(list, line)?);
            } else if let Some(list) = rest.strip_prefix("terms") {
                terms = Some(parse_terms(list, line)?);
            } else if let Some(n) = rest.strip_prefix("reserve") {
                reserve = n
                    .trim()
                    .parse()
                    .map_err(|_| line_err(line, "reserve expects a natural number"))?;
            } else {
                return Err(line_err(line, format!("unknown vocab entry `{rest}`")));
            }
        } else if let Some(rest) = content.strip_prefix("rule:") {
            let (lhs, rhs) = rest
                .split_once("=>")
                .ok_or_else(|| line_err(line, "rule needs `=>`"))?;
            raw.push(RawRule {
                line,
                premises: split_top(lhs)
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect(),
                conclusion: rhs.trim().to_string(),
            });
        } else {
            return Err(line_err(line, "expected `vocab:` or `rule:`"));
        }
    }

    let mut constants = BTreeSet::new();
    for t in terms.iter().flatten() {
        collect_consts(t, &mut constants);
    }
    let symbols = Symbols {
        constants,
        predicates: None,
    };

    let mut schemas = Vec::new();
    for r in &raw {
        let atom = |s: &str| parse_atom(s, &symbols, r.line);
        schemas.push(RuleSchema {
            premises: r
                .premises
                .iter()
                .map(|p| atom(p))
                .collect::<Result<_, _>>()?,
            conclusion: atom(&r.conclusion)?,
        });
    }

    let predicates = preds.unwrap_or_else(|| {
        let mut seen: Vec<(String, usize)> = Vec::new();
        for s in &schemas {
            for a in s.premises.iter().chain(std::iter::once(&s.conclusion)) {
                let key = (a.pred.clone(), a.args.len());
                if !seen.contains(&key) {
                    seen.push(key);
                }
            }
        }
        seen
    });
    let terms = terms.unwrap_or_else(|| {
        let mut seen: Vec<Term> = Vec::new();
        for s in &schemas {
            for a in s.premises.iter().chain(std::iter::once(&s.conclusion)) {
                for t in a.args.iter().filter(|t| t.is_closed()) {
                    if !seen.contains(t) {
                        seen.push(t.clone());
                    }
                }
            }
        }
        seen
    });
    let vocabulary = Vocabulary {
        predicates,
        terms,
        reserve,
    };

    let mut rules = BTreeSet::new();
    for s in &schemas {
        rules.extend(s.instantiate(&vocabulary));
    }
    let base = Base::new(rules)?;
    base.check_vocabulary(&vocabulary)?;
    Ok(BaseFile {
        vocabulary,
        schemas,
        base,
    })
}

/// Canonical text for a ground base: vocabulary header, then one sorted
/// `rule:` line per rule. Parsing the output gives back the same base.
pub fn serialize_base(v: &Vocabulary, b: &Base) -> String {
    let mut out = String::new();
    let preds: Vec<String> = v
        .predicates
        .iter()
        .map(|(p, n)| format!("{p}/{n}"))
        .collect();
    let _ = writeln!(out, "vocab: preds {}", preds.join(", "));
    if !v.terms.is_empty() {
        let terms: Vec<String> = v.terms.iter().map(print_term).collect();
        let _ = writeln!(out, "vocab: terms {}", terms.join(", "));
    }
    if v.reserve > 0 {
        let _ = writeln!(out, "vocab: reserve {}", v.reserve);
    }
    for r in b.rules() {
        let _ = writeln!(out, "rule: {}", render_rule(r));
    }
    out
}

fn render_rule(r: &AtomicRule) -> String {
    r.to_string()
}

fn parse_preds(list: &str, line: usize) -> Result<Vec<(String, usize)>, DslError> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, arity) = match item.split_once('/') {
            Some((n, a)) => (
                n.trim(),
                a.trim()
                    .parse()
                    .map_err(|_| line_err(line, format!("bad arity in `{item}`")))?,
            ),
            None => (item, 0),
        };
        if !name.chars().all(|c| c.is_alphanumeric() || c == '_') || name.is_empty() {
            return Err(line_err(line, format!("bad predicate name `{name}`")));
        }
        out.push((name.to_string(), arity));
    }
    Ok(out)
}

fn parse_terms(list: &str, line: usize) -> Result<Vec<Term>, DslError> {
    let items = split_top(list);
    let bare: Vec<String> = items
        .iter()
        .filter(|s| s.chars().all(|c| c.is_alphanumeric() || c == '_'))
        .filter(|s| s.chars().next().is_some_and(char::is_alphabetic))
        .cloned()
        .collect();
    let symbols = Symbols::with_constants(bare);
    items
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| {
            let t = parse_term_in(s, &symbols).map_err(|e| line_err(line, e.to_string()))?;
            if !t.is_closed() {
                return Err(line_err(line, format!("term `{s}` is not closed")));
            }
            Ok(t)
        })
        .collect()
}

fn parse_atom(text: &str, symbols: &Symbols, line: usize) -> Result<Atom, DslError> {
    match parse_formula_in(text, symbols).map_err(|e| line_err(line, e.to_string()))? {
        Formula::Atom(a) => Ok(a),
        _ => Err(line_err(line, format!("`{text}` is not an atom"))),
    }
}

/// Splits on commas that are not inside parentheses.
fn split_top(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur.trim().to_string());
    out
}

fn collect_consts(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Const(c) => {
            out.insert(c.clone());
        }
        Term::Succ(a) => collect_consts(a, out),
        Term::Plus(a, b) | Term::Times(a, b) => {
            collect_consts(a, out);
            collect_consts(b, out);
        }
        Term::Zero | Term::Var(_) => {}
    }
}
