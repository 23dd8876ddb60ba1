//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! formula  ::= disj [ "->" formula ]
//! disj     ::= conj { "\/" conj }
//! conj     ::= unary { "/\" unary }
//! unary    ::= "~" unary
//!            | ("forall" | "exists") IDENT [ "<" term ] "." formula
//!            | primary
//! primary  ::= "_|_" | term ("=" | "<") term | "(" formula ")"
//!            | IDENT [ "(" term { "," term } ")" ]
//! term     ::= prod { "+" prod }
//! prod     ::= factor { "*" factor }
//! factor   ::= "0" | NUMBER | "S" "(" term ")" | IDENT | "(" term ")"
//! ```
//!
//! A `NUMBER` above 4096 stands for a product-and-sum term of the same value
//! rather than a unary numeral.
//!
//! Unicode aliases: `→ ∧ ∨ ¬ ⊥ ∀ ∃ ×`; `&` and `|` also work for `/\` and `\/`.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{Atom, Formula, Surface, Term};

/// Literals up to this value become unary numerals; larger ones use the
/// logarithmic form of `compact_numeral`.
pub const UNARY_LITERAL_MAX: u64 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{symbol}` at {pos}")]
    UnknownSymbol { pos: usize, symbol: String },
}

/// Parsing context: which identifiers denote constants and, optionally,
/// which predicate names are allowed.
#[derive(Clone, Debug, Default)]
pub struct Symbols {
    pub constants: BTreeSet<String>,
    pub predicates: Option<BTreeSet<String>>,
}

impl Symbols {
    pub fn with_constants<I, S>(constants: I) -> Symbols
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Symbols {
            constants: constants.into_iter().map(Into::into).collect(),
            predicates: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    Comma,
    Dot,
    Arrow,
    AndOp,
    OrOp,
    Not,
    Bot,
    Forall,
    Exists,
    Eq,
    Lt,
    Plus,
    Times,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = if rest.starts_with("->") {
            i += 2;
            Tok::Arrow
        } else if rest.starts_with("/\\") {
            i += 2;
            Tok::AndOp
        } else if rest.starts_with("\\/") {
            i += 2;
            Tok::OrOp
        } else if rest.starts_with("_|_") {
            i += 3;
            Tok::Bot
        } else if c.is_ascii_digit() {
            let mut n: u64 = 0;
            while i < chars.len() && chars[i].is_ascii_digit() {
                n = n
                    .saturating_mul(10)
                    .saturating_add(u64::from(chars[i].to_digit(10).unwrap()));
                i += 1;
            }
            if n == u64::MAX {
                return Err(ParseError::Syntax {
                    pos: start,
                    msg: "numeric literal too large".into(),
                });
            }
            Tok::Num(n)
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut name = String::new();
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                name.push(chars[i]);
                i += 1;
            }
            match name.as_str() {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                _ => Tok::Ident(name),
            }
        } else {
            i += 1;
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '&' | '∧' => Tok::AndOp,
                '|' | '∨' => Tok::OrOp,
                '~' | '¬' => Tok::Not,
                '⊥' => Tok::Bot,
                '→' => Tok::Arrow,
                '∀' => Tok::Forall,
                '∃' => Tok::Exists,
                '=' => Tok::Eq,
                '<' => Tok::Lt,
                '+' => Tok::Plus,
                '*' | '×' | '·' => Tok::Times,
                other => {
                    return Err(ParseError::UnknownSymbol {
                        pos: start,
                        symbol: other.to_string(),
                    })
                }
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    symbols: &'a Symbols,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn formula(&mut self) -> PResult<Surface> {
        let lhs = self.disj()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            Ok(Surface::Imp(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn disj(&mut self) -> PResult<Surface> {
        let mut lhs = self.conj()?;
        while self.eat(&Tok::OrOp) {
            let rhs = self.conj()?;
            lhs = Surface::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> PResult<Surface> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::AndOp) {
            let rhs = self.unary()?;
            lhs = Surface::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Surface> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Surface::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Forall) | Some(Tok::Exists) => {
                let universal = self.peek() == Some(&Tok::Forall);
                self.pos += 1;
                let x = match self.peek() {
                    Some(Tok::Ident(name)) if name != "S" => name.clone(),
                    _ => return self.err("expected a variable after quantifier"),
                };
                self.pos += 1;
                let bound = if self.eat(&Tok::Lt) {
                    Some(self.term()?)
                } else {
                    None
                };
                self.expect(Tok::Dot, "`.` after quantified variable")?;
                let body = Box::new(self.formula()?);
                Ok(match (universal, bound) {
                    (true, None) => Surface::Forall(x, body),
                    (false, None) => Surface::Exists(x, body),
                    (true, Some(t)) => Surface::BoundedForall(x, t, body),
                    (false, Some(t)) => Surface::BoundedExists(x, t, body),
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> PResult<Surface> {
        if self.eat(&Tok::Bot) {
            return Ok(Surface::Bot);
        }
        let save = self.pos;
        if let Ok(lhs) = self.term() {
            if self.eat(&Tok::Eq) {
                let rhs = self.term()?;
                return Ok(Surface::Atom(Atom::eq(lhs, rhs)));
            }
            if self.eat(&Tok::Lt) {
                let rhs = self.term()?;
                return Ok(Surface::Less(lhs, rhs));
            }
        }
        self.pos = save;
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(name)) => {
                let at = self.offset();
                if name == "S" {
                    return self.err("`S` is the successor symbol, not a predicate");
                }
                if let Some(allowed) = &self.symbols.predicates {
                    if !allowed.contains(&name) {
                        return Err(ParseError::UnknownSymbol {
                            pos: at,
                            symbol: name,
                        });
                    }
                }
                self.pos += 1;
                let mut args = Vec::new();
                if self.eat(&Tok::LParen) {
                    loop {
                        args.push(self.term()?);
                        if self.eat(&Tok::Comma) {
                            continue;
                        }
                        self.expect(Tok::RParen, "`)` or `,` in argument list")?;
                        break;
                    }
                }
                Ok(Surface::Atom(Atom::new(name, args)))
            }
            Some(_) => self.err("expected a formula"),
            None => self.err("unexpected end of input"),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let mut lhs = self.prod()?;
        while self.eat(&Tok::Plus) {
            let rhs = self.prod()?;
            lhs = Term::plus(lhs, rhs);
        }
        Ok(lhs)
    }

    fn prod(&mut self) -> PResult<Term> {
        let mut lhs = self.factor()?;
        while self.eat(&Tok::Times) {
            let rhs = self.factor()?;
            lhs = Term::times(lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> PResult<Term> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                if n <= UNARY_LITERAL_MAX {
                    Ok(super::numeral(n))
                } else {
                    Ok(super::compact_numeral(&n.into()))
                }
            }
            Some(Tok::Ident(name)) if name == "S" => {
                self.pos += 1;
                self.expect(Tok::LParen, "`(` after S")?;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Term::succ(t))
            }
            Some(Tok::Ident(name)) => {
                if self.toks.get(self.pos + 1).map(|(_, t)| t) == Some(&Tok::LParen) {
                    return self.err("function application in term position");
                }
                self.pos += 1;
                if self.symbols.constants.contains(&name) {
                    Ok(Term::Const(name))
                } else {
                    Ok(Term::Var(name))
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => self.err("expected a term"),
        }
    }
}

fn run<T>(
    text: &str,
    symbols: &Symbols,
    f: impl FnOnce(&mut Parser<'_>) -> PResult<T>,
) -> PResult<T> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.chars().count(),
        symbols,
    };
    let out = f(&mut p)?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

/// Parses a formula of the arithmetic language (no constants) and elaborates
/// the derived forms.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_formula_in(text, &Symbols::default())
}

pub fn parse_formula_in(text: &str, symbols: &Symbols) -> Result<Formula, ParseError> {
    run(text, symbols, |p| p.formula()).map(|s| s.elaborate())
}

pub fn parse_term_in(text: &str, symbols: &Symbols) -> Result<Term, ParseError> {
    run(text, symbols, |p| p.term())
}
