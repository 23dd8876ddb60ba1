//! Gödel numbering.
//!
//! A term or formula is written in Polish notation as a string over a fixed
//! alphabet of 55 symbols, and the string `d1 d2 ... dk` is read as the base-59
//! numeral `d1·59^(k-1) + ... + dk`. No symbol has index 0, so every string
//! has a unique code and the length of a string can be read off its code.
//! Concatenation is `code(uv) = code(u)·59^|v| + code(v)`; as 59 is prime,
//! "is a power of 59" is expressible with bounded quantifiers.
//!
//! Variables are spelled out: `VAR`, their characters, `END`.
//!
//! Finite sequences use the β-function. `[y0, ..., y(n-1)]` is coded as
//! `⟨n, ⟨c, d⟩⟩` with Cantor pairing, where `d` is the least multiple of
//! `lcm(1..n)` that is at least every `yi` (and at least 1), and `c` is the
//! least number with `c mod (1 + (i+1)·d) = yi` for all `i`. Every natural
//! number is a pair, so every number is read as some sequence; sequences
//! produced by [`code_sequence`] are the canonical ones.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::syntax::{Atom, Formula, Term, EQ};

pub const CODING_VERSION: &str = "v1";

/// Radix of the string coding.
pub const RADIX: u32 = 59;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodingError {
    #[error("constant `{0}` is outside the arithmetic signature")]
    Constant(String),
    #[error("predicate `{0}` with {1} arguments has no code")]
    Predicate(String, usize),
    #[error("variable name `{0}` uses characters outside the coding alphabet")]
    VariableName(String),
    #[error("index {index} out of range for a sequence of length {len}")]
    OutOfRange { index: usize, len: usize },
    #[error("sequence length {0} is too large to materialize")]
    TooLong(BigUint),
}

/// Symbol indices. Characters of variable names follow from [`FIRST_LETTER`].
pub mod sym {
    pub const ZERO: u32 = 1;
    pub const SUCC: u32 = 2;
    pub const PLUS: u32 = 3;
    pub const TIMES: u32 = 4;
    pub const EQ: u32 = 5;
    pub const BOT: u32 = 6;
    pub const IMP: u32 = 7;
    pub const AND: u32 = 8;
    pub const FORALL: u32 = 9;
    pub const VAR: u32 = 10;
    pub const END: u32 = 11;
    pub const FORM: u32 = 12;
    pub const SEQ: u32 = 13;
    pub const ELT: u32 = 14;
    pub const AX: u32 = 15;
    pub const MP: u32 = 16;
    pub const GEN: u32 = 17;
    pub const FIRST_LETTER: u32 = 18;
    pub const FIRST_DIGIT: u32 = 44;
    pub const UNDERSCORE: u32 = 54;
    pub const PRIME: u32 = 55;
    pub const LAST: u32 = 55;
}

/// The predicates of the arithmetized syntax, their symbols and arities.
pub const DEFINED_PREDICATES: [(&str, u32, usize); 6] = [
    ("Form", sym::FORM, 1),
    ("Seq", sym::SEQ, 2),
    ("Elt", sym::ELT, 3),
    ("Ax", sym::AX, 1),
    ("MP", sym::MP, 3),
    ("Gen", sym::GEN, 2),
];

/// One row of the published coding table.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TableRow {
    pub index: u32,
    pub symbol: String,
    pub role: &'static str,
}

pub fn coding_table() -> Vec<TableRow> {
    let mut rows = vec![
        row(sym::ZERO, "0", "zero"),
        row(sym::SUCC, "S", "successor"),
        row(sym::PLUS, "+", "addition"),
        row(sym::TIMES, "*", "multiplication"),
        row(sym::EQ, "=", "equality"),
        row(sym::BOT, "_|_", "falsum"),
        row(sym::IMP, "->", "implication"),
        row(sym::AND, "/\\", "conjunction"),
        row(sym::FORALL, "forall", "universal quantifier"),
        row(sym::VAR, "VAR", "start of a variable name"),
        row(sym::END, "END", "end of a variable name"),
    ];
    for (name, idx, _) in DEFINED_PREDICATES {
        rows.push(row(idx, name, "defined predicate"));
    }
    for c in 'a'..='z' {
        rows.push(row(
            char_symbol(c).expect("letter"),
            &c.to_string(),
            "name character",
        ));
    }
    for c in '0'..='9' {
        rows.push(row(
            char_symbol(c).expect("digit"),
            &c.to_string(),
            "name character",
        ));
    }
    rows.push(row(sym::UNDERSCORE, "_", "name character"));
    rows.push(row(sym::PRIME, "'", "name character"));
    rows
}

fn row(index: u32, symbol: &str, role: &'static str) -> TableRow {
    TableRow {
        index,
        symbol: symbol.to_string(),
        role,
    }
}

fn char_symbol(c: char) -> Option<u32> {
    match c {
        'a'..='z' => Some(sym::FIRST_LETTER + (c as u32 - 'a' as u32)),
        '0'..='9' => Some(sym::FIRST_DIGIT + (c as u32 - '0' as u32)),
        '_' => Some(sym::UNDERSCORE),
        '\'' => Some(sym::PRIME),
        _ => None,
    }
}

fn symbol_char(s: u32) -> Option<char> {
    match s {
        sym::FIRST_LETTER..=43 => char::from_u32('a' as u32 + s - sym::FIRST_LETTER),
        sym::FIRST_DIGIT..=53 => char::from_u32('0' as u32 + s - sym::FIRST_DIGIT),
        sym::UNDERSCORE => Some('_'),
        sym::PRIME => Some('\''),
        _ => None,
    }
}

/// The symbol string of a variable: `VAR`, its characters, `END`.
pub fn variable_symbols(x: &str) -> Result<Vec<u32>, CodingError> {
    let mut out = vec![sym::VAR];
    for c in x.chars() {
        out.push(char_symbol(c).ok_or_else(|| CodingError::VariableName(x.to_string()))?);
    }
    if x.is_empty() {
        return Err(CodingError::VariableName(String::new()));
    }
    out.push(sym::END);
    Ok(out)
}

pub fn term_symbols(t: &Term) -> Result<Vec<u32>, CodingError> {
    let mut out = Vec::new();
    push_term(t, &mut out)?;
    Ok(out)
}

fn push_term(t: &Term, out: &mut Vec<u32>) -> Result<(), CodingError> {
    match t {
        Term::Zero => out.push(sym::ZERO),
        Term::Succ(a) => {
            out.push(sym::SUCC);
            push_term(a, out)?;
        }
        Term::Plus(a, b) | Term::Times(a, b) => {
            out.push(if matches!(t, Term::Plus(..)) {
                sym::PLUS
            } else {
                sym::TIMES
            });
            push_term(a, out)?;
            push_term(b, out)?;
        }
        Term::Var(x) => out.extend(variable_symbols(x)?),
        Term::Const(c) => return Err(CodingError::Constant(c.clone())),
    }
    Ok(())
}

pub fn formula_symbols(f: &Formula) -> Result<Vec<u32>, CodingError> {
    let mut out = Vec::new();
    push_formula(f, &mut out)?;
    Ok(out)
}

fn predicate_symbol(a: &Atom) -> Result<u32, CodingError> {
    if a.pred == EQ && a.args.len() == 2 {
        return Ok(sym::EQ);
    }
    DEFINED_PREDICATES
        .iter()
        .find(|(name, _, arity)| *name == a.pred && *arity == a.args.len())
        .map(|&(_, s, _)| s)
        .ok_or_else(|| CodingError::Predicate(a.pred.clone(), a.args.len()))
}

fn push_formula(f: &Formula, out: &mut Vec<u32>) -> Result<(), CodingError> {
    match f {
        Formula::Bot => out.push(sym::BOT),
        Formula::Atom(a) => {
            out.push(predicate_symbol(a)?);
            for t in &a.args {
                push_term(t, out)?;
            }
        }
        Formula::Imp(a, b) | Formula::And(a, b) => {
            out.push(if matches!(f, Formula::Imp(..)) {
                sym::IMP
            } else {
                sym::AND
            });
            push_formula(a, out)?;
            push_formula(b, out)?;
        }
        Formula::Forall(x, body) => {
            out.push(sym::FORALL);
            out.extend(variable_symbols(x)?);
            push_formula(body, out)?;
        }
    }
    Ok(())
}

/// The number whose base-59 digits are `digits`.
pub fn code_string(digits: &[u32]) -> BigUint {
    digits
        .iter()
        .fold(BigUint::zero(), |acc, &d| acc * RADIX + d)
}

/// Base-59 digits of `c`, most significant first. `None` if a digit is 0
/// or exceeds the alphabet.
pub fn string_of_code(c: &BigUint) -> Option<Vec<u32>> {
    let digits: Vec<u32> = if c.is_zero() {
        Vec::new()
    } else {
        c.to_radix_be(RADIX).into_iter().map(u32::from).collect()
    };
    digits
        .iter()
        .all(|&d| (1..=sym::LAST).contains(&d))
        .then_some(digits)
}

pub fn code_symbol(s: u32) -> BigUint {
    BigUint::from(s)
}

pub fn code_term(t: &Term) -> Result<BigUint, CodingError> {
    Ok(code_string(&term_symbols(t)?))
}

pub fn code_formula(f: &Formula) -> Result<BigUint, CodingError> {
    Ok(code_string(&formula_symbols(f)?))
}

pub fn decode_formula(c: &BigUint) -> Option<Formula> {
    let digits = string_of_code(c)?;
    let mut r = Reader { s: &digits, pos: 0 };
    let f = r.formula()?;
    (r.pos == digits.len()).then_some(f)
}

pub fn decode_term(c: &BigUint) -> Option<Term> {
    let digits = string_of_code(c)?;
    let mut r = Reader { s: &digits, pos: 0 };
    let t = r.term()?;
    (r.pos == digits.len()).then_some(t)
}

/// Whether `c` codes a formula.
pub fn is_formula_code(c: &BigUint) -> bool {
    decode_formula(c).is_some()
}

struct Reader<'a> {
    s: &'a [u32],
    pos: usize,
}

impl Reader<'_> {
    fn next(&mut self) -> Option<u32> {
        let d = *self.s.get(self.pos)?;
        self.pos += 1;
        Some(d)
    }

    fn variable(&mut self) -> Option<String> {
        let mut name = String::new();
        loop {
            match self.next()? {
                sym::END if !name.is_empty() => return Some(name),
                d => name.push(symbol_char(d)?),
            }
        }
    }

    fn term(&mut self) -> Option<Term> {
        match self.next()? {
            sym::ZERO => Some(Term::Zero),
            sym::SUCC => Some(Term::succ(self.term()?)),
            sym::PLUS => Some(Term::plus(self.term()?, self.term()?)),
            sym::TIMES => Some(Term::times(self.term()?, self.term()?)),
            sym::VAR => Some(Term::Var(self.variable()?)),
            _ => None,
        }
    }

    fn formula(&mut self) -> Option<Formula> {
        match self.next()? {
            sym::BOT => Some(Formula::Bot),
            sym::EQ => Some(Formula::eq(self.term()?, self.term()?)),
            sym::IMP => Some(Formula::imp(self.formula()?, self.formula()?)),
            sym::AND => Some(Formula::and(self.formula()?, self.formula()?)),
            sym::FORALL => {
                if self.next()? != sym::VAR {
                    return None;
                }
                let x = self.variable()?;
                Some(Formula::forall(x, self.formula()?))
            }
            d => {
                let &(name, _, arity) = DEFINED_PREDICATES.iter().find(|p| p.1 == d)?;
                let args = (0..arity)
                    .map(|_| self.term())
                    .collect::<Option<Vec<_>>>()?;
                Some(Formula::Atom(Atom::new(name, args)))
            }
        }
    }
}

/// `59^k` for the least `k` with `59^k > c`: the shift that appends a
/// string coded by `c`.
pub fn shift_for(c: &BigUint) -> BigUint {
    let mut w = BigUint::one();
    while &w <= c {
        w *= RADIX;
    }
    w
}

/// Code of the concatenation of the strings coded by `a` and `b`.
pub fn concat(a: &BigUint, b: &BigUint) -> BigUint {
    a * shift_for(b) + b
}

/// Cantor pairing `⟨a, b⟩ = (a+b)(a+b+1)/2 + b`.
pub fn pair(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    (&s * (&s + 1u32)) / 2u32 + b
}

pub fn unpair(c: &BigUint) -> (BigUint, BigUint) {
    // Largest s with s(s+1)/2 <= c.
    let mut s = (c * 8u32 + 1u32).sqrt();
    s = (s - 1u32) / 2u32;
    let tri = |s: &BigUint| (s * (s + 1u32)) / 2u32;
    while tri(&s) > *c {
        s -= 1u32;
    }
    while tri(&(&s + 1u32)) <= *c {
        s += 1u32;
    }
    let b = c - tri(&s);
    let a = &s - &b;
    (a, b)
}

fn lcm_upto(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc.lcm(&BigUint::from(k)))
}

/// The β-function: remainder of `c` modulo `1 + (i+1)·d`.
pub fn beta(c: &BigUint, d: &BigUint, i: usize) -> BigUint {
    c % (d * (i as u64 + 1) + 1u32)
}

pub fn code_sequence(xs: &[BigUint]) -> BigUint {
    let n = BigUint::from(xs.len());
    if xs.is_empty() {
        return pair(&n, &BigUint::zero());
    }
    let l = lcm_upto(xs.len());
    let need = xs
        .iter()
        .max()
        .cloned()
        .unwrap_or_default()
        .max(BigUint::one());
    let d = need.div_ceil(&l) * &l;
    let mut c = BigUint::zero();
    let mut m = BigUint::one();
    for (i, y) in xs.iter().enumerate() {
        let mi = &d * (i as u64 + 1) + 1u32;
        // c + m·t ≡ y (mod mi)
        let inv = (&m % &mi).modinv(&mi).expect("moduli are pairwise coprime");
        let diff = (y + &mi - (&c % &mi)) % &mi;
        let t = (diff * inv) % &mi;
        c += &m * t;
        m *= mi;
    }
    pair(&n, &pair(&c, &d))
}

/// Length component of a sequence code.
pub fn seq_len(p: &BigUint) -> BigUint {
    unpair(p).0
}

fn seq_len_usize(p: &BigUint) -> Result<usize, CodingError> {
    let n = seq_len(p);
    n.to_usize()
        .filter(|&n| n <= 1 << 20)
        .ok_or(CodingError::TooLong(n))
}

/// The `i`th element of the sequence coded by `p`.
pub fn elt(p: &BigUint, i: usize) -> Result<BigUint, CodingError> {
    let (n, r) = unpair(p);
    if BigUint::from(i) >= n {
        return Err(CodingError::OutOfRange {
            index: i,
            len: n.to_usize().unwrap_or(usize::MAX),
        });
    }
    let (c, d) = unpair(&r);
    Ok(beta(&c, &d, i))
}

pub fn decode_sequence(p: &BigUint) -> Result<Vec<BigUint>, CodingError> {
    let n = seq_len_usize(p)?;
    let (c, d) = unpair(&unpair(p).1);
    Ok((0..n).map(|i| beta(&c, &d, i)).collect())
}

/// Canonical code of the first `k` elements.
pub fn pref_code(p: &BigUint, k: usize) -> Result<BigUint, CodingError> {
    let n = seq_len_usize(p)?;
    if k == 0 || k > n {
        return Err(CodingError::OutOfRange { index: k, len: n });
    }
    let xs = decode_sequence(p)?;
    Ok(code_sequence(&xs[..k]))
}

/// Code of a proof: the sequence of its line codes.
pub fn code_proof(lines: &[Formula]) -> Result<BigUint, CodingError> {
    let codes = lines
        .iter()
        .map(code_formula)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(code_sequence(&codes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn golden_values() {
        let f = parse_formula("0 = 0").unwrap();
        assert_eq!(code_formula(&f).unwrap(), big(17465));
        assert_eq!(code_formula(&Formula::Bot).unwrap(), big(6));
        assert_eq!(decode_formula(&big(17465)), Some(f));
        assert_eq!(decode_formula(&big(0)), None);
        assert_eq!(decode_formula(&big(59)), None);
    }

    #[test]
    fn table_is_a_bijection_onto_the_alphabet() {
        let rows = coding_table();
        let mut idx: Vec<u32> = rows.iter().map(|r| r.index).collect();
        idx.sort_unstable();
        assert_eq!(idx, (1..=sym::LAST).collect::<Vec<_>>());
    }

    #[test]
    fn round_trips() {
        for s in [
            "forall x. x = x",
            "forall y'. ~(S(y') = 0)",
            "forall x_1. x_1 + 0 = x_1 /\\ _|_",
            "(0 = 0 -> _|_) -> 0 * S(0) = 0",
        ] {
            let f = parse_formula(s).unwrap();
            assert_eq!(decode_formula(&code_formula(&f).unwrap()), Some(f));
        }
        let t = Term::plus(Term::var("ab"), Term::succ(Term::Zero));
        assert_eq!(decode_term(&code_term(&t).unwrap()), Some(t));
    }

    #[test]
    fn uncodable_material() {
        assert!(matches!(
            code_term(&Term::constant("s")),
            Err(CodingError::Constant(_))
        ));
        assert!(matches!(
            code_formula(&Formula::prop("p")),
            Err(CodingError::Predicate(..))
        ));
        assert!(matches!(
            code_term(&Term::var("X")),
            Err(CodingError::VariableName(_))
        ));
        let form = Formula::Atom(Atom::new("Form", vec![Term::Zero]));
        assert_eq!(decode_formula(&code_formula(&form).unwrap()), Some(form));
    }

    #[test]
    fn concatenation() {
        let a = code_formula(&Formula::Bot).unwrap();
        let b = code_formula(&parse_formula("0 = 0").unwrap()).unwrap();
        let imp = concat(&concat(&big(u64::from(sym::IMP)), &a), &b);
        assert_eq!(
            imp,
            code_formula(&parse_formula("_|_ -> 0 = 0").unwrap()).unwrap()
        );
        assert_eq!(shift_for(&big(0)), big(1));
        assert_eq!(shift_for(&big(58)), big(59));
        assert_eq!(shift_for(&big(59)), big(59 * 59));
    }

    #[test]
    fn pairing() {
        for a in 0..30u64 {
            for b in 0..30u64 {
                let p = pair(&big(a), &big(b));
                assert_eq!(unpair(&p), (big(a), big(b)));
            }
        }
        assert_eq!(pair(&big(0), &big(0)), big(0));
        assert_eq!(pair(&big(1), &big(0)), big(1));
        assert_eq!(pair(&big(0), &big(1)), big(2));
    }

    #[test]
    fn sequences() {
        let xs = vec![big(17465), big(6), big(0), big(123456789)];
        let p = code_sequence(&xs);
        assert_eq!(seq_len(&p), big(4));
        for (i, x) in xs.iter().enumerate() {
            assert_eq!(&elt(&p, i).unwrap(), x);
        }
        assert_eq!(decode_sequence(&p).unwrap(), xs);
        assert!(elt(&p, 4).is_err());
        assert_eq!(pref_code(&p, 4).unwrap(), p);
        let q = pref_code(&p, 2).unwrap();
        assert_eq!(seq_len(&q), big(2));
        assert_eq!(decode_sequence(&q).unwrap(), xs[..2].to_vec());
        assert!(pref_code(&p, 0).is_err());
        assert_eq!(code_sequence(&[]), big(0));
        let abc = code_sequence(&[big(1), big(2), big(3)]);
        assert_eq!(elt(&abc, 1).unwrap(), big(2));
    }
}
