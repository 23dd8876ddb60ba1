//! The arithmetized proof predicate and its ingredients, as formulas.
//!
//! `Form`, `Seq`, `Elt`, `Ax`, `MP` and `Gen` appear as atoms. The evaluator
//! decides them directly in oracle mode; in pure mode `Seq`, `Elt`, `MP` and
//! `Gen` are replaced by the arithmetic definitions of
//! [`pure_definitions`].
//!
//! `x ≤ t` is the elaborated `∃z (x + z = t)`; strict bounds are written as
//! `x ≤ t ∧ ¬ x = t`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::Serialize;

use crate::coding::{self, sym, CodingError};
use crate::delta0::{classify, Budget, Class, EvalError, Evaluator, Mode};
use crate::hilbert::{check_proof, prefix, Proof, Theory};
use crate::syntax::{numeral, Atom, Formula, Term};

fn atom(pred: &str, args: Vec<Term>) -> Formula {
    Formula::Atom(Atom::new(pred, args))
}

pub fn form(x: Term) -> Formula {
    atom("Form", vec![x])
}

pub fn seq(p: Term, n: Term) -> Formula {
    atom("Seq", vec![p, n])
}

pub fn elt(p: Term, i: Term, y: Term) -> Formula {
    atom("Elt", vec![p, i, y])
}

pub fn ax(x: Term) -> Formula {
    atom("Ax", vec![x])
}

pub fn mp(a: Term, b: Term, c: Term) -> Formula {
    atom("MP", vec![a, b, c])
}

pub fn gen(a: Term, c: Term) -> Formula {
    atom("Gen", vec![a, c])
}

/// `a ≤ b`.
pub fn le(a: Term, b: Term) -> Formula {
    Formula::less(a, b)
}

fn var(x: &str) -> Term {
    Term::Var(x.to_string())
}

fn ne(a: Term, b: Term) -> Formula {
    Formula::not(Formula::eq(a, b))
}

/// Hands out bound-variable names that avoid everything seen so far.
struct Names(BTreeSet<String>);

impl Names {
    fn avoiding<'a>(terms: impl IntoIterator<Item = &'a Term>) -> Names {
        Names(terms.into_iter().flat_map(Term::free_vars).collect())
    }

    fn take(&mut self, hint: &str) -> String {
        let mut name = hint.to_string();
        while self.0.contains(&name) {
            name.push('\'');
        }
        self.0.insert(name.clone());
        name
    }
}

/// `Line(p, i)`: the `i`th entry of `p` is a formula that is an axiom, or
/// follows by modus ponens from two earlier entries, or by generalization
/// from one.
pub fn build_line(p: Term, i: Term) -> Formula {
    let mut names = Names::avoiding([&p, &i]);
    let y = names.take("y");
    let j = names.take("j");
    let k = names.take("k");
    let y1 = names.take("y1");
    let y2 = names.take("y2");

    let mp_case = Formula::exists_below(
        j.clone(),
        i.clone(),
        Formula::and(
            ne(var(&j), i.clone()),
            Formula::exists_below(
                k.clone(),
                i.clone(),
                Formula::and(
                    ne(var(&k), i.clone()),
                    Formula::exists_below(
                        y1.clone(),
                        p.clone(),
                        Formula::and(
                            elt(p.clone(), var(&j), var(&y1)),
                            Formula::exists_below(
                                y2.clone(),
                                p.clone(),
                                Formula::and(
                                    elt(p.clone(), var(&k), var(&y2)),
                                    mp(var(&y1), var(&y2), var(&y)),
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        ),
    );
    let gen_case = Formula::exists_below(
        j.clone(),
        i.clone(),
        Formula::and(
            ne(var(&j), i.clone()),
            Formula::exists_below(
                y1.clone(),
                p.clone(),
                Formula::and(elt(p.clone(), var(&j), var(&y1)), gen(var(&y1), var(&y))),
            ),
        ),
    );
    Formula::exists_below(
        y.clone(),
        p.clone(),
        Formula::and_all(vec![
            elt(p, i, var(&y)),
            form(var(&y)),
            Formula::or_all(vec![ax(var(&y)), mp_case, gen_case]),
        ]),
    )
}

/// `Prf(p, x)`: `p` codes a nonempty sequence of locally correct lines
/// ending in `x`. The length `n` is bounded by `p`, since a pair code
/// dominates both components.
pub fn build_prf(p: Term, x: Term) -> Formula {
    let mut names = Names::avoiding([&p, &x]);
    let n = names.take("n");
    let m = names.take("m");
    let i = names.take("i");
    Formula::and(
        form(x.clone()),
        Formula::exists_below(
            n.clone(),
            p.clone(),
            Formula::and(
                seq(p.clone(), var(&n)),
                Formula::exists_below(
                    m.clone(),
                    var(&n),
                    Formula::and_all(vec![
                        Formula::eq(Term::succ(var(&m)), var(&n)),
                        elt(p.clone(), var(&m), x),
                        Formula::forall_below(i.clone(), var(&m), build_line(p, var(&i))),
                    ]),
                ),
            ),
        ),
    )
}

/// `Prov(x) := ∃p Prf(p, x)`.
pub fn build_prov(x: Term) -> Formula {
    let mut names = Names::avoiding([&x]);
    let p = names.take("p");
    Formula::exists(p.clone(), build_prf(var(&p), x))
}

/// `Con := ¬Prov(⌜⊥⌝)`. The `Ax` atom inside is read relative to the
/// theory the evaluator is given; the name is only carried along.
pub fn build_con(_theory: &Theory) -> Formula {
    Formula::not(build_prov(numeral(u64::from(sym::BOT))))
}

// Pure definitions.

/// `⟨a, b⟩ = c`, written without division: `(a+b)(a+b+1) + 2b = 2c`.
fn pair_eq(a: Term, b: Term, c: Term) -> Formula {
    let s = Term::plus(a, b.clone());
    Formula::eq(
        Term::plus(
            Term::plus(Term::times(s.clone(), Term::succ(s)), b.clone()),
            b,
        ),
        Term::plus(c.clone(), c),
    )
}

/// `y` is the remainder of `c` modulo `m`.
fn rem(c: Term, m: Term, y: Term, names: &mut Names) -> Formula {
    let q = names.take("q");
    Formula::and(
        le(Term::succ(y.clone()), m.clone()),
        Formula::exists_below(
            q.clone(),
            c.clone(),
            Formula::eq(c, Term::plus(Term::times(var(&q), m), y)),
        ),
    )
}

fn radix() -> Term {
    numeral(u64::from(coding::RADIX))
}

fn symbol(s: u32) -> Term {
    numeral(u64::from(s))
}

/// `w` is a power of 59: every divisor is 1 or a multiple of 59.
fn pow_radix(w: Term, names: &mut Names) -> Formula {
    let d = names.take("d");
    let q = names.take("q");
    let e = names.take("e");
    Formula::and(
        ne(w.clone(), Term::Zero),
        Formula::forall_below(
            d.clone(),
            w.clone(),
            Formula::imp(
                Formula::exists_below(
                    q.clone(),
                    w.clone(),
                    Formula::eq(Term::times(var(&d), var(&q)), w),
                ),
                Formula::or(
                    Formula::eq(var(&d), numeral(1)),
                    Formula::exists_below(
                        e.clone(),
                        var(&d),
                        Formula::eq(Term::times(radix(), var(&e)), var(&d)),
                    ),
                ),
            ),
        ),
    )
}

/// `w` is the least power of 59 above `b`: the shift for appending `b`.
fn pow_above(b: Term, w: Term, names: &mut Names) -> Formula {
    Formula::and_all(vec![
        le(Term::succ(b.clone()), w.clone()),
        Formula::imp(
            Formula::eq(b.clone(), Term::Zero),
            Formula::eq(w.clone(), numeral(1)),
        ),
        Formula::imp(
            ne(b.clone(), Term::Zero),
            le(w.clone(), Term::times(radix(), b)),
        ),
        pow_radix(w, names),
    ])
}

/// `c` codes the concatenation of the strings coded by `a` and `b`.
fn cat(a: Term, b: Term, c: Term, names: &mut Names) -> Formula {
    let w = names.take("w");
    Formula::exists_below(
        w.clone(),
        Term::succ(Term::times(radix(), b.clone())),
        Formula::and(
            pow_above(b.clone(), var(&w), names),
            Formula::eq(c, Term::plus(Term::times(a, var(&w)), b)),
        ),
    )
}

/// Every base-59 digit of `s` is a name character.
fn char_string(s: Term, names: &mut Names) -> Formula {
    let w = names.take("w");
    let h = names.take("h");
    let d = names.take("d");
    let l = names.take("l");
    let shape = Formula::and(
        le(Term::succ(var(&l)), var(&w)),
        Formula::eq(
            s.clone(),
            Term::plus(
                Term::times(Term::plus(Term::times(var(&h), radix()), var(&d)), var(&w)),
                var(&l),
            ),
        ),
    );
    let ok = Formula::and(
        le(symbol(sym::FIRST_LETTER), var(&d)),
        le(var(&d), symbol(sym::LAST)),
    );
    let digits = Formula::forall_below(
        h,
        s.clone(),
        Formula::forall_below(
            d,
            numeral(u64::from(coding::RADIX) - 1),
            Formula::forall_below(l, s.clone(), Formula::imp(shape, ok)),
        ),
    );
    Formula::forall_below(
        w.clone(),
        s,
        Formula::imp(pow_radix(var(&w), names), digits),
    )
}

/// `v` codes a variable token `VAR c1 ... ck END`, `k ≥ 1`.
fn var_word(v: Term, names: &mut Names) -> Formula {
    let w = names.take("w");
    let s = names.take("s");
    Formula::exists_below(
        w.clone(),
        v.clone(),
        Formula::exists_below(
            s.clone(),
            v.clone(),
            Formula::and_all(vec![
                Formula::eq(
                    v,
                    Term::plus(
                        Term::times(
                            Term::plus(Term::times(symbol(sym::VAR), var(&w)), var(&s)),
                            radix(),
                        ),
                        symbol(sym::END),
                    ),
                ),
                ne(var(&s), Term::Zero),
                pow_above(var(&s), var(&w), names),
                char_string(var(&s), names),
            ]),
        ),
    )
}

fn params(names: &[&str]) -> (Vec<String>, Names) {
    let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let avoid = Names(owned.iter().cloned().collect());
    (owned, avoid)
}

/// Arithmetic definitions of `Seq`, `Elt`, `MP` and `Gen`, each with its
/// parameter names.
pub fn pure_definitions() -> Vec<(&'static str, (Vec<String>, Formula))> {
    let (ps, mut names) = params(&["p", "n"]);
    let r = names.take("r");
    let seq_def = Formula::exists_below(r.clone(), var("p"), pair_eq(var("n"), var(&r), var("p")));
    let seq_entry = ("Seq", (ps, seq_def));

    let (ps, mut names) = params(&["p", "i", "y"]);
    let n = names.take("n");
    let r = names.take("r");
    let c = names.take("c");
    let d = names.take("d");
    let modulus = Term::succ(Term::times(Term::succ(var("i")), var(&d)));
    let inner = Formula::exists_below(
        c.clone(),
        var(&r),
        Formula::exists_below(
            d.clone(),
            var(&r),
            Formula::and(
                pair_eq(var(&c), var(&d), var(&r)),
                rem(var(&c), modulus, var("y"), &mut names),
            ),
        ),
    );
    let elt_def = Formula::exists_below(
        n.clone(),
        var("p"),
        Formula::exists_below(
            r.clone(),
            var("p"),
            Formula::and_all(vec![
                pair_eq(var(&n), var(&r), var("p")),
                le(Term::succ(var("i")), var(&n)),
                inner,
            ]),
        ),
    );
    let elt_entry = ("Elt", (ps, elt_def));

    let (ps, mut names) = params(&["a", "b", "c"]);
    let w = names.take("w");
    let m = names.take("m");
    let mp_def = Formula::and_all(vec![
        form(var("a")),
        form(var("c")),
        Formula::exists_below(
            w.clone(),
            Term::succ(Term::times(radix(), var("c"))),
            Formula::and(
                pow_above(var("c"), var(&w), &mut names),
                Formula::exists_below(
                    m.clone(),
                    var("b"),
                    Formula::and(
                        Formula::eq(
                            var(&m),
                            Term::plus(Term::times(var("a"), var(&w)), var("c")),
                        ),
                        cat(symbol(sym::IMP), var(&m), var("b"), &mut names),
                    ),
                ),
            ),
        ),
    ]);
    let mp_entry = ("MP", (ps, mp_def));

    let (ps, mut names) = params(&["a", "c"]);
    let m = names.take("m");
    let v = names.take("v");
    let gen_def = Formula::and_all(vec![
        form(var("a")),
        form(var("c")),
        Formula::exists_below(
            m.clone(),
            var("c"),
            Formula::and(
                cat(var(&m), var("a"), var("c"), &mut names),
                Formula::exists_below(
                    v.clone(),
                    var(&m),
                    Formula::and(
                        cat(symbol(sym::FORALL), var(&v), var(&m), &mut names),
                        var_word(var(&v), &mut names),
                    ),
                ),
            ),
        ),
    ]);
    let gen_entry = ("Gen", (ps, gen_def));

    vec![seq_entry, elt_entry, mp_entry, gen_entry]
}

/// Pure helper formulas with one free parameter each, for testing the
/// building blocks of the pure definitions in isolation.
pub fn pure_helper(name: &str) -> Option<(Vec<String>, Formula)> {
    let (ps, mut names) = match name {
        "pow" | "var_word" | "char_string" => params(&["v"]),
        "cat" => params(&["a", "b", "c"]),
        _ => return None,
    };
    let f = match name {
        "pow" => pow_radix(var("v"), &mut names),
        "var_word" => var_word(var("v"), &mut names),
        "char_string" => char_string(var("v"), &mut names),
        "cat" => cat(var("a"), var("b"), var("c"), &mut names),
        _ => unreachable!(),
    };
    Some((ps, f))
}

/// Value of `Prf(p, x)` for concrete codes.
pub fn eval_prf(
    p: &BigUint,
    x: &BigUint,
    theory: &Theory,
    mode: Mode,
    budget: Budget,
) -> Result<bool, EvalError> {
    let f = build_prf(Term::Var("p".into()), Term::Var("x".into()));
    Evaluator::new(mode, theory, budget).eval_with(&f, &[("p", p.clone()), ("x", x.clone())])
}

#[derive(Clone, Debug, Serialize)]
pub struct PrefixCheck {
    pub k: usize,
    /// `seq_len(pref(p, k)) = k`.
    pub len_ok: bool,
    /// The canonical prefix code equals the code of the prefix proof.
    pub code_ok: bool,
    pub meta_accepts: bool,
    pub arith_accepts: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub lines: usize,
    pub meta_accepts: bool,
    pub meta_error: Option<String>,
    pub arith_accepts: Option<bool>,
    pub prefixes: Vec<PrefixCheck>,
    pub divergences: Vec<String>,
    pub agree: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CrosscheckError {
    #[error(transparent)]
    Coding(#[from] CodingError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Checks a proof on both levels: the checker against `Prf`, and the
/// prefix properties against their arithmetized counterparts.
pub fn crosscheck(
    p: &Proof,
    theory: &Theory,
    budget: Budget,
) -> Result<CrosscheckReport, CrosscheckError> {
    let lines = p.formulas();
    let code = coding::code_proof(&lines)?;
    let meta = check_proof(p, theory);
    let mut divergences = Vec::new();
    let mut prefixes = Vec::new();
    let mut arith_accepts = None;

    if let Some(last) = lines.last() {
        let concl = coding::code_formula(last)?;
        let arith = eval_prf(&code, &concl, theory, Mode::Oracle, budget)?;
        arith_accepts = Some(arith);
        if arith != meta.is_ok() {
            divergences.push(format!(
                "checker {} but Prf is {arith}",
                if meta.is_ok() { "accepts" } else { "rejects" }
            ));
        }
        for k in 1..=lines.len() {
            let pref = coding::pref_code(&code, k)?;
            let len_ok = coding::seq_len(&pref) == BigUint::from(k);
            let code_ok = pref == coding::code_proof(&lines[..k])?;
            let sub = prefix(p, k).expect("k in range");
            let meta_accepts = check_proof(&sub, theory).is_ok();
            let target = coding::code_formula(&lines[k - 1])?;
            let arith_accepts = eval_prf(&pref, &target, theory, Mode::Oracle, budget)?;
            if !len_ok || !code_ok {
                divergences.push(format!("prefix {k}: sequence coding disagrees"));
            }
            if meta_accepts != arith_accepts {
                divergences.push(format!("prefix {k}: checker and Prf disagree"));
            }
            if meta.is_ok() && !meta_accepts {
                divergences.push(format!("prefix {k} of an accepted proof is rejected"));
            }
            prefixes.push(PrefixCheck {
                k,
                len_ok,
                code_ok,
                meta_accepts,
                arith_accepts,
            });
        }
    }
    Ok(CrosscheckReport {
        lines: lines.len(),
        meta_accepts: meta.is_ok(),
        meta_error: meta.err().map(|e| e.to_string()),
        arith_accepts,
        agree: divergences.is_empty(),
        prefixes,
        divergences,
    })
}

/// Complexity classes of the built formulas, for shape reports.
pub fn shape_report() -> Vec<(&'static str, Class)> {
    let p = Term::Var("p".into());
    let x = Term::Var("x".into());
    let i = Term::Var("i".into());
    vec![
        ("line", classify(&build_line(p.clone(), i))),
        ("prf", classify(&build_prf(p, x.clone()))),
        ("prov", classify(&build_prov(x))),
        ("con", classify(&build_con(&Theory::q()))),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta0::is_delta0;
    use crate::syntax::{compact_numeral, parse_formula};

    fn q() -> Theory {
        Theory::q()
    }

    #[test]
    fn line_shape() {
        let l = build_line(Term::Var("p".into()), Term::Var("i".into()));
        // ∃y ≤ p (Elt ∧ Form ∧ (Ax ∨ MP-case ∨ Gen-case))
        let Formula::Forall(y, body) = l.as_negation().unwrap() else {
            panic!("not an existential")
        };
        let (_, rest) = crate::delta0::as_bounded(y, body).unwrap();
        let Formula::And(left, disj) = rest.as_negation().unwrap() else {
            panic!("not a conjunction")
        };
        let Formula::And(e, f) = &**left else {
            panic!()
        };
        assert!(matches!(&**e, Formula::Atom(a) if a.pred == "Elt"));
        assert!(matches!(&**f, Formula::Atom(a) if a.pred == "Form"));
        assert!(disj.as_negation().is_some());
        assert!(is_delta0(&l));
    }

    #[test]
    fn classes() {
        let report = shape_report();
        assert_eq!(report[0].1, Class::Delta0);
        assert_eq!(report[1].1, Class::Delta0);
        assert_eq!(report[2].1, Class::Sigma1);
        assert_eq!(report[3].1, Class::Pi1);
        assert!(build_con(&q()).is_closed());
    }

    #[test]
    fn one_line_axiom_proof() {
        let ax = parse_formula("forall x. ~(S(x) = 0)").unwrap();
        let p = coding::code_proof(std::slice::from_ref(&ax)).unwrap();
        let x = coding::code_formula(&ax).unwrap();
        assert!(eval_prf(&p, &x, &q(), Mode::Oracle, Budget::default()).unwrap());
        let zero = coding::code_formula(&parse_formula("0 = 0").unwrap()).unwrap();
        assert!(!eval_prf(&p, &zero, &q(), Mode::Oracle, Budget::default()).unwrap());
        let not_axiom = parse_formula("0 = S(0)").unwrap();
        let bad = coding::code_proof(std::slice::from_ref(&not_axiom)).unwrap();
        let bx = coding::code_formula(&not_axiom).unwrap();
        assert!(!eval_prf(&bad, &bx, &q(), Mode::Oracle, Budget::default()).unwrap());
    }

    #[test]
    fn con_is_a_formula_code() {
        let con = build_con(&q());
        let code = coding::code_formula(&con).unwrap();
        let f = form(compact_numeral(&code));
        assert!(Evaluator::new(Mode::Oracle, &q(), Budget::default())
            .eval(&f)
            .unwrap());
    }

    #[test]
    fn pure_seq_and_elt_agree_with_oracle() {
        let theory = q();
        let budget = Budget {
            max_steps: 5_000_000,
            max_depth: 500,
        };
        for p in 0u64..40 {
            for n in 0u64..4 {
                let f = seq(numeral(p), numeral(n));
                let o = Evaluator::new(Mode::Oracle, &theory, budget)
                    .eval(&f)
                    .unwrap();
                let r = Evaluator::new(Mode::Pure, &theory, budget)
                    .eval(&f)
                    .unwrap();
                assert_eq!(o, r, "Seq({p},{n})");
            }
        }
        for p in [8u64, 12, 17, 30] {
            for i in 0u64..2 {
                for y in 0u64..3 {
                    let f = elt(numeral(p), numeral(i), numeral(y));
                    let o = Evaluator::new(Mode::Oracle, &theory, budget)
                        .eval(&f)
                        .unwrap();
                    let r = Evaluator::new(Mode::Pure, &theory, budget)
                        .eval(&f)
                        .unwrap();
                    assert_eq!(o, r, "Elt({p},{i},{y})");
                }
            }
        }
    }

    fn helper_holds(name: &str, args: &[&BigUint]) -> bool {
        let (ps, mut f) = pure_helper(name).unwrap();
        for (x, v) in ps.iter().zip(args) {
            f = f.replace_free(x, &compact_numeral(v));
        }
        let budget = Budget {
            max_steps: 200_000_000,
            max_depth: 500,
        };
        Evaluator::new(Mode::Pure, &q(), budget).eval(&f).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn pure_pow_matches_powers_of_the_radix() {
        let powers = [1u64, 59, 3481];
        for v in (0u64..=130).chain([3481, 3482, 118]) {
            assert_eq!(helper_holds("pow", &[&big(v)]), powers.contains(&v), "{v}");
        }
    }

    #[test]
    fn pure_cat_matches_concat() {
        for a in [0u64, 1, 7, 30] {
            for b in [0u64, 1, 2, 5] {
                let c = coding::concat(&big(a), &big(b));
                assert!(helper_holds("cat", &[&big(a), &big(b), &c]), "cat({a},{b})");
                let off = &c + 1u32;
                assert!(
                    !helper_holds("cat", &[&big(a), &big(b), &off]),
                    "cat({a},{b})+1"
                );
            }
        }
    }

    #[test]
    fn pure_var_word_recognises_variable_tokens() {
        for x in ["x", "y", "a"] {
            let v = coding::code_string(&coding::variable_symbols(x).unwrap());
            assert!(helper_holds("var_word", &[&v]), "{x}");
            assert!(!helper_holds("var_word", &[&(&v + 1u32)]), "{x} bad end");
        }
        let zero = coding::code_term(&Term::Zero).unwrap();
        assert!(!helper_holds("var_word", &[&zero]));
        let bad_char = coding::code_string(&[sym::VAR, sym::PLUS, sym::END]);
        assert!(!helper_holds("var_word", &[&bad_char]));
    }

    #[test]
    fn pure_char_string() {
        let ok = coding::code_string(&[sym::FIRST_LETTER + 3, sym::LAST]);
        let bad = coding::code_string(&[sym::FIRST_LETTER, sym::VAR]);
        assert!(helper_holds("char_string", &[&ok]));
        assert!(!helper_holds("char_string", &[&bad]));
    }

    #[test]
    fn corpus_crosschecks_green() {
        for (name, p) in crate::corpus::q_corpus() {
            let r = crosscheck(&p, &q(), Budget::default()).unwrap();
            assert!(r.agree && r.meta_accepts, "{name}: {:?}", r.divergences);
            assert_eq!(r.prefixes.len(), p.len());
        }
    }
}
