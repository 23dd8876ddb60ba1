//! Canonical printer. Output re-parses to the same core formula.

use super::{Formula, Term, EQ};

struct Glyphs {
    bot: &'static str,
    imp: &'static str,
    and: &'static str,
    forall: &'static str,
    times: &'static str,
}

const ASCII: Glyphs = Glyphs {
    bot: "_|_",
    imp: "->",
    and: "/\\",
    forall: "forall ",
    times: "*",
};

const UNICODE: Glyphs = Glyphs {
    bot: "⊥",
    imp: "→",
    and: "∧",
    forall: "∀",
    times: "×",
};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Tail,
    ImpLeft,
    AndLeft,
    AndRight,
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, Ctx::Tail, &ASCII, &mut out);
    out
}

pub fn print_formula_unicode(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, Ctx::Tail, &UNICODE, &mut out);
    out
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, 0, &ASCII, &mut out);
    out
}

fn write_formula(f: &Formula, ctx: Ctx, g: &Glyphs, out: &mut String) {
    match f {
        Formula::Bot => out.push_str(g.bot),
        Formula::Atom(a) => {
            if a.pred == EQ && a.args.len() == 2 {
                write_term(&a.args[0], 0, g, out);
                out.push_str(" = ");
                write_term(&a.args[1], 0, g, out);
            } else {
                out.push_str(&a.pred);
                if !a.args.is_empty() {
                    out.push('(');
                    for (i, t) in a.args.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        write_term(t, 0, g, out);
                    }
                    out.push(')');
                }
            }
        }
        Formula::Imp(a, b) => {
            let paren = ctx != Ctx::Tail;
            if paren {
                out.push('(');
            }
            write_formula(a, Ctx::ImpLeft, g, out);
            out.push(' ');
            out.push_str(g.imp);
            out.push(' ');
            write_formula(b, Ctx::Tail, g, out);
            if paren {
                out.push(')');
            }
        }
        Formula::And(a, b) => {
            let paren = ctx == Ctx::AndRight;
            if paren {
                out.push('(');
            }
            write_formula(a, Ctx::AndLeft, g, out);
            out.push(' ');
            out.push_str(g.and);
            out.push(' ');
            write_formula(b, Ctx::AndRight, g, out);
            if paren {
                out.push(')');
            }
        }
        Formula::Forall(x, body) => {
            let paren = ctx != Ctx::Tail;
            if paren {
                out.push('(');
            }
            out.push_str(g.forall);
            out.push_str(x);
            out.push_str(". ");
            write_formula(body, Ctx::Tail, g, out);
            if paren {
                out.push(')');
            }
        }
    }
}

// prec: 0 = any, 1 = operand of `+` on the right, 2 = operand of `*` on the right
fn write_term(t: &Term, prec: u8, g: &Glyphs, out: &mut String) {
    match t {
        Term::Zero => out.push('0'),
        Term::Var(v) | Term::Const(v) => out.push_str(v),
        Term::Succ(a) => {
            out.push_str("S(");
            write_term(a, 0, g, out);
            out.push(')');
        }
        Term::Plus(a, b) => {
            let paren = prec >= 1;
            if paren {
                out.push('(');
            }
            write_term(a, 0, g, out);
            out.push_str(" + ");
            write_term(b, 1, g, out);
            if paren {
                out.push(')');
            }
        }
        Term::Times(a, b) => {
            let paren = prec >= 2;
            if paren {
                out.push('(');
            }
            write_term(a, 1, g, out);
            out.push(' ');
            out.push_str(g.times);
            out.push(' ');
            write_term(b, 2, g, out);
            if paren {
                out.push(')');
            }
        }
    }
}
