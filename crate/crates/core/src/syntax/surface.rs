use super::{Atom, Formula, Term};

/// Source-level formulas: the core connectives plus the abbreviations
/// accepted by the parser. [`Surface::elaborate`] expands the abbreviations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Surface {
    Atom(Atom),
    Bot,
    Imp(Box<Surface>, Box<Surface>),
    And(Box<Surface>, Box<Surface>),
    Forall(String, Box<Surface>),
    Neg(Box<Surface>),
    Or(Box<Surface>, Box<Surface>),
    Exists(String, Box<Surface>),
    Less(Term, Term),
    BoundedForall(String, Term, Box<Surface>),
    BoundedExists(String, Term, Box<Surface>),
}

impl Surface {
    pub fn elaborate(&self) -> Formula {
        match self {
            Surface::Atom(a) => Formula::Atom(a.clone()),
            Surface::Bot => Formula::Bot,
            Surface::Imp(a, b) => Formula::imp(a.elaborate(), b.elaborate()),
            Surface::And(a, b) => Formula::and(a.elaborate(), b.elaborate()),
            Surface::Forall(x, a) => Formula::forall(x.clone(), a.elaborate()),
            Surface::Neg(a) => Formula::not(a.elaborate()),
            Surface::Or(a, b) => Formula::or(a.elaborate(), b.elaborate()),
            Surface::Exists(x, a) => Formula::exists(x.clone(), a.elaborate()),
            Surface::Less(t, s) => Formula::less(t.clone(), s.clone()),
            Surface::BoundedForall(x, t, a) => {
                Formula::forall_below(x.clone(), t.clone(), a.elaborate())
            }
            Surface::BoundedExists(x, t, a) => {
                Formula::exists_below(x.clone(), t.clone(), a.elaborate())
            }
        }
    }
}

impl From<&Formula> for Surface {
    fn from(f: &Formula) -> Surface {
        match f {
            Formula::Atom(a) => Surface::Atom(a.clone()),
            Formula::Bot => Surface::Bot,
            Formula::Imp(a, b) => Surface::Imp(Box::new((&**a).into()), Box::new((&**b).into())),
            Formula::And(a, b) => Surface::And(Box::new((&**a).into()), Box::new((&**b).into())),
            Formula::Forall(x, a) => Surface::Forall(x.clone(), Box::new((&**a).into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::numeral;

    #[test]
    fn elaborating_core_is_identity() {
        let f = Formula::forall(
            "x",
            Formula::imp(
                Formula::and(Formula::eq(Term::var("x"), Term::Zero), Formula::Bot),
                Formula::prop("p"),
            ),
        );
        assert_eq!(Surface::from(&f).elaborate(), f);
    }

    #[test]
    fn bounded_forall_shape() {
        let s = Surface::BoundedForall(
            "x".into(),
            numeral(2),
            Box::new(Surface::Atom(Atom::eq(Term::var("x"), Term::var("x")))),
        );
        let expected = Formula::forall(
            "x",
            Formula::imp(
                Formula::exists(
                    "y",
                    Formula::eq(Term::plus(Term::var("x"), Term::var("y")), numeral(2)),
                ),
                Formula::eq(Term::var("x"), Term::var("x")),
            ),
        );
        assert_eq!(s.elaborate(), expected);
    }
}
