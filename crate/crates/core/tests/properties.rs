mod common;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pts_core::arith::{elt, seq};
use pts_core::base::{AtomicRule, Base};
use pts_core::coding;
use pts_core::corpus::q_corpus;
use pts_core::delta0::{classify, Budget, Class, Evaluator, Mode};
use pts_core::experiments::{random_derivation, rule_universe};
use pts_core::hilbert::{check_proof, prefix, prove_numeral_atom, Proof, Theory};
use pts_core::support::SupportEngine;
use pts_core::syntax::{numeral, parse_formula, print_formula, Atom, Formula, Term};
use pts_core::vocab::Vocabulary;

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::Zero),
        prop::sample::select(vec!["x", "y", "z", "w1"]).prop_map(Term::var),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::succ),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::plus(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Term::times(a, b)),
        ]
    })
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::Bot),
        6 => (arb_term(), arb_term()).prop_map(|(a, b)| Formula::eq(a, b)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (prop::sample::select(vec!["x", "y", "v"]), inner)
                .prop_map(|(x, a)| Formula::forall(x, a)),
        ]
    })
}

fn props() -> Vec<Atom> {
    ["p", "q", "r"].into_iter().map(Atom::prop).collect()
}

fn arb_prop_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::Bot),
        4 => prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::prop),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::and(a, b)),
        ]
    })
}

fn three_atoms() -> (Vocabulary, Vec<AtomicRule>) {
    let v = Vocabulary::propositional(&["p", "q", "r"], 0);
    // Rules concluding one of their own premises never change a closure.
    let rules = rule_universe(&v, 2)
        .into_iter()
        .filter(|r| !r.premises.contains(&r.conclusion))
        .collect();
    (v, rules)
}

fn subset(rules: &[AtomicRule], mask: u32) -> Base {
    Base::new(
        rules
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, r)| r.clone()),
    )
    .unwrap()
}

fn small_budget() -> Budget {
    Budget {
        max_steps: 5_000_000,
        max_depth: 500,
    }
}

fn holds(mode: Mode, f: &Formula) -> bool {
    let q = Theory::q();
    Evaluator::new(mode, &q, small_budget()).eval(f).unwrap()
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(f in arb_formula()) {
        let printed = print_formula(&f);
        prop_assert_eq!(parse_formula(&printed).unwrap(), f, "{}", printed);
    }

    #[test]
    fn decode_inverts_code(f in arb_formula()) {
        let c = coding::code_formula(&f).unwrap();
        prop_assert!(coding::is_formula_code(&c));
        prop_assert_eq!(coding::decode_formula(&c), Some(f));
    }

    #[test]
    fn code_is_injective(f in arb_formula(), g in arb_formula()) {
        prop_assume!(f != g);
        prop_assert_ne!(coding::code_formula(&f).unwrap(), coding::code_formula(&g).unwrap());
    }

    #[test]
    fn sequence_laws(xs in prop::collection::vec(0u32..5000, 0..6), k in 1usize..6) {
        let xs: Vec<BigUint> = xs.into_iter().map(BigUint::from).collect();
        let p = coding::code_sequence(&xs);
        prop_assert_eq!(coding::seq_len(&p), BigUint::from(xs.len()));
        prop_assert_eq!(coding::decode_sequence(&p).unwrap(), xs.clone());
        for (i, x) in xs.iter().enumerate() {
            prop_assert_eq!(&coding::elt(&p, i).unwrap(), x);
        }
        prop_assert!(coding::elt(&p, xs.len()).is_err());
        if k <= xs.len() {
            prop_assert_eq!(coding::pref_code(&p, k).unwrap(), coding::code_sequence(&xs[..k]));
        } else {
            prop_assert!(coding::pref_code(&p, k).is_err());
        }
    }

    #[test]
    fn elt_is_functional_in_pure_mode(p in 0u64..24, i in 0u64..3) {
        let ys: Vec<u64> = (0..=p)
            .filter(|&y| holds(Mode::Pure, &elt(numeral(p), numeral(i), numeral(y))))
            .collect();
        prop_assert!(ys.len() <= 1, "Elt({p},{i},_) = {ys:?}");
    }

    #[test]
    fn pure_and_oracle_modes_agree(p in 0u64..40, n in 0u64..4, i in 0u64..3, y in 0u64..40) {
        let s = seq(numeral(p), numeral(n));
        prop_assert_eq!(holds(Mode::Pure, &s), holds(Mode::Oracle, &s));
        let e = elt(numeral(p), numeral(i), numeral(y));
        prop_assert_eq!(holds(Mode::Pure, &e), holds(Mode::Oracle, &e));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn support_persists_and_matches_closed_sets(
        small in any::<u32>(),
        extra in any::<u32>(),
        f in arb_prop_formula(),
    ) {
        let (v, rules) = three_atoms();
        let full = (1u32 << rules.len()) - 1;
        let b = subset(&rules, small & full);
        let c = subset(&rules, (small | extra) & full);
        let mut engine = SupportEngine::new(v).unwrap();
        let at_b = engine.supports(&b, &f).unwrap();
        if at_b {
            prop_assert!(engine.supports(&c, &f).unwrap());
        }
        let atoms = props();
        let index = common::prop_index(&atoms);
        let brules: Vec<AtomicRule> = b.rules().iter().cloned().collect();
        let fam = common::closed_sets(3, &common::rule_masks(&brules, &atoms));
        prop_assert_eq!(at_b, common::supported_by(&fam, 7, &f, &index, &[]));
    }

    #[test]
    fn derivation_trees_check(mask in any::<u32>(), which in 0usize..3) {
        let (_, rules) = three_atoms();
        let b = subset(&rules, mask & ((1u32 << rules.len()) - 1));
        let a = props()[which].clone();
        match b.derivation_tree(&a) {
            Some(d) => {
                prop_assert!(b.derives(&a));
                prop_assert!(d.check(&b));
                prop_assert_eq!(d.conclusion, a);
            }
            None => prop_assert!(!b.derives(&a)),
        }
    }

    #[test]
    fn checking_is_monotone_in_the_theory(seed in any::<u64>(), extra in arb_prop_formula()) {
        let leaves: Vec<Formula> = props().into_iter().map(Formula::atom).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (gamma, proof) = random_derivation(&mut rng, &leaves, 3);
        let theory = Theory { name: "gamma".into(), axioms: gamma };
        let base = check_proof(&proof, &theory).unwrap();
        let wider = check_proof(&proof, &theory.with_axiom(extra)).unwrap();
        prop_assert_eq!(base.conclusion, wider.conclusion);
    }

    #[test]
    fn prefixes_of_random_derivations_check(seed in any::<u64>()) {
        let leaves: Vec<Formula> = props().into_iter().map(Formula::atom).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (gamma, proof) = random_derivation(&mut rng, &leaves, 4);
        let theory = Theory { name: "gamma".into(), axioms: gamma };
        assert_prefix_closed(&proof, &theory)?;
    }

    #[test]
    fn numeral_atoms_are_decided(m in 0u64..=100, n in 0u64..=100) {
        let eq = Formula::eq(numeral(m), numeral(n));
        let want = if m == n { eq } else { Formula::not(eq) };
        let p = prove_numeral_atom(m, n).unwrap();
        prop_assert_eq!(check_proof(&p, &Theory::q()).unwrap().conclusion, want);
    }

    #[test]
    fn classifier_is_stable_under_reparse(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = common::random_bounded(&mut rng, 50, 4).formula();
        let g = parse_formula(&print_formula(&f)).unwrap();
        prop_assert_eq!(classify(&f), Class::Delta0);
        prop_assert_eq!(classify(&g), classify(&f));
    }
}

fn assert_prefix_closed(p: &Proof, theory: &Theory) -> Result<(), TestCaseError> {
    let lines = p.formulas();
    for k in 1..=p.len() {
        let sub = prefix(p, k).unwrap();
        prop_assert_eq!(sub.len(), k);
        let checked = check_proof(&sub, theory);
        prop_assert!(checked.is_ok(), "prefix {} rejected", k);
        prop_assert_eq!(&checked.unwrap().conclusion, &lines[k - 1]);
    }
    Ok(())
}

#[test]
fn corpus_is_prefix_closed() {
    let q = Theory::q();
    for (name, p) in q_corpus() {
        assert_prefix_closed(&p, &q).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn closure_is_monotone_on_three_atoms() {
    let (_, rules) = three_atoms();
    let n = rules.len();
    assert_eq!(n, 12);
    let closures: Vec<BTreeSet<Atom>> = (0u32..1 << n)
        .map(|m| subset(&rules, m).closure())
        .collect();
    for m in 0u32..1 << n {
        for r in 0..n {
            let bigger = m | (1 << r);
            assert!(
                closures[m as usize].is_subset(&closures[bigger as usize]),
                "{} vs {}",
                subset(&rules, m),
                subset(&rules, bigger)
            );
        }
    }
}
