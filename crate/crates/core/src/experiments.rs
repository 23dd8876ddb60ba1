//! Seeded experiment suites. Each run produces a deterministic report that
//! embeds its configuration and the tool and coding versions.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{crosscheck, eval_prf, CrosscheckError};
use crate::base::{AtomicRule, Base};
use crate::coding::{self, CodingError, CODING_VERSION};
use crate::corpus::q_corpus;
use crate::delta0::{Budget, EvalError, Mode};
use crate::hilbert::{check_proof, prove_numeral_atom, Proof, ProofBuilder, ProofLine, Theory};
use crate::support::{FamilySet, SupportEngine, SupportError};
use crate::syntax::{numeral, print_formula, Atom, Formula, Term};
use crate::vocab::Vocabulary;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

const ATOM_NAMES: [&str; 4] = ["p", "q", "r", "s"];
const TERM_NAMES: [&str; 3] = ["a", "b", "c"];
const MAX_COUNTEREXAMPLES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    ClassicalAgreement,
    Maxiconsistent,
    LocalSoundness,
    PrfCrosscheck,
    NumeralDecision,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::ClassicalAgreement,
        Experiment::Maxiconsistent,
        Experiment::LocalSoundness,
        Experiment::PrfCrosscheck,
        Experiment::NumeralDecision,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::ClassicalAgreement => "classical-agreement",
            Experiment::Maxiconsistent => "maxiconsistent",
            Experiment::LocalSoundness => "local-soundness",
            Experiment::PrfCrosscheck => "prf-crosscheck",
            Experiment::NumeralDecision => "numeral-decision",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Experiment, ExperimentError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| ExperimentError::Unknown(s.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("unknown experiment `{0}`")]
    Unknown(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Support(#[from] SupportError),
    #[error(transparent)]
    Coding(#[from] CodingError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Crosscheck(#[from] CrosscheckError),
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    /// Query atoms (or vocabulary terms, for the maxiconsistent suite).
    pub atoms: usize,
    pub reserve: usize,
    /// Exhaustive formula depth.
    pub depth: usize,
    /// Random samples (formulas, or derivations for local soundness).
    pub samples: usize,
    pub sample_depth: usize,
    pub mutations: usize,
    /// Numerals range over `0..=bound`.
    pub bound: u64,
    pub theory: String,
    pub seed: u64,
    pub budget: Budget,
}

impl ExperimentConfig {
    pub fn defaults(e: Experiment) -> ExperimentConfig {
        let base = ExperimentConfig {
            atoms: 2,
            reserve: 0,
            depth: 3,
            samples: 0,
            sample_depth: 0,
            mutations: 0,
            bound: 0,
            theory: "q".into(),
            seed: 0x5eed,
            budget: Budget::default(),
        };
        match e {
            Experiment::ClassicalAgreement => ExperimentConfig {
                reserve: 2,
                samples: 500,
                sample_depth: 6,
                ..base
            },
            Experiment::Maxiconsistent => ExperimentConfig { atoms: 3, ..base },
            Experiment::LocalSoundness => ExperimentConfig {
                atoms: 3,
                samples: 200,
                sample_depth: 2,
                ..base
            },
            Experiment::PrfCrosscheck => ExperimentConfig {
                mutations: 40,
                ..base
            },
            Experiment::NumeralDecision => ExperimentConfig { bound: 20, ..base },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub checked: u64,
    pub failures: u64,
    pub pass: bool,
    pub counterexamples: Vec<String>,
}

impl Check {
    fn new(name: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            checked: 0,
            failures: 0,
            pass: true,
            counterexamples: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            self.pass = false;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(what());
            }
        }
    }

    /// A check that passes only if it saw at least one case.
    fn nonempty(mut self) -> Check {
        if self.checked == 0 {
            self.pass = false;
        }
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub experiment: Experiment,
    pub tool_version: &'static str,
    pub coding_version: &'static str,
    pub config: ExperimentConfig,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(experiment: Experiment, config: &ExperimentConfig, checks: Vec<Check>) -> Report {
        Report {
            experiment,
            tool_version: TOOL_VERSION,
            coding_version: CODING_VERSION,
            config: config.clone(),
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn run(e: Experiment, cfg: &ExperimentConfig) -> Result<Report, ExperimentError> {
    match e {
        Experiment::ClassicalAgreement => classical_agreement(cfg),
        Experiment::Maxiconsistent => maxiconsistent(cfg),
        Experiment::LocalSoundness => local_soundness(cfg),
        Experiment::PrfCrosscheck => prf_crosscheck(cfg),
        Experiment::NumeralDecision => numeral_decision(cfg),
    }
}

// Formula generation.

/// Every formula of depth at most `depth` built from `leaves` with `→`
/// and `∧`.
pub fn formulas_up_to(leaves: &[Formula], depth: usize) -> Vec<Formula> {
    let mut level = leaves.to_vec();
    for _ in 0..depth {
        let mut next = leaves.to_vec();
        for a in &level {
            for b in &level {
                next.push(Formula::imp(a.clone(), b.clone()));
                next.push(Formula::and(a.clone(), b.clone()));
            }
        }
        level = next;
    }
    level
}

/// How many formulas [`formulas_up_to`] returns.
pub fn count_formulas(leaves: usize, depth: usize) -> u64 {
    (0..depth).fold(leaves as u64, |n, _| leaves as u64 + 2 * n * n)
}

/// A random formula of depth at most `depth` over `leaves`, using `→`,
/// `∧`, `¬` and `∨`.
pub fn random_formula(rng: &mut impl Rng, leaves: &[Formula], depth: usize) -> Formula {
    let leaf = |rng: &mut dyn rand::RngCore| leaves.choose(rng).expect("leaves").clone();
    if depth == 0 || rng.gen_bool(0.2) {
        return leaf(rng);
    }
    match rng.gen_range(0..6) {
        0 | 1 => Formula::imp(
            random_formula(rng, leaves, depth - 1),
            random_formula(rng, leaves, depth - 1),
        ),
        2 | 3 => Formula::and(
            random_formula(rng, leaves, depth - 1),
            random_formula(rng, leaves, depth - 1),
        ),
        4 => Formula::not(random_formula(rng, leaves, depth - 1)),
        _ if depth >= 3 => Formula::or(
            random_formula(rng, leaves, depth - 3),
            random_formula(rng, leaves, depth - 3),
        ),
        _ => leaf(rng),
    }
}

fn prop_leaves(names: &[&str]) -> Vec<Formula> {
    names
        .iter()
        .map(|n| Formula::prop(*n))
        .chain([Formula::Bot])
        .collect()
}

/// Classical truth value of a quantifier-free formula.
pub fn classical(f: &Formula, val: &dyn Fn(&Atom) -> bool) -> bool {
    match f {
        Formula::Bot => false,
        Formula::Atom(a) => val(a),
        Formula::Imp(a, b) => !classical(a, val) || classical(b, val),
        Formula::And(a, b) => classical(a, val) && classical(b, val),
        Formula::Forall(..) => panic!("classical: quantifier in a propositional formula"),
    }
}

/// Truth-table validity over the given atoms.
pub fn tautology(f: &Formula, atoms: &[Atom]) -> bool {
    (0u32..1 << atoms.len()).all(|v| {
        classical(f, &|a: &Atom| {
            atoms
                .iter()
                .position(|b| b == a)
                .is_some_and(|i| v & (1 << i) != 0)
        })
    })
}

/// Every rule over the vocabulary's atoms with at most `max_premises`
/// premises.
pub fn rule_universe(vocab: &Vocabulary, max_premises: usize) -> Vec<AtomicRule> {
    let atoms = vocab.atoms();
    let mut out = Vec::new();
    for mask in 0u32..1 << atoms.len() {
        if mask.count_ones() as usize > max_premises {
            continue;
        }
        let premises: Vec<Atom> = (0..atoms.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| atoms[i].clone())
            .collect();
        for c in &atoms {
            out.push(AtomicRule::new(premises.clone(), c.clone()));
        }
    }
    out
}

fn subset_base(rules: &[AtomicRule], mask: u64) -> Base {
    Base::new(
        rules
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, r)| r.clone()),
    )
    .expect("universe rules are closed")
}

// Classical agreement.

fn classical_agreement(cfg: &ExperimentConfig) -> Result<Report, ExperimentError> {
    if cfg.atoms == 0 || cfg.atoms + cfg.reserve > crate::support::MAX_ATOMS {
        return Err(ExperimentError::Config(format!(
            "atoms + reserve must be between 1 and {}",
            crate::support::MAX_ATOMS
        )));
    }
    let names = &ATOM_NAMES[..cfg.atoms];
    let mut engine = SupportEngine::new(Vocabulary::propositional(names, cfg.reserve))?;
    let top = engine.lattice().top();
    let atoms: Vec<Atom> = names.iter().map(|n| Atom::prop(*n)).collect();
    let leaves = prop_leaves(names);

    let mut verify = |f: &Formula, check: &mut Check| {
        let support = engine.supports_at(top, f);
        let truth = tautology(f, &atoms);
        check.record(support == truth, || {
            format!(
                "{}: supported {support}, tautology {truth}",
                print_formula(f)
            )
        });
    };

    let mut exhaustive = Check::new("exhaustive");
    if cfg.depth == 0 {
        for f in &leaves {
            verify(f, &mut exhaustive);
        }
    } else {
        let inner = formulas_up_to(&leaves, cfg.depth - 1);
        for f in &leaves {
            verify(f, &mut exhaustive);
        }
        for a in &inner {
            for b in &inner {
                verify(&Formula::imp(a.clone(), b.clone()), &mut exhaustive);
                verify(&Formula::and(a.clone(), b.clone()), &mut exhaustive);
            }
        }
    }

    let mut sampled = Check::new("sampled");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.samples {
        let f = random_formula(&mut rng, &leaves, cfg.sample_depth);
        verify(&f, &mut sampled);
    }
    Ok(Report::new(
        Experiment::ClassicalAgreement,
        cfg,
        vec![exhaustive.nonempty(), sampled],
    ))
}

// Maxiconsistent classicality.

/// Vocabulary `P/1` over the first `n` of `a, b, c`.
pub fn unary_vocabulary(n: usize, reserve: usize) -> Vocabulary {
    Vocabulary {
        predicates: vec![("P".into(), 1)],
        terms: TERM_NAMES[..n].iter().map(|c| Term::constant(*c)).collect(),
        reserve,
    }
}

fn maxiconsistent(cfg: &ExperimentConfig) -> Result<Report, ExperimentError> {
    if !(1..=3).contains(&cfg.atoms) || cfg.atoms + cfg.reserve > crate::support::MAX_ATOMS {
        return Err(ExperimentError::Config(
            "atoms must be between 1 and 3".into(),
        ));
    }
    let mut classes = Check::new("class count");
    let mut negation = Check::new("negation");
    let mut negation_classes = Check::new("negation (semantic classes)");
    let mut disjunction = Check::new("disjunction");
    let mut existential = Check::new("existential");
    let mut extension = Check::new("extension");

    for n in 1..=cfg.atoms {
        let vocab = unary_vocabulary(n, cfg.reserve);
        let mut engine = SupportEngine::new(vocab.clone())?;
        let maxis: Vec<usize> = (0..engine.lattice().len())
            .filter(|&f| engine.is_maxiconsistent_family(f))
            .collect();
        let expected = (1usize << engine.atoms().len()) - 1;
        classes.record(maxis.len() == expected, || {
            format!("{n} terms: {} classes, expected {expected}", maxis.len())
        });
        let canon_ok = engine
            .enumerate_maxiconsistent()
            .iter()
            .all(|b| engine.is_maxiconsistent(b).unwrap_or(false));
        classes.record(canon_ok, || {
            format!("{n} terms: canonical base not maxiconsistent")
        });

        let closed_leaves: Vec<Formula> = vocab
            .terms
            .iter()
            .map(|t| Formula::atom(Atom::new("P", vec![t.clone()])))
            .chain([Formula::Bot])
            .collect();

        // Negation on materialized formulas through the public query path.
        let shallow = formulas_up_to(&closed_leaves, cfg.depth.min(2));
        for f in &shallow {
            for &m in &maxis {
                let neg = engine.supports_at(m, &Formula::not(f.clone()));
                let pos = engine.supports_at(m, f);
                negation.record(neg != pos, || {
                    format!("{n} terms, M#{m}: {}", print_formula(f))
                });
            }
        }

        // Negation and disjunction over all semantic classes up to the
        // configured depth.
        let bot = engine.sat(&Formula::Bot);
        let leaf_sats: Vec<FamilySet> = closed_leaves.iter().map(|f| engine.sat(f)).collect();
        let lat = engine.lattice();
        let mut level = leaf_sats.clone();
        for _ in 0..cfg.depth {
            let mut next = leaf_sats.clone();
            for a in &level {
                for b in &level {
                    next.push(lat.implication(a, b));
                    next.push(a.and(b));
                }
            }
            level = dedup(next.into_iter());
        }
        for s in &level {
            let neg = lat.implication(s, &bot);
            for &m in &maxis {
                negation_classes.record(neg.contains(m) != s.contains(m), || {
                    format!("{n} terms, M#{m}: class {:?}", s.iter().collect::<Vec<_>>())
                });
            }
        }
        for a in &level {
            let na = lat.implication(a, &bot);
            for b in &level {
                let nb = lat.implication(b, &bot);
                let or = lat.implication(&na.and(&nb), &bot);
                for &m in &maxis {
                    let ok = or.contains(m) == (a.contains(m) || b.contains(m));
                    disjunction.record(ok, || format!("{n} terms, M#{m}: classes differ"));
                }
            }
        }

        // Existentials over vocabulary-term instances.
        let x = "x";
        let open_leaves: Vec<Formula> =
            std::iter::once(Formula::atom(Atom::new("P", vec![Term::var(x)])))
                .chain(closed_leaves.iter().cloned())
                .collect();
        let bodies: Vec<Formula> = formulas_up_to(&open_leaves, cfg.depth.saturating_sub(1))
            .into_iter()
            .filter(|f| f.has_free(x))
            .collect();
        for body in &bodies {
            let ex = Formula::exists(x, body.clone());
            for &m in &maxis {
                let whole = engine.supports_at(m, &ex);
                let some = vocab
                    .terms
                    .iter()
                    .any(|t| engine.supports_at(m, &body.replace_free(x, t)));
                existential.record(whole == some, || {
                    format!("{n} terms, M#{m}: {}", print_formula(&ex))
                });
            }
        }

        // Extension property, over every raw base.
        if n <= 2 {
            let rules = rule_universe(&vocab, engine.atoms().len());
            let formulas = formulas_up_to(&closed_leaves, cfg.depth.min(2));
            for mask in 0u64..1 << rules.len() {
                let b = subset_base(&rules, mask);
                for f in &formulas {
                    if engine.supports(&b, f)? {
                        continue;
                    }
                    let ok = match engine.extend_to_maxiconsistent(&b, f) {
                        Ok(m) => {
                            b.is_subset(&m)
                                && engine.is_maxiconsistent(&m)?
                                && !engine.supports(&m, f)?
                        }
                        Err(_) => false,
                    };
                    extension.record(ok, || format!("{n} terms, base {b}: {}", print_formula(f)));
                }
            }
        }
    }
    Ok(Report::new(
        Experiment::Maxiconsistent,
        cfg,
        vec![
            classes.nonempty(),
            negation.nonempty(),
            negation_classes.nonempty(),
            disjunction.nonempty(),
            existential.nonempty(),
            extension,
        ],
    ))
}

fn dedup(sets: impl Iterator<Item = FamilySet>) -> Vec<FamilySet> {
    let mut seen = HashSet::new();
    sets.filter(|s| seen.insert(s.clone())).collect()
}

// Local soundness.

/// A random Hilbert derivation from random hypotheses: `(Γ, proof)`. The
/// proof's last line is the derived formula; it ends with modus ponens.
pub fn random_derivation(
    rng: &mut impl Rng,
    leaves: &[Formula],
    depth: usize,
) -> (Vec<Formula>, Proof) {
    loop {
        let mut gamma: Vec<Formula> = (0..rng.gen_range(1..=2))
            .map(|_| random_formula(rng, leaves, depth))
            .collect();
        if rng.gen_bool(0.6) {
            let head = gamma[0].clone();
            gamma.push(Formula::imp(head, random_formula(rng, leaves, depth)));
        }
        let mut b = ProofBuilder::new();
        let mut pool: Vec<Formula> = gamma.clone();
        let mut last_mp = None;
        for _ in 0..12 {
            match rng.gen_range(0..10) {
                0..=2 => {
                    b.axiom(gamma.choose(rng).expect("hypotheses").clone());
                }
                3..=5 => {
                    let mut pick = || pool.choose(rng).expect("pool").clone();
                    let (p, q, r) = (pick(), pick(), pick());
                    let ax = match rng.gen_range(0..6) {
                        0 => Formula::imp(p.clone(), Formula::imp(q, p)),
                        1 => Formula::imp(
                            Formula::imp(p.clone(), Formula::imp(q.clone(), r.clone())),
                            Formula::imp(Formula::imp(p.clone(), q), Formula::imp(p, r)),
                        ),
                        2 => Formula::imp(p.clone(), Formula::imp(q.clone(), Formula::and(p, q))),
                        3 => Formula::imp(Formula::and(p.clone(), q), p),
                        4 => Formula::imp(Formula::and(q, p.clone()), p),
                        _ => Formula::imp(Formula::not(Formula::not(p.clone())), p),
                    };
                    b.axiom(ax);
                }
                _ => {
                    let pairs: Vec<(usize, usize)> = (0..b.len())
                        .flat_map(|i| (0..b.len()).map(move |j| (i, j)))
                        .filter(|&(i, j)| {
                            matches!(b.formula(j), Formula::Imp(l, _) if **l == *b.formula(i))
                        })
                        .collect();
                    if let Some(&(i, j)) = pairs.choose(rng) {
                        let k = b.mp(i, j);
                        if !gamma.contains(b.formula(k)) {
                            last_mp = Some(k);
                        }
                    }
                }
            }
            for i in 0..b.len() {
                if !pool.contains(b.formula(i)) && b.formula(i).depth() <= depth + 2 {
                    pool.push(b.formula(i).clone());
                }
            }
        }
        if let Some(k) = last_mp {
            return (gamma, b.finish_at(k));
        }
    }
}

fn local_soundness(cfg: &ExperimentConfig) -> Result<Report, ExperimentError> {
    if cfg.atoms == 0 || cfg.atoms + cfg.reserve > crate::support::MAX_ATOMS {
        return Err(ExperimentError::Config(
            "atoms + reserve must be between 1 and 4".into(),
        ));
    }
    let names = &ATOM_NAMES[..cfg.atoms];
    let mut engine = SupportEngine::new(Vocabulary::propositional(names, cfg.reserve))?;
    let leaves = prop_leaves(names);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut proofs = Check::new("proofs check");
    let mut soundness = Check::new("local soundness");
    let mut nonvacuous = 0u64;
    for _ in 0..cfg.samples {
        let (gamma, proof) = random_derivation(&mut rng, &leaves, cfg.sample_depth);
        let theory = Theory {
            name: "gamma".into(),
            axioms: gamma.clone(),
        };
        let phi = proof.conclusion().expect("nonempty").clone();
        proofs.record(check_proof(&proof, &theory).is_ok(), || {
            format!("rejected derivation of {}", print_formula(&phi))
        });
        let families = engine.lattice().len();
        let mut vacuous = true;
        for fam in 0..families {
            if gamma.iter().all(|g| engine.supports_at(fam, g)) {
                if fam != engine.lattice().bottom() {
                    vacuous = false;
                }
                let ok = engine.supports_at(fam, &phi);
                soundness.record(ok, || {
                    let base = engine.canonical_base(fam);
                    format!(
                        "base {{{base}}} supports the hypotheses but not {}",
                        print_formula(&phi)
                    )
                });
            }
        }
        if !vacuous {
            nonvacuous += 1;
        }
    }
    let mut coverage = Check::new("non-vacuous samples");
    coverage.checked = nonvacuous;
    Ok(Report::new(
        Experiment::LocalSoundness,
        cfg,
        vec![proofs.nonempty(), soundness.nonempty(), coverage],
    ))
}

// Prf cross-check and mutations.

#[derive(Clone, Copy, Debug)]
enum Mutation {
    Negate,
    Bump,
    Swap,
    Foreign,
}

const MUTATIONS: [Mutation; 4] = [
    Mutation::Negate,
    Mutation::Bump,
    Mutation::Swap,
    Mutation::Foreign,
];

fn bump_zero(t: &Term) -> Option<Term> {
    match t {
        Term::Zero => Some(Term::succ(Term::Zero)),
        Term::Var(_) | Term::Const(_) => None,
        Term::Succ(a) => bump_zero(a).map(Term::succ),
        Term::Plus(a, b) => bump_zero(a)
            .map(|a2| Term::plus(a2, (**b).clone()))
            .or_else(|| bump_zero(b).map(|b2| Term::plus((**a).clone(), b2))),
        Term::Times(a, b) => bump_zero(a)
            .map(|a2| Term::times(a2, (**b).clone()))
            .or_else(|| bump_zero(b).map(|b2| Term::times((**a).clone(), b2))),
    }
}

/// Replaces the first `0` by `S(0)`.
fn bump_formula(f: &Formula) -> Option<Formula> {
    match f {
        Formula::Bot => None,
        Formula::Atom(a) => {
            for (i, t) in a.args.iter().enumerate() {
                if let Some(t2) = bump_zero(t) {
                    let mut args = a.args.clone();
                    args[i] = t2;
                    return Some(Formula::atom(Atom::new(a.pred.clone(), args)));
                }
            }
            None
        }
        Formula::Imp(a, b) => bump_formula(a)
            .map(|a2| Formula::imp(a2, (**b).clone()))
            .or_else(|| bump_formula(b).map(|b2| Formula::imp((**a).clone(), b2))),
        Formula::And(a, b) => bump_formula(a)
            .map(|a2| Formula::and(a2, (**b).clone()))
            .or_else(|| bump_formula(b).map(|b2| Formula::and((**a).clone(), b2))),
        Formula::Forall(x, body) => bump_formula(body).map(|b| Formula::forall(x.clone(), b)),
    }
}

fn swap_formula(f: &Formula) -> Option<Formula> {
    match f {
        Formula::Imp(a, b) if **b != Formula::Bot && a != b => {
            Some(Formula::imp((**b).clone(), (**a).clone()))
        }
        Formula::Atom(a) if a.args.len() == 2 && a.args[0] != a.args[1] => Some(Formula::atom(
            Atom::new(a.pred.clone(), vec![a.args[1].clone(), a.args[0].clone()]),
        )),
        Formula::Forall(x, body) => swap_formula(body).map(|b| Formula::forall(x.clone(), b)),
        Formula::Imp(a, b) => swap_formula(a).map(|a2| Formula::imp(a2, (**b).clone())),
        Formula::And(a, b) => (a != b).then(|| Formula::and((**b).clone(), (**a).clone())),
        _ => None,
    }
}

fn mutate(f: &Formula, m: Mutation, foreign: &Formula) -> Formula {
    let fallback = || Formula::not(f.clone());
    match m {
        Mutation::Negate => fallback(),
        Mutation::Bump => bump_formula(f).unwrap_or_else(fallback),
        Mutation::Swap => swap_formula(f).unwrap_or_else(fallback),
        Mutation::Foreign if foreign != f => foreign.clone(),
        Mutation::Foreign => fallback(),
    }
}

fn prf_crosscheck(cfg: &ExperimentConfig) -> Result<Report, ExperimentError> {
    let theory = Theory::by_name(&cfg.theory)
        .ok_or_else(|| ExperimentError::Config(format!("unknown theory `{}`", cfg.theory)))?;
    let corpus = q_corpus();
    let mut accepted = Check::new("corpus accepted on both levels");
    let mut prefixes = Check::new("prefix properties");
    for (name, p) in &corpus {
        let r = crosscheck(p, &theory, cfg.budget)?;
        accepted.record(r.meta_accepts && r.arith_accepts == Some(true), || {
            format!(
                "{name}: checker {}, Prf {:?}",
                r.meta_accepts, r.arith_accepts
            )
        });
        for k in &r.prefixes {
            let ok = k.len_ok && k.code_ok && k.meta_accepts && k.arith_accepts;
            prefixes.record(ok, || format!("{name}: prefix {}", k.k));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let all_lines: Vec<Formula> = corpus.iter().flat_map(|(_, p)| p.formulas()).collect();
    let mut mutated = Check::new("line mutations rejected");
    let mut neutral = 0u64;
    while mutated.checked < cfg.mutations as u64 {
        let (name, p) = corpus.choose(&mut rng).expect("corpus");
        let i = rng.gen_range(0..p.len());
        let m = *MUTATIONS.choose(&mut rng).expect("mutations");
        let foreign = all_lines.choose(&mut rng).expect("lines");
        let mut q = p.clone();
        q.lines[i] = ProofLine {
            formula: mutate(&p.lines[i].formula, m, foreign),
            hint: None,
        };
        if check_proof(&q, &theory).is_ok() {
            neutral += 1;
            if neutral > 10 * cfg.mutations as u64 + 100 {
                return Err(ExperimentError::Config(
                    "mutations keep producing proofs".into(),
                ));
            }
            continue;
        }
        let lines = q.formulas();
        let code = coding::code_proof(&lines)?;
        let concl = coding::code_formula(lines.last().expect("nonempty"))?;
        let prf = eval_prf(&code, &concl, &theory, Mode::Oracle, cfg.budget)?;
        mutated.record(!prf, || format!("{name}, line {}, {m:?}", i + 1));
    }

    let mut perturbed = Check::new("code perturbations rejected");
    for _ in 0..cfg.mutations {
        let (name, p) = corpus.choose(&mut rng).expect("corpus");
        let lines = p.formulas();
        let mut codes = lines
            .iter()
            .map(coding::code_formula)
            .collect::<Result<Vec<BigUint>, _>>()?;
        let i = rng.gen_range(0..codes.len());
        let delta: u32 = rng.gen_range(1..=3);
        codes[i] += delta;
        let seq = coding::code_sequence(&codes);
        let last = codes.last().expect("nonempty");
        let prf = eval_prf(&seq, last, &theory, Mode::Oracle, cfg.budget)?;
        perturbed.record(!prf, || format!("{name}, line {} code +{delta}", i + 1));
    }
    let mut neutral_check = Check::new("mutations that still check (skipped)");
    neutral_check.checked = neutral;
    Ok(Report::new(
        Experiment::PrfCrosscheck,
        cfg,
        vec![
            accepted.nonempty(),
            prefixes.nonempty(),
            mutated,
            perturbed,
            neutral_check,
        ],
    ))
}

// Numeral decision.

fn numeral_decision(cfg: &ExperimentConfig) -> Result<Report, ExperimentError> {
    let q = Theory::q();
    let mut check = Check::new("numeral atoms");
    for m in 0..=cfg.bound {
        for n in 0..=cfg.bound {
            let expected = {
                let eq = Formula::eq(numeral(m), numeral(n));
                if m == n {
                    eq
                } else {
                    Formula::not(eq)
                }
            };
            let ok = match prove_numeral_atom(m, n) {
                Ok(p) => matches!(check_proof(&p, &q), Ok(c) if c.conclusion == expected),
                Err(_) => false,
            };
            check.record(ok, || format!("({m}, {n})"));
        }
    }
    Ok(Report::new(
        Experiment::NumeralDecision,
        cfg,
        vec![check.nonempty()],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_counts() {
        let leaves = prop_leaves(&["p", "q"]);
        for d in 0..3 {
            assert_eq!(
                formulas_up_to(&leaves, d).len() as u64,
                count_formulas(3, d)
            );
        }
        assert_eq!(count_formulas(3, 3), 1_566_453);
    }

    #[test]
    fn names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
        assert!("nope".parse::<Experiment>().is_err());
    }

    #[test]
    fn random_derivations_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let leaves = prop_leaves(&["p", "q"]);
        for _ in 0..20 {
            let (gamma, p) = random_derivation(&mut rng, &leaves, 2);
            let t = Theory {
                name: "g".into(),
                axioms: gamma.clone(),
            };
            let c = check_proof(&p, &t).unwrap();
            assert!(c.wrong_hints.is_empty());
            assert!(!gamma.contains(&c.conclusion));
        }
    }

    #[test]
    fn small_runs_pass() {
        let mut cfg = ExperimentConfig::defaults(Experiment::NumeralDecision);
        cfg.bound = 4;
        assert!(run(Experiment::NumeralDecision, &cfg).unwrap().pass);
        let mut cfg = ExperimentConfig::defaults(Experiment::ClassicalAgreement);
        cfg.depth = 2;
        cfg.samples = 20;
        assert!(run(Experiment::ClassicalAgreement, &cfg).unwrap().pass);
        let mut cfg = ExperimentConfig::defaults(Experiment::Maxiconsistent);
        cfg.atoms = 1;
        cfg.depth = 2;
        assert!(run(Experiment::Maxiconsistent, &cfg).unwrap().pass);
    }

    #[test]
    fn mutation_helpers() {
        let f = crate::syntax::parse_formula("S(0) + 0 = S(0)").unwrap();
        let bumped = bump_formula(&f).unwrap();
        assert_eq!(print_formula(&bumped), "S(S(0)) + 0 = S(0)");
        let swapped = swap_formula(&f).unwrap();
        assert_eq!(print_formula(&swapped), "S(0) = S(0) + 0");
    }
}
