//! Hand-written Q-proofs shipped with the crate.

use crate::hilbert::{parse_proof, Proof};

const Q_PROOFS: [(&str, &str); 16] = [
    ("add_zero", include_str!("../corpus/q/add_zero.proof")),
    (
        "add_zero_general",
        include_str!("../corpus/q/add_zero_general.proof"),
    ),
    ("and_elim", include_str!("../corpus/q/and_elim.proof")),
    ("and_intro", include_str!("../corpus/q/and_intro.proof")),
    ("gen_refl", include_str!("../corpus/q/gen_refl.proof")),
    ("identity", include_str!("../corpus/q/identity.proof")),
    ("injectivity", include_str!("../corpus/q/injectivity.proof")),
    ("mul_succ", include_str!("../corpus/q/mul_succ.proof")),
    ("mul_zero", include_str!("../corpus/q/mul_zero.proof")),
    (
        "one_not_zero",
        include_str!("../corpus/q/one_not_zero.proof"),
    ),
    ("predecessor", include_str!("../corpus/q/predecessor.proof")),
    ("refl", include_str!("../corpus/q/refl.proof")),
    (
        "succ_not_zero",
        include_str!("../corpus/q/succ_not_zero.proof"),
    ),
    ("symmetry", include_str!("../corpus/q/symmetry.proof")),
    ("vacuous", include_str!("../corpus/q/vacuous.proof")),
    ("weaken_gen", include_str!("../corpus/q/weaken_gen.proof")),
];

/// The Q corpus, in a fixed order.
pub fn q_corpus() -> Vec<(&'static str, Proof)> {
    Q_PROOFS
        .iter()
        .map(|(name, text)| (*name, parse_proof(text).expect("corpus proofs parse")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{check_proof, Theory};

    #[test]
    fn corpus_checks_with_accurate_hints() {
        let q = Theory::q();
        let corpus = q_corpus();
        assert!(corpus.len() >= 10);
        for (name, p) in &corpus {
            let c = check_proof(p, &q).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(c.wrong_hints.is_empty(), "{name}: {:?}", c.wrong_hints);
            assert!((1..=8).contains(&p.len()), "{name}");
        }
    }
}
