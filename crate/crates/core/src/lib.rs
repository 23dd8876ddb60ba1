//! Two notions of consequence for arithmetic, side by side: derivability in
//! a Hilbert system and support over atomic-rule bases, together with a
//! Gödel coding and an arithmetized proof predicate that can be evaluated.

pub mod arith;
pub mod base;
pub mod coding;
pub mod corpus;
pub mod delta0;
pub mod experiments;
pub mod hilbert;
pub mod support;
pub mod syntax;
pub mod vocab;
