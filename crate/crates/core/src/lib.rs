//! Logic-based natural language inference for comparatives, numerals and generalized
//! quantifiers over a controlled English fragment.
//!
//! Sentences are parsed with a CCG fragment grammar, the derivations are rewritten to
//! expose degree positions, composed into degree-semantics logical forms, and handed to
//! a first-order prover with linear arithmetic that answers yes, no or unknown.

pub mod axioms;
pub mod grammar;
pub mod harness;
pub mod logic;
pub mod prover;
pub mod semantics;
pub mod transform;
