//! Queries and transformations over decision-DNNF circuits.
//!
//! Decision-DNNF is the fragment of negation normal form circuits whose
//! conjunctions are decomposable (children share no variable) and whose
//! disjunctions are decision nodes `(¬x ∧ f0) ∨ (x ∧ f1)` on a variable
//! that occurs in neither branch. The crate provides:
//!
//! * [`circuit`] — the circuit representation plus the classical
//!   linear-time queries (evaluation, satisfiability, model counting,
//!   conditioning, reduction, implicant tests);
//! * [`formats`] — a plain-text circuit format, a c2d-style NNF importer,
//!   and parsers for terms, assignments, hypergraphs and DIMACS CNF;
//! * [`pi_batch`] — computing the full set of prime implicants bottom-up;
//! * [`pi_incremental`] — extending any partial set of prime implicants
//!   by one ("give me another"), with polynomial delay per item;
//! * [`explain`] — sufficient reasons for a classified instance,
//!   abductive explanations, and two reductions: CNF satisfiability as a
//!   restricted-implicant query on an OBDD chain, and minimal hypergraph
//!   transversals as sufficient reasons of a negated decision tree;
//! * [`oracle`] — brute-force truth-table baselines and random instance
//!   generators used to validate everything else.

pub mod circuit;
pub mod explain;
pub mod formats;
pub mod oracle;
pub mod pi_batch;
pub mod pi_incremental;
pub mod term;

pub use circuit::{Circuit, CircuitBuilder, CircuitError, Node, NodeId, ValidationReport, Violation};
pub use term::{Assignment, Literal, Term, TermError, TermSet, Var};

#[cfg(test)]
pub(crate) mod testutil;
