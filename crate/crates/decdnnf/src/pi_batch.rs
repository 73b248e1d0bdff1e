//! Batch prime-implicant computation.
//!
//! A single bottom-up pass over a reduced circuit. Constant and literal
//! leaves have trivial prime implicant sets; a decomposable conjunction
//! combines its children's sets by pairwise conjunction; a decision node
//! lifts the branch sets (keeping the decision literal on terms that do
//! not already cover the other branch) and adds the entailment-maximal
//! cross products. On reduced circuits the intermediate sets never
//! outgrow the final one, which the pass asserts.

use crate::circuit::{Circuit, CircuitError, Node, NodeId};
use crate::term::{Literal, Term, TermSet, Var};

/// Pairwise conjunction of two prime implicant sets.
///
/// With `vars_disjoint` the children are over disjoint variables: no pair
/// clashes, no product entails another, so the raw products are returned.
/// In general, contradictory pairs are dropped and the result is pruned
/// to its entailment-maximal elements.
pub fn combine_and(s0: &TermSet, s1: &TermSet, vars_disjoint: bool) -> TermSet {
    let mut out = TermSet::new();
    for t0 in s0 {
        for t1 in s1 {
            match t0.conjoin(t1) {
                Some(t) => {
                    out.insert(t);
                }
                None => debug_assert!(!vars_disjoint, "variable-disjoint terms cannot clash"),
            }
        }
    }
    if vars_disjoint {
        out
    } else {
        out.max_under_entailment()
    }
}

/// Prime implicants of the decision function `(¬x ∧ f0) ∨ (x ∧ f1)` from
/// `s0 = IP(f0)` and `s1 = IP(f1)`:
///
/// * terms of `s0` that are not implicants of `f1` keep the literal `¬x`
///   (symmetrically for `s1` and `x`), and
/// * the entailment-maximal pairwise conjunctions of `s0` and `s1` are
///   the x-free prime implicants.
///
/// `x` must not occur in either branch circuit (the dec-DNNF invariant).
pub fn lift_decision(
    s0: &TermSet,
    s1: &TermSet,
    x: &Var,
    circuit0: &Circuit,
    circuit1: &Circuit,
) -> Result<TermSet, CircuitError> {
    debug_assert!(circuit0.structural_vars().binary_search(x).is_err());
    debug_assert!(circuit1.structural_vars().binary_search(x).is_err());
    let mut out = combine_and(s0, s1, false);
    for t in s0 {
        if !circuit1.is_implicant(t)? {
            out.insert(
                t.with_literal(&Literal::new(x.clone(), false))
                    .expect("decision variable absent from branch terms"),
            );
        }
    }
    for t in s1 {
        if !circuit0.is_implicant(t)? {
            out.insert(
                t.with_literal(&Literal::new(x.clone(), true))
                    .expect("decision variable absent from branch terms"),
            );
        }
    }
    Ok(out)
}

/// `lift_decision` against subcircuits of `c` (no extraction needed).
fn lift_decision_at(
    c: &Circuit,
    s0: &TermSet,
    s1: &TermSet,
    x: &Var,
    lo: NodeId,
    hi: NodeId,
) -> TermSet {
    let mut out = combine_and(s0, s1, false);
    for t in s0 {
        if !c.is_implicant_at(t, hi) {
            out.insert(
                t.with_literal(&Literal::new(x.clone(), false))
                    .expect("decision variable absent from branch terms"),
            );
        }
    }
    for t in s1 {
        if !c.is_implicant_at(t, lo) {
            out.insert(
                t.with_literal(&Literal::new(x.clone(), true))
                    .expect("decision variable absent from branch terms"),
            );
        }
    }
    out
}

/// All prime implicants of the function a valid circuit computes.
///
/// The circuit is reduced first when necessary, so that no subcircuit
/// computes the constant 0; on the reduced circuit every intermediate
/// set is at most as large as the answer (asserted during the pass).
pub fn ip_all(circuit: &Circuit) -> Result<TermSet, CircuitError> {
    if !circuit.is_valid() {
        return Err(CircuitError::Invalid(circuit.validate().clone()));
    }
    let reduced_owned;
    let c = if circuit.is_reduced() {
        circuit
    } else {
        reduced_owned = circuit.reduce()?;
        &reduced_owned
    };

    let mut memo: Vec<TermSet> = Vec::with_capacity(c.num_nodes());
    let mut largest = 0usize;
    for node in c.nodes() {
        let s = match node {
            Node::False => TermSet::new(),
            Node::True => TermSet::singleton(Term::empty()),
            Node::Literal { var, positive } => TermSet::singleton(
                Term::new([Literal::new(c.var(*var).clone(), *positive)])
                    .expect("single literal"),
            ),
            Node::And(cs) => combine_and(&memo[cs[0]], &memo[cs[1]], true),
            Node::Decision { var, lo, hi } => {
                lift_decision_at(c, &memo[*lo], &memo[*hi], c.var(*var), *lo, *hi)
            }
        };
        largest = largest.max(s.len());
        memo.push(s);
    }
    let out = memo.swap_remove(c.root());
    assert!(
        largest <= out.len(),
        "intermediate prime implicant set outgrew the answer on a reduced circuit"
    );
    Ok(out)
}
