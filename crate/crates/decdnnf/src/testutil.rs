//! Shared fixtures for unit tests.

use crate::circuit::{Circuit, CircuitBuilder, Node, NodeId};
use crate::term::{Assignment, Literal, Term, TermSet, Var};

pub(crate) fn v(name: &str) -> Var {
    Var::new(name).expect("valid test variable name")
}

pub(crate) fn t(text: &str) -> Term {
    crate::formats::parse_term(text).expect("valid test term")
}

pub(crate) fn ts(texts: &[&str]) -> TermSet {
    texts.iter().map(|s| t(s)).collect()
}

pub(crate) fn asg(text: &str) -> Assignment {
    crate::formats::parse_assignment(text).expect("valid test assignment")
}

/// The five-variable running example used throughout the module tests:
/// a reduced dec-DNNF over `b e h p s` with twelve models and eight
/// prime implicants.
pub(crate) struct Sample {
    pub circuit: Circuit,
    pub root: NodeId,
    /// Decision on `e` reached through the root's 0-branch.
    pub dec_e_left: NodeId,
    /// Decision on `e` reached through the root's 1-branch.
    pub dec_e_right: NodeId,
    /// Decision on `b` (0-branch of `dec_e_right`).
    pub dec_b: NodeId,
    /// Decision on `s` (0-branch of `dec_b`).
    pub dec_s: NodeId,
    /// Conjunction `-p ∧ -s`.
    pub and_ps: NodeId,
    /// Conjunction `-b ∧ dec_s`.
    pub and_b: NodeId,
}

pub(crate) fn sample() -> Sample {
    let mut b = CircuitBuilder::new();
    let np = b.literal(&Literal::neg("p").unwrap());
    let ns = b.literal(&Literal::neg("s").unwrap());
    let a_ps = b.and(vec![np, ns]).unwrap();
    let nb = b.literal(&Literal::neg("b").unwrap());
    let tt = b.true_node();
    let p = b.literal(&Literal::pos("p").unwrap());
    let d_s = b.decision(&v("s"), tt, p).unwrap();
    let a_b = b.and(vec![nb, d_s]).unwrap();
    let d_e_left = b.decision(&v("e"), a_ps, a_b).unwrap();
    let d_b = b.decision(&v("b"), d_s, np).unwrap();
    let d_e_right = b.decision(&v("e"), d_b, a_ps).unwrap();
    let root = b.decision(&v("h"), d_e_left, d_e_right).unwrap();
    let circuit = b.finish(root).unwrap();

    // Recover the canonical node ids structurally, so the fixture does not
    // depend on the renumbering performed by `finish`.
    let root = circuit.root();
    let (dec_e_left, dec_e_right) = match circuit.node(root) {
        Node::Decision { lo, hi, .. } => (*lo, *hi),
        other => panic!("sample root should be a decision, got {other:?}"),
    };
    let (dec_b, and_ps) = match circuit.node(dec_e_right) {
        Node::Decision { lo, hi, .. } => (*lo, *hi),
        other => panic!("right e-decision expected, got {other:?}"),
    };
    let and_b = match circuit.node(dec_e_left) {
        Node::Decision { hi, .. } => *hi,
        other => panic!("left e-decision expected, got {other:?}"),
    };
    let dec_s = match circuit.node(dec_b) {
        Node::Decision { lo, .. } => *lo,
        other => panic!("b-decision expected, got {other:?}"),
    };
    Sample {
        circuit,
        root,
        dec_e_left,
        dec_e_right,
        dec_b,
        dec_s,
        and_ps,
        and_b,
    }
}

/// The eight prime implicants of the sample circuit, as parseable text.
pub(crate) const SAMPLE_PRIME_IMPLICANTS: [&str; 8] = [
    "-b e -h -s",
    "-b e -h p",
    "b -e h -p",
    "-b -e h -s",
    "-b -e h p",
    "h -p -s",
    "-e -p -s",
    "-b -p -s",
];

pub(crate) fn sample_ip() -> TermSet {
    ts(&SAMPLE_PRIME_IMPLICANTS)
}
