//! Explanations on top of prime implicants: sufficient reasons for a
//! classified instance, abductive explanations for a manifestation, and
//! two constructions that transport other problems into this setting.
//!
//! A *sufficient reason* for an instance `a` is a prime implicant of the
//! function (when `a` satisfies it) or of its negation (when it does not)
//! that `a` satisfies: a minimal part of the instance forcing the observed
//! outcome. The positive side works on any circuit; the negative side
//! requires a decision-only circuit (decision tree or OBDD shape), whose
//! negation is another decision circuit by leaf swapping — for circuits
//! with conjunction nodes there is no tractable implicant check against
//! the negation, so [`SrQuery`] refuses.
//!
//! An *abductive explanation* for hypotheses `H` and manifestation `m` is
//! a term `t` over `H` with `f ∧ t` satisfiable and `f ∧ t ⊨ m`. Deciding
//! existence is NP-hard even for decision trees — [`cnf_to_obdd_chain`]
//! builds the witnessing family — so [`abduction_exists`] is an explicit
//! exponential search behind a size cap.
//!
//! [`hypergraph_to_circuit`] encodes a hypergraph's edges as the models of
//! a decision circuit; the sufficient reasons of its negation at the
//! all-ones instance are exactly the minimal transversals
//! ([`min_transversals_via_sr`]).

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::circuit::{Circuit, CircuitBuilder, CircuitError, Node, NodeId};
use crate::formats::{Cnf, Hypergraph};
use crate::pi_batch::{combine_and, ip_all};
use crate::term::{Assignment, Literal, Term, TermSet, Var};

/// Default bound on the variable count of the exponential searches
/// ([`abduction_exists`], [`restricted_implicant_exists`]).
pub const DEFAULT_SEARCH_CAP: usize = 24;

/// Errors raised by the explanation operations.
#[derive(Debug, Error)]
pub enum ExplainError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(
        "reasons against the instance's side need the circuit's negation, which is only \
         another decision circuit when no conjunction nodes are present (decision tree \
         or OBDD shape); this circuit has conjunction nodes"
    )]
    NegationUnsupported,
    #[error(
        "refusing to search over {size} variables (cap {cap}): existence is NP-hard, \
         so this search is exponential by nature; raise the cap to force it"
    )]
    CapExceeded { size: usize, cap: usize },
    #[error("variable '{0}' appears in both the hypotheses and the manifestation")]
    ManifestationOverlap(Var),
    #[error("variable '{0}' is not declared by the circuit")]
    UnknownVar(Var),
    #[error("hypergraph edges must be nonempty (an empty edge admits no transversal)")]
    EmptyEdge,
}

/// An instance bound to the circuit that classifies it, with the side
/// (function or negation) derived from evaluation.
///
/// The instance must assign every structural variable; assignments to
/// other variables are ignored, since such variables cannot occur in a
/// prime implicant of the circuit.
#[derive(Clone, Debug)]
pub struct SrQuery<'a> {
    circuit: &'a Circuit,
    instance: &'a Assignment,
    positive: bool,
}

impl<'a> SrQuery<'a> {
    pub fn new(
        circuit: &'a Circuit,
        instance: &'a Assignment,
    ) -> Result<SrQuery<'a>, ExplainError> {
        let positive = circuit.evaluate(instance)?;
        if !circuit.is_valid() {
            return Err(CircuitError::Invalid(circuit.validate().clone()).into());
        }
        Ok(SrQuery { circuit, instance, positive })
    }

    pub fn circuit(&self) -> &'a Circuit {
        self.circuit
    }

    pub fn instance(&self) -> &'a Assignment {
        self.instance
    }

    /// Whether the instance satisfies the circuit (reasons are then prime
    /// implicants of the function rather than of its negation).
    pub fn is_positive(&self) -> bool {
        self.positive
    }

    /// The circuit whose prime implicants the reasons are: the queried one
    /// on the positive side, its negation on the negative side.
    fn target(&self) -> Result<Cow<'a, Circuit>, ExplainError> {
        if self.positive {
            Ok(Cow::Borrowed(self.circuit))
        } else {
            Ok(Cow::Owned(negate_decision_circuit(self.circuit)?))
        }
    }
}

/// One sufficient reason, greedily: start from the instance's canonical
/// term and drop each literal (in variable order) that leaves the term an
/// implicant of the target side.
pub fn sr_greedy(q: &SrQuery) -> Result<Term, ExplainError> {
    let target = q.target()?;
    let vars: Vec<Var> = target.structural_vars().to_vec();
    let mut t = q.instance().to_term_over(&vars);
    // A literal that cannot be dropped stays undroppable as the term
    // shrinks, so a single pass reaches a prime implicant.
    for x in &vars {
        let shorter = t.without_var(x);
        if target.is_implicant(&shorter)? {
            t = shorter;
        }
    }
    Ok(t)
}

/// All sufficient reasons for the instance, by structural recursion: at a
/// conjunction the reasons are the pairwise conjunctions of the children's
/// reasons; at a decision node on `x` the reasons are those of the branch
/// the instance selects, extended by the selected literal unless they
/// already cover the other branch, together with the maximal products of
/// the two branches' reasons (the `x`-free ones).
pub fn sr_all(q: &SrQuery) -> Result<TermSet, ExplainError> {
    let target = q.target()?;
    let mut table: Vec<TermSet> = Vec::with_capacity(target.num_nodes());
    for node in target.nodes() {
        let s = match node {
            Node::False => TermSet::new(),
            Node::True => TermSet::singleton(Term::empty()),
            Node::Literal { var, positive } => {
                let x = target.var(*var);
                if q.instance().get(x) == Some(*positive) {
                    let lit = Literal::new(x.clone(), *positive);
                    TermSet::singleton(Term::new([lit]).expect("single literal"))
                } else {
                    TermSet::new()
                }
            }
            Node::And(cs) => combine_and(&table[cs[0]], &table[cs[1]], true),
            Node::Decision { var, lo, hi } => {
                let x = target.var(*var);
                let value = q
                    .instance()
                    .get(x)
                    .expect("instance covers structural variables (checked by evaluate)");
                let (sel, other) = if value { (*hi, *lo) } else { (*lo, *hi) };
                let lit = Literal::new(x.clone(), value);
                let mut out = combine_and(&table[*lo], &table[*hi], false);
                for t in table[sel].iter() {
                    if !target.is_implicant_at(t, other) {
                        out.insert(
                            t.with_literal(&lit).expect("decision variable absent below"),
                        );
                    }
                }
                out
            }
        };
        table.push(s);
    }
    Ok(table.swap_remove(target.root()))
}

/// `sr_all` the slow way — all prime implicants of the target, kept when
/// the instance satisfies them. Exists to cross-check the recursion.
pub fn sr_all_via_filter(q: &SrQuery) -> Result<TermSet, ExplainError> {
    let target = q.target()?;
    let all = ip_all(&target)?;
    Ok(all.iter().filter(|t| t.satisfied_by(q.instance())).cloned().collect())
}

/// The negation of a decision-only circuit: constant leaves are swapped,
/// literal leaves negated, decision structure kept, and the result reduced.
/// Circuits containing conjunction nodes are refused — their negation is
/// not expressible in this language without blowup.
pub fn negate_decision_circuit(circuit: &Circuit) -> Result<Circuit, ExplainError> {
    if !circuit.is_valid() {
        return Err(CircuitError::Invalid(circuit.validate().clone()).into());
    }
    if circuit.nodes().iter().any(|n| matches!(n, Node::And(_))) {
        return Err(ExplainError::NegationUnsupported);
    }
    let mut b = CircuitBuilder::new();
    for x in circuit.vars() {
        b.declare_var(x);
    }
    let mut map: Vec<NodeId> = Vec::with_capacity(circuit.num_nodes());
    for node in circuit.nodes() {
        let id = match node {
            Node::False => b.true_node(),
            Node::True => b.false_node(),
            Node::Literal { var, positive } => {
                b.literal(&Literal::new(circuit.var(*var).clone(), !positive))
            }
            Node::And(_) => unreachable!("checked above"),
            Node::Decision { var, lo, hi } => b
                .decision(circuit.var(*var), map[*lo], map[*hi])
                .expect("negation preserves the decision structure"),
        };
        map.push(id);
    }
    let neg = b.finish(map[circuit.root()]).expect("negation preserves validity");
    Ok(neg.reduce()?)
}

/// An abduction problem: which hypotheses, if assumed, force the
/// manifestation through the circuit?
#[derive(Clone, Debug)]
pub struct AbductionInstance<'a> {
    circuit: &'a Circuit,
    hypotheses: BTreeSet<Var>,
    manifestation: Term,
    cap: usize,
}

impl<'a> AbductionInstance<'a> {
    /// Binds hypotheses (over circuit variables) and a manifestation term
    /// (over the remaining circuit variables) to a circuit.
    pub fn new(
        circuit: &'a Circuit,
        hypotheses: impl IntoIterator<Item = Var>,
        manifestation: Term,
    ) -> Result<AbductionInstance<'a>, ExplainError> {
        if !circuit.is_valid() {
            return Err(CircuitError::Invalid(circuit.validate().clone()).into());
        }
        let hypotheses: BTreeSet<Var> = hypotheses.into_iter().collect();
        for x in &hypotheses {
            if circuit.var_index(x).is_none() {
                return Err(ExplainError::UnknownVar(x.clone()));
            }
        }
        for x in manifestation.vars() {
            if circuit.var_index(x).is_none() {
                return Err(ExplainError::UnknownVar(x.clone()));
            }
            if hypotheses.contains(x) {
                return Err(ExplainError::ManifestationOverlap(x.clone()));
            }
        }
        Ok(AbductionInstance { circuit, hypotheses, manifestation, cap: DEFAULT_SEARCH_CAP })
    }

    /// Replaces the hypothesis-count cap (default
    /// [`DEFAULT_SEARCH_CAP`]).
    pub fn with_cap(mut self, cap: usize) -> AbductionInstance<'a> {
        self.cap = cap;
        self
    }

    pub fn hypotheses(&self) -> &BTreeSet<Var> {
        &self.hypotheses
    }

    pub fn manifestation(&self) -> &Term {
        &self.manifestation
    }
}

/// Some abductive explanation — a term `t` over the hypotheses with
/// `f ∧ t` satisfiable and `f ∧ t ⊨ m` — or `None` when there is none.
///
/// Candidates are tried in nondecreasing size with lexicographic
/// tie-break, so a returned explanation is subset-minimal and the search
/// is deterministic. The search is exponential in the hypothesis count
/// (existence is NP-hard), hence the cap.
pub fn abduction_exists(inst: &AbductionInstance) -> Result<Option<Term>, ExplainError> {
    if inst.hypotheses.len() > inst.cap {
        return Err(ExplainError::CapExceeded { size: inst.hypotheses.len(), cap: inst.cap });
    }
    let vars: Vec<Var> = inst.hypotheses.iter().cloned().collect();
    for k in 0..=vars.len() {
        for t in terms_of_size(&vars, k).iter() {
            if is_explanation(inst.circuit, &inst.manifestation, t)? {
                return Ok(Some(t.clone()));
            }
        }
    }
    Ok(None)
}

fn is_explanation(circuit: &Circuit, m: &Term, t: &Term) -> Result<bool, CircuitError> {
    let under = circuit.condition(t)?;
    if !under.is_satisfiable()? {
        return Ok(false);
    }
    for lit in m.literals() {
        // f ∧ t ⊨ ℓ exactly when (f|t)|ℓ̄ is unsatisfiable.
        let opposite = Term::new([lit.negated()]).expect("single literal");
        if under.condition(&opposite)?.is_satisfiable()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A ⊆-minimal implicant of the circuit mentioning only variables in `y`,
/// or `None`. Brute force in nondecreasing size with lexicographic
/// tie-break (deciding existence is NP-hard); `cap` defaults to
/// [`DEFAULT_SEARCH_CAP`].
pub fn restricted_implicant_exists(
    circuit: &Circuit,
    y: &BTreeSet<Var>,
    cap: Option<usize>,
) -> Result<Option<Term>, ExplainError> {
    if !circuit.is_valid() {
        return Err(CircuitError::Invalid(circuit.validate().clone()).into());
    }
    for x in y {
        if circuit.var_index(x).is_none() {
            return Err(ExplainError::UnknownVar(x.clone()));
        }
    }
    let cap = cap.unwrap_or(DEFAULT_SEARCH_CAP);
    if y.len() > cap {
        return Err(ExplainError::CapExceeded { size: y.len(), cap });
    }
    let vars: Vec<Var> = y.iter().cloned().collect();
    for k in 0..=vars.len() {
        for t in terms_of_size(&vars, k).iter() {
            if circuit.is_implicant(t)? {
                return Ok(Some(t.clone()));
            }
        }
    }
    Ok(None)
}

/// Every term of exactly `k` literals over `vars`, in canonical order.
fn terms_of_size(vars: &[Var], k: usize) -> TermSet {
    fn extend(vars: &[Var], k: usize, start: usize, acc: &mut Vec<Literal>, out: &mut TermSet) {
        if k == 0 {
            out.insert(Term::new(acc.iter().cloned()).expect("distinct variables"));
            return;
        }
        for i in start..vars.len() {
            if vars.len() - i < k {
                break;
            }
            for positive in [false, true] {
                acc.push(Literal::new(vars[i].clone(), positive));
                extend(vars, k - 1, i + 1, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = TermSet::new();
    extend(vars, k, 0, &mut Vec::new(), &mut out);
    out
}

/// A linear-size decision circuit that cannot reveal whether its CNF is
/// satisfiable without solving it: clause `i` sits below a fresh selector
/// `z_i`, so implicants avoiding every selector must satisfy all clauses.
///
/// Returns the circuit and the clause-variable set `Y` (named `x1..xn`;
/// selectors `z1..zm`): the circuit has an implicant over `Y` exactly when
/// the CNF is satisfiable.
pub fn cnf_to_obdd_chain(cnf: &Cnf) -> (Circuit, BTreeSet<Var>) {
    let mut b = CircuitBuilder::new();
    let x: Vec<Var> = (1..=cnf.num_vars)
        .map(|i| Var::new(&format!("x{i}")).expect("generated name"))
        .collect();
    let z: Vec<Var> = (1..=cnf.clauses.len())
        .map(|i| Var::new(&format!("z{i}")).expect("generated name"))
        .collect();
    for var in x.iter().chain(z.iter()) {
        b.declare_var(var);
    }
    let mut chain = b.true_node();
    for (i, clause) in cnf.clauses.iter().enumerate().rev() {
        let body = clause_obdd(&mut b, &x, clause);
        chain = b.decision(&z[i], body, chain).expect("selector is fresh");
    }
    let circuit = b.finish(chain).expect("chain shape is valid");
    (circuit, x.into_iter().collect())
}

/// An OBDD for one clause: a cascade of decisions in ascending variable
/// order, exiting to 1 at any satisfied literal. Tautological clauses
/// collapse to the 1 leaf.
fn clause_obdd(b: &mut CircuitBuilder, x: &[Var], clause: &[i64]) -> NodeId {
    let mut polarity: BTreeMap<usize, bool> = BTreeMap::new();
    for &lit in clause {
        let idx = lit.unsigned_abs() as usize - 1;
        let positive = lit > 0;
        match polarity.get(&idx) {
            Some(&p) if p != positive => return b.true_node(),
            _ => {
                polarity.insert(idx, positive);
            }
        }
    }
    let top = b.true_node();
    let mut node = b.false_node();
    for (&idx, &positive) in polarity.iter().rev() {
        node = if positive {
            b.decision(&x[idx], node, top)
        } else {
            b.decision(&x[idx], top, node)
        }
        .expect("cascade variables are distinct");
    }
    node
}

/// An ordered decision circuit whose models over `vars` are exactly the
/// rows of `models` (one bool per variable, aligned with `vars`). Built by
/// splitting on the variables in the given order with hash-consing, so
/// equal subfunctions share nodes; the result is reduced.
pub fn obdd_from_models(vars: &[Var], models: &[Vec<bool>]) -> Circuit {
    assert!(vars.len() < usize::BITS as usize, "model space too large to tabulate");
    let mut set: BTreeSet<Vec<bool>> = BTreeSet::new();
    for m in models {
        assert_eq!(m.len(), vars.len(), "each model must assign every variable");
        set.insert(m.clone());
    }
    let mut b = CircuitBuilder::new();
    for x in vars {
        b.declare_var(x);
    }
    let root = models_node(&mut b, vars, &set);
    b.finish(root).expect("decision split yields a valid circuit")
}

fn models_node(b: &mut CircuitBuilder, vars: &[Var], models: &BTreeSet<Vec<bool>>) -> NodeId {
    if models.is_empty() {
        return b.false_node();
    }
    if models.len() == 1usize << vars.len() {
        return b.true_node();
    }
    // Neither empty nor full, so at least one variable remains to split on.
    let mut lo: BTreeSet<Vec<bool>> = BTreeSet::new();
    let mut hi: BTreeSet<Vec<bool>> = BTreeSet::new();
    for m in models {
        let rest = m[1..].to_vec();
        if m[0] {
            hi.insert(rest);
        } else {
            lo.insert(rest);
        }
    }
    let lo = models_node(b, &vars[1..], &lo);
    let hi = models_node(b, &vars[1..], &hi);
    if lo == hi {
        lo
    } else {
        b.decision(&vars[0], lo, hi).expect("split variable is absent below")
    }
}

/// A decision circuit whose models are the *complements* of the edges —
/// each edge `H` contributes the model setting exactly its vertices to 0 —
/// negated, plus the all-ones assignment. The sufficient reasons of the
/// returned circuit at that assignment encode the minimal transversals.
/// Edges must be nonempty.
pub fn hypergraph_to_circuit(h: &Hypergraph) -> Result<(Circuit, Assignment), ExplainError> {
    if h.edges().iter().any(|e| e.is_empty()) {
        return Err(ExplainError::EmptyEdge);
    }
    let vars: Vec<Var> = h.vertices().iter().cloned().collect();
    let models: Vec<Vec<bool>> = h
        .edges()
        .iter()
        .map(|e| vars.iter().map(|x| !e.contains(x)).collect())
        .collect();
    let edge_circuit = obdd_from_models(&vars, &models);
    let negated = negate_decision_circuit(&edge_circuit)?;
    let all_ones: Assignment = vars.iter().map(|x| (x.clone(), true)).collect();
    Ok((negated, all_ones))
}

/// The minimal transversals of a hypergraph, obtained as the sufficient
/// reasons of [`hypergraph_to_circuit`]'s output and decoded back to
/// vertex sets.
pub fn min_transversals_via_sr(h: &Hypergraph) -> Result<BTreeSet<BTreeSet<Var>>, ExplainError> {
    let (circuit, all_ones) = hypergraph_to_circuit(h)?;
    let q = SrQuery::new(&circuit, &all_ones)?;
    debug_assert!(q.is_positive(), "the all-ones row is never an edge encoding");
    let reasons = sr_all(&q)?;
    let mut out = BTreeSet::new();
    for t in reasons.iter() {
        let set: BTreeSet<Var> = t
            .literals()
            .map(|lit| {
                debug_assert!(lit.is_positive(), "an all-ones instance satisfies no negation");
                lit.var().clone()
            })
            .collect();
        out.insert(set);
    }
    Ok(out)
}
