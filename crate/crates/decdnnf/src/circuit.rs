//! Decision-DNNF circuits.
//!
//! A circuit is an immutable table of nodes in topological order (children
//! strictly before parents, the root last). Construction goes through
//! [`CircuitBuilder`], which hash-conses nodes so syntactically identical
//! subcircuits share one node. Per-node variable sets, satisfiability bits
//! and the validation report are computed once at construction; model
//! counts are cached on first use.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::term::{Assignment, Literal, Term, Var};

/// Index of a node in its circuit's table.
pub type NodeId = usize;

/// A circuit node. `And` children may have any arity until [`Circuit::binarize`]
/// rewrites them; every other operation requires the binary, validated form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Node {
    /// Constant 0 leaf.
    False,
    /// Constant 1 leaf.
    True,
    /// Literal leaf; `var` indexes the circuit's variable table.
    Literal { var: usize, positive: bool },
    /// Decomposable conjunction.
    And(Vec<NodeId>),
    /// Decision node `(¬x ∧ lo) ∨ (x ∧ hi)`; `x` must not occur below.
    Decision { var: usize, lo: NodeId, hi: NodeId },
}

/// A structural defect found by validation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    /// An `And` node whose arity is not two.
    NonBinaryAnd { node: NodeId, arity: usize },
    /// An `And` node whose children share a variable.
    NonDecomposableAnd { node: NodeId, var: Var },
    /// A decision node whose variable occurs in a child subcircuit.
    DecisionVarBelow { node: NodeId, var: Var },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonBinaryAnd { node, arity } => {
                write!(f, "node {node}: AND with {arity} children (expected 2)")
            }
            Violation::NonDecomposableAnd { node, var } => {
                write!(f, "node {node}: AND children share variable '{var}'")
            }
            Violation::DecisionVarBelow { node, var } => {
                write!(f, "node {node}: decision variable '{var}' occurs below the node")
            }
        }
    }
}

/// Outcome of validating a circuit against the dec-DNNF contract.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("no violations");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Errors raised by circuit operations.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("invalid dec-DNNF: {0}")]
    Invalid(ValidationReport),
    #[error("assignment does not define variable '{0}'")]
    MissingVar(Var),
    #[error("variable set is not a superset of the circuit's variables (missing '{0}')")]
    NotSuperset(Var),
    #[error("no node {0} in a circuit with {1} nodes")]
    BadNode(NodeId, usize),
    #[error("unknown child index {child} at node {node}")]
    BadChild { node: NodeId, child: NodeId },
    #[error("the circuit is unsatisfiable")]
    Unsatisfiable,
    #[error("the circuit must be reduced first (see Circuit::reduce)")]
    NotReduced,
}

/// Incremental, hash-consing circuit constructor.
///
/// Nodes are created bottom-up; [`CircuitBuilder::finish`] compacts the
/// table to the nodes reachable from the root, renumbers them in a
/// canonical depth-first post-order (0-child first) and freezes the result.
#[derive(Default)]
pub struct CircuitBuilder {
    nodes: Vec<Node>,
    cons: HashMap<Node, NodeId>,
    vars: Vec<Var>,
    var_ids: HashMap<Var, usize>,
}

impl CircuitBuilder {
    pub fn new() -> CircuitBuilder {
        CircuitBuilder::default()
    }

    /// Registers a variable in the circuit's declared set, returning its
    /// provisional index. Idempotent.
    pub fn declare_var(&mut self, var: &Var) -> usize {
        if let Some(&i) = self.var_ids.get(var) {
            return i;
        }
        let i = self.vars.len();
        self.vars.push(var.clone());
        self.var_ids.insert(var.clone(), i);
        i
    }

    fn intern(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.cons.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.cons.insert(node, id);
        id
    }

    fn check_child(&self, node_kind: &str, child: NodeId) -> Result<(), CircuitError> {
        if child >= self.nodes.len() {
            // The builder hands out ids densely, so anything out of range
            // was never created here.
            let _ = node_kind;
            return Err(CircuitError::BadNode(child, self.nodes.len()));
        }
        Ok(())
    }

    pub fn false_node(&mut self) -> NodeId {
        self.intern(Node::False)
    }

    pub fn true_node(&mut self) -> NodeId {
        self.intern(Node::True)
    }

    pub fn literal(&mut self, lit: &Literal) -> NodeId {
        let var = self.declare_var(lit.var());
        self.intern(Node::Literal { var, positive: lit.is_positive() })
    }

    /// Conjunction of the children in the given order (any arity).
    pub fn and(&mut self, children: Vec<NodeId>) -> Result<NodeId, CircuitError> {
        for &c in &children {
            self.check_child("and", c)?;
        }
        Ok(self.intern(Node::And(children)))
    }

    /// Decision node on `var` with 0-child `lo` and 1-child `hi`.
    pub fn decision(&mut self, var: &Var, lo: NodeId, hi: NodeId) -> Result<NodeId, CircuitError> {
        self.check_child("decision", lo)?;
        self.check_child("decision", hi)?;
        let var = self.declare_var(var);
        Ok(self.intern(Node::Decision { var, lo, hi }))
    }

    /// Freezes the builder into a circuit rooted at `root`.
    pub fn finish(self, root: NodeId) -> Result<Circuit, CircuitError> {
        if root >= self.nodes.len() {
            return Err(CircuitError::BadNode(root, self.nodes.len()));
        }

        // Canonical order: iterative DFS post-order from the root,
        // visiting And children left to right and decision 0-child first.
        let mut order: Vec<NodeId> = Vec::new();
        let mut done: Vec<bool> = vec![false; self.nodes.len()];
        let mut stack: Vec<(NodeId, usize)> = vec![(root, 0)];
        while let Some(&(v, next)) = stack.last() {
            let child = match &self.nodes[v] {
                Node::False | Node::True | Node::Literal { .. } => None,
                Node::And(cs) => cs.get(next).copied(),
                Node::Decision { lo, hi, .. } => match next {
                    0 => Some(*lo),
                    1 => Some(*hi),
                    _ => None,
                },
            };
            match child {
                Some(c) => {
                    stack.last_mut().expect("nonempty").1 += 1;
                    if !done[c] {
                        stack.push((c, 0));
                    }
                }
                None => {
                    if !done[v] {
                        done[v] = true;
                        order.push(v);
                    }
                    stack.pop();
                }
            }
        }

        // Sorted variable table; provisional indices remap to sorted ones.
        let mut vars = self.vars.clone();
        vars.sort();
        let var_remap: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.binary_search(v).expect("variable registered"))
            .collect();

        let mut renumber: Vec<Option<NodeId>> = vec![None; self.nodes.len()];
        let mut nodes: Vec<Node> = Vec::with_capacity(order.len());
        for &old in &order {
            let node = match &self.nodes[old] {
                Node::False => Node::False,
                Node::True => Node::True,
                Node::Literal { var, positive } => {
                    Node::Literal { var: var_remap[*var], positive: *positive }
                }
                Node::And(cs) => Node::And(
                    cs.iter()
                        .map(|&c| renumber[c].expect("child numbered before parent"))
                        .collect(),
                ),
                Node::Decision { var, lo, hi } => Node::Decision {
                    var: var_remap[*var],
                    lo: renumber[*lo].expect("child numbered before parent"),
                    hi: renumber[*hi].expect("child numbered before parent"),
                },
            };
            renumber[old] = Some(nodes.len());
            nodes.push(node);
        }
        let root = renumber[root].expect("root visited");
        Ok(Circuit::freeze(nodes, root, vars))
    }
}

/// An immutable decision-DNNF circuit.
#[derive(Clone)]
pub struct Circuit {
    nodes: Vec<Node>,
    root: NodeId,
    /// Declared variables, sorted; a superset of the variables occurring
    /// in nodes. Counting (`count` subcommand) ranges over this set.
    vars: Vec<Var>,
    /// Per node: sorted variables of the subcircuit.
    var_sets: Vec<Box<[Var]>>,
    /// Per node: satisfiability of the subcircuit (meaningful when valid).
    sat: Vec<bool>,
    validation: ValidationReport,
    reduced: bool,
    /// Per node: model count over the node's own variable set (lazy).
    counts: OnceLock<Vec<BigUint>>,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.root == other.root && self.vars == other.vars
    }
}

impl Eq for Circuit {}

impl fmt::Debug for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Circuit({} nodes, root {}, vars [{}])",
            self.nodes.len(),
            self.root,
            self.vars.iter().map(|v| v.name()).collect::<Vec<_>>().join(" ")
        )
    }
}

impl Circuit {
    /// Builds a circuit directly from a topologically ordered node table
    /// without renumbering, computing the derived data. `vars` must be
    /// sorted and cover every variable index used by `nodes`.
    pub(crate) fn freeze(nodes: Vec<Node>, root: NodeId, vars: Vec<Var>) -> Circuit {
        let n = nodes.len();

        let mut var_sets: Vec<Box<[Var]>> = Vec::with_capacity(n);
        let mut sat: Vec<bool> = Vec::with_capacity(n);
        let mut violations: Vec<Violation> = Vec::new();

        for (id, node) in nodes.iter().enumerate() {
            match node {
                Node::False => {
                    var_sets.push(Box::new([]));
                    sat.push(false);
                }
                Node::True => {
                    var_sets.push(Box::new([]));
                    sat.push(true);
                }
                Node::Literal { var, .. } => {
                    var_sets.push(Box::new([vars[*var].clone()]));
                    sat.push(true);
                }
                Node::And(cs) => {
                    if cs.len() != 2 {
                        violations.push(Violation::NonBinaryAnd { node: id, arity: cs.len() });
                    }
                    let mut merged: Vec<Var> = Vec::new();
                    for &c in cs {
                        merged.extend_from_slice(&var_sets[c]);
                    }
                    merged.sort();
                    let mut shared: Option<Var> = None;
                    merged.dedup_by(|b, a| {
                        if a == b {
                            if shared.is_none() {
                                shared = Some(a.clone());
                            }
                            true
                        } else {
                            false
                        }
                    });
                    if let Some(var) = shared {
                        violations.push(Violation::NonDecomposableAnd { node: id, var });
                    }
                    var_sets.push(merged.into_boxed_slice());
                    sat.push(cs.iter().all(|&c| sat[c]));
                }
                Node::Decision { var, lo, hi } => {
                    let x = vars[*var].clone();
                    let mut merged: Vec<Var> =
                        Vec::with_capacity(var_sets[*lo].len() + var_sets[*hi].len() + 1);
                    merged.extend_from_slice(&var_sets[*lo]);
                    merged.extend_from_slice(&var_sets[*hi]);
                    merged.sort();
                    merged.dedup();
                    if merged.binary_search(&x).is_ok() {
                        violations.push(Violation::DecisionVarBelow { node: id, var: x.clone() });
                    } else {
                        let pos = merged.binary_search(&x).unwrap_err();
                        merged.insert(pos, x.clone());
                    }
                    var_sets.push(merged.into_boxed_slice());
                    sat.push(sat[*lo] || sat[*hi]);
                }
            }
        }

        let validation = ValidationReport { violations };
        // Reduced: no internal (non-leaf) node computes the constant 0.
        let reduced = validation.is_valid()
            && nodes.iter().enumerate().all(|(id, node)| match node {
                Node::And(_) | Node::Decision { .. } => sat[id],
                _ => true,
            });

        Circuit { nodes, root, vars, var_sets, sat, validation, reduced, counts: OnceLock::new() }
    }

    /// Single-leaf constant circuit over no variables.
    pub fn constant(value: bool) -> Circuit {
        let mut b = CircuitBuilder::new();
        let root = if value { b.true_node() } else { b.false_node() };
        b.finish(root).expect("single leaf")
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, v: NodeId) -> &Node {
        &self.nodes[v]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Total edge count (the usual size measure `|Σ|`).
    pub fn size(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| match n {
                Node::False | Node::True | Node::Literal { .. } => 0,
                Node::And(cs) => cs.len(),
                Node::Decision { .. } => 2,
            })
            .sum()
    }

    /// Declared variables, sorted.
    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    /// The variable behind a node-table index.
    pub fn var(&self, idx: usize) -> &Var {
        &self.vars[idx]
    }

    pub fn var_index(&self, var: &Var) -> Option<usize> {
        self.vars.binary_search(var).ok()
    }

    /// Sorted variables occurring in the subcircuit rooted at `v`.
    pub fn node_vars(&self, v: NodeId) -> &[Var] {
        &self.var_sets[v]
    }

    /// Sorted variables occurring anywhere under the root.
    pub fn structural_vars(&self) -> &[Var] {
        &self.var_sets[self.root]
    }

    /// The cached validation outcome for this circuit.
    pub fn validate(&self) -> &ValidationReport {
        &self.validation
    }

    pub fn is_valid(&self) -> bool {
        self.validation.is_valid()
    }

    /// Whether no internal node computes the constant-0 function.
    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    fn require_valid(&self) -> Result<(), CircuitError> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(CircuitError::Invalid(self.validation.clone()))
        }
    }

    pub(crate) fn sat_at(&self, v: NodeId) -> bool {
        self.sat[v]
    }

    /// Evaluates the circuit under a (total) assignment of its structural
    /// variables. Works on any circuit, valid or not.
    pub fn evaluate(&self, a: &Assignment) -> Result<bool, CircuitError> {
        let mut vals: Vec<Option<bool>> = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            vals.push(a.get(v));
        }
        for v in self.structural_vars() {
            let idx = self.vars.binary_search(v).expect("structural var is declared");
            if vals[idx].is_none() {
                return Err(CircuitError::MissingVar(v.clone()));
            }
        }
        let mut out: Vec<bool> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let b = match node {
                Node::False => false,
                Node::True => true,
                Node::Literal { var, positive } => {
                    vals[*var].expect("checked above") == *positive
                }
                Node::And(cs) => cs.iter().all(|&c| out[c]),
                Node::Decision { var, lo, hi } => {
                    if vals[*var].expect("checked above") {
                        out[*hi]
                    } else {
                        out[*lo]
                    }
                }
            };
            out.push(b);
        }
        Ok(out[self.root])
    }

    /// Linear-time satisfiability (needs a valid circuit).
    pub fn is_satisfiable(&self) -> Result<bool, CircuitError> {
        self.require_valid()?;
        Ok(self.sat[self.root])
    }

    fn node_counts(&self) -> &Vec<BigUint> {
        self.counts.get_or_init(|| {
            let mut counts: Vec<BigUint> = Vec::with_capacity(self.nodes.len());
            for (id, node) in self.nodes.iter().enumerate() {
                let c = match node {
                    Node::False => BigUint::zero(),
                    Node::True | Node::Literal { .. } => BigUint::one(),
                    Node::And(cs) => {
                        let mut p = BigUint::one();
                        for &c in cs {
                            p *= &counts[c];
                        }
                        p
                    }
                    Node::Decision { lo, hi, .. } => {
                        let n = self.var_sets[id].len();
                        let pad = |child: NodeId, counts: &[BigUint]| {
                            let free = n - 1 - self.var_sets[child].len();
                            &counts[child] << free
                        };
                        pad(*lo, &counts) + pad(*hi, &counts)
                    }
                };
                counts.push(c);
            }
            counts
        })
    }

    /// Number of models over `over`, which must contain every variable of
    /// the circuit. Exact, via the decomposable/deterministic structure.
    pub fn count_models(&self, over: &BTreeSet<Var>) -> Result<BigUint, CircuitError> {
        self.require_valid()?;
        for v in self.structural_vars() {
            if !over.contains(v) {
                return Err(CircuitError::NotSuperset(v.clone()));
            }
        }
        let free = over.len() - self.structural_vars().len();
        Ok(self.node_counts()[self.root].clone() << free)
    }

    /// Rewrites every `And` to a left-folded binary form. Accepts circuits
    /// whose only defects are arity violations.
    pub fn binarize(&self) -> Result<Circuit, CircuitError> {
        let beyond_arity: Vec<Violation> = self
            .validation
            .violations
            .iter()
            .filter(|v| !matches!(v, Violation::NonBinaryAnd { .. }))
            .cloned()
            .collect();
        if !beyond_arity.is_empty() {
            return Err(CircuitError::Invalid(ValidationReport { violations: beyond_arity }));
        }
        let mut b = CircuitBuilder::new();
        for v in &self.vars {
            b.declare_var(v);
        }
        let mut map: Vec<NodeId> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let id = match node {
                Node::False => b.false_node(),
                Node::True => b.true_node(),
                Node::Literal { var, positive } => b.literal(&Literal::new(
                    self.vars[*var].clone(),
                    *positive,
                )),
                Node::And(cs) => match cs.len() {
                    0 => b.true_node(),
                    1 => map[cs[0]],
                    _ => {
                        let mut acc = map[cs[0]];
                        for &c in &cs[1..] {
                            acc = b.and(vec![acc, map[c]])?;
                        }
                        acc
                    }
                },
                Node::Decision { var, lo, hi } => {
                    b.decision(&self.vars[*var].clone(), map[*lo], map[*hi])?
                }
            };
            map.push(id);
        }
        b.finish(map[self.root])
    }

    /// Replaces every node computing the constant 0 by the 0-leaf and
    /// drops unreachable nodes. Function-preserving; idempotent.
    pub fn reduce(&self) -> Result<Circuit, CircuitError> {
        self.require_valid()?;
        let mut b = CircuitBuilder::new();
        for v in &self.vars {
            b.declare_var(v);
        }
        let mut map: Vec<NodeId> = Vec::with_capacity(self.nodes.len());
        for (id, node) in self.nodes.iter().enumerate() {
            let new = if !self.sat[id] {
                b.false_node()
            } else {
                match node {
                    Node::False => b.false_node(),
                    Node::True => b.true_node(),
                    Node::Literal { var, positive } => {
                        b.literal(&Literal::new(self.vars[*var].clone(), *positive))
                    }
                    Node::And(cs) => b.and(cs.iter().map(|&c| map[c]).collect())?,
                    Node::Decision { var, lo, hi } => {
                        b.decision(&self.vars[*var].clone(), map[*lo], map[*hi])?
                    }
                }
            };
            map.push(new);
        }
        b.finish(map[self.root])
    }

    /// Conditions the circuit on a term: literal leaves on assigned
    /// variables collapse to constants, decision nodes on assigned
    /// variables select a branch. The declared variable set shrinks by
    /// `var(t)` and the result is re-reduced.
    pub fn condition(&self, t: &Term) -> Result<Circuit, CircuitError> {
        self.require_valid()?;
        let tvals = self.term_values(t);
        let mut b = CircuitBuilder::new();
        for v in &self.vars {
            if t.polarity_of(v).is_none() {
                b.declare_var(v);
            }
        }
        let mut map: Vec<NodeId> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let id = match node {
                Node::False => b.false_node(),
                Node::True => b.true_node(),
                Node::Literal { var, positive } => match tvals[*var] {
                    Some(v) if v == *positive => b.true_node(),
                    Some(_) => b.false_node(),
                    None => b.literal(&Literal::new(self.vars[*var].clone(), *positive)),
                },
                Node::And(cs) => {
                    let kids: Vec<NodeId> = cs.iter().map(|&c| map[c]).collect();
                    if kids.iter().any(|&k| matches!(b.nodes[k], Node::False)) {
                        b.false_node()
                    } else {
                        let live: Vec<NodeId> = kids
                            .into_iter()
                            .filter(|&k| !matches!(b.nodes[k], Node::True))
                            .collect();
                        match live.len() {
                            0 => b.true_node(),
                            1 => live[0],
                            _ => b.and(live)?,
                        }
                    }
                }
                Node::Decision { var, lo, hi } => match tvals[*var] {
                    Some(true) => map[*hi],
                    Some(false) => map[*lo],
                    None => b.decision(&self.vars[*var].clone(), map[*lo], map[*hi])?,
                },
            };
            map.push(id);
        }
        b.finish(map[self.root])?.reduce()
    }

    /// Per circuit-variable index, the polarity `t` assigns (if any).
    fn term_values(&self, t: &Term) -> Vec<Option<bool>> {
        let mut tvals: Vec<Option<bool>> = vec![None; self.vars.len()];
        for l in t.literals() {
            if let Some(idx) = self.var_index(l.var()) {
                tvals[idx] = Some(l.is_positive());
            }
        }
        tvals
    }

    /// Whether `t |= Σ`, i.e. the conditioned circuit `Σ|t` is valid
    /// (its model count equals `2^#free`).
    pub fn is_implicant(&self, t: &Term) -> Result<bool, CircuitError> {
        self.require_valid()?;
        Ok(self.is_implicant_at(t, self.root))
    }

    /// Implicant check against the subcircuit rooted at `v`.
    /// One bottom-up counting pass over the conditioned function; no
    /// intermediate circuit is built.
    pub(crate) fn is_implicant_at(&self, t: &Term, v: NodeId) -> bool {
        let tvals = self.term_values(t);
        // free[u] = |var(Σ_u) ∖ var(t)|
        let free = |u: NodeId| -> usize {
            self.var_sets[u]
                .iter()
                .filter(|x| {
                    let idx = self.vars.binary_search(x).expect("declared");
                    tvals[idx].is_none()
                })
                .count()
        };
        let mut counts: Vec<BigUint> = Vec::with_capacity(v + 1);
        let mut frees: Vec<usize> = Vec::with_capacity(v + 1);
        for (id, node) in self.nodes.iter().enumerate().take(v + 1) {
            let f = free(id);
            let c = match node {
                Node::False => BigUint::zero(),
                Node::True => BigUint::one(),
                Node::Literal { var, positive } => match tvals[*var] {
                    Some(b) => {
                        if b == *positive {
                            BigUint::one()
                        } else {
                            BigUint::zero()
                        }
                    }
                    None => BigUint::one(),
                },
                Node::And(cs) => {
                    let mut p = BigUint::one();
                    for &c in cs {
                        p *= &counts[c];
                    }
                    p
                }
                Node::Decision { var, lo, hi } => match tvals[*var] {
                    Some(b) => {
                        let child = if b { *hi } else { *lo };
                        &counts[child] << (f - frees[child])
                    }
                    None => {
                        (&counts[*lo] << (f - 1 - frees[*lo]))
                            + (&counts[*hi] << (f - 1 - frees[*hi]))
                    }
                },
            };
            counts.push(c);
            frees.push(f);
        }
        counts[v] == BigUint::one() << frees[v]
    }

    /// Whether `t` is a prime implicant: an implicant none of whose
    /// literal-removals stays one.
    pub fn is_prime_implicant(&self, t: &Term) -> Result<bool, CircuitError> {
        self.require_valid()?;
        Ok(self.is_prime_implicant_at(t, self.root))
    }

    pub(crate) fn is_prime_implicant_at(&self, t: &Term, v: NodeId) -> bool {
        if !self.is_implicant_at(t, v) {
            return false;
        }
        t.vars().all(|x| !self.is_implicant_at(&t.without_var(x), v))
    }

    /// Extracts the subcircuit rooted at `v` as a circuit of its own,
    /// declaring exactly the variables occurring under `v`.
    pub fn subcircuit(&self, v: NodeId) -> Result<Circuit, CircuitError> {
        if v >= self.nodes.len() {
            return Err(CircuitError::BadNode(v, self.nodes.len()));
        }
        let mut b = CircuitBuilder::new();
        let mut map: Vec<Option<NodeId>> = vec![None; v + 1];
        // The table is topological, so a single pass over `0..=v`
        // restricted to reachable nodes suffices.
        let mut reach = vec![false; v + 1];
        reach[v] = true;
        for id in (0..=v).rev() {
            if !reach[id] {
                continue;
            }
            match &self.nodes[id] {
                Node::False | Node::True | Node::Literal { .. } => {}
                Node::And(cs) => cs.iter().for_each(|&c| reach[c] = true),
                Node::Decision { lo, hi, .. } => {
                    reach[*lo] = true;
                    reach[*hi] = true;
                }
            }
        }
        for id in 0..=v {
            if !reach[id] {
                continue;
            }
            let new = match &self.nodes[id] {
                Node::False => b.false_node(),
                Node::True => b.true_node(),
                Node::Literal { var, positive } => {
                    b.literal(&Literal::new(self.vars[*var].clone(), *positive))
                }
                Node::And(cs) => {
                    b.and(cs.iter().map(|&c| map[c].expect("child reachable")).collect())?
                }
                Node::Decision { var, lo, hi } => b.decision(
                    &self.vars[*var].clone(),
                    map[*lo].expect("child reachable"),
                    map[*hi].expect("child reachable"),
                )?,
            };
            map[id] = Some(new);
        }
        b.finish(map[v].expect("root mapped"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::parse_term;
    use crate::testutil::{sample, v};

    fn assignment(pairs: &[(&str, bool)]) -> Assignment {
        pairs.iter().map(|(n, b)| (v(n), *b)).collect()
    }

    #[test]
    fn builder_conses_identical_nodes() {
        let mut b = CircuitBuilder::new();
        let p1 = b.literal(&Literal::neg("p").unwrap());
        let p2 = b.literal(&Literal::neg("p").unwrap());
        assert_eq!(p1, p2);
        let t = b.true_node();
        let d1 = b.decision(&v("s"), t, p1).unwrap();
        let d2 = b.decision(&v("s"), t, p2).unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn sample_circuit_is_valid_and_reduced() {
        let f = sample();
        let c = &f.circuit;
        assert!(c.is_valid());
        assert!(c.is_reduced());
        assert_eq!(c.num_nodes(), 12);
        assert_eq!(
            c.vars().iter().map(|x| x.name()).collect::<Vec<_>>(),
            vec!["b", "e", "h", "p", "s"]
        );
        // Binarized circuits have at most two edges per node.
        assert!(c.size() <= 2 * c.num_nodes());
    }

    #[test]
    fn evaluate_matches_the_examples() {
        let f = sample();
        let hobbit = assignment(&[("h", true), ("b", false), ("p", true), ("s", true), ("e", false)]);
        assert_eq!(f.circuit.evaluate(&hobbit), Ok(true));
        let evil = assignment(&[("h", true), ("b", false), ("p", true), ("s", true), ("e", true)]);
        assert_eq!(f.circuit.evaluate(&evil), Ok(false));
        let missing = assignment(&[("h", true)]);
        assert!(matches!(f.circuit.evaluate(&missing), Err(CircuitError::MissingVar(_))));
        // A 0-leaf evaluates to 0 under any assignment.
        assert_eq!(Circuit::constant(false).evaluate(&Assignment::new()), Ok(false));
    }

    #[test]
    fn count_models_matches_brute_force() {
        let f = sample();
        let over: BTreeSet<Var> = f.circuit.vars().iter().cloned().collect();
        assert_eq!(f.circuit.count_models(&over), Ok(BigUint::from(12u32)));

        // Brute-force cross-check over all 32 assignments.
        let vars = f.circuit.vars().to_vec();
        let mut n = 0u32;
        for bits in 0..(1u32 << vars.len()) {
            let a: Assignment = vars
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), bits >> i & 1 == 1))
                .collect();
            if f.circuit.evaluate(&a).unwrap() {
                n += 1;
            }
        }
        assert_eq!(n, 12);

        // Missing variable in `over` is an error.
        let small: BTreeSet<Var> = over.iter().skip(1).cloned().collect();
        assert!(matches!(f.circuit.count_models(&small), Err(CircuitError::NotSuperset(_))));

        // A 1-leaf circuit with 3 declared variables has 8 models.
        let mut b = CircuitBuilder::new();
        for n in ["u", "w", "x"] {
            b.declare_var(&v(n));
        }
        let t = b.true_node();
        let c = b.finish(t).unwrap();
        let over: BTreeSet<Var> = c.vars().iter().cloned().collect();
        assert_eq!(c.count_models(&over), Ok(BigUint::from(8u32)));
    }

    #[test]
    fn validation_reports_defects() {
        // AND sharing a variable.
        let mut b = CircuitBuilder::new();
        let x = b.literal(&Literal::pos("x").unwrap());
        let a = b.and(vec![x, x]).unwrap();
        let c = b.finish(a).unwrap();
        assert!(!c.is_valid());
        assert!(matches!(
            c.validate().violations()[0],
            Violation::NonDecomposableAnd { var: ref v, .. } if v.name() == "x"
        ));

        // Non-binary AND.
        let mut b = CircuitBuilder::new();
        let x = b.literal(&Literal::pos("x").unwrap());
        let y = b.literal(&Literal::pos("y").unwrap());
        let z = b.literal(&Literal::pos("z").unwrap());
        let a = b.and(vec![x, y, z]).unwrap();
        let c = b.finish(a).unwrap();
        assert!(matches!(
            c.validate().violations()[0],
            Violation::NonBinaryAnd { arity: 3, .. }
        ));

        // Decision variable occurring below itself.
        let mut b = CircuitBuilder::new();
        let x = b.literal(&Literal::pos("x").unwrap());
        let t = b.true_node();
        let d = b.decision(&v("x"), x, t).unwrap();
        let c = b.finish(d).unwrap();
        assert!(matches!(
            c.validate().violations()[0],
            Violation::DecisionVarBelow { var: ref w, .. } if w.name() == "x"
        ));
        // Invalid circuits are rejected by semantic operations.
        assert!(c.is_satisfiable().is_err());
    }

    #[test]
    fn binarize_left_folds() {
        let mut b = CircuitBuilder::new();
        let x = b.literal(&Literal::pos("x").unwrap());
        let y = b.literal(&Literal::pos("y").unwrap());
        let z = b.literal(&Literal::pos("z").unwrap());
        let a = b.and(vec![x, y, z]).unwrap();
        let c = b.finish(a).unwrap();
        let bin = c.binarize().unwrap();
        assert!(bin.is_valid());
        // Root is And(And(x, y), z).
        match bin.node(bin.root()) {
            Node::And(cs) => {
                assert_eq!(cs.len(), 2);
                match bin.node(cs[0]) {
                    Node::And(inner) => assert_eq!(inner.len(), 2),
                    other => panic!("expected inner And, got {other:?}"),
                }
            }
            other => panic!("expected And root, got {other:?}"),
        }

        // Single-child AND is replaced by the child.
        let mut b = CircuitBuilder::new();
        let x = b.literal(&Literal::pos("x").unwrap());
        let a = b.and(vec![x]).unwrap();
        let c = b.finish(a).unwrap();
        let bin = c.binarize().unwrap();
        assert!(matches!(bin.node(bin.root()), Node::Literal { .. }));

        // Idempotent on already-binary circuits.
        let f = sample();
        assert_eq!(f.circuit.binarize().unwrap(), f.circuit);
    }

    #[test]
    fn reduce_replaces_unsat_nodes() {
        // Decision(x, 0, 0) collapses to a single 0-leaf.
        let mut b = CircuitBuilder::new();
        let f0 = b.false_node();
        let d = b.decision(&v("x"), f0, f0).unwrap();
        let c = b.finish(d).unwrap();
        assert!(!c.is_reduced());
        let r = c.reduce().unwrap();
        assert_eq!(r.num_nodes(), 1);
        assert!(matches!(r.node(r.root()), Node::False));
        assert!(r.is_reduced());

        // And with an unsatisfiable child collapses too.
        let mut b = CircuitBuilder::new();
        let f0 = b.false_node();
        let x = b.literal(&Literal::pos("x").unwrap());
        let a = b.and(vec![x, f0]).unwrap();
        let y = b.literal(&Literal::pos("y").unwrap());
        let d = b.decision(&v("z"), a, y).unwrap();
        let c = b.finish(d).unwrap();
        let r = c.reduce().unwrap();
        assert!(r.is_reduced());
        match r.node(r.root()) {
            Node::Decision { lo, .. } => assert!(matches!(r.node(*lo), Node::False)),
            other => panic!("expected decision root, got {other:?}"),
        }

        // Idempotence, structurally.
        assert_eq!(r.reduce().unwrap(), r);
        let s = sample();
        assert_eq!(s.circuit.reduce().unwrap(), s.circuit);
    }

    #[test]
    fn condition_selects_branches() {
        let f = sample();
        let d_s = f.circuit.subcircuit(f.dec_s).unwrap();
        // The s-decision conditioned on -s is the constant 1.
        let cond = d_s.condition(&parse_term("-s").unwrap()).unwrap();
        assert!(matches!(cond.node(cond.root()), Node::True));
        // Conditioned on s it computes the literal p.
        let cond = d_s.condition(&parse_term("s").unwrap()).unwrap();
        assert!(matches!(cond.node(cond.root()), Node::Literal { positive: true, .. }));
        // Conditioning drops the variables of the term from the declared set.
        let c = f.circuit.condition(&parse_term("h -e").unwrap()).unwrap();
        assert_eq!(
            c.vars().iter().map(|x| x.name()).collect::<Vec<_>>(),
            vec!["b", "p", "s"]
        );
        // Conditioning on the empty term preserves the function.
        let same = f.circuit.condition(&Term::empty()).unwrap();
        let over: BTreeSet<Var> = f.circuit.vars().iter().cloned().collect();
        assert_eq!(same.count_models(&over).unwrap(), BigUint::from(12u32));
    }

    #[test]
    fn implicant_and_primality_checks() {
        let f = sample();
        let sub = f.circuit.subcircuit(f.dec_e_right).unwrap();
        assert_eq!(sub.is_implicant(&parse_term("-p -s").unwrap()), Ok(true));
        assert_eq!(sub.is_prime_implicant(&parse_term("-p -s").unwrap()), Ok(true));
        // b -p -s is an implicant but not prime (b is removable).
        assert_eq!(sub.is_implicant(&parse_term("b -p -s").unwrap()), Ok(true));
        assert_eq!(sub.is_prime_implicant(&parse_term("b -p -s").unwrap()), Ok(false));
        assert_eq!(sub.is_implicant(&parse_term("-p").unwrap()), Ok(false));
        // The empty term is an implicant of valid circuits only.
        assert_eq!(sub.is_implicant(&Term::empty()), Ok(false));
        assert_eq!(Circuit::constant(true).is_implicant(&Term::empty()), Ok(true));
    }

    #[test]
    fn subcircuit_extracts_shared_structure() {
        let f = sample();
        let d_s = f.circuit.subcircuit(f.dec_s).unwrap();
        assert_eq!(d_s.num_nodes(), 3);
        assert_eq!(
            d_s.structural_vars().iter().map(|x| x.name()).collect::<Vec<_>>(),
            vec!["p", "s"]
        );
        assert!(f.circuit.subcircuit(99).is_err());
    }
}
