//! Incremental prime-implicant enumeration.
//!
//! Given any set `S` of already-known prime implicants of a reduced
//! circuit, [`another_ip`] produces a prime implicant outside `S` or
//! reports that `S` is complete, in time polynomial in the circuit size
//! and `|S|`. Iterating from the empty set enumerates the whole set with
//! polynomial delay ([`enumerate_ip`]).
//!
//! The search ([`missing_ip`]) walks the circuit top-down, restricting
//! `S` at each step: projections onto the children's variables at
//! conjunctions; literal stripping plus primality-filtered transfers at
//! decision nodes. A node whose restricted set is empty immediately
//! yields a fresh prime implicant of its subcircuit ([`generate_ip`]);
//! a node whose recombined child sets outgrow the restricted set yields
//! the least new element. Either witness is then pulled back along the
//! discovery path to a prime implicant of the whole circuit
//! ([`propagate`]). A memo table prunes repeat visits: once a node is
//! complete, the size of its restricted set equals `|IP(Σ_v)|`, a
//! property of the node alone, so equal sizes on later visits imply
//! completeness again.

use crate::circuit::{Circuit, CircuitError, Node, NodeId};
use crate::pi_batch::combine_and;
use crate::term::{Literal, Term, TermSet};

/// A root-to-node path, recorded while searching and consumed by
/// [`propagate`].
pub type Path = Vec<NodeId>;

/// Per-node sizes at which subcircuits were verified complete
/// (`memo[v] = |IP(Σ_v)|`). Safe to reuse across [`missing_ip`] calls on
/// the same circuit, including calls with different known sets.
#[derive(Clone, Debug)]
pub struct MemoTable {
    complete_at: Vec<Option<usize>>,
}

impl MemoTable {
    pub fn new(circuit: &Circuit) -> MemoTable {
        MemoTable { complete_at: vec![None; circuit.num_nodes()] }
    }
}

/// Outcome of a [`missing_ip`] search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MissingResult {
    /// The known set already contains every prime implicant.
    Complete,
    /// `term` is a prime implicant of the subcircuit at the end of
    /// `path` that witnesses the known set's incompleteness.
    Found { term: Term, path: Path },
}

fn require_valid(c: &Circuit) -> Result<(), CircuitError> {
    if c.is_valid() {
        Ok(())
    } else {
        Err(CircuitError::Invalid(c.validate().clone()))
    }
}

fn require_ready(c: &Circuit) -> Result<(), CircuitError> {
    require_valid(c)?;
    if c.is_reduced() {
        Ok(())
    } else {
        Err(CircuitError::NotReduced)
    }
}

/// One prime implicant of a valid, satisfiable circuit, deterministically:
/// take the model that prefers 0-branches of satisfiable decisions and
/// sets free variables to 0, then drop removable literals in variable
/// order.
pub fn generate_ip(circuit: &Circuit) -> Result<Term, CircuitError> {
    require_valid(circuit)?;
    if !circuit.is_satisfiable()? {
        return Err(CircuitError::Unsatisfiable);
    }
    Ok(generate_ip_at(circuit, circuit.root()))
}

/// `generate_ip` against the subcircuit at `v`, which must be satisfiable.
pub(crate) fn generate_ip_at(c: &Circuit, v: NodeId) -> Term {
    debug_assert!(c.sat_at(v), "generate_ip_at needs a satisfiable subcircuit");
    let mut values: Vec<Option<bool>> = vec![None; c.vars().len()];
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        match c.node(u) {
            Node::False => unreachable!("model descent stays within satisfiable nodes"),
            Node::True => {}
            Node::Literal { var, positive } => values[*var] = Some(*positive),
            Node::And(cs) => stack.extend(cs.iter().copied()),
            Node::Decision { var, lo, hi } => {
                if c.sat_at(*lo) {
                    values[*var] = Some(false);
                    stack.push(*lo);
                } else {
                    values[*var] = Some(true);
                    stack.push(*hi);
                }
            }
        }
    }
    let vars = c.node_vars(v);
    let lits = vars.iter().map(|x| {
        let idx = c.var_index(x).expect("node variable is declared");
        Literal::new(x.clone(), values[idx].unwrap_or(false))
    });
    let mut t = Term::new(lits).expect("one literal per variable");
    // A literal that stays necessary can only stay necessary as the term
    // shrinks, so one pass in variable order reaches a prime implicant.
    for x in vars {
        let shorter = t.without_var(x);
        if c.is_implicant_at(&shorter, v) {
            t = shorter;
        }
    }
    t
}

/// Searches a reduced circuit for evidence that `s` (a set of prime
/// implicants of the circuit, checked in debug builds) is incomplete.
///
/// Returns [`MissingResult::Found`] with a prime implicant of some
/// subcircuit and the root-to-node path on which it was discovered —
/// feed both to [`propagate`] — or [`MissingResult::Complete`].
pub fn missing_ip(
    circuit: &Circuit,
    s: &TermSet,
    memo: &mut MemoTable,
) -> Result<MissingResult, CircuitError> {
    require_ready(circuit)?;
    assert_eq!(
        memo.complete_at.len(),
        circuit.num_nodes(),
        "memo table was built for a different circuit"
    );
    debug_assert!(
        s.iter().all(|t| circuit.is_prime_implicant_at(t, circuit.root())),
        "the known set must contain only prime implicants of the circuit"
    );
    let mut path: Path = Vec::new();
    Ok(match search(circuit, circuit.root(), s, &mut path, memo) {
        Some((term, path)) => MissingResult::Found { term, path },
        None => MissingResult::Complete,
    })
}

/// Core recursion: `None` means `s` accounts for all of `IP(Σ_v)`.
fn search(
    c: &Circuit,
    v: NodeId,
    s: &TermSet,
    path: &mut Path,
    memo: &mut MemoTable,
) -> Option<(Term, Path)> {
    path.push(v);
    if memo.complete_at[v] == Some(s.len()) {
        path.pop();
        return None;
    }
    if s.is_empty() {
        if matches!(c.node(v), Node::False) {
            memo.complete_at[v] = Some(0);
            path.pop();
            return None;
        }
        // Reduced circuit: any non-0-leaf node is satisfiable, so it has
        // a prime implicant and the empty set cannot be complete.
        return Some((generate_ip_at(c, v), path.clone()));
    }
    match c.node(v) {
        Node::And(cs) => {
            let (u, w) = (cs[0], cs[1]);
            let s_u: TermSet = s.iter().map(|t| t.project(c.node_vars(u))).collect();
            let s_w: TermSet = s.iter().map(|t| t.project(c.node_vars(w))).collect();
            if let Some(found) = search(c, u, &s_u, path, memo) {
                return Some(found);
            }
            if let Some(found) = search(c, w, &s_w, path, memo) {
                return Some(found);
            }
            // Both children complete: the pairwise products are the full
            // prime implicant set of this node.
            let s_star = combine_and(&s_u, &s_w, true);
            if let Some(t) = s_star.first_not_in(s) {
                return Some((t.clone(), path.clone()));
            }
            debug_assert_eq!(s_star.len(), s.len());
        }
        Node::Decision { var, lo, hi } => {
            let x = c.var(*var);
            let mut s_lo = TermSet::new();
            let mut s_hi = TermSet::new();
            let mut s_free = TermSet::new();
            for t in s {
                match t.polarity_of(x) {
                    Some(false) => {
                        s_lo.insert(t.without_var(x));
                    }
                    Some(true) => {
                        s_hi.insert(t.without_var(x));
                    }
                    None => {
                        s_free.insert(t.clone());
                        if c.is_prime_implicant_at(t, *lo) {
                            s_lo.insert(t.clone());
                        }
                        if c.is_prime_implicant_at(t, *hi) {
                            s_hi.insert(t.clone());
                        }
                    }
                }
            }
            // Canonical traversal order of this library: 1-branch first.
            if let Some(found) = search(c, *hi, &s_hi, path, memo) {
                return Some(found);
            }
            if let Some(found) = search(c, *lo, &s_lo, path, memo) {
                return Some(found);
            }
            // Both branches complete: the maximal products are exactly
            // the x-free prime implicants of this node.
            let s_star = combine_and(&s_lo, &s_hi, false);
            if let Some(t) = s_star.first_not_in(&s_free) {
                return Some((t.clone(), path.clone()));
            }
            debug_assert_eq!(s_star.len(), s_free.len());
        }
        // A satisfiable leaf has exactly one prime implicant; a nonempty
        // subset of it is complete. 0-leaves only carry empty sets.
        _ => {}
    }
    memo.complete_at[v] = Some(s.len());
    path.pop();
    None
}

/// Pulls a prime implicant of the subcircuit at the end of `path` back to
/// a prime implicant of the whole (reduced) circuit: across a conjunction
/// the sibling contributes a prime implicant of its own; across a decision
/// the branch literal is added unless the term already covers the other
/// branch. Panics if `path` is not a root-to-node path of the circuit.
pub fn propagate(circuit: &Circuit, term: Term, path: &Path) -> Result<Term, CircuitError> {
    require_ready(circuit)?;
    assert!(!path.is_empty(), "propagate needs a nonempty path");
    assert_eq!(path[0], circuit.root(), "the path must start at the root");
    let mut t = term;
    for i in (1..path.len()).rev() {
        let (parent, child) = (path[i - 1], path[i]);
        match circuit.node(parent) {
            Node::And(cs) => {
                assert!(cs.contains(&child), "path step {i} is not a child of its predecessor");
                let sibling = if cs[0] == child { cs[1] } else { cs[0] };
                let other = generate_ip_at(circuit, sibling);
                t = t.conjoin(&other).expect("conjunction children are variable-disjoint");
            }
            Node::Decision { var, lo, hi } => {
                let x = circuit.var(*var);
                let (other, positive) = if child == *lo {
                    (*hi, false)
                } else {
                    assert_eq!(child, *hi, "path step {i} is not a child of its predecessor");
                    (*lo, true)
                };
                if !circuit.is_implicant_at(&t, other) {
                    t = t
                        .with_literal(&Literal::new(x.clone(), positive))
                        .expect("decision variable absent below the node");
                }
            }
            _ => panic!("path step {i} descends through a leaf"),
        }
    }
    Ok(t)
}

/// One prime implicant of a reduced circuit outside the known set `s`
/// (which must consist of prime implicants), or `None` when `s` is
/// already all of them.
pub fn another_ip(circuit: &Circuit, s: &TermSet) -> Result<Option<Term>, CircuitError> {
    let mut memo = MemoTable::new(circuit);
    match missing_ip(circuit, s, &mut memo)? {
        MissingResult::Complete => Ok(None),
        MissingResult::Found { term, path } => propagate(circuit, term, &path).map(Some),
    }
}

/// Streams the prime implicants of a valid circuit (reducing a copy first
/// when needed), at most `limit` of them if given. Each item costs time
/// polynomial in the circuit size and the number of items produced so far.
pub fn enumerate_ip(circuit: &Circuit, limit: Option<usize>) -> Result<IpEnumerator, CircuitError> {
    require_valid(circuit)?;
    let circuit = if circuit.is_reduced() { circuit.clone() } else { circuit.reduce()? };
    Ok(IpEnumerator { circuit, found: TermSet::new(), remaining: limit, exhausted: false })
}

/// Iterator over prime implicants; see [`enumerate_ip`].
pub struct IpEnumerator {
    circuit: Circuit,
    found: TermSet,
    remaining: Option<usize>,
    exhausted: bool,
}

impl IpEnumerator {
    /// The terms produced so far.
    pub fn found(&self) -> &TermSet {
        &self.found
    }

    /// Whether the full set has been produced (as opposed to stopping at
    /// the limit).
    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }
}

impl Iterator for IpEnumerator {
    type Item = Term;

    fn next(&mut self) -> Option<Term> {
        if self.exhausted || self.remaining == Some(0) {
            return None;
        }
        // Same walk as [`another_ip`], but entered directly: every term in
        // `found` came out of this loop, so the precondition scan of
        // [`missing_ip`] would only recheck our own outputs.
        let mut memo = MemoTable::new(&self.circuit);
        let mut scratch: Path = Vec::new();
        let root = self.circuit.root();
        match search(&self.circuit, root, &self.found, &mut scratch, &mut memo) {
            Some((term, path)) => {
                let t = propagate(&self.circuit, term, &path)
                    .expect("circuit validated at construction");
                debug_assert!(self.circuit.is_prime_implicant_at(&t, root));
                debug_assert!(!self.found.contains(&t), "enumeration repeated a term");
                self.found.insert(t.clone());
                if let Some(r) = &mut self.remaining {
                    *r -= 1;
                }
                Some(t)
            }
            None => {
                self.exhausted = true;
                None
            }
        }
    }
}
