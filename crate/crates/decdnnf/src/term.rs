//! Variables, literals, terms and assignments.
//!
//! A [`Term`] is a consistent conjunction of literals, stored sorted by
//! variable name with at most one literal per variable. Terms are the
//! currency of prime-implicant computations: implicant sets, projections
//! and the `max(S, |=)` operation all live here or next door.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A propositional variable, identified by its name.
///
/// Names are nonempty, contain no whitespace and do not start with `-`
/// (so a literal's textual form is unambiguous). Variables order by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

/// Errors raised when building terms or variables.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("invalid variable name {0:?}: must be nonempty, without whitespace, not starting with '-'")]
    BadVarName(String),
    #[error("contradictory literals on variable '{0}'")]
    Contradiction(String),
}

impl Var {
    /// Creates a variable, validating the name.
    pub fn new(name: &str) -> Result<Var, TermError> {
        if name.is_empty() || name.starts_with('-') || name.chars().any(char::is_whitespace) {
            return Err(TermError::BadVarName(name.to_string()));
        }
        Ok(Var(Arc::from(name)))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Var({})", self.0)
    }
}

/// A variable or its negation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    var: Var,
    positive: bool,
}

impl Literal {
    pub fn new(var: Var, positive: bool) -> Literal {
        Literal { var, positive }
    }

    /// Positive literal on a fresh variable name.
    pub fn pos(name: &str) -> Result<Literal, TermError> {
        Ok(Literal::new(Var::new(name)?, true))
    }

    /// Negative literal on a fresh variable name.
    pub fn neg(name: &str) -> Result<Literal, TermError> {
        Ok(Literal::new(Var::new(name)?, false))
    }

    pub fn var(&self) -> &Var {
        &self.var
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn negated(&self) -> Literal {
        Literal { var: self.var.clone(), positive: !self.positive }
    }

    /// Characters of the textual form (`-` prefix for negative literals),
    /// used for the canonical print order without allocating.
    fn printed_chars(&self) -> impl Iterator<Item = char> + '_ {
        let sign = if self.positive { None } else { Some('-') };
        sign.into_iter().chain(self.var.name().chars())
    }
}

impl Ord for Literal {
    /// Literals order by their textual form, so sorted sets print sorted.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.printed_chars().cmp(other.printed_chars())
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("-")?;
        }
        f.write_str(self.var.name())
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lit({})", self)
    }
}

/// A consistent conjunction of literals over pairwise distinct variables.
///
/// The empty term is the neutral element (the constant 1). Literals are
/// kept sorted by variable name; `Ord` compares the printed forms, which
/// gives the canonical output order used everywhere.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Term {
    /// Sorted by variable name, one literal per variable.
    lits: Vec<Literal>,
}

impl Term {
    /// The empty term (constant true).
    pub fn empty() -> Term {
        Term { lits: Vec::new() }
    }

    /// Builds a term from literals; rejects contradictory pairs.
    /// Duplicate copies of the same literal collapse.
    pub fn new(lits: impl IntoIterator<Item = Literal>) -> Result<Term, TermError> {
        let mut v: Vec<Literal> = lits.into_iter().collect();
        v.sort_by(|a, b| a.var.cmp(&b.var).then_with(|| a.positive.cmp(&b.positive)));
        v.dedup();
        for w in v.windows(2) {
            if w[0].var == w[1].var {
                return Err(TermError::Contradiction(w[0].var.name().to_string()));
            }
        }
        Ok(Term { lits: v })
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.lits.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.lits.iter().map(|l| &l.var)
    }

    /// Polarity of the literal on `var`, if present.
    pub fn polarity_of(&self, var: &Var) -> Option<bool> {
        self.lits
            .binary_search_by(|l| l.var.cmp(var))
            .ok()
            .map(|i| self.lits[i].positive)
    }

    pub fn contains(&self, lit: &Literal) -> bool {
        self.polarity_of(&lit.var) == Some(lit.positive)
    }

    pub fn mentions(&self, var: &Var) -> bool {
        self.polarity_of(var).is_some()
    }

    /// Conjunction `self ∧ other`; `None` if the result is contradictory.
    pub fn conjoin(&self, other: &Term) -> Option<Term> {
        let mut out = Vec::with_capacity(self.lits.len() + other.lits.len());
        let (mut i, mut j) = (0, 0);
        while i < self.lits.len() && j < other.lits.len() {
            let (a, b) = (&self.lits[i], &other.lits[j]);
            match a.var.cmp(&b.var) {
                std::cmp::Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    if a.positive != b.positive {
                        return None;
                    }
                    out.push(a.clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.lits[i..]);
        out.extend_from_slice(&other.lits[j..]);
        Some(Term { lits: out })
    }

    /// `self ∧ lit`; `None` if contradictory.
    pub fn with_literal(&self, lit: &Literal) -> Option<Term> {
        match self.polarity_of(&lit.var) {
            Some(p) if p == lit.positive => Some(self.clone()),
            Some(_) => None,
            None => {
                let mut lits = self.lits.clone();
                let pos = lits
                    .binary_search_by(|l| l.var.cmp(&lit.var))
                    .unwrap_err();
                lits.insert(pos, lit.clone());
                Some(Term { lits })
            }
        }
    }

    /// The term with any literal on `var` removed.
    pub fn without_var(&self, var: &Var) -> Term {
        Term { lits: self.lits.iter().filter(|l| &l.var != var).cloned().collect() }
    }

    /// Projection onto a sorted variable slice: keeps literals whose
    /// variable appears in `vars`.
    pub fn project(&self, vars: &[Var]) -> Term {
        let mut out = Vec::new();
        let mut j = 0;
        for l in &self.lits {
            while j < vars.len() && vars[j] < l.var {
                j += 1;
            }
            if j < vars.len() && vars[j] == l.var {
                out.push(l.clone());
            }
        }
        Term { lits: out }
    }

    /// Conditioning `self | lit`: `None` if `self` contains the opposite
    /// literal (the conditioned term is contradictory), otherwise the term
    /// with `lit`'s variable removed.
    pub fn restrict(&self, lit: &Literal) -> Option<Term> {
        match self.polarity_of(&lit.var) {
            Some(p) if p != lit.positive => None,
            _ => Some(self.without_var(&lit.var)),
        }
    }

    /// `self |= other` for terms: every literal of `other` occurs in `self`.
    pub fn entails(&self, other: &Term) -> bool {
        if other.lits.len() > self.lits.len() {
            return false;
        }
        let mut i = 0;
        for l in &other.lits {
            loop {
                if i == self.lits.len() {
                    return false;
                }
                match self.lits[i].var.cmp(&l.var) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Equal => {
                        if self.lits[i].positive != l.positive {
                            return false;
                        }
                        i += 1;
                        break;
                    }
                    std::cmp::Ordering::Greater => return false,
                }
            }
        }
        true
    }

    /// True when the assignment makes every literal of the term true.
    /// Literals on variables the assignment does not define count as
    /// unsatisfied.
    pub fn satisfied_by(&self, a: &Assignment) -> bool {
        self.lits.iter().all(|l| a.get(&l.var) == Some(l.is_positive()))
    }
}

impl Ord for Term {
    /// Lexicographic on the canonical printed form.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.lits.iter().cmp(other.lits.iter())
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", l)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({})", self)
    }
}

/// A deduplicated set of terms with canonical iteration order.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct TermSet {
    terms: BTreeSet<Term>,
}

impl TermSet {
    pub fn new() -> TermSet {
        TermSet::default()
    }

    pub fn singleton(t: Term) -> TermSet {
        let mut s = TermSet::new();
        s.insert(t);
        s
    }

    /// Inserts the term; returns whether it was new.
    pub fn insert(&mut self, t: Term) -> bool {
        self.terms.insert(t)
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.terms.contains(t)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates in canonical (printed-form) order.
    pub fn iter(&self) -> impl Iterator<Item = &Term> {
        self.terms.iter()
    }

    /// First term of `self ∖ other` in canonical order, if any.
    pub fn first_not_in(&self, other: &TermSet) -> Option<&Term> {
        self.terms.iter().find(|t| !other.contains(t))
    }

    /// `max(S, |=)`: keeps the terms that entail no *other* term of the
    /// set, i.e. removes terms with a strict sub-term present.
    ///
    /// Terms are bucketed by size; a term can only entail strictly
    /// smaller ones, so each term is checked against smaller buckets only.
    pub fn max_under_entailment(&self) -> TermSet {
        let mut by_len: Vec<&Term> = self.terms.iter().collect();
        by_len.sort_by_key(|t| t.len());
        let mut kept: Vec<&Term> = Vec::new();
        let mut out = TermSet::new();
        for t in by_len {
            let dominated = kept
                .iter()
                .take_while(|k| k.len() < t.len())
                .any(|k| t.entails(k));
            if !dominated {
                kept.push(t);
                out.insert(t.clone());
            }
        }
        out
    }
}

impl FromIterator<Term> for TermSet {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        TermSet { terms: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a TermSet {
    type Item = &'a Term;
    type IntoIter = std::collections::btree_set::Iter<'a, Term>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl fmt::Debug for TermSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.terms.iter()).finish()
    }
}

/// A partial assignment of truth values to variables.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Assignment {
    values: BTreeMap<Var, bool>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    /// Sets a value, overwriting any previous one.
    pub fn set(&mut self, var: Var, value: bool) {
        self.values.insert(var, value);
    }

    pub fn get(&self, var: &Var) -> Option<bool> {
        self.values.get(var).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, bool)> {
        self.values.iter().map(|(v, b)| (v, *b))
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.values.keys()
    }

    /// The term whose literals mirror the assignment, restricted to the
    /// given sorted variable slice.
    pub fn to_term_over(&self, vars: &[Var]) -> Term {
        let lits = vars
            .iter()
            .filter_map(|v| self.get(v).map(|b| Literal::new(v.clone(), b)));
        Term::new(lits).expect("assignment literals are consistent by construction")
    }
}

impl FromIterator<(Var, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Var, bool)>>(iter: I) -> Self {
        Assignment { values: iter.into_iter().collect() }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, b)) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}={}", v, if *b { 1 } else { 0 })?;
        }
        Ok(())
    }
}
