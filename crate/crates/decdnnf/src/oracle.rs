//! Brute-force baselines and instance generators.
//!
//! Everything in this module is definitional: truth tables are evaluated
//! row by row, prime implicants come from a scan of the full cube lattice,
//! minimal transversals from subset enumeration. None of it shares logic
//! with the circuit algorithms beyond the basic vocabulary types, which is
//! the point — these are the independent baselines the fast paths are
//! tested against.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitBuilder, Node, NodeId};
use crate::formats::Hypergraph;
use crate::term::{Assignment, Literal, Term, TermSet, Var};

/// Largest variable count for explicit truth tables.
pub const MAX_TT_VARS: usize = 20;

/// Largest vertex count for explicit transversal enumeration.
pub const MAX_TRANSVERSAL_VERTICES: usize = 16;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("truth tables support at most {max} variables, got {n}")]
    TooManyVars { n: usize, max: usize },
    #[error("transversal enumeration supports at most {max} vertices, got {n}")]
    TooManyVertices { n: usize, max: usize },
}

fn words_for(n: usize) -> usize {
    if n >= 6 {
        1 << (n - 6)
    } else {
        1
    }
}

/// Row mask of variable `i` (of `n`): bit `r` is `(r >> i) & 1`.
fn var_mask(i: usize, n: usize) -> Vec<u64> {
    const LOW: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    (0..words_for(n))
        .map(|w| {
            if i < 6 {
                LOW[i]
            } else if w >> (i - 6) & 1 == 1 {
                !0
            } else {
                0
            }
        })
        .collect()
}

/// An explicit truth table over a sorted variable list.
///
/// Row `r` is the assignment where variable `i` (in sorted order) takes
/// the value of bit `i` of `r`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruthTable {
    vars: Vec<Var>,
    bits: Vec<u64>,
}

impl TruthTable {
    /// All-false table over the given variables (deduplicated, sorted).
    pub fn new(vars: impl IntoIterator<Item = Var>) -> Result<TruthTable, OracleError> {
        let set: BTreeSet<Var> = vars.into_iter().collect();
        let vars: Vec<Var> = set.into_iter().collect();
        if vars.len() > MAX_TT_VARS {
            return Err(OracleError::TooManyVars { n: vars.len(), max: MAX_TT_VARS });
        }
        let words = words_for(vars.len());
        Ok(TruthTable { vars, bits: vec![0; words] })
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn num_rows(&self) -> usize {
        1 << self.vars.len()
    }

    pub fn value(&self, row: usize) -> bool {
        self.bits[row >> 6] >> (row & 63) & 1 == 1
    }

    pub fn set(&mut self, row: usize, value: bool) {
        if value {
            self.bits[row >> 6] |= 1 << (row & 63);
        } else {
            self.bits[row >> 6] &= !(1 << (row & 63));
        }
    }

    /// The assignment a row encodes.
    pub fn assignment_of(&self, row: usize) -> Assignment {
        self.vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), row >> i & 1 == 1))
            .collect()
    }

    /// The row encoding an assignment (which must define every variable).
    pub fn row_of(&self, a: &Assignment) -> Option<usize> {
        let mut row = 0usize;
        for (i, v) in self.vars.iter().enumerate() {
            match a.get(v) {
                Some(true) => row |= 1 << i,
                Some(false) => {}
                None => return None,
            }
        }
        Some(row)
    }

    pub fn count_ones(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// The pointwise negation.
    pub fn complement(&self) -> TruthTable {
        let mut bits: Vec<u64> = self.bits.iter().map(|w| !w).collect();
        mask_tail(&mut bits, self.vars.len());
        TruthTable { vars: self.vars.clone(), bits }
    }
}

fn mask_tail(bits: &mut [u64], n: usize) {
    if n < 6 {
        bits[0] &= (1u64 << (1usize << n)) - 1;
    }
}

/// Tabulates the function a circuit computes over its structural
/// variables. Works on any circuit (validity is not required; the node
/// semantics are applied as written).
pub fn tt_of_circuit(c: &Circuit) -> Result<TruthTable, OracleError> {
    let vars: Vec<Var> = c.structural_vars().to_vec();
    let n = vars.len();
    if n > MAX_TT_VARS {
        return Err(OracleError::TooManyVars { n, max: MAX_TT_VARS });
    }
    let words = words_for(n);
    let masks: Vec<Vec<u64>> = (0..n).map(|i| var_mask(i, n)).collect();
    let declared_to_tt: Vec<Option<usize>> =
        c.vars().iter().map(|v| vars.binary_search(v).ok()).collect();

    let mut node_masks: Vec<Vec<u64>> = Vec::with_capacity(c.num_nodes());
    for node in c.nodes() {
        let m: Vec<u64> = match node {
            Node::False => vec![0; words],
            Node::True => vec![!0; words],
            Node::Literal { var, positive } => {
                let i = declared_to_tt[*var].expect("literal variable is structural");
                if *positive {
                    masks[i].clone()
                } else {
                    masks[i].iter().map(|w| !w).collect()
                }
            }
            Node::And(cs) => {
                let mut acc = vec![!0u64; words];
                for &ch in cs {
                    for (a, b) in acc.iter_mut().zip(&node_masks[ch]) {
                        *a &= *b;
                    }
                }
                acc
            }
            Node::Decision { var, lo, hi } => {
                let i = declared_to_tt[*var].expect("decision variable is structural");
                let (x, l, h) = (&masks[i], &node_masks[*lo], &node_masks[*hi]);
                (0..words).map(|w| (!x[w] & l[w]) | (x[w] & h[w])).collect()
            }
        };
        node_masks.push(m);
    }
    let mut bits = node_masks.swap_remove(c.root());
    mask_tail(&mut bits, n);
    Ok(TruthTable { vars, bits })
}

struct BitVec(Vec<u64>);

impl BitVec {
    fn zeros(len: usize) -> BitVec {
        BitVec(vec![0; len.div_ceil(64)])
    }
    fn get(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }
    fn set(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }
}

/// All prime implicants of the tabulated function, by dynamic programming
/// over the `3^n` partial assignments: a term is an implicant iff both
/// cofactors on a free variable are, and prime iff dropping any of its
/// literals breaks implicant-ness. Exponential by design; intended for the
/// variable counts truth tables are built at.
pub fn tt_prime_implicants(tt: &TruthTable) -> TermSet {
    let n = tt.vars().len();
    let pow3: Vec<usize> = std::iter::successors(Some(1usize), |p| Some(p * 3))
        .take(n + 1)
        .collect();
    let total = pow3[n];

    // Ternary codes: digit i is 0 (variable i negative), 1 (positive)
    // or 2 (free). Codes are scanned in increasing order, so both
    // restrictions of a free digit are available when needed.
    let mut imp = BitVec::zeros(total);
    let mut digits: Vec<u8> = vec![0; n];
    for code in 0..total {
        let value = match digits.iter().position(|&d| d == 2) {
            None => {
                let row: usize = digits
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| (d as usize) << i)
                    .sum();
                tt.value(row)
            }
            Some(i) => imp.get(code - 2 * pow3[i]) && imp.get(code - pow3[i]),
        };
        if value {
            imp.set(code);
        }
        // Increment the ternary counter.
        for d in digits.iter_mut() {
            if *d == 2 {
                *d = 0;
            } else {
                *d += 1;
                break;
            }
        }
    }

    let mut out = TermSet::new();
    let mut digits: Vec<u8> = vec![0; n];
    for code in 0..total {
        if imp.get(code) {
            let prime = digits
                .iter()
                .enumerate()
                .filter(|(_, &d)| d != 2)
                .all(|(i, &d)| !imp.get(code + (2 - d as usize) * pow3[i]));
            if prime {
                let lits = digits
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d != 2)
                    .map(|(i, &d)| Literal::new(tt.vars[i].clone(), d == 1));
                out.insert(Term::new(lits).expect("distinct variables"));
            }
        }
        for d in digits.iter_mut() {
            if *d == 2 {
                *d = 0;
            } else {
                *d += 1;
                break;
            }
        }
    }
    out
}

/// All minimal transversals of a hypergraph, by checking every vertex
/// subset. A set is a transversal iff it meets every edge, and minimal
/// iff no single-vertex removal stays one (hitting is monotone).
pub fn tt_min_transversals(h: &Hypergraph) -> Result<BTreeSet<BTreeSet<Var>>, OracleError> {
    let verts: Vec<Var> = h.vertices().iter().cloned().collect();
    let n = verts.len();
    if n > MAX_TRANSVERSAL_VERTICES {
        return Err(OracleError::TooManyVertices { n, max: MAX_TRANSVERSAL_VERTICES });
    }
    let edges: Vec<u32> = h
        .edges()
        .iter()
        .map(|e| {
            e.iter()
                .map(|v| 1u32 << verts.binary_search(v).expect("edge vertex is a vertex"))
                .sum()
        })
        .collect();
    let hits_all = |mask: u32| edges.iter().all(|e| e & mask != 0);

    let mut out = BTreeSet::new();
    for mask in 0..(1u32 << n) {
        if !hits_all(mask) {
            continue;
        }
        let minimal = (0..n)
            .filter(|&b| mask >> b & 1 == 1)
            .all(|b| !hits_all(mask & !(1 << b)));
        if minimal {
            out.insert(
                (0..n)
                    .filter(|&b| mask >> b & 1 == 1)
                    .map(|b| verts[b].clone())
                    .collect(),
            );
        }
    }
    Ok(out)
}

/// A pseudo-random valid, reduced circuit over at most `num_vars`
/// single-letter variables (`a`, `b`, ...). Deterministic per seed.
/// Conjunctions partition the available variables between their children,
/// decision variables disappear from the branches, so validity holds by
/// construction; the result is reduced before returning.
pub fn random_circuit(seed: u64, num_vars: usize, max_nodes: usize) -> Circuit {
    assert!(num_vars <= 12, "random circuits are oracle-sized (at most 12 variables)");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars: Vec<Var> = (0..num_vars)
        .map(|i| Var::new(&((b'a' + i as u8) as char).to_string()).expect("letter name"))
        .collect();
    let mut b = CircuitBuilder::new();
    for v in &vars {
        b.declare_var(v);
    }
    let mut remaining = max_nodes.max(1) as isize;
    let root = gen_node(&mut rng, &mut b, &vars, &mut remaining);
    b.finish(root)
        .expect("builder ids")
        .reduce()
        .expect("generated circuit is valid by construction")
}

fn gen_node(rng: &mut ChaCha8Rng, b: &mut CircuitBuilder, vars: &[Var], remaining: &mut isize) -> NodeId {
    *remaining -= 1;
    if vars.is_empty() || *remaining <= 0 {
        return gen_leaf(rng, b, vars);
    }
    match rng.gen_range(0..10) {
        0..=4 => {
            let i = rng.gen_range(0..vars.len());
            let mut rest = vars.to_vec();
            let x = rest.remove(i);
            let lo = gen_node(rng, b, &rest, remaining);
            let hi = gen_node(rng, b, &rest, remaining);
            b.decision(&x, lo, hi).expect("builder ids")
        }
        5..=7 if vars.len() >= 2 => {
            let mut shuffled = vars.to_vec();
            shuffled.shuffle(rng);
            let cut = rng.gen_range(1..shuffled.len());
            let (left, right) = shuffled.split_at(cut);
            let l = gen_node(rng, b, left, remaining);
            let r = gen_node(rng, b, right, remaining);
            b.and(vec![l, r]).expect("builder ids")
        }
        _ => gen_leaf(rng, b, vars),
    }
}

fn gen_leaf(rng: &mut ChaCha8Rng, b: &mut CircuitBuilder, vars: &[Var]) -> NodeId {
    if !vars.is_empty() && rng.gen_range(0..10) < 6 {
        let i = rng.gen_range(0..vars.len());
        b.literal(&Literal::new(vars[i].clone(), rng.gen_bool(0.5)))
    } else if rng.gen_range(0..10) < 7 {
        b.true_node()
    } else {
        b.false_node()
    }
}

/// Benchmark family: a conjunction of `n` variable-disjoint XOR gadgets
/// `(¬x_i ∧ y_i) ∨ (x_i ∧ ¬y_i)`. Linear-size circuit with `2^n` prime
/// implicants, exercising the combination step at AND nodes.
pub fn gadget_family(n: usize) -> Circuit {
    assert!((1..=99).contains(&n), "supported family sizes are 1..=99");
    let mut b = CircuitBuilder::new();
    let mut acc: Option<NodeId> = None;
    for i in 1..=n {
        let x = Var::new(&format!("x{i:02}")).expect("generated name");
        let y = Var::new(&format!("y{i:02}")).expect("generated name");
        let ypos = b.literal(&Literal::new(y.clone(), true));
        let yneg = b.literal(&Literal::new(y, false));
        let g = b.decision(&x, ypos, yneg).expect("builder ids");
        acc = Some(match acc {
            None => g,
            Some(a) => b.and(vec![a, g]).expect("builder ids"),
        });
    }
    b.finish(acc.expect("n >= 1")).expect("root in range")
}

/// Benchmark family: the odd-parity function of `n` variables as a
/// two-nodes-per-level OBDD chain. `2^(n-1)` prime implicants, all full
/// terms, exercising the decision-node lifting step.
pub fn chain_family(n: usize) -> Circuit {
    assert!((1..=99).contains(&n), "supported family sizes are 1..=99");
    let mut b = CircuitBuilder::new();
    let mut even = b.false_node();
    let mut odd = b.true_node();
    for i in (1..=n).rev() {
        let x = Var::new(&format!("x{i:02}")).expect("generated name");
        let new_even = b.decision(&x, even, odd).expect("builder ids");
        let new_odd = b.decision(&x, odd, even).expect("builder ids");
        even = new_even;
        odd = new_odd;
    }
    b.finish(even).expect("root in range")
}
