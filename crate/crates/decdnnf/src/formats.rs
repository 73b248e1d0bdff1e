//! Text formats.
//!
//! * The native circuit format (see [`parse_circuit`] / [`print_circuit`]):
//!   a header, a variable declaration and one node per line, children
//!   strictly before parents, the last node being the root.
//! * A c2d-style NNF importer ([`import_c2d_nnf`]) for the common dialect
//!   in which every disjunction is annotated with its decision variable.
//! * One-line formats for terms (`-b e h`), assignments (`b=0,e=1`) and
//!   variable lists, plus hypergraphs (one edge per line) and DIMACS CNF.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitBuilder, Node, NodeId, ValidationReport};
use crate::term::{Assignment, Literal, Term, Var};

/// Errors raised by the parsers in this module.
#[derive(Debug, Error)]
pub enum ParseError {
    /// Malformed input text.
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    /// Well-formed input describing a structure this library does not
    /// handle (used by the NNF importer).
    #[error("line {line}: unsupported structure: {msg}")]
    Unsupported { line: usize, msg: String },
    /// A syntactically well-formed circuit that violates the dec-DNNF
    /// requirements; the report cites node indices as numbered in the file.
    #[error("invalid dec-DNNF: {0}")]
    Invalid(ValidationReport),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

fn unsupported(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Unsupported { line, msg: msg.into() }
}

/// Non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect()
}

fn parse_count(line: usize, tok: &str, what: &str) -> Result<usize, ParseError> {
    tok.parse::<usize>()
        .map_err(|_| syntax(line, format!("expected {what}, got {tok:?}")))
}

fn parse_var(line: usize, name: &str) -> Result<Var, ParseError> {
    Var::new(name).map_err(|e| syntax(line, e.to_string()))
}

/// Parses the native circuit format:
///
/// ```text
/// dec-dnnf <numNodes> <numVars>
/// vars <name> ...
/// <node line>          (numNodes of them; the last one is the root)
/// ```
///
/// Node lines are `F`, `T`, `L <lit>`, `A <i> <j>` or `D <var> <i0> <i1>`,
/// where child indices refer to earlier lines (0-based). Variables must be
/// declared on the `vars` line. The parsed circuit is validated against
/// the dec-DNNF requirements — decomposable binary conjunctions, decision
/// variables absent from their branches — but it is *not* reduced
/// automatically; use [`Circuit::reduce`] for that.
pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let lines = content_lines(text);
    let end = text.lines().count().max(1);
    let mut it = lines.iter();

    let &(hline, header) = it
        .next()
        .ok_or_else(|| syntax(end, "empty input; expected `dec-dnnf <nodes> <vars>` header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "dec-dnnf" {
        return Err(syntax(hline, "expected header `dec-dnnf <numNodes> <numVars>`"));
    }
    let num_nodes = parse_count(hline, toks[1], "a node count")?;
    let num_vars = parse_count(hline, toks[2], "a variable count")?;
    if num_nodes == 0 {
        return Err(syntax(hline, "a circuit needs at least one node"));
    }

    let &(vline, vdecl) = it
        .next()
        .ok_or_else(|| syntax(end, "expected a `vars ...` line"))?;
    let vtoks: Vec<&str> = vdecl.split_whitespace().collect();
    if vtoks.first() != Some(&"vars") {
        return Err(syntax(vline, "expected a `vars ...` line after the header"));
    }
    if vtoks.len() - 1 != num_vars {
        return Err(syntax(
            vline,
            format!("header declares {} variables, the vars line has {}", num_vars, vtoks.len() - 1),
        ));
    }
    let mut vars: Vec<Var> = Vec::with_capacity(num_vars);
    for name in &vtoks[1..] {
        vars.push(parse_var(vline, name)?);
    }
    vars.sort();
    if let Some(w) = vars.windows(2).find(|w| w[0] == w[1]) {
        return Err(syntax(vline, format!("variable '{}' declared twice", w[0])));
    }
    let var_index = |line: usize, name: &str| -> Result<usize, ParseError> {
        vars.binary_search_by(|v| v.name().cmp(name))
            .map_err(|_| syntax(line, format!("unknown variable '{name}' (not on the vars line)")))
    };

    let mut raw: Vec<Node> = Vec::with_capacity(num_nodes);
    for k in 0..num_nodes {
        let &(line, ltext) = it.next().ok_or_else(|| {
            syntax(end, format!("expected {num_nodes} node lines, found only {k}"))
        })?;
        let child = |tok: &str| -> Result<NodeId, ParseError> {
            let c = parse_count(line, tok, "a child index")?;
            if c >= k {
                return Err(syntax(line, format!("child index {c} of node {k} is not below it")));
            }
            Ok(c)
        };
        let toks: Vec<&str> = ltext.split_whitespace().collect();
        let node = match toks.as_slice() {
            ["F"] => Node::False,
            ["T"] => Node::True,
            ["L", lit] => {
                let (name, positive) = match lit.strip_prefix('-') {
                    Some(rest) => (rest, false),
                    None => (*lit, true),
                };
                Node::Literal { var: var_index(line, name)?, positive }
            }
            ["A", i, j] => Node::And(vec![child(i)?, child(j)?]),
            ["D", x, i0, i1] => {
                Node::Decision { var: var_index(line, x)?, lo: child(i0)?, hi: child(i1)? }
            }
            _ => {
                return Err(syntax(
                    line,
                    format!("expected `F`, `T`, `L <lit>`, `A <i> <j>` or `D <var> <i0> <i1>`, got {ltext:?}"),
                ))
            }
        };
        raw.push(node);
    }
    if let Some(&(line, _)) = it.next() {
        return Err(syntax(line, "unexpected content after the last node line"));
    }

    // Validate against the dec-DNNF requirements with the node ids used in
    // the file, so violation messages point at the right lines.
    let probe = Circuit::freeze(raw.clone(), num_nodes - 1, vars.clone());
    if !probe.is_valid() {
        return Err(ParseError::Invalid(probe.validate().clone()));
    }

    // Rebuild through the builder for hash-consing and canonical order.
    let mut b = CircuitBuilder::new();
    for v in &vars {
        b.declare_var(v);
    }
    let mut map: Vec<NodeId> = Vec::with_capacity(num_nodes);
    for node in &raw {
        let id = match node {
            Node::False => b.false_node(),
            Node::True => b.true_node(),
            Node::Literal { var, positive } => {
                b.literal(&Literal::new(vars[*var].clone(), *positive))
            }
            Node::And(cs) => b
                .and(cs.iter().map(|&c| map[c]).collect())
                .expect("children already range-checked"),
            Node::Decision { var, lo, hi } => b
                .decision(&vars[*var].clone(), map[*lo], map[*hi])
                .expect("children already range-checked"),
        };
        map.push(id);
    }
    Ok(b.finish(map[num_nodes - 1]).expect("root in range"))
}

/// Prints a circuit in the native format. The output of a circuit built
/// through [`CircuitBuilder`] is canonical: nodes appear in depth-first
/// post-order (0-child first), variables sorted, so printing and parsing
/// round-trip structurally. Non-binary conjunctions (accepted only until
/// [`Circuit::binarize`]) print all their children on one `A` line.
pub fn print_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dec-dnnf {} {}", c.num_nodes(), c.vars().len());
    out.push_str("vars");
    for v in c.vars() {
        out.push(' ');
        out.push_str(v.name());
    }
    out.push('\n');
    for node in c.nodes() {
        match node {
            Node::False => out.push_str("F\n"),
            Node::True => out.push_str("T\n"),
            Node::Literal { var, positive } => {
                let _ = writeln!(out, "L {}{}", if *positive { "" } else { "-" }, c.var(*var));
            }
            Node::And(cs) => {
                out.push('A');
                for ch in cs {
                    let _ = write!(out, " {ch}");
                }
                out.push('\n');
            }
            Node::Decision { var, lo, hi } => {
                let _ = writeln!(out, "D {} {} {}", c.var(*var), lo, hi);
            }
        }
    }
    out
}

enum RawNnf {
    Lit(i64),
    And(Vec<usize>),
    Or { dvar: usize, kids: Vec<usize> },
}

/// Imports a c2d-style NNF file (`nnf <v> <e> <n>` header, then `L`, `A`
/// and `O` lines) as a dec-DNNF circuit. Variables are named `x1 ... xn`.
///
/// The supported dialect is the one produced by decision-based compilers:
/// every `O` node carries a nonzero decision variable `j` and has exactly
/// two children, each either the literal `±j` itself or a conjunction
/// containing it at the top level; `A 0` is the constant 1 and `O 0 0`
/// the constant 0. Anything else yields [`ParseError::Unsupported`].
pub fn import_c2d_nnf(text: &str) -> Result<Circuit, ParseError> {
    let lines: Vec<(usize, &str)> = content_lines(text)
        .into_iter()
        .filter(|(_, l)| {
            let t = l.trim_start();
            !(t == "c" || t.starts_with("c "))
        })
        .collect();
    let end = text.lines().count().max(1);
    let mut it = lines.iter();

    let &(hline, header) = it
        .next()
        .ok_or_else(|| syntax(end, "empty input; expected `nnf <v> <e> <n>` header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "nnf" {
        return Err(syntax(hline, "expected header `nnf <v> <e> <n>`"));
    }
    let num_nodes = parse_count(hline, toks[1], "a node count")?;
    let num_vars = parse_count(hline, toks[3], "a variable count")?;
    if num_nodes == 0 {
        return Err(syntax(hline, "an NNF needs at least one node"));
    }

    let mut raw: Vec<RawNnf> = Vec::with_capacity(num_nodes);
    let mut line_of: Vec<usize> = Vec::with_capacity(num_nodes);
    for k in 0..num_nodes {
        let &(line, ltext) = it.next().ok_or_else(|| {
            syntax(end, format!("expected {num_nodes} node lines, found only {k}"))
        })?;
        let toks: Vec<&str> = ltext.split_whitespace().collect();
        let kid = |tok: &str| -> Result<usize, ParseError> {
            let c = parse_count(line, tok, "a child index")?;
            if c >= k {
                return Err(syntax(line, format!("child index {c} of node {k} is not below it")));
            }
            Ok(c)
        };
        let node = match toks.as_slice() {
            ["L", lit] => {
                let l: i64 = lit
                    .parse()
                    .map_err(|_| syntax(line, format!("expected a literal, got {lit:?}")))?;
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(syntax(line, format!("literal {l} out of range 1..={num_vars}")));
                }
                RawNnf::Lit(l)
            }
            ["A", cnt, kids @ ..] => {
                let c = parse_count(line, cnt, "a child count")?;
                if c != kids.len() {
                    return Err(syntax(line, format!("A-node announces {c} children, lists {}", kids.len())));
                }
                RawNnf::And(kids.iter().map(|t| kid(t)).collect::<Result<_, _>>()?)
            }
            ["O", j, cnt, kids @ ..] => {
                let dvar = parse_count(line, j, "a decision variable")?;
                if dvar > num_vars {
                    return Err(syntax(line, format!("decision variable {dvar} out of range")));
                }
                let c = parse_count(line, cnt, "a child count")?;
                if c != kids.len() {
                    return Err(syntax(line, format!("O-node announces {c} children, lists {}", kids.len())));
                }
                RawNnf::Or { dvar, kids: kids.iter().map(|t| kid(t)).collect::<Result<_, _>>()? }
            }
            _ => {
                return Err(syntax(
                    line,
                    format!("expected `L <lit>`, `A <c> <ids>` or `O <j> <c> <ids>`, got {ltext:?}"),
                ))
            }
        };
        raw.push(node);
        line_of.push(line);
    }
    if let Some(&(line, _)) = it.next() {
        return Err(syntax(line, "unexpected content after the last node line"));
    }

    let xvars: Vec<Var> = (1..=num_vars)
        .map(|i| Var::new(&format!("x{i}")).expect("generated name"))
        .collect();
    let mut b = CircuitBuilder::new();
    for v in &xvars {
        b.declare_var(v);
    }

    fn fold_and(b: &mut CircuitBuilder, ids: &[NodeId]) -> NodeId {
        match ids {
            [] => b.true_node(),
            [one] => *one,
            [first, rest @ ..] => {
                let mut acc = *first;
                for &c in rest {
                    acc = b.and(vec![acc, c]).expect("builder ids");
                }
                acc
            }
        }
    }

    // Classifies an O-node child: which polarity of the decision variable
    // it asserts, and the branch circuit with that literal stripped.
    fn branch(
        b: &mut CircuitBuilder,
        raw: &[RawNnf],
        map: &[NodeId],
        kid: usize,
        dvar: usize,
        oline: usize,
    ) -> Result<(bool, NodeId), ParseError> {
        match &raw[kid] {
            RawNnf::Lit(l) if l.unsigned_abs() as usize == dvar => Ok((*l > 0, b.true_node())),
            RawNnf::And(gkids) => {
                let mut pol: Option<bool> = None;
                let mut rest: Vec<NodeId> = Vec::new();
                for &g in gkids {
                    match &raw[g] {
                        RawNnf::Lit(l) if l.unsigned_abs() as usize == dvar => {
                            if pol.is_some() {
                                return Err(unsupported(
                                    oline,
                                    format!("node {kid}: decision variable {dvar} occurs twice in the conjunction"),
                                ));
                            }
                            pol = Some(*l > 0);
                        }
                        _ => rest.push(map[g]),
                    }
                }
                let pol = pol.ok_or_else(|| {
                    unsupported(
                        oline,
                        format!("node {kid}: conjunction without a top-level literal on decision variable {dvar}"),
                    )
                })?;
                Ok((pol, fold_and(b, &rest)))
            }
            _ => Err(unsupported(
                oline,
                format!("node {kid} is neither a literal on decision variable {dvar} nor a conjunction containing one"),
            )),
        }
    }

    let mut map: Vec<NodeId> = Vec::with_capacity(num_nodes);
    for (k, node) in raw.iter().enumerate() {
        let id = match node {
            RawNnf::Lit(l) => b.literal(&Literal::new(
                xvars[(l.unsigned_abs() - 1) as usize].clone(),
                *l > 0,
            )),
            RawNnf::And(kids) => {
                let ids: Vec<NodeId> = kids.iter().map(|&c| map[c]).collect();
                fold_and(&mut b, &ids)
            }
            RawNnf::Or { dvar: 0, kids } if kids.is_empty() => b.false_node(),
            RawNnf::Or { dvar: 0, .. } => {
                return Err(unsupported(
                    line_of[k],
                    format!("node {k}: disjunction without a decision variable"),
                ))
            }
            RawNnf::Or { dvar, kids } => {
                if kids.len() != 2 {
                    return Err(unsupported(
                        line_of[k],
                        format!("node {k}: decision disjunction with {} children (expected 2)", kids.len()),
                    ));
                }
                let (p0, c0) = branch(&mut b, &raw, &map, kids[0], *dvar, line_of[k])?;
                let (p1, c1) = branch(&mut b, &raw, &map, kids[1], *dvar, line_of[k])?;
                let (lo, hi) = match (p0, p1) {
                    (false, true) => (c0, c1),
                    (true, false) => (c1, c0),
                    _ => {
                        return Err(unsupported(
                            line_of[k],
                            format!("node {k}: both children assert the same polarity of variable {dvar}"),
                        ))
                    }
                };
                b.decision(&xvars[dvar - 1], lo, hi).expect("builder ids")
            }
        };
        map.push(id);
    }

    let c = b.finish(map[num_nodes - 1]).expect("root in range");
    if !c.is_valid() {
        return Err(ParseError::Invalid(c.validate().clone()));
    }
    Ok(c)
}

/// Parses a term: whitespace-separated literals, `-` for negation, e.g.
/// `-b e h`. The empty string is the empty term.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut lits = Vec::new();
    for tok in text.split_whitespace() {
        let (name, positive) = match tok.strip_prefix('-') {
            Some(rest) => (rest, false),
            None => (tok, true),
        };
        lits.push(Literal::new(parse_var(1, name)?, positive));
    }
    Term::new(lits).map_err(|e| syntax(1, e.to_string()))
}

/// Parses an assignment: comma-separated `var=0|1` pairs, e.g. `b=0,e=1`.
/// The empty string is the empty assignment.
pub fn parse_assignment(text: &str) -> Result<Assignment, ParseError> {
    let mut a = Assignment::new();
    if text.trim().is_empty() {
        return Ok(a);
    }
    for part in text.split(',') {
        let part = part.trim();
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| syntax(1, format!("expected `var=0|1`, got {part:?}")))?;
        let var = parse_var(1, name.trim())?;
        let value = match value.trim() {
            "0" => false,
            "1" => true,
            other => return Err(syntax(1, format!("expected 0 or 1 for '{name}', got {other:?}"))),
        };
        if a.get(&var).is_some() {
            return Err(syntax(1, format!("variable '{var}' assigned twice")));
        }
        a.set(var, value);
    }
    Ok(a)
}

/// Parses a whitespace-separated list of variable names.
pub fn parse_var_list(text: &str) -> Result<BTreeSet<Var>, ParseError> {
    text.split_whitespace().map(|name| parse_var(1, name)).collect()
}

/// A hypergraph: a vertex set and a list of (nonempty) hyperedges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    vertices: BTreeSet<Var>,
    edges: Vec<BTreeSet<Var>>,
}

impl Hypergraph {
    /// Builds a hypergraph; the vertex set is extended to cover all edges.
    pub fn new(vertices: impl IntoIterator<Item = Var>, edges: Vec<BTreeSet<Var>>) -> Hypergraph {
        let mut vertices: BTreeSet<Var> = vertices.into_iter().collect();
        for e in &edges {
            vertices.extend(e.iter().cloned());
        }
        Hypergraph { vertices, edges }
    }

    pub fn vertices(&self) -> &BTreeSet<Var> {
        &self.vertices
    }

    pub fn edges(&self) -> &[BTreeSet<Var>] {
        &self.edges
    }
}

/// Parses a hypergraph: one edge per line as whitespace-separated vertex
/// names; `#` starts a comment; blank lines are skipped. The vertex set is
/// the union of the edges.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, ParseError> {
    let mut edges: Vec<BTreeSet<Var>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let edge: BTreeSet<Var> = line
            .split_whitespace()
            .map(|name| parse_var(i + 1, name))
            .collect::<Result<_, _>>()?;
        edges.push(edge);
    }
    Ok(Hypergraph::new([], edges))
}

/// A CNF formula in DIMACS conventions: variables `1..=num_vars`,
/// clauses as nonzero literal lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

/// Parses DIMACS CNF: `c` comment lines, one `p cnf <vars> <clauses>`
/// header, then 0-terminated clauses (free-form across lines).
pub fn parse_dimacs(text: &str) -> Result<Cnf, ParseError> {
    let end = text.lines().count().max(1);
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(syntax(line_no, "duplicate problem line"));
            }
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
                return Err(syntax(line_no, "expected `p cnf <vars> <clauses>`"));
            }
            header = Some((
                parse_count(line_no, toks[2], "a variable count")?,
                parse_count(line_no, toks[3], "a clause count")?,
            ));
            continue;
        }
        let (num_vars, _) = header
            .ok_or_else(|| syntax(line_no, "clause before the `p cnf` problem line"))?;
        for tok in trimmed.split_whitespace() {
            let l: i64 = tok
                .parse()
                .map_err(|_| syntax(line_no, format!("expected a literal, got {tok:?}")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                if l.unsigned_abs() as usize > num_vars {
                    return Err(syntax(line_no, format!("literal {l} out of range 1..={num_vars}")));
                }
                current.push(l);
            }
        }
    }
    let (num_vars, num_clauses) =
        header.ok_or_else(|| syntax(end, "missing `p cnf` problem line"))?;
    if !current.is_empty() {
        return Err(syntax(end, "unterminated clause (missing trailing 0)"));
    }
    if clauses.len() != num_clauses {
        return Err(syntax(
            end,
            format!("problem line announces {num_clauses} clauses, found {}", clauses.len()),
        ));
    }
    Ok(Cnf { num_vars, clauses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Violation;
    use crate::term::TermError;
    use crate::testutil::{asg, sample, t, v};

    const SAMPLE_TEXT: &str = "\
dec-dnnf 12 5
vars b e h p s
L -p
L -s
A 0 1
L -b
T
L p
D s 4 5
A 3 6
D e 2 7
D b 6 0
D e 9 2
D h 8 10
";

    #[test]
    fn print_is_canonical_and_round_trips() {
        let s = sample();
        assert_eq!(print_circuit(&s.circuit), SAMPLE_TEXT);
        let parsed = parse_circuit(SAMPLE_TEXT).unwrap();
        assert_eq!(parsed, s.circuit);
        assert_eq!(print_circuit(&parsed), SAMPLE_TEXT);
    }

    #[test]
    fn parse_accepts_non_canonical_order() {
        // Same three-node circuit, permuted variable declaration.
        let text = "dec-dnnf 3 2\nvars s p\nT\nL p\nD s 0 1\n";
        let c = parse_circuit(text).unwrap();
        let s = sample();
        assert_eq!(c, s.circuit.subcircuit(s.dec_s).unwrap());
    }

    #[test]
    fn parse_keeps_unreduced_circuits_unreduced() {
        let text = "dec-dnnf 2 1\nvars x\nF\nD x 0 0\n";
        let c = parse_circuit(text).unwrap();
        assert!(c.is_valid());
        assert!(!c.is_reduced());
    }

    #[test]
    fn parse_reports_syntax_errors_with_lines() {
        let cases: &[(&str, usize)] = &[
            ("", 1),
            ("nnf 1 0 0\n", 1),
            ("dec-dnnf 1\nvars\nT\n", 1),
            ("dec-dnnf 1 0\nT\n", 2),
            ("dec-dnnf 1 1\nvars\nT\n", 2),
            ("dec-dnnf 1 2\nvars a a\nT\nx", 2),
            ("dec-dnnf 1 0\nvars\nL q\n", 3),
            ("dec-dnnf 2 1\nvars x\nL x\nA 0 1\n", 4),
            ("dec-dnnf 1 0\nvars\nT\nT\n", 4),
            ("dec-dnnf 2 1\nvars x\nT\nQ 0\n", 4),
        ];
        for (text, want_line) in cases {
            match parse_circuit(text) {
                Err(ParseError::Syntax { line, .. }) => {
                    assert_eq!(line, *want_line, "wrong line for {text:?}")
                }
                other => panic!("expected syntax error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn parse_rejects_invalid_circuits_citing_the_node() {
        let text = "\
dec-dnnf 7 6
vars a b c d e f
L a
L b
L c
L d
L e
L f
A 5 5
";
        match parse_circuit(text) {
            Err(ParseError::Invalid(report)) => {
                assert!(matches!(
                    report.violations()[0],
                    Violation::NonDecomposableAnd { node: 6, .. }
                ));
            }
            other => panic!("expected validation error, got {other:?}"),
        }

        let text = "dec-dnnf 2 1\nvars x\nL x\nD x 0 0\n";
        match parse_circuit(text) {
            Err(ParseError::Invalid(report)) => {
                assert!(matches!(
                    report.violations()[0],
                    Violation::DecisionVarBelow { node: 1, .. }
                ));
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn import_c2d_xor() {
        let text = "\
nnf 7 8 2
L -1
L 2
A 2 0 1
L 1
L -2
A 2 3 4
O 1 2 2 5
";
        let c = import_c2d_nnf(text).unwrap();
        assert!(c.is_valid());
        assert_eq!(
            c.vars().iter().map(|x| x.name()).collect::<Vec<_>>(),
            vec!["x1", "x2"]
        );
        // XOR has exactly the models 01 and 10.
        assert!(c.evaluate(&asg("x1=0,x2=1")).unwrap());
        assert!(c.evaluate(&asg("x1=1,x2=0")).unwrap());
        assert!(!c.evaluate(&asg("x1=0,x2=0")).unwrap());
        assert!(!c.evaluate(&asg("x1=1,x2=1")).unwrap());
    }

    #[test]
    fn import_c2d_constants_and_bare_literals() {
        // A 0 is the constant 1; O 0 0 the constant 0.
        let c = import_c2d_nnf("nnf 1 0 1\nA 0\n").unwrap();
        assert_eq!(c.is_satisfiable(), Ok(true));
        assert!(c.structural_vars().is_empty());

        let c = import_c2d_nnf("nnf 1 0 1\nO 0 0\n").unwrap();
        assert_eq!(c.is_satisfiable(), Ok(false));

        // O whose children are the bare literals ±1.
        let c = import_c2d_nnf("nnf 3 2 1\nL -1\nL 1\nO 1 2 0 1\n").unwrap();
        assert!(c.evaluate(&asg("x1=0")).unwrap());
        assert!(c.evaluate(&asg("x1=1")).unwrap());
    }

    #[test]
    fn import_c2d_rejects_unsupported_structure() {
        // O without a decision variable but with children.
        let r = import_c2d_nnf("nnf 3 2 2\nL 1\nL 2\nO 0 2 0 1\n");
        assert!(matches!(r, Err(ParseError::Unsupported { line: 4, .. })), "{r:?}");
        // O child lacking the decision literal.
        let r = import_c2d_nnf("nnf 3 2 2\nL 1\nL 2\nO 1 2 0 1\n");
        assert!(matches!(r, Err(ParseError::Unsupported { line: 4, .. })), "{r:?}");
        // O with three children.
        let r = import_c2d_nnf("nnf 4 3 2\nL 1\nL -1\nL 2\nO 1 3 0 1 2\n");
        assert!(matches!(r, Err(ParseError::Unsupported { .. })), "{r:?}");
    }

    #[test]
    fn term_and_assignment_parsing() {
        assert_eq!(parse_term("  -b   e  h ").unwrap().to_string(), "-b e h");
        assert_eq!(parse_term("").unwrap(), Term::empty());
        assert!(matches!(parse_term("p -p"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_term("-"), Err(ParseError::Syntax { .. })));

        let a = parse_assignment("h=1, p=0").unwrap();
        assert_eq!(a.to_string(), "h=1,p=0");
        assert_eq!(parse_assignment("").unwrap(), Assignment::new());
        assert!(parse_assignment("h=1,h=0").is_err());
        assert!(parse_assignment("h=2").is_err());
        assert!(parse_assignment("h").is_err());

        let ys = parse_var_list("b a c").unwrap();
        assert_eq!(ys.len(), 3);
        assert!(ys.contains(&v("a")));
        // Contradiction message comes from the term layer.
        assert_eq!(
            TermError::Contradiction("p".to_string()).to_string(),
            "contradictory literals on variable 'p'"
        );
        let _ = t("h -p"); // exercised fixture helper
    }

    #[test]
    fn hypergraph_parsing() {
        let h = parse_hypergraph("# transversal example\nn1 n2\n\nn2 n3 # tail\n").unwrap();
        assert_eq!(h.edges().len(), 2);
        assert_eq!(
            h.vertices().iter().map(|v| v.name()).collect::<Vec<_>>(),
            vec!["n1", "n2", "n3"]
        );
        assert_eq!(parse_hypergraph("").unwrap().edges().len(), 0);
    }

    #[test]
    fn dimacs_parsing() {
        let cnf = parse_dimacs("c demo\np cnf 3 2\n1 -2 0\n2 3 0\n").unwrap();
        assert_eq!(cnf.num_vars, 3);
        assert_eq!(cnf.clauses, vec![vec![1, -2], vec![2, 3]]);

        // Clauses may span lines and share one.
        let cnf = parse_dimacs("p cnf 2 2\n1\n2 0 -1 0\n").unwrap();
        assert_eq!(cnf.clauses, vec![vec![1, 2], vec![-1]]);

        assert!(parse_dimacs("1 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 1\n1\n").is_err());
        assert!(parse_dimacs("p cnf 1 2\n1 0\n").is_err());
    }
}
