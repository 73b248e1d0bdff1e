//! Command-line front end: validation, prime-implicant enumeration,
//! explanations, the CNF and hypergraph reductions, and brute-force
//! oracle utilities, with stable scriptable output.
//!
//! Exit codes: 0 success, 1 input error, 2 invalid circuit,
//! 3 capability or cap refusal.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use decdnnf::explain::{
    abduction_exists, min_transversals_via_sr, sr_all, sr_greedy, AbductionInstance,
    ExplainError, SrQuery,
};
use decdnnf::formats::{self, ParseError};
use decdnnf::oracle::{
    chain_family, gadget_family, random_circuit, tt_min_transversals, tt_of_circuit,
    tt_prime_implicants, OracleError,
};
use decdnnf::pi_batch::ip_all;
use decdnnf::pi_incremental::enumerate_ip;
use decdnnf::{Circuit, CircuitError, TermSet, Var};

#[derive(Parser)]
#[command(
    name = "decdnnf",
    version,
    about = "Decision-DNNF circuits: validation, prime implicants, explanations",
    after_help = "Circuit files use the native `dec-dnnf` format; pass `-` to read stdin.\n\
                  Exit codes: 0 success, 1 input error, 2 invalid circuit, 3 refusal."
)]
struct Cli {
    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Suppress diagnostic notes on stderr.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Build the complete set bottom-up, then print.
    Batch,
    /// Produce implicants one at a time with polynomial delay.
    Incremental,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Odd-parity decision chain on n variables.
    Chain,
    /// n two-variable exclusive-or blocks (2^n prime implicants).
    Gadget,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a circuit, reporting its reduction status.
    Check {
        /// Circuit file, or `-` for stdin.
        path: String,
    },
    /// Enumerate prime implicants.
    Pi {
        /// Circuit file, or `-` for stdin.
        path: String,
        /// Produce the complete set, sorted.
        #[arg(long, conflicts_with = "limit")]
        all: bool,
        /// Produce at most this many implicants.
        #[arg(long, value_name = "K")]
        limit: Option<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Incremental)]
        mode: Mode,
        /// Recompute in the other mode and compare the full sets.
        #[arg(long)]
        verify: bool,
    },
    /// Sufficient reasons for a classified instance.
    Sr {
        /// Circuit file, or `-` for stdin.
        path: String,
        /// Complete assignment, e.g. `b=0,e=1,h=1,p=1,s=1`.
        #[arg(long)]
        instance: String,
        /// Print every sufficient reason, sorted.
        #[arg(long, conflicts_with = "one")]
        all: bool,
        /// Print a single greedily extracted reason (the default).
        #[arg(long)]
        one: bool,
    },
    /// Search for a subset-minimal abductive explanation.
    Abduce {
        /// Circuit file, or `-` for stdin.
        path: String,
        /// Hypothesis variables, comma- or space-separated.
        #[arg(long)]
        hyp: String,
        /// Manifestation term, e.g. `e` or `-p s`.
        #[arg(long)]
        manifest: String,
        /// Hypothesis-count cap for the exponential search (default 24).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Minimal transversals of a hypergraph, via sufficient reasons.
    Transversals {
        /// Hypergraph file (one edge per line), or `-` for stdin.
        path: String,
    },
    /// Compile a DIMACS CNF into the selector-chain decision circuit.
    ReduceCnf {
        /// DIMACS CNF file, or `-` for stdin.
        path: String,
    },
    /// Count models over the declared variables.
    Count {
        /// Circuit file, or `-` for stdin.
        path: String,
    },
    /// Convert a c2d-style NNF file to the native circuit format.
    ImportNnf {
        /// NNF file, or `-` for stdin.
        path: String,
    },
    /// Brute-force ground-truth utilities.
    Oracle {
        #[command(subcommand)]
        what: OracleWhat,
    },
    /// Micro-benchmark incremental enumeration on a built-in family.
    Bench {
        #[arg(long, value_enum)]
        family: Family,
        /// Family size parameter (1..=99).
        #[arg(long)]
        n: usize,
        /// Number of implicants to draw.
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum OracleWhat {
    /// Prime implicants by truth-table brute force (≤ 20 variables).
    Pi {
        /// Circuit file, or `-` for stdin.
        path: String,
    },
    /// Minimal transversals by subset enumeration (≤ 16 vertices).
    Transversals {
        /// Hypergraph file, or `-` for stdin.
        path: String,
    },
    /// A pseudorandom valid reduced circuit (deterministic per --seed).
    Random {
        /// Number of variables (≤ 12).
        #[arg(long, default_value_t = 5)]
        vars: usize,
        /// Node budget for the generator.
        #[arg(long, default_value_t = 30)]
        nodes: usize,
    },
}

/// A failure carrying its exit code; message goes to stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::input(e.to_string())
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        let code = match &e {
            ParseError::Invalid(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<CircuitError> for Failure {
    fn from(e: CircuitError) -> Failure {
        let code = match &e {
            CircuitError::Invalid(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<ExplainError> for Failure {
    fn from(e: ExplainError) -> Failure {
        match e {
            ExplainError::Circuit(inner) => inner.into(),
            ExplainError::NegationUnsupported | ExplainError::CapExceeded { .. } => {
                Failure { code: 3, message: e.to_string() }
            }
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Failure {
        Failure::input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        Ok(fs::read_to_string(path).map_err(|e| Failure::input(format!("{path}: {e}")))?)
    }
}

fn load_circuit(path: &str) -> Result<Circuit, Failure> {
    Ok(formats::parse_circuit(&read_input(path)?)?)
}

fn print_term_set(set: &TermSet) {
    for t in set.iter() {
        println!("{t}");
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Check { path } => {
            let c = load_circuit(path)?;
            let status = if c.is_reduced() { "reduced" } else { "unreduced" };
            println!("valid {status} dec-dnnf, {} vars", c.vars().len());
            Ok(())
        }
        Command::Pi { path, all, limit, mode, verify } => {
            cmd_pi(path, *all, *limit, *mode, *verify, cli.quiet)
        }
        Command::Sr { path, instance, all, one: _ } => {
            let c = load_circuit(path)?;
            let a = formats::parse_assignment(instance)?;
            let q = SrQuery::new(&c, &a)?;
            if !cli.quiet {
                let side = if q.is_positive() { "function" } else { "negation" };
                eprintln!("instance is classified by the {side}");
            }
            if *all {
                print_term_set(&sr_all(&q)?);
            } else {
                println!("{}", sr_greedy(&q)?);
            }
            Ok(())
        }
        Command::Abduce { path, hyp, manifest, cap } => {
            let c = load_circuit(path)?;
            let hypotheses = formats::parse_var_list(&hyp.replace(',', " "))?;
            let m = formats::parse_term(manifest)?;
            let mut inst = AbductionInstance::new(&c, hypotheses, m)?;
            if let Some(cap) = cap {
                inst = inst.with_cap(*cap);
            }
            match abduction_exists(&inst)? {
                Some(t) => println!("{t}"),
                None => {
                    if !cli.quiet {
                        eprintln!("no abductive explanation exists");
                    }
                }
            }
            Ok(())
        }
        Command::Transversals { path } => {
            let h = formats::parse_hypergraph(&read_input(path)?)?;
            print_vertex_sets(min_transversals_via_sr(&h)?);
            Ok(())
        }
        Command::ReduceCnf { path } => {
            let cnf = formats::parse_dimacs(&read_input(path)?)?;
            let (c, _) = decdnnf::explain::cnf_to_obdd_chain(&cnf);
            print!("{}", formats::print_circuit(&c));
            Ok(())
        }
        Command::Count { path } => {
            let c = load_circuit(path)?;
            let over: BTreeSet<Var> = c.vars().iter().cloned().collect();
            println!("{}", c.count_models(&over)?);
            Ok(())
        }
        Command::ImportNnf { path } => {
            let c = formats::import_c2d_nnf(&read_input(path)?)?;
            print!("{}", formats::print_circuit(&c));
            Ok(())
        }
        Command::Oracle { what } => match what {
            OracleWhat::Pi { path } => {
                let c = load_circuit(path)?;
                let tt = tt_of_circuit(&c)?;
                print_term_set(&tt_prime_implicants(&tt));
                Ok(())
            }
            OracleWhat::Transversals { path } => {
                let h = formats::parse_hypergraph(&read_input(path)?)?;
                print_vertex_sets(tt_min_transversals(&h)?);
                Ok(())
            }
            OracleWhat::Random { vars, nodes } => {
                if *vars > 12 {
                    return Err(Failure::input("random circuits support at most 12 variables"));
                }
                print!("{}", formats::print_circuit(&random_circuit(cli.seed, *vars, *nodes)));
                Ok(())
            }
        },
        Command::Bench { family, n, k } => cmd_bench(*family, *n, *k),
    }
}

fn cmd_pi(
    path: &str,
    all: bool,
    limit: Option<usize>,
    mode: Mode,
    verify: bool,
    quiet: bool,
) -> Result<(), Failure> {
    if !all && limit.is_none() {
        return Err(Failure::input("pass --all or --limit <K>"));
    }
    let c = load_circuit(path)?;
    match (mode, limit) {
        (Mode::Batch, limit) => {
            let set = ip_all(&c)?;
            let take = limit.unwrap_or(set.len());
            for t in set.iter().take(take) {
                println!("{t}");
            }
        }
        (Mode::Incremental, None) => {
            // The complete set is printed sorted, whichever mode built it.
            let set: TermSet = enumerate_ip(&c, None)?.collect();
            print_term_set(&set);
        }
        (Mode::Incremental, Some(k)) => {
            let mut out = io::stdout();
            for t in enumerate_ip(&c, Some(k))? {
                writeln!(out, "{t}")?;
                out.flush()?;
            }
        }
    }
    if verify {
        let batch = ip_all(&c)?;
        let incremental: TermSet = enumerate_ip(&c, None)?.collect();
        if batch != incremental {
            return Err(Failure::input(
                "cross-check failed: batch and incremental modes disagree",
            ));
        }
        if !quiet {
            eprintln!("verify: both modes agree on {} implicants", batch.len());
        }
    }
    Ok(())
}

fn print_vertex_sets(sets: BTreeSet<BTreeSet<Var>>) {
    let mut rows: Vec<BTreeSet<Var>> = sets.into_iter().collect();
    rows.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    for s in rows {
        println!("{}", s.iter().map(Var::name).collect::<Vec<_>>().join(" "));
    }
}

fn cmd_bench(family: Family, n: usize, k: usize) -> Result<(), Failure> {
    if !(1..=99).contains(&n) {
        return Err(Failure::input("family sizes range over 1..=99"));
    }
    let (name, circuit) = match family {
        Family::Chain => ("chain", chain_family(n)),
        Family::Gadget => ("gadget", gadget_family(n)),
    };
    println!("family={name}");
    println!("n={n}");
    println!("k={k}");
    let start = Instant::now();
    let mut prev = start;
    let mut delays_ms: Vec<f64> = Vec::new();
    for _ in enumerate_ip(&circuit, Some(k))? {
        let now = Instant::now();
        delays_ms.push(now.duration_since(prev).as_secs_f64() * 1e3);
        prev = now;
    }
    let total_ms = start.elapsed().as_secs_f64() * 1e3;
    println!("items={}", delays_ms.len());
    if !delays_ms.is_empty() {
        let mut sorted = delays_ms.clone();
        sorted.sort_by(f64::total_cmp);
        println!("first_ms={:.3}", delays_ms[0]);
        println!("median_ms={:.3}", sorted[sorted.len() / 2]);
        println!("max_ms={:.3}", sorted[sorted.len() - 1]);
        println!("total_ms={total_ms:.3}");
    }
    Ok(())
}
