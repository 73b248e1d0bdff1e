//! The repository's acceptance checklist: eight end-to-end checks, each
//! printed as a single `criterion N: pass|FAIL` line. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines as
//! they complete.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use decdnnf::circuit::{Circuit, CircuitBuilder};
use decdnnf::explain::{
    cnf_to_obdd_chain, min_transversals_via_sr, restricted_implicant_exists, sr_all, SrQuery,
};
use decdnnf::formats::{
    parse_assignment, parse_circuit, parse_dimacs, parse_hypergraph, parse_term, print_circuit,
};
use decdnnf::oracle::{
    chain_family, gadget_family, random_circuit, tt_min_transversals, tt_of_circuit,
    tt_prime_implicants,
};
use decdnnf::pi_batch::ip_all;
use decdnnf::pi_incremental::{another_ip, enumerate_ip, missing_ip, MemoTable, MissingResult};
use decdnnf::term::{Literal, Term, TermSet, Var};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn t(text: &str) -> Term {
    parse_term(text).unwrap()
}

fn ts(items: &[&str]) -> TermSet {
    items.iter().map(|s| t(s)).collect()
}

fn data(name: &str) -> String {
    let path = format!("{}/tests/data/{}", env!("CARGO_MANIFEST_DIR"), name);
    std::fs::read_to_string(path).unwrap()
}

/// The shared random corpus: 500 valid reduced circuits with at most 12
/// variables and at most 60 nodes, deterministic across runs.
fn corpus() -> Vec<Circuit> {
    (0u64..500)
        .map(|seed| {
            random_circuit(seed, 2 + (seed as usize) % 11, 10 + (seed as usize * 7) % 51)
        })
        .collect()
}

fn run_criterion(n: usize, desc: &str, body: impl FnOnce()) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    match outcome {
        Ok(()) => {
            println!("criterion {n}: pass — {desc} ({elapsed:.2?})");
            true
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| payload.downcast_ref::<&str>().copied())
                .unwrap_or("panic");
            println!("criterion {n}: FAIL — {desc}: {msg}");
            false
        }
    }
}

#[test]
fn acceptance() {
    let checks: Vec<(usize, &str, Box<dyn FnOnce()>)> = vec![
        (1, "golden example suite", Box::new(criterion_1)),
        (2, "batch enumeration matches the oracle", Box::new(criterion_2)),
        (3, "incremental enumeration matches the oracle", Box::new(criterion_3)),
        (4, "incremental delay scales polynomially", Box::new(criterion_4)),
        (5, "sufficient reasons match the oracle", Box::new(criterion_5)),
        (6, "CNF chain preserves satisfiability", Box::new(criterion_6)),
        (7, "transversal bridge matches the oracle", Box::new(criterion_7)),
        (8, "reduction and conditioning invariants", Box::new(criterion_8)),
    ];
    let mut all_ok = true;
    for (n, desc, body) in checks {
        all_ok &= run_criterion(n, desc, body);
    }
    assert!(all_ok, "at least one criterion failed; see the lines above");
}

/// Fixed expectations on the worked example: the prime implicants of
/// three nested subcircuits, and one `another_ip` step from a partial
/// set. Everything here is checked for set equality and must finish
/// within a second.
fn criterion_1() {
    let start = Instant::now();
    let sample = parse_circuit(&data("creatures.dnnf")).unwrap();
    let dec_s = sample.subcircuit(6).unwrap();
    let dec_b = sample.subcircuit(9).unwrap();
    let dec_e = sample.subcircuit(10).unwrap();

    assert_eq!(ip_all(&dec_s).unwrap(), ts(&["-s", "p"]));
    assert_eq!(ip_all(&dec_b).unwrap(), ts(&["b -p", "-b -s", "-b p", "-p -s"]));
    assert_eq!(
        ip_all(&dec_e).unwrap(),
        ts(&["-b -e p", "b -e -p", "-b -e -s", "-p -s"])
    );

    let partial = ts(&["b -e h -p", "h -p -s", "-e -p -s"]);
    let next = another_ip(&sample, &partial).unwrap();
    assert_eq!(next, Some(t("-b -e h -s")));
    assert!(start.elapsed() < Duration::from_secs(1), "took {:?}", start.elapsed());
}

/// Batch enumeration agrees with the truth-table oracle on the full
/// random corpus.
fn criterion_2() {
    let start = Instant::now();
    for (i, c) in corpus().iter().enumerate() {
        assert!(c.is_valid() && c.is_reduced(), "corpus circuit {i}");
        let expected = tt_prime_implicants(&tt_of_circuit(c).unwrap());
        assert_eq!(ip_all(c).unwrap(), expected, "corpus circuit {i}");
    }
    assert!(start.elapsed() < Duration::from_secs(300), "took {:?}", start.elapsed());
}

/// Incremental enumeration produces exactly the batch set with no
/// duplicates, and on small-answer circuits `missing_ip` certifies
/// completeness for precisely the full prime implicant set, across
/// every subset of it.
fn criterion_3() {
    let start = Instant::now();
    for (i, c) in corpus().iter().enumerate() {
        let items: Vec<Term> = enumerate_ip(c, None).unwrap().collect();
        let set: TermSet = items.iter().cloned().collect();
        assert_eq!(items.len(), set.len(), "duplicates from circuit {i}");
        assert_eq!(set, ip_all(c).unwrap(), "circuit {i}");
    }

    let mut tested = 0usize;
    let mut seed = 0u64;
    while tested < 50 {
        let c = random_circuit(seed, 2 + (seed as usize) % 11, 10 + (seed as usize * 7) % 51);
        seed += 1;
        let ip = ip_all(&c).unwrap();
        if ip.len() > 8 {
            continue;
        }
        let terms: Vec<Term> = ip.iter().cloned().collect();
        for mask in 0u32..(1 << terms.len()) {
            let s: TermSet = terms
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .map(|(_, t)| t.clone())
                .collect();
            let mut memo = MemoTable::new(&c);
            let complete = matches!(
                missing_ip(&c, &s, &mut memo).unwrap(),
                MissingResult::Complete
            );
            assert_eq!(
                complete,
                s.len() == terms.len(),
                "seed {} mask {mask:b}",
                seed - 1
            );
        }
        tested += 1;
    }
    assert!(start.elapsed() < Duration::from_secs(300), "took {:?}", start.elapsed());
}

/// Drawing a fixed number of implicants from the exponential-answer
/// family stays fast as the family grows: the largest instance stays
/// under ten seconds and the growth of the measured time fits a
/// polynomial of degree at most 3.5.
fn criterion_4() {
    let k = 100usize;
    let sizes = [10usize, 15, 20, 25, 30];
    let mut points: Vec<(f64, f64)> = Vec::new();
    for &n in &sizes {
        let c = gadget_family(n);
        let mut best = f64::INFINITY;
        for _ in 0..3 {
            let start = Instant::now();
            let drawn: Vec<Term> = enumerate_ip(&c, Some(k)).unwrap().collect();
            let secs = start.elapsed().as_secs_f64();
            assert_eq!(drawn.len(), k, "n={n}");
            best = best.min(secs);
        }
        if n == 30 {
            assert!(best < 10.0, "n=30 took {best:.3}s");
        }
        points.push(((n as f64).ln(), best.max(1e-6).ln()));
    }
    let m = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / m;
    let slope = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum::<f64>()
        / points.iter().map(|p| (p.0 - mean_x).powi(2)).sum::<f64>();
    assert!(slope <= 3.5, "log-log growth exponent {slope:.2}");
}

/// Sufficient reasons: the worked fixed cases on both classification
/// sides, then 200 randomized instances cross-checked against filtering
/// the oracle's prime implicants by the instance.
fn criterion_5() {
    let sample = parse_circuit(&data("creatures.dnnf")).unwrap();
    let a = parse_assignment("b=1,e=1,p=0,s=0").unwrap();
    let upper = sample.subcircuit(10).unwrap();
    let q = SrQuery::new(&upper, &a).unwrap();
    assert!(q.is_positive());
    assert_eq!(sr_all(&q).unwrap(), ts(&["-p -s"]));
    let lower = sample.subcircuit(9).unwrap();
    assert_eq!(sr_all(&SrQuery::new(&lower, &a).unwrap()).unwrap(), ts(&["-p -s", "b -p"]));

    // Negative side of the full example, on its conjunction-free form.
    let dt = parse_circuit(&data("creatures-dt.dnnf")).unwrap();
    let a = parse_assignment("b=0,e=1,h=1,p=1,s=1").unwrap();
    let q = SrQuery::new(&dt, &a).unwrap();
    assert!(!q.is_positive());
    let reasons = sr_all(&q).unwrap();
    assert!(reasons.contains(&t("e h p")), "got {reasons:?}");
    assert!(reasons.contains(&t("e h s")), "got {reasons:?}");

    // 150 positive instances on random circuits.
    let mut done = 0usize;
    let mut seed = 10_000u64;
    while done < 150 {
        let c = random_circuit(seed, 2 + (seed as usize) % 11, 10 + (seed as usize * 7) % 51);
        seed += 1;
        let tt = tt_of_circuit(&c).unwrap();
        if tt.count_ones() == 0 {
            continue;
        }
        let mut row = (seed as usize * 13) % tt.num_rows();
        while !tt.value(row) {
            row = (row + 1) % tt.num_rows();
        }
        let a = tt.assignment_of(row);
        let q = SrQuery::new(&c, &a).unwrap();
        assert!(q.is_positive());
        let expected: TermSet = tt_prime_implicants(&tt)
            .iter()
            .filter(|t| t.satisfied_by(&a))
            .cloned()
            .collect();
        assert_eq!(sr_all(&q).unwrap(), expected, "seed {}", seed - 1);
        done += 1;
    }

    // 50 negative instances on conjunction-free chains.
    for k in 0usize..50 {
        let c = chain_family(2 + k % 9);
        let tt = tt_of_circuit(&c).unwrap();
        let mut row = (k * 29) % tt.num_rows();
        while tt.value(row) {
            row = (row + 1) % tt.num_rows();
        }
        let a = tt.assignment_of(row);
        let q = SrQuery::new(&c, &a).unwrap();
        assert!(!q.is_positive());
        let expected: TermSet = tt_prime_implicants(&tt.complement())
            .iter()
            .filter(|t| t.satisfied_by(&a))
            .cloned()
            .collect();
        assert_eq!(sr_all(&q).unwrap(), expected, "chain case {k}");
    }
}

/// The selector-chain compilation of a CNF has an implicant over the
/// CNF's variables exactly when the CNF is satisfiable, checked against
/// direct truth-table evaluation of the clauses.
fn criterion_6() {
    let start = Instant::now();
    for seed in 0u64..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=8usize);
        let m = rng.gen_range(1..=10usize);
        let clauses: Vec<Vec<i32>> = (0..m)
            .map(|_| {
                (0..rng.gen_range(1..=3usize))
                    .map(|_| {
                        let v = rng.gen_range(1..=n) as i32;
                        if rng.gen_bool(0.5) {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect()
            })
            .collect();

        let satisfiable = (0u32..1 << n).any(|row| {
            clauses.iter().all(|cl| {
                cl.iter()
                    .any(|&l| (row >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0))
            })
        });

        let mut text = format!("p cnf {n} {m}\n");
        for cl in &clauses {
            for l in cl {
                text.push_str(&format!("{l} "));
            }
            text.push_str("0\n");
        }
        let cnf = parse_dimacs(&text).unwrap();
        let (chain, y) = cnf_to_obdd_chain(&cnf);
        assert!(chain.is_valid());
        let found = restricted_implicant_exists(&chain, &y, None).unwrap();
        assert_eq!(found.is_some(), satisfiable, "seed {seed}");
        if let Some(term) = found {
            assert!(term.vars().all(|v| y.contains(v)), "seed {seed}");
            assert!(chain.is_implicant(&term).unwrap(), "seed {seed}");
        }
    }
    assert!(start.elapsed() < Duration::from_secs(60), "took {:?}", start.elapsed());
}

/// The sufficient-reason route to minimal transversals agrees with
/// subset enumeration on random hypergraphs.
fn criterion_7() {
    let start = Instant::now();
    for seed in 0u64..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nv = rng.gen_range(1..=8usize);
        let ne = rng.gen_range(1..=8usize);
        let vertices: Vec<String> = (1..=nv).map(|i| format!("v{i}")).collect();
        let mut text = String::new();
        for _ in 0..ne {
            let size = rng.gen_range(1..=nv);
            let mut picks = vertices.clone();
            picks.shuffle(&mut rng);
            picks.truncate(size);
            text.push_str(&picks.join(" "));
            text.push('\n');
        }
        let h = parse_hypergraph(&text).unwrap();
        assert_eq!(
            min_transversals_via_sr(&h).unwrap(),
            tt_min_transversals(&h).unwrap(),
            "seed {seed}"
        );
    }
    assert!(start.elapsed() < Duration::from_secs(60), "took {:?}", start.elapsed());
}

/// Structural invariants on the full corpus: reduction is idempotent
/// and function-preserving, conditioning never increases the number of
/// prime implicants, and the conditioned set is exactly the maximized
/// restriction of the original set. A handful of deliberately
/// unreduced circuits exercise the non-trivial reduction path.
fn criterion_8() {
    for (i, c) in corpus().iter().enumerate() {
        let r = c.reduce().unwrap();
        assert_eq!(print_circuit(&r), print_circuit(c), "corpus circuit {i}");

        let ip = ip_all(c).unwrap();
        for x in c.vars() {
            for positive in [false, true] {
                let lit = Literal::new(x.clone(), positive);
                let tl = Term::new([lit.clone()]).unwrap();
                let conditioned = c.condition(&tl).unwrap();
                let lhs = ip_all(&conditioned).unwrap();
                assert!(lhs.len() <= ip.len(), "circuit {i} on {lit}");
                let rhs: TermSet = ip.iter().filter_map(|t| t.restrict(&lit)).collect();
                assert_eq!(lhs, rhs.max_under_entailment(), "circuit {i} on {lit}");
            }
        }
    }

    for keep_lo in [false, true] {
        let w = Var::new("w").unwrap();
        let z = Var::new("z").unwrap();
        let mut b = CircuitBuilder::new();
        let tt_node = b.true_node();
        let f = b.false_node();
        let lz = b.literal(&Literal::new(z.clone(), true));
        let dead = b.and(vec![lz, f]).unwrap();
        let (lo, hi) = if keep_lo { (tt_node, dead) } else { (dead, tt_node) };
        let u = b.decision(&w, lo, hi).unwrap();
        let u = b.finish(u).unwrap();
        assert!(u.is_valid() && !u.is_reduced());

        let r = u.reduce().unwrap();
        assert!(r.is_reduced());
        for bits in 0..4u8 {
            let a = parse_assignment(&format!("w={},z={}", bits & 1, bits >> 1)).unwrap();
            assert_eq!(u.evaluate(&a).unwrap(), r.evaluate(&a).unwrap(), "bits {bits}");
        }
        assert_eq!(print_circuit(&r.reduce().unwrap()), print_circuit(&r));
        let lit = Literal::new(w.clone(), !keep_lo);
        assert_eq!(ip_all(&u).unwrap(), TermSet::singleton(Term::new([lit]).unwrap()));
    }
}
