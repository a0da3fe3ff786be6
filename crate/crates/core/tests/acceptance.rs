//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use gcol_core::engine::brute::brute_force_value;
use gcol_core::engine::{gcol, solve, GameSpec};
use gcol_core::graph::{make_complete, make_empty, parse_family_expr};
use gcol_core::harness::enumerate::{labeled_graphs, rng_for, sample_graph};
use gcol_core::harness::{explore_c5, verify_monotonicity, verify_section3, verify_skipping, verify_transfer};
use gcol_core::{Graph, Report};

const SEED: u64 = 20_240_601;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn fam(expr: &str) -> Graph {
    parse_family_expr(expr).expect("valid expression")
}

fn violations(report: &Report, checks: &[&str]) -> Vec<String> {
    report
        .violations()
        .filter(|c| checks.contains(&c.check.as_str()))
        .map(|c| format!("{} {} {}", c.check, c.graph, c.detail))
        .collect()
}

fn summarize(report: &Report, checks: &[&str]) -> Outcome {
    let bad = violations(report, checks);
    let counts: Vec<String> = checks.iter().map(|c| format!("{c}={}", report.count_of(c))).collect();
    let ran = checks.iter().all(|c| report.count_of(c) > 0);
    let enumerated = report.cases.iter().filter(|c| c.check == "enumeration_count").all(|c| c.ok);
    let mut detail = format!("cases {}, violations {}", counts.join(" "), bad.len());
    if let Some(first) = bad.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    outcome(bad.is_empty() && ran && enumerated, detail)
}

fn reference_values() -> Outcome {
    let mut failures = Vec::new();
    let mut expect = |what: String, got: usize, want: usize| {
        if got != want {
            failures.push(format!("{what}: got {got}, expected {want}"));
        }
    };
    expect("join(K3,E2)".into(), gcol(&fam("join(K3,E2)")), 5);
    expect("join(K2,E2)".into(), gcol(&fam("join(K2,E2)")), 3);
    expect("minus_edge(join(K3,E2),0,3)".into(), gcol(&fam("minus_edge(join(K3,E2),0,3)")), 4);
    for n in 3..=5 {
        let g = make_complete(n).unwrap().join(&make_empty(n - 1).unwrap()).unwrap();
        let top = gcol(&g);
        expect(format!("join(K{n},E{})", n - 1), top, 2 * n - 1);
        let mut cur = g;
        for k in 1..=n - 3 {
            cur = cur.delete_vertex(0).unwrap().0;
            expect(format!("join(K{n},E{}) minus {k} clique vertices", n - 1), gcol(&cur), top - 2 * k);
        }
    }
    let detail = if failures.is_empty() { "all values exact".to_string() } else { failures.join("; ") };
    outcome(failures.is_empty(), detail)
}

fn oracle_equivalence() -> Outcome {
    let mut graphs: Vec<Graph> = labeled_graphs(3).chain(labeled_graphs(4)).collect();
    let exhaustive = graphs.len();
    for i in 0..200u64 {
        let p = [0.5, 0.2, 0.8][i as usize % 3];
        graphs.push(sample_graph(&mut rng_for(SEED, 5, i), 5, p));
    }
    let mismatches: Vec<String> = graphs
        .iter()
        .filter_map(|g| {
            let spec = GameSpec::ordering_game(g.clone());
            let (memo, brute) = (solve(&spec).value, brute_force_value(&spec));
            (memo != brute).then(|| format!("{}: solver {memo} brute {brute}", g.to_family_expr()))
        })
        .collect();
    let ok = exhaustive == 72 && mismatches.is_empty();
    outcome(
        ok,
        format!(
            "{exhaustive} exhaustive + 200 sampled graphs, {} mismatches{}",
            mismatches.len(),
            mismatches.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    )
}

fn monotonicity() -> Outcome {
    summarize(&verify_monotonicity(5, 0, SEED), &["induced_subgraph"])
}

fn skipping() -> Outcome {
    summarize(
        &verify_skipping(5, 0, SEED),
        &["skip_even_bob_start", "skip_odd_alice_start", "passes_alice", "passes_bob"],
    )
}

fn deletion_bounds(report: &Report) -> Outcome {
    summarize(report, &["bob_start_bounds", "vertex_deletion_bounds"])
}

fn low_degree(report: &Report) -> Outcome {
    let mut o = summarize(report, &["low_degree_deletion", "tightness_witness"]);
    let witness = report.cases.iter().find(|c| c.check == "tightness_witness");
    if let Some(w) = witness {
        o.detail.push_str(&format!("; witness {} {}", w.graph, w.detail));
    }
    o
}

fn transfer() -> Outcome {
    let report = verify_transfer(5, 0, SEED);
    let mut o = summarize(&report, &["transfer_audit", "transfer_replay"]);
    if let Some(note) = report.notes.iter().find(|n| n.starts_with("totals")) {
        o.detail.push_str(&format!("; {note}"));
    }
    o
}

fn performance() -> Outcome {
    let g = sample_graph(&mut rng_for(SEED, 14, 0), 14, 0.5);
    let start = Instant::now();
    let result = solve(&GameSpec::ordering_game(g.clone()));
    let elapsed = start.elapsed();
    outcome(
        elapsed < Duration::from_secs(60) && result.memo_entries > 0,
        format!(
            "n=14 |E|={} value={} in {:.3}s, nodes={} memo_entries={}",
            g.edge_count(),
            result.value,
            elapsed.as_secs_f64(),
            result.nodes,
            result.memo_entries
        ),
    )
}

fn c5() -> Outcome {
    let report = explore_c5(SEED);
    let agreed = report.count_of("oracle_agreement") == 2 && report.passed();
    let values: Vec<&str> = report.notes.iter().take(3).map(String::as_str).collect();
    let reported = values.len() == 3 && values[0].starts_with("gcol(C5) =") && values[1].starts_with("gcol(C5+x) =");
    outcome(agreed && reported, values.join("; "))
}

fn main() -> ExitCode {
    // criteria 5 and 6 share one corpus: exhaustive n <= 5 plus 500 graphs at n = 6, 7
    let section3 = OnceLock::new();
    let section3 = || section3.get_or_init(|| verify_section3(7, 500, SEED));
    let criteria: Vec<Criterion> = vec![
        ("1 reference values", Box::new(reference_values)),
        ("2 solver equals brute force", Box::new(oracle_equivalence)),
        ("3 induced-subgraph monotonicity", Box::new(monotonicity)),
        ("4 turn skipping and passes", Box::new(skipping)),
        ("5 Bob-start and deletion bounds", Box::new(|| deletion_bounds(section3()))),
        ("6 low-degree deletion bound", Box::new(|| low_degree(section3()))),
        ("7 strategy transfer end to end", Box::new(transfer)),
        ("8 n=14 solve under 60s", Box::new(performance)),
        ("9 C5 exploration", Box::new(c5)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let o = run();
        failed += usize::from(!o.ok);
        println!(
            "[{}] criterion {name} ({:.2}s): {}",
            if o.ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
