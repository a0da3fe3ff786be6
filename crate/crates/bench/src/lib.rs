//! Fixed graph fixtures shared by the benchmarks.

use gcol_core::graph::{make_complete, make_cycle, make_empty};
use gcol_core::harness::enumerate::{rng_for, sample_graph};
use gcol_core::Graph;

/// Seeded `G(n, p)` sample; the same `(n, p, seed)` always gives the same graph.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    sample_graph(&mut rng_for(seed, n as u64, (p * 100.0) as u64), n, p)
}

/// `K_n` joined with `E_(n-1)`.
pub fn clique_join(n: usize) -> Graph {
    make_complete(n).unwrap().join(&make_empty(n - 1).unwrap()).unwrap()
}

/// Named solver workloads from small to the largest routinely solved size.
pub fn solver_fixtures() -> Vec<(String, Graph)> {
    let mut out = vec![
        ("C12".to_string(), make_cycle(12).unwrap()),
        ("join(K6,E5)".to_string(), clique_join(6)),
    ];
    for n in [10, 14, 18] {
        out.push((format!("G({n},0.5)"), random_graph(n, 0.5, 1)));
    }
    out
}
