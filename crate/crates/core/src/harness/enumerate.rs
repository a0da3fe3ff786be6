//! Labeled graph enumeration and seeded sampling.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{bits, Graph};
use crate::ordering::Ordering;

/// Number of labeled graphs on `n` vertices: `2^(n choose 2)`.
pub fn labeled_graph_count(n: usize) -> u64 {
    1u64 << (n * n.saturating_sub(1) / 2)
}

/// Every labeled simple graph on `n` vertices (n <= 11), in order of the
/// edge bit-pattern over pairs `(u, v)`, `u < v`, lexicographic.
pub fn labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    assert!(n <= 11, "labeled enumeration is limited to n <= 11");
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0..labeled_graph_count(n)).map(move |pattern| {
        let mut adj = vec![0u64; n];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if pattern >> i & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        Graph::from_adjacency(adj)
    })
}

/// SplitMix64 finalizer; derives independent stream seeds from a base seed
/// and case coordinates so that parallel evaluation stays reproducible.
pub fn mix(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed
        .wrapping_add(a.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(b.wrapping_mul(0xD1B5_4A32_D192_ED03))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64, a: u64, b: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, a, b))
}

/// Erdős–Rényi sample `G(n, p)`.
pub fn sample_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut adj = vec![0u64; n];
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
    }
    Graph::from_adjacency(adj)
}

/// Random ordering of a subset of `vertices`. With `parity` set, the length
/// has that parity (`true` = odd). Lengths short of a complete ordering are
/// preferred; a complete one is used only when no shorter length fits.
pub fn sample_sigma(rng: &mut impl Rng, vertices: u64, parity: Option<bool>) -> Ordering {
    let mut pool: Vec<usize> = bits(vertices).collect();
    let total = pool.len();
    let fits = |l: usize| parity.is_none_or(|odd| (l % 2 == 1) == odd);
    let mut lengths: Vec<usize> = (0..total).filter(|&l| fits(l)).collect();
    if lengths.is_empty() && fits(total) {
        lengths.push(total);
    }
    let Some(&len) = lengths.choose(rng) else {
        return Ordering::empty();
    };
    pool.shuffle(rng);
    pool.truncate(len);
    Ordering::new(pool).expect("distinct vertices")
}

/// A uniformly random relabeling of `0..n`.
pub fn sample_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts() {
        for (n, want) in [(0, 1), (1, 1), (2, 2), (3, 8), (4, 64), (5, 1024)] {
            let graphs: HashSet<Graph> = labeled_graphs(n).collect();
            assert_eq!(graphs.len() as u64, want);
            assert_eq!(labeled_graph_count(n), want);
        }
    }

    #[test]
    fn sigma_parity() {
        let mut rng = rng_for(7, 0, 0);
        for _ in 0..200 {
            let s = sample_sigma(&mut rng, 0b11111, Some(true));
            assert!(s.len() % 2 == 1 && s.len() < 5);
            let s = sample_sigma(&mut rng, 0b10110, Some(false));
            assert!(s.len().is_multiple_of(2) && s.range() & !0b10110 == 0);
        }
        assert_eq!(sample_sigma(&mut rng, 0b1, Some(true)).len(), 1);
        assert!(sample_sigma(&mut rng, 0, Some(true)).is_empty());
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let a = sample_graph(&mut rng_for(3, 1, 2), 8, 0.5);
        let b = sample_graph(&mut rng_for(3, 1, 2), 8, 0.5);
        assert_eq!(a, b);
        assert_ne!(mix(3, 1, 2), mix(3, 2, 1));
    }
}
