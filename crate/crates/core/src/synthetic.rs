//! Seeded synthetic graph generators for tests, benchmarks, and determinism
//! checks. Everything here is reproducible: the same arguments always build
//! the same graph.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Preferential-attachment scale-free graph: starts from a small complete
/// core and attaches each new node to `m` distinct existing nodes chosen
/// proportionally to degree (repeated-endpoint sampling).
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Graph {
    assert!(m >= 1 && n > m, "need n > m >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n * m);
    // endpoint pool: every edge contributes both ends, so sampling an entry
    // uniformly is degree-proportional sampling
    let mut pool: Vec<usize> = Vec::with_capacity(2 * n * m);

    let core = m + 1;
    for i in 0..core {
        for j in i + 1..core {
            edges.push((i, j));
            pool.push(i);
            pool.push(j);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for v in core..n {
        targets.clear();
        while targets.len() < m {
            let t = pool[rng.random_range(0..pool.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((v, t));
            pool.push(v);
            pool.push(t);
        }
    }
    Graph::from_edges(n, &edges).expect("generated indices are in range")
}

/// Connected random graph with exactly `edge_count` edges: a uniformly
/// shuffled spanning tree plus random extra edges. Requires
/// `n - 1 <= edge_count <= n*(n-1)/2`.
pub fn random_connected(n: usize, edge_count: usize, seed: u64) -> Graph {
    assert!(n >= 2, "need at least two nodes");
    let max_edges = n * (n - 1) / 2;
    assert!(
        (n - 1..=max_edges).contains(&edge_count),
        "edge_count {edge_count} outside [{}, {max_edges}]",
        n - 1
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // random spanning tree: connect each node (in shuffled order) to a
    // uniformly chosen earlier node
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(edge_count);
    let mut present = std::collections::BTreeSet::new();
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        let (a, b) = (order[i].min(parent), order[i].max(parent));
        edges.push((a, b));
        present.insert((a, b));
    }
    while edges.len() < edge_count {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if present.insert(key) {
            edges.push(key);
        }
    }
    Graph::from_edges(n, &edges).expect("generated indices are in range")
}
