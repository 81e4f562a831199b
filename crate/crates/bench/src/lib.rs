//! Shared fixtures for the criterion benchmarks.

use spreadnet::graph::Graph;
use spreadnet::synthetic::barabasi_albert;

/// Scale-free fixture graphs, one per size, deterministic.
pub fn fixture(n: usize) -> Graph {
    barabasi_albert(n, 3, 0xBE9C)
}
