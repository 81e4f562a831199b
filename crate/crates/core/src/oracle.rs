//! Exact influence spread on tiny graphs by exhaustive enumeration of edge
//! subsets under the bond-percolation equivalence: with transmission
//! probability beta, the final infected set of an SIR realization is
//! distributed as the cluster of the seed when every edge is independently
//! live with probability beta.
//!
//! This is the ground truth the Monte Carlo engine is validated against.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::epidemic::InfectionProbability;

/// Enumeration ceiling: 2^24 subsets keeps the worst case under a minute.
pub const MAX_EDGES: u32 = 24;

/// Subsets per parallel work item.
const BLOCK_BITS: u32 = 14;

/// Exact expected final size for one seed node at one beta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactSpread {
    pub node: usize,
    pub beta: InfectionProbability,
    pub value: f64,
}

/// Union-find rebuilt once per subset; buffers reused across subsets.
struct DisjointSet {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        self.size.fill(1);
    }

    fn find(&mut self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            let grand = self.parent[self.parent[v as usize] as usize];
            self.parent[v as usize] = grand;
            v = grand;
        }
        v
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra as usize] >= self.size[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
    }
}

fn check_bound(g: &Graph) -> Result<Vec<(u32, u32)>> {
    let m = g.edge_count();
    if m > MAX_EDGES as usize {
        return Err(Error::EdgeBoundExceeded {
            edges: m,
            bound: MAX_EDGES,
        });
    }
    Ok(g.edges())
}

/// Per-node component sizes summed over all subsets with a given live-edge
/// count: `totals[node][live]`. Integer sums are exact, so the enumeration
/// is deterministic under any partitioning of the subset range.
fn enumerate_component_sums(g: &Graph, edges: &[(u32, u32)]) -> Vec<Vec<u64>> {
    let n = g.node_count();
    let m = edges.len();
    let subsets: u64 = 1 << m;
    let block = 1u64 << BLOCK_BITS.min(m as u32);
    let blocks: Vec<u64> = (0..subsets.div_ceil(block)).collect();

    let partials: Vec<Vec<Vec<u64>>> = blocks
        .par_iter()
        .map(|&b| {
            let mut totals = vec![vec![0u64; m + 1]; n];
            let mut dsu = DisjointSet::new(n);
            let start = b * block;
            let end = (start + block).min(subsets);
            for mask in start..end {
                dsu.reset();
                for (e, &(a, bb)) in edges.iter().enumerate() {
                    if mask >> e & 1 == 1 {
                        dsu.union(a, bb);
                    }
                }
                let live = mask.count_ones() as usize;
                for (node, row) in totals.iter_mut().enumerate() {
                    let root = dsu.find(node as u32);
                    row[live] += dsu.size[root as usize] as u64;
                }
            }
            totals
        })
        .collect();

    let mut totals = vec![vec![0u64; m + 1]; n];
    for part in partials {
        for (node, row) in part.into_iter().enumerate() {
            for (acc, x) in totals[node].iter_mut().zip(row) {
                *acc += x;
            }
        }
    }
    totals
}

/// beta^live * (1-beta)^(m-live) for live = 0..=m.
fn subset_weights(beta: f64, m: usize) -> Vec<f64> {
    (0..=m)
        .map(|live| beta.powi(live as i32) * (1.0 - beta).powi((m - live) as i32))
        .collect()
}

fn weighted_value(totals: &[u64], weights: &[f64]) -> f64 {
    totals
        .iter()
        .zip(weights)
        .map(|(&t, &w)| t as f64 * w)
        .sum()
}

/// Exact expected final size when `node` is the sole initial infectee:
/// the sum over all 2^|E| live/dead edge subsets of the subset probability
/// times the size of the live component containing `node`.
pub fn exact_influence_spread(
    g: &Graph,
    node: usize,
    beta: InfectionProbability,
) -> Result<ExactSpread> {
    let n = g.node_count();
    if node >= n {
        return Err(Error::NodeOutOfRange {
            index: node,
            nodes: n,
        });
    }
    let edges = check_bound(g)?;
    let totals = enumerate_component_sums(g, &edges);
    let weights = subset_weights(beta.fraction(), edges.len());
    Ok(ExactSpread {
        node,
        beta,
        value: weighted_value(&totals[node], &weights),
    })
}

/// Exact values for every node from a single enumeration pass.
pub fn exact_all_spreads(g: &Graph, beta: InfectionProbability) -> Result<Vec<ExactSpread>> {
    let edges = check_bound(g)?;
    let totals = enumerate_component_sums(g, &edges);
    let weights = subset_weights(beta.fraction(), edges.len());
    Ok(totals
        .iter()
        .enumerate()
        .map(|(node, row)| ExactSpread {
            node,
            beta,
            value: weighted_value(row, &weights),
        })
        .collect())
}
