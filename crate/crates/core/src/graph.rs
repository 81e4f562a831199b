//! Undirected simple graph: edge-list ingestion, greatest-connected-component
//! extraction, degree statistics, and the summary row reported per network.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Immutable undirected simple graph stored in compressed adjacency form.
///
/// Node labels from the source edge list are kept in first-appearance order;
/// all computation works on the dense indices `0..node_count()`. Neighbor
/// lists are sorted, self-loops and duplicate edges are dropped at
/// construction time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    labels: Vec<String>,
}

impl Graph {
    /// Builds a graph over `node_count` nodes from index pairs. Labels are the
    /// decimal indices. Self-loops and duplicates are silently dropped.
    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        for &(a, b) in edges {
            let index = a.max(b);
            if index >= node_count {
                return Err(Error::NodeOutOfRange {
                    index,
                    nodes: node_count,
                });
            }
        }
        let labels = (0..node_count).map(|i| i.to_string()).collect();
        Ok(Self::build(labels, edges.iter().copied()))
    }

    fn build(labels: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
        let n = labels.len();
        let mut edge_set: BTreeSet<(u32, u32)> = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                continue;
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            edge_set.insert((lo as u32, hi as u32));
        }

        let mut degrees = vec![0usize; n];
        for &(a, b) in &edge_set {
            degrees[a as usize] += 1;
            degrees[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degrees {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0u32; 2 * edge_set.len()];
        for &(a, b) in &edge_set {
            neighbors[cursor[a as usize]] = b;
            cursor[a as usize] += 1;
            neighbors[cursor[b as usize]] = a;
            cursor[b as usize] += 1;
        }
        // BTreeSet iteration fills each node's slice in ascending order of the
        // partner for the low endpoint, but the high endpoint's slice mixes:
        // sort every slice to restore the invariant.
        for v in 0..n {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph {
            offsets,
            neighbors,
            labels,
        }
    }

    /// Parses line-oriented edge-list text: one `<label> <label>` pair per
    /// line, `#` comments and blank lines ignored, any run of spaces or tabs
    /// as separator. Pair order is irrelevant; duplicates and self-loops are
    /// dropped. Labels map to dense indices in first-appearance order.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut index_of: HashMap<String, usize> = HashMap::new();
        let mut labels: Vec<String> = Vec::new();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut saw_data = false;

        for (lineno, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(Error::MalformedEdgeLine {
                    line: lineno + 1,
                    found: tokens.len(),
                });
            }
            saw_data = true;
            let mut intern = |tok: &str| -> usize {
                if let Some(&i) = index_of.get(tok) {
                    i
                } else {
                    let i = labels.len();
                    index_of.insert(tok.to_string(), i);
                    labels.push(tok.to_string());
                    i
                }
            };
            let a = intern(tokens[0]);
            let b = intern(tokens[1]);
            edges.push((a, b));
        }
        if !saw_data {
            return Err(Error::EmptyEdgeList);
        }
        Ok(Self::build(labels, edges))
    }

    /// Serializes back to edge-list text. Each edge appears once as
    /// `<label> <label>` with the lower index first; isolated nodes are
    /// written as a self-loop line so the label set survives a round trip
    /// (the parser drops the loop again).
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for u in 0..self.node_count() {
            for &v in self.neighbors(u) {
                if (v as usize) > u {
                    let _ = writeln!(out, "{} {}", self.labels[u], self.labels[v as usize]);
                }
            }
            if self.degree(u) == 0 {
                let _ = writeln!(out, "{} {}", self.labels[u], self.labels[u]);
            }
        }
        out
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn neighbors(&self, node: usize) -> &[u32] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Index pairs `(a, b)` with `a < b`, ascending.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.node_count() {
            for &v in self.neighbors(u) {
                if (v as usize) > u {
                    out.push((u as u32, v));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1usize;
        while let Some(u) = stack.pop() {
            for &v in self.neighbors(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    reached += 1;
                    stack.push(v as usize);
                }
            }
        }
        reached == n
    }

    /// Induced subgraph on the largest connected node set, re-indexed densely
    /// in ascending order of the original indices. Ties between equal-size
    /// components go to the component containing the smallest original index.
    pub fn greatest_connected_component(&self) -> Result<Graph> {
        let n = self.node_count();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut comp = vec![usize::MAX; n];
        let mut comp_sizes: Vec<usize> = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = comp_sizes.len();
            let mut size = 0usize;
            comp[start] = id;
            stack.push(start);
            while let Some(u) = stack.pop() {
                size += 1;
                for &v in self.neighbors(u) {
                    if comp[v as usize] == usize::MAX {
                        comp[v as usize] = id;
                        stack.push(v as usize);
                    }
                }
            }
            comp_sizes.push(size);
        }
        // Components are discovered in order of their smallest member, so the
        // first maximum realizes the tie rule.
        let best = comp_sizes
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| a.cmp(b).then(ib.cmp(ia)))
            .map(|(i, _)| i)
            .expect("at least one component");

        let kept: Vec<usize> = (0..n).filter(|&v| comp[v] == best).collect();
        let mut new_index = vec![usize::MAX; n];
        for (new, &old) in kept.iter().enumerate() {
            new_index[old] = new;
        }
        let labels = kept.iter().map(|&v| self.labels[v].clone()).collect();
        let mut edges = Vec::new();
        for &u in &kept {
            for &v in self.neighbors(u) {
                if (v as usize) > u {
                    edges.push((new_index[u], new_index[v as usize]));
                }
            }
        }
        Ok(Self::build(labels, edges))
    }

    /// Exact empirical degree histogram with the first two moments.
    pub fn degree_histogram(&self) -> DegreeHistogram {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..self.node_count() {
            *counts.entry(self.degree(v)).or_insert(0) += 1;
        }
        let n = self.node_count() as f64;
        let mut mean = 0.0;
        let mut second = 0.0;
        for (&k, &c) in &counts {
            let p = c as f64 / n;
            mean += k as f64 * p;
            second += (k * k) as f64 * p;
        }
        DegreeHistogram {
            counts,
            nodes: self.node_count(),
            mean_degree: mean,
            second_moment: second,
        }
    }
}

/// Empirical degree distribution of one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeHistogram {
    /// degree k -> number of nodes with that degree
    pub counts: BTreeMap<usize, usize>,
    pub nodes: usize,
    pub mean_degree: f64,
    pub second_moment: f64,
}

/// One summary row per network: sizes, density, epidemic threshold (percent),
/// power-law fit, degree moments, and the maximum shell index.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkStats {
    pub nodes: usize,
    pub edges: usize,
    pub density: f64,
    pub beta_prime: f64,
    pub lambda: f64,
    pub r_squared: f64,
    pub mean_degree: f64,
    pub second_moment: f64,
    pub max_shell: usize,
}

/// Ordinary least-squares fit of `log P(k)` against `log k` over the degrees
/// `k >= 1` with nonzero count. Returns `(lambda, r_squared)` where lambda is
/// the negated slope. The histogram is used raw (no binning).
pub fn power_law_fit(hist: &DegreeHistogram) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = hist
        .counts
        .iter()
        .filter(|&(&k, &c)| k >= 1 && c > 0)
        .map(|(&k, &c)| {
            let x = (k as f64).ln();
            let y = (c as f64 / hist.nodes as f64).ln();
            (x, y)
        })
        .collect();
    if pts.len() < 2 {
        return Err(Error::DegenerateFit { found: pts.len() });
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in &pts {
        sxx += (x - mean_x) * (x - mean_x);
        syy += (y - mean_y) * (y - mean_y);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = sxy / sxx;
    // A perfectly flat cloud is fit exactly by the zero-slope line.
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok((-slope, r_squared))
}

/// Fills the full summary row for a connected graph. Run after GCC
/// extraction; a graph without edges is rejected.
///
/// Regular graphs leave the power-law fit with a single usable point; the row
/// is still produced, with `lambda = 0` and `r_squared = 1` (a one-point cloud
/// is fit exactly).
pub fn summary_stats(g: &Graph) -> Result<NetworkStats> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::EdgelessGraph);
    }
    let hist = g.degree_histogram();
    let threshold = crate::epidemic::epidemic_threshold(&hist)?;
    let (lambda, r_squared) = match power_law_fit(&hist) {
        Ok(fit) => fit,
        Err(Error::DegenerateFit { .. }) => (0.0, 1.0),
        Err(e) => return Err(e),
    };
    let shells = crate::centrality::shell_decomposition(g);
    let max_shell = shells.values.iter().fold(0.0f64, |a, &b| a.max(b)) as usize;
    Ok(NetworkStats {
        nodes: n,
        edges: m,
        density: 2.0 * m as f64 / (n as f64 * (n as f64 - 1.0)),
        beta_prime: threshold.percent,
        lambda,
        r_squared,
        mean_degree: hist.mean_degree,
        second_moment: hist.second_moment,
        max_shell,
    })
}
