//! The ten centrality measures used to predict spreading power, plus the
//! deterministic ranking they feed into.
//!
//! Every function is a pure function of an immutable [`Graph`]; the heavy
//! ones parallelize over source nodes in fixed-size chunks so that the
//! floating-point accumulation order (and therefore the output bits) does not
//! depend on the worker count.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Sources per parallel work item in the chunked all-sources loops.
const SOURCE_CHUNK: usize = 64;

/// The measures evaluated by the imprecision experiments. The `as_str` names
/// double as CLI tokens and CSV values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Degree,
    KShell,
    Betweenness,
    Closeness,
    Eigenvector,
    PageRank,
    Nghd2,
    Nghd3,
    Nghd5,
    Nghd10,
}

impl Measure {
    pub const ALL: [Measure; 10] = [
        Measure::Degree,
        Measure::KShell,
        Measure::Betweenness,
        Measure::Closeness,
        Measure::Eigenvector,
        Measure::PageRank,
        Measure::Nghd2,
        Measure::Nghd3,
        Measure::Nghd5,
        Measure::Nghd10,
    ];

    pub const VALID_TOKENS: &'static str =
        "degree, kshell, betweenness, closeness, eigenvector, pagerank, nghd2, nghd3, nghd5, nghd10";

    pub fn as_str(&self) -> &'static str {
        match self {
            Measure::Degree => "degree",
            Measure::KShell => "kshell",
            Measure::Betweenness => "betweenness",
            Measure::Closeness => "closeness",
            Measure::Eigenvector => "eigenvector",
            Measure::PageRank => "pagerank",
            Measure::Nghd2 => "nghd2",
            Measure::Nghd3 => "nghd3",
            Measure::Nghd5 => "nghd5",
            Measure::Nghd10 => "nghd10",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Measure> {
        match s {
            "degree" => Ok(Measure::Degree),
            "kshell" => Ok(Measure::KShell),
            "betweenness" => Ok(Measure::Betweenness),
            "closeness" => Ok(Measure::Closeness),
            "eigenvector" => Ok(Measure::Eigenvector),
            "pagerank" => Ok(Measure::PageRank),
            "nghd2" => Ok(Measure::Nghd2),
            "nghd3" => Ok(Measure::Nghd3),
            "nghd5" => Ok(Measure::Nghd5),
            "nghd10" => Ok(Measure::Nghd10),
            _ => Err(Error::UnknownMeasure {
                token: s.to_string(),
                valid: Measure::VALID_TOKENS,
            }),
        }
    }
}

/// Per-node real scores for one measure.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    pub measure: Measure,
    pub values: Vec<f64>,
}

/// A total order over node indices: best spreader candidate first, ties
/// broken by ascending node index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    order: Vec<u32>,
}

impl Ranking {
    /// Sorts node indices by (score descending, index ascending).
    pub fn from_scores(values: &[f64]) -> Ranking {
        let mut order: Vec<u32> = (0..values.len() as u32).collect();
        order.sort_by(|&a, &b| {
            values[b as usize]
                .total_cmp(&values[a as usize])
                .then(a.cmp(&b))
        });
        Ranking { order }
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Ranking induced by a score vector.
pub fn rank_nodes(scores: &CentralityScores) -> Ranking {
    Ranking::from_scores(&scores.values)
}

/// score(i) = number of incident edges.
pub fn degree_centrality(g: &Graph) -> CentralityScores {
    CentralityScores {
        measure: Measure::Degree,
        values: (0..g.node_count()).map(|v| g.degree(v) as f64).collect(),
    }
}

/// Iterative peeling: at stage `s`, repeatedly remove every node whose
/// current degree is at most `s` and assign it shell `s`; stages increase
/// until the graph is empty. Equivalent to the classic core-number
/// decomposition (isolated nodes land in shell 0).
pub fn shell_decomposition(g: &Graph) -> CentralityScores {
    let n = g.node_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut shell = vec![0usize; n];
    let mut removed = vec![false; n];
    let mut remaining = n;
    let mut stack: Vec<u32> = Vec::new();

    let mut stage = 0usize;
    while remaining > 0 {
        for v in 0..n {
            if !removed[v] && degree[v] <= stage {
                removed[v] = true;
                stack.push(v as u32);
            }
        }
        while let Some(v) = stack.pop() {
            shell[v as usize] = stage;
            remaining -= 1;
            for &w in g.neighbors(v as usize) {
                let w = w as usize;
                if !removed[w] {
                    degree[w] -= 1;
                    if degree[w] <= stage {
                        removed[w] = true;
                        stack.push(w as u32);
                    }
                }
            }
        }
        stage += 1;
    }

    CentralityScores {
        measure: Measure::KShell,
        values: shell.into_iter().map(|s| s as f64).collect(),
    }
}

/// Single-source shortest-path counts and dependency accumulation for the
/// sources in `chunk`, added into a fresh partial score vector.
fn betweenness_partial(g: &Graph, chunk: &[usize]) -> Vec<f64> {
    let n = g.node_count();
    let mut partial = vec![0.0f64; n];
    let mut stack: Vec<u32> = Vec::with_capacity(n);
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut queue: VecDeque<u32> = VecDeque::new();

    for &s in chunk {
        stack.clear();
        queue.clear();
        for v in 0..n {
            preds[v].clear();
            sigma[v] = 0.0;
            dist[v] = -1;
            delta[v] = 0.0;
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s as u32);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            let dv = dist[v as usize];
            for &w in g.neighbors(v as usize) {
                let wu = w as usize;
                if dist[wu] < 0 {
                    dist[wu] = dv + 1;
                    queue.push_back(w);
                }
                if dist[wu] == dv + 1 {
                    sigma[wu] += sigma[v as usize];
                    preds[wu].push(v);
                }
            }
        }
        while let Some(w) = stack.pop() {
            let wu = w as usize;
            let coeff = (1.0 + delta[wu]) / sigma[wu];
            for &v in &preds[wu] {
                delta[v as usize] += sigma[v as usize] * coeff;
            }
            if wu != s {
                partial[wu] += delta[wu];
            }
        }
    }
    partial
}

/// score(v) = sum over unordered pairs {s, t} with s != v != t of the
/// fraction of shortest s-t paths through v. No normalization, endpoints
/// excluded; pairs in different components contribute zero.
///
/// Sources are processed in fixed chunks of 64 and the per-chunk partial sums
/// are merged in chunk order, so results are identical for any worker count.
pub fn betweenness_centrality(g: &Graph) -> CentralityScores {
    let n = g.node_count();
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| betweenness_partial(g, chunk))
        .collect();

    let mut values = vec![0.0f64; n];
    for partial in partials {
        for (acc, x) in values.iter_mut().zip(partial) {
            *acc += x;
        }
    }
    // Each unordered pair was accumulated once per endpoint.
    for v in &mut values {
        *v /= 2.0;
    }
    CentralityScores {
        measure: Measure::Betweenness,
        values,
    }
}

fn bfs_distances(g: &Graph, source: usize, dist: &mut [i64], queue: &mut VecDeque<u32>) {
    dist.fill(-1);
    queue.clear();
    dist[source] = 0;
    queue.push_back(source as u32);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v as usize];
        for &w in g.neighbors(v as usize) {
            if dist[w as usize] < 0 {
                dist[w as usize] = dv + 1;
                queue.push_back(w);
            }
        }
    }
}

/// score(i) = (N - 1) / sum of breadth-first distances from i.
pub fn closeness_centrality(g: &Graph) -> Result<CentralityScores> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected {
            context: "closeness centrality",
        });
    }
    let sources: Vec<usize> = (0..n).collect();
    let values: Vec<f64> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut dist = vec![-1i64; n];
            let mut queue = VecDeque::new();
            chunk
                .iter()
                .map(|&s| {
                    bfs_distances(g, s, &mut dist, &mut queue);
                    let total: i64 = dist.iter().sum();
                    if total == 0 {
                        0.0 // single-node graph
                    } else {
                        (n as f64 - 1.0) / total as f64
                    }
                })
                .collect::<Vec<f64>>()
        })
        .flatten()
        .collect();
    Ok(CentralityScores {
        measure: Measure::Closeness,
        values,
    })
}

/// Convergence controls for the iterative solvers.
#[derive(Debug, Clone, Copy)]
pub struct IterationOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl IterationOptions {
    /// Max-norm tolerance 1e-10, cap 10,000.
    pub fn eigenvector_default() -> Self {
        IterationOptions {
            tolerance: 1e-10,
            max_iterations: 10_000,
        }
    }

    /// Max-norm tolerance 1e-12, cap 10,000.
    pub fn pagerank_default() -> Self {
        IterationOptions {
            tolerance: 1e-12,
            max_iterations: 10_000,
        }
    }
}

/// Entries of the principal eigenvector of the adjacency matrix, non-negative
/// and unit Euclidean norm, via power iteration from the all-ones vector.
pub fn eigenvector_centrality(g: &Graph) -> Result<CentralityScores> {
    eigenvector_centrality_with(g, IterationOptions::eigenvector_default())
}

/// The iteration multiplies by A + I rather than A alone: the shift leaves
/// every eigenvector unchanged but makes the principal eigenvalue strictly
/// dominant on bipartite graphs (paths, stars), where plain multiplication by
/// A oscillates between two accumulation points and cannot meet any
/// tolerance.
pub fn eigenvector_centrality_with(
    g: &Graph,
    opts: IterationOptions,
) -> Result<CentralityScores> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected {
            context: "eigenvector centrality",
        });
    }

    let norm = (n as f64).sqrt();
    let mut x: Vec<f64> = vec![1.0 / norm; n];
    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_iterations {
        let mut y = matvec(g, &x);
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += xi;
        }
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in &mut y {
            *v /= norm;
        }
        residual = y
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        x = y;
        if residual < opts.tolerance {
            return Ok(CentralityScores {
                measure: Measure::Eigenvector,
                values: x,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iterations,
        residual,
    })
}

/// Rayleigh quotient of the adjacency matrix at a unit vector; the estimate
/// of the principal eigenvalue associated with an eigenvector-centrality
/// result.
pub fn rayleigh_quotient(g: &Graph, x: &[f64]) -> f64 {
    let ax = matvec(g, x);
    ax.iter().zip(x).map(|(a, b)| a * b).sum()
}

fn matvec(g: &Graph, x: &[f64]) -> Vec<f64> {
    (0..g.node_count())
        .into_par_iter()
        .map(|v| g.neighbors(v).iter().map(|&w| x[w as usize]).sum())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PageRankVariant {
    /// The bare recurrence R_v = c * sum R_u / d_u over neighbors u, with no
    /// teleport term. On connected non-bipartite graphs it converges to the
    /// stationary distribution of the simple random walk, degree/(2*edges);
    /// on bipartite graphs it oscillates and reports non-convergence.
    Pure,
    /// Uniform teleport with the given damping factor (0.85 by default).
    Damped,
}

impl PageRankVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            PageRankVariant::Pure => "pure",
            PageRankVariant::Damped => "damped",
        }
    }
}

impl FromStr for PageRankVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<PageRankVariant> {
        match s {
            "pure" => Ok(PageRankVariant::Pure),
            "damped" => Ok(PageRankVariant::Damped),
            _ => Err(Error::UnknownMeasure {
                token: s.to_string(),
                valid: "pure, damped",
            }),
        }
    }
}

pub const DEFAULT_DAMPING: f64 = 0.85;

/// PageRank over the undirected graph, sum-normalized to 1.
pub fn pagerank(g: &Graph, variant: PageRankVariant, damping: f64) -> Result<CentralityScores> {
    pagerank_with(g, variant, damping, IterationOptions::pagerank_default())
}

pub fn pagerank_with(
    g: &Graph,
    variant: PageRankVariant,
    damping: f64,
    opts: IterationOptions,
) -> Result<CentralityScores> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !(damping > 0.0 && damping <= 1.0) {
        return Err(Error::InvalidDamping(damping));
    }
    if let Some(node) = (0..n).find(|&v| g.degree(v) == 0) {
        return Err(Error::IsolatedNode { node });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected { context: "pagerank" });
    }

    let inv_degree: Vec<f64> = (0..n).map(|v| 1.0 / g.degree(v) as f64).collect();
    let teleport = match variant {
        PageRankVariant::Pure => 0.0,
        PageRankVariant::Damped => (1.0 - damping) / n as f64,
    };
    let walk = match variant {
        PageRankVariant::Pure => 1.0,
        PageRankVariant::Damped => damping,
    };

    let mut rank = vec![1.0 / n as f64; n];
    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_iterations {
        let mut next: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|v| {
                let inflow: f64 = g
                    .neighbors(v)
                    .iter()
                    .map(|&u| rank[u as usize] * inv_degree[u as usize])
                    .sum();
                teleport + walk * inflow
            })
            .collect();
        let total: f64 = next.iter().sum();
        for r in &mut next {
            *r /= total;
        }
        residual = next
            .iter()
            .zip(&rank)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        rank = next;
        if residual < opts.tolerance {
            return Ok(CentralityScores {
                measure: Measure::PageRank,
                values: rank,
            });
        }
    }
    match variant {
        PageRankVariant::Pure => Err(Error::PureRankOscillation {
            iterations: opts.max_iterations,
            residual,
        }),
        PageRankVariant::Damped => Err(Error::NonConvergence {
            iterations: opts.max_iterations,
            residual,
        }),
    }
}

/// score(i) = number of nodes within graph distance `q` of node i, counting
/// the node itself (so q = 0 scores 1 everywhere). The measure label is
/// meaningful for the experiment radii 2, 3, 5, and 10; other radii are
/// labeled nghd10.
pub fn q_neighborhood(g: &Graph, q: usize) -> CentralityScores {
    let n = g.node_count();
    let measure = match q {
        2 => Measure::Nghd2,
        3 => Measure::Nghd3,
        5 => Measure::Nghd5,
        _ => Measure::Nghd10,
    };
    let sources: Vec<usize> = (0..n).collect();
    let values: Vec<f64> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut dist = vec![-1i64; n];
            let mut queue = VecDeque::new();
            chunk
                .iter()
                .map(|&s| {
                    // depth-limited breadth-first count
                    dist.fill(-1);
                    queue.clear();
                    dist[s] = 0;
                    queue.push_back(s as u32);
                    let mut count = 1usize;
                    while let Some(v) = queue.pop_front() {
                        let dv = dist[v as usize];
                        if dv as usize >= q {
                            continue;
                        }
                        for &w in g.neighbors(v as usize) {
                            if dist[w as usize] < 0 {
                                dist[w as usize] = dv + 1;
                                count += 1;
                                queue.push_back(w);
                            }
                        }
                    }
                    count as f64
                })
                .collect::<Vec<f64>>()
        })
        .flatten()
        .collect();
    CentralityScores { measure, values }
}

/// Configuration for the one measure that takes parameters.
#[derive(Debug, Clone, Copy)]
pub struct PageRankConfig {
    pub variant: PageRankVariant,
    pub damping: f64,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig {
            variant: PageRankVariant::Damped,
            damping: DEFAULT_DAMPING,
        }
    }
}

/// Computes any measure by token; the dispatch point for the CLI and the
/// sweep drivers.
pub fn compute_measure(g: &Graph, measure: Measure, pr: PageRankConfig) -> Result<CentralityScores> {
    match measure {
        Measure::Degree => Ok(degree_centrality(g)),
        Measure::KShell => Ok(shell_decomposition(g)),
        Measure::Betweenness => Ok(betweenness_centrality(g)),
        Measure::Closeness => closeness_centrality(g),
        Measure::Eigenvector => eigenvector_centrality(g),
        Measure::PageRank => pagerank(g, pr.variant, pr.damping),
        Measure::Nghd2 => Ok(q_neighborhood(g, 2)),
        Measure::Nghd3 => Ok(q_neighborhood(g, 3)),
        Measure::Nghd5 => Ok(q_neighborhood(g, 5)),
        Measure::Nghd10 => Ok(q_neighborhood(g, 10)),
    }
}
