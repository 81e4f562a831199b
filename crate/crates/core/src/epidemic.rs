//! Discrete-time SIR Monte Carlo engine, per-node influence-spread
//! estimation, and the epidemic-threshold computation.
//!
//! Determinism contract: every replication draws from a counter-derived
//! ChaCha stream keyed by `(master_seed, node, replication)`, and per-node
//! statistics accumulate in exact integer arithmetic, so results are
//! bit-identical for any worker count or scheduling order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{DegreeHistogram, Graph};

/// Transmission probability per infected-susceptible contact, stored as a
/// fraction in [0, 1]. User-facing I/O quotes percentages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfectionProbability {
    fraction: f64,
}

impl InfectionProbability {
    pub fn from_fraction(fraction: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&fraction) || fraction.is_nan() {
            return Err(Error::InvalidProbability(fraction));
        }
        Ok(InfectionProbability { fraction })
    }

    pub fn from_percent(percent: f64) -> Result<Self> {
        Self::from_fraction(percent / 100.0)
    }

    pub fn fraction(&self) -> f64 {
        self.fraction
    }

    pub fn percent(&self) -> f64 {
        self.fraction * 100.0
    }
}

/// Minimum infection probability for an outbreak to reach a macroscopic
/// fraction of a random network with the given degree distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpidemicThreshold {
    pub fraction: f64,
    pub percent: f64,
}

impl EpidemicThreshold {
    /// Closed form mean/(second moment - mean) from the first two degree
    /// moments.
    pub fn from_moments(mean_degree: f64, second_moment: f64) -> Result<Self> {
        if second_moment <= mean_degree {
            return Err(Error::NoFiniteThreshold {
                mean_degree,
                second_moment,
            });
        }
        let fraction = mean_degree / (second_moment - mean_degree);
        Ok(EpidemicThreshold {
            fraction,
            percent: 100.0 * fraction,
        })
    }
}

/// Threshold of the branching-factor criterion evaluated on an empirical
/// degree histogram.
pub fn epidemic_threshold(hist: &DegreeHistogram) -> Result<EpidemicThreshold> {
    EpidemicThreshold::from_moments(hist.mean_degree, hist.second_moment)
}

/// Monte Carlo estimate of the influence spread of every node.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadEstimate {
    pub means: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub runs: u64,
    pub beta: InfectionProbability,
    pub master_seed: u64,
}

/// Reusable per-worker simulation state: epoch stamps instead of
/// reallocation, frontier lists instead of full scans.
struct SirScratch {
    touched: Vec<u64>,
    epoch: u64,
    frontier: Vec<u32>,
    next: Vec<u32>,
}

impl SirScratch {
    fn new(n: usize) -> Self {
        SirScratch {
            touched: vec![0; n],
            epoch: 0,
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }
}

fn sir_run_scratch<R: Rng>(
    g: &Graph,
    seed_node: usize,
    beta: f64,
    rng: &mut R,
    scratch: &mut SirScratch,
) -> usize {
    scratch.epoch += 1;
    let epoch = scratch.epoch;
    scratch.frontier.clear();
    scratch.next.clear();
    scratch.touched[seed_node] = epoch;
    scratch.frontier.push(seed_node as u32);
    let mut recovered = 1usize;

    while !scratch.frontier.is_empty() {
        scratch.next.clear();
        for &u in &scratch.frontier {
            for &v in g.neighbors(u as usize) {
                let vu = v as usize;
                if scratch.touched[vu] != epoch && rng.random::<f64>() < beta {
                    scratch.touched[vu] = epoch;
                    scratch.next.push(v);
                    recovered += 1;
                }
            }
        }
        std::mem::swap(&mut scratch.frontier, &mut scratch.next);
    }
    recovered
}

/// One synchronous SIR realization seeded at `seed_node`: every node infected
/// in the previous step makes an independent Bernoulli(beta) attempt on each
/// still-susceptible neighbor, then recovers. Returns the final recovered
/// count, seed included.
pub fn sir_run<R: Rng>(
    g: &Graph,
    seed_node: usize,
    beta: InfectionProbability,
    rng: &mut R,
) -> usize {
    let mut scratch = SirScratch::new(g.node_count());
    sir_run_scratch(g, seed_node, beta.fraction(), rng, &mut scratch)
}

/// Generator for replication `rep` of `node`, derived from the master seed.
/// The base key comes from the master seed alone; (node, rep) selects one of
/// the 2^64 independent ChaCha streams, which caps runs at 2^32 per node.
fn replication_rng(base: &ChaCha8Rng, node: u32, rep: u32) -> ChaCha8Rng {
    let mut rng = base.clone();
    rng.set_stream(((node as u64) << 32) | rep as u64);
    rng
}

fn base_rng(master_seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(master_seed)
}

/// Replications per parallel work item.
const REP_CHUNK: u64 = 8192;

/// Accumulates one node's replications over `reps`. Integer sums make the
/// result independent of any ordering.
fn replicate_range(
    g: &Graph,
    node: usize,
    beta: f64,
    reps: std::ops::Range<u64>,
    base: &ChaCha8Rng,
    scratch: &mut SirScratch,
) -> (u64, u128) {
    let mut sum = 0u64;
    let mut sum_sq = 0u128;
    for rep in reps {
        let mut rng = replication_rng(base, node as u32, rep as u32);
        let size = sir_run_scratch(g, node, beta, &mut rng, scratch) as u64;
        sum += size;
        sum_sq += (size as u128) * (size as u128);
    }
    (sum, sum_sq)
}

/// All replications for one node, split into fixed chunks across workers.
/// The per-chunk integer sums commute, so any scheduling gives the same
/// result.
fn node_stats(g: &Graph, node: usize, beta: f64, runs: u64, base: &ChaCha8Rng) -> (u64, u128) {
    assert!(runs <= u32::MAX as u64, "replication streams are 32-bit");
    if runs <= REP_CHUNK {
        let mut scratch = SirScratch::new(g.node_count());
        return replicate_range(g, node, beta, 0..runs, base, &mut scratch);
    }
    (0..runs.div_ceil(REP_CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * REP_CHUNK;
            let end = (start + REP_CHUNK).min(runs);
            let mut scratch = SirScratch::new(g.node_count());
            replicate_range(g, node, beta, start..end, base, &mut scratch)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

fn mean_and_std_error(sum: u64, sum_sq: u128, runs: u64) -> (f64, f64) {
    let mean = sum as f64 / runs as f64;
    if runs < 2 {
        return (mean, 0.0);
    }
    // unbiased sample variance; the numerator runs*sum_sq - sum^2 is exact in
    // u128 and non-negative by Cauchy-Schwarz
    let numerator = sum_sq * runs as u128 - (sum as u128) * (sum as u128);
    let variance = numerator as f64 / runs as f64 / (runs as f64 - 1.0);
    let std_error = (variance / runs as f64).sqrt();
    (mean, std_error)
}

/// Mean and standard error of the spread of `node` over `runs` independent
/// replications.
pub fn influence_spread(
    g: &Graph,
    node: usize,
    beta: InfectionProbability,
    runs: u64,
    master_seed: u64,
) -> (f64, f64) {
    assert!(runs >= 1, "influence_spread needs at least one run");
    let base = base_rng(master_seed);
    let (sum, sum_sq) = node_stats(g, node, beta.fraction(), runs, &base);
    mean_and_std_error(sum, sum_sq, runs)
}

/// Influence spread of every node; parallel over nodes, output independent
/// of scheduling.
pub fn all_spreads(
    g: &Graph,
    beta: InfectionProbability,
    runs: u64,
    master_seed: u64,
) -> SpreadEstimate {
    assert!(runs >= 1, "all_spreads needs at least one run");
    let base = base_rng(master_seed);
    let n = g.node_count();
    let stats: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|node| {
            let (sum, sum_sq) = node_stats(g, node, beta.fraction(), runs, &base);
            mean_and_std_error(sum, sum_sq, runs)
        })
        .collect();
    SpreadEstimate {
        means: stats.iter().map(|s| s.0).collect(),
        std_errors: stats.iter().map(|s| s.1).collect(),
        runs,
        beta,
        master_seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges).unwrap()
    }

    #[test]
    fn probability_validation() {
        assert!(InfectionProbability::from_fraction(0.5).is_ok());
        assert!(InfectionProbability::from_percent(100.0).is_ok());
        assert!(matches!(
            InfectionProbability::from_fraction(-0.1),
            Err(Error::InvalidProbability(_))
        ));
        assert!(matches!(
            InfectionProbability::from_percent(150.0),
            Err(Error::InvalidProbability(_))
        ));
        let p = InfectionProbability::from_percent(8.4).unwrap();
        assert!((p.fraction() - 0.084).abs() < 1e-15);
    }

    #[test]
    fn threshold_closed_form_examples() {
        // 3-regular graph
        let t = EpidemicThreshold::from_moments(3.0, 9.0).unwrap();
        assert_eq!(t.fraction, 0.5);
        assert_eq!(t.percent, 50.0);

        // published moment pairs
        let t = EpidemicThreshold::from_moments(5.9, 75.6).unwrap();
        assert!((t.percent - 8.4).abs() < 0.15, "{}", t.percent);
        let t = EpidemicThreshold::from_moments(3.9, 640.0).unwrap();
        assert!((t.percent - 0.6).abs() < 0.15, "{}", t.percent);
    }

    #[test]
    fn threshold_matches_summation_form() {
        // independent route: beta' = (sum_k P(k) k (k-1) / <k>)^-1
        let mut graphs = vec![Graph::from_edges(
            8,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 7), (7, 4)],
        )
        .unwrap()];
        for seed in 0..10 {
            graphs.push(crate::synthetic::barabasi_albert(60, 2, seed));
        }
        for g in &graphs {
            let hist = g.degree_histogram();
            let summed: f64 = hist
                .counts
                .iter()
                .map(|(&k, &c)| {
                    let p = c as f64 / hist.nodes as f64;
                    p * k as f64 * (k as f64 - 1.0) / hist.mean_degree
                })
                .sum();
            let via_sum = 1.0 / summed;
            let t = epidemic_threshold(&hist).unwrap();
            assert!((t.fraction - via_sum).abs() < 1e-12 * via_sum.max(1.0));
        }
    }

    #[test]
    fn threshold_rejects_subcritical() {
        // perfect matching: every degree 1, <k^2> = <k> = 1
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            epidemic_threshold(&g.degree_histogram()),
            Err(Error::NoFiniteThreshold { .. })
        ));
    }

    #[test]
    fn sir_beta_zero_infects_only_seed() {
        let g = complete(6);
        let beta = InfectionProbability::from_fraction(0.0).unwrap();
        let mut rng = base_rng(1);
        assert_eq!(sir_run(&g, 2, beta, &mut rng), 1);
    }

    #[test]
    fn sir_beta_one_infects_component() {
        let g = path(7);
        let beta = InfectionProbability::from_fraction(1.0).unwrap();
        let mut rng = base_rng(1);
        assert_eq!(sir_run(&g, 3, beta, &mut rng), 7);

        let split = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let mut rng = base_rng(1);
        assert_eq!(sir_run(&split, 4, beta, &mut rng), 2);
    }

    #[test]
    fn sir_fixed_stream_is_reproducible() {
        let g = complete(8);
        let beta = InfectionProbability::from_fraction(0.3).unwrap();
        let base = base_rng(99);
        let a = sir_run(&g, 0, beta, &mut replication_rng(&base, 0, 7));
        let b = sir_run(&g, 0, beta, &mut replication_rng(&base, 0, 7));
        assert_eq!(a, b);
    }

    #[test]
    fn spread_of_edge_pair_approaches_analytic_mean() {
        // two nodes, one edge: mean spread = 1 + beta
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let beta = InfectionProbability::from_fraction(0.5).unwrap();
        let (mean, se) = influence_spread(&g, 0, beta, 200_000, 7);
        assert!((mean - 1.5).abs() < 4.0 * se, "mean {mean}, se {se}");
        assert!(se < 0.005);
    }

    #[test]
    fn spread_of_path_end_matches_enumeration() {
        // exact value 1.75 by edge-subset enumeration
        let g = path(3);
        let beta = InfectionProbability::from_fraction(0.5).unwrap();
        let (mean, se) = influence_spread(&g, 0, beta, 200_000, 11);
        assert!((mean - 1.75).abs() < 4.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn spread_beta_zero_is_exact() {
        let g = path(4);
        let beta = InfectionProbability::from_fraction(0.0).unwrap();
        let (mean, se) = influence_spread(&g, 1, beta, 100, 3);
        assert_eq!(mean, 1.0);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn all_spreads_certain_transmission() {
        let g = complete(3);
        let beta = InfectionProbability::from_fraction(1.0).unwrap();
        let est = all_spreads(&g, beta, 50, 5);
        assert_eq!(est.means, vec![3.0, 3.0, 3.0]);
        assert_eq!(est.std_errors, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn all_spreads_two_node_concentration() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let beta = InfectionProbability::from_fraction(0.5).unwrap();
        let est = all_spreads(&g, beta, 1_000_000, 31);
        for &m in &est.means {
            assert!((m - 1.5).abs() < 0.005, "mean {m}");
        }
    }

    #[test]
    fn all_spreads_star_center_beats_leaf() {
        // oracle closed forms at beta 0.3: center 2.2, leaf 1.57
        let g = star(4);
        let beta = InfectionProbability::from_fraction(0.3).unwrap();
        let est = all_spreads(&g, beta, 100_000, 13);
        let (center, leaf) = (est.means[0], est.means[1]);
        let sep = 3.0 * (est.std_errors[0] + est.std_errors[1]);
        assert!(center - leaf > sep, "center {center}, leaf {leaf}");
        assert!((center - 2.2).abs() < 4.0 * est.std_errors[0].max(1e-9));
        assert!((leaf - 1.57).abs() < 4.0 * est.std_errors[1].max(1e-9));
    }

    #[test]
    fn spread_bounds_hold() {
        let g = star(5);
        for pct in [10.0, 50.0, 90.0] {
            let beta = InfectionProbability::from_percent(pct).unwrap();
            let est = all_spreads(&g, beta, 2_000, 17);
            for &m in &est.means {
                assert!((1.0..=g.node_count() as f64).contains(&m));
            }
            for &s in &est.std_errors {
                assert!(s >= 0.0);
            }
        }
    }

    #[test]
    fn all_spreads_is_thread_count_invariant() {
        let g = complete(9);
        let beta = InfectionProbability::from_fraction(0.2).unwrap();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| all_spreads(&g, beta, 3_000, 23))
        };
        let single = run(1);
        let multi = run(8);
        for (a, b) in single.means.iter().zip(&multi.means) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        for (a, b) in single.std_errors.iter().zip(&multi.std_errors) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
