//! The five subcommands. Every command parses its networks, always reduces
//! to the greatest connected component (logged), and writes CSVs into the
//! output directory atomically.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

use spreadnet::centrality::{self, CentralityScores, PageRankConfig};
use spreadnet::epidemic::{epidemic_threshold, InfectionProbability};
use spreadnet::graph::{summary_stats, Graph};
use spreadnet::imprecision::{
    average_curves, imprecision, imprecision_curve, pairwise_difference, ImprecisionCurve, XKind,
};
use spreadnet::oracle;

use crate::cache::SpreadCache;
use crate::config::{ExperimentConfig, XAxis};
use crate::output;

pub struct LoadedNetwork {
    pub name: String,
    /// Greatest connected component of the parsed graph.
    pub graph: Graph,
    /// Raw file bytes; the cache key for this network's simulations.
    pub bytes: Vec<u8>,
}

fn network_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn load_network(path: &Path) -> Result<LoadedNetwork> {
    let bytes =
        fs::read(path).with_context(|| format!("reading network file {}", path.display()))?;
    let text = std::str::from_utf8(&bytes)
        .with_context(|| format!("{} is not UTF-8 text", path.display()))?;
    let parsed = Graph::parse_edge_list(text)
        .with_context(|| format!("parsing {}", path.display()))?;
    let graph = parsed
        .greatest_connected_component()
        .with_context(|| format!("extracting the greatest connected component of {}", path.display()))?;
    let name = network_name(path);
    eprintln!(
        "{name}: {} nodes / {} edges -> GCC {} nodes / {} edges",
        parsed.node_count(),
        parsed.edge_count(),
        graph.node_count(),
        graph.edge_count()
    );
    Ok(LoadedNetwork { name, graph, bytes })
}

fn require_networks(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.networks.is_empty() {
        bail!("no network files given (pass paths or set `networks` in the config)");
    }
    for path in &cfg.networks {
        fs::metadata(path)
            .with_context(|| format!("network file {} does not exist", path.display()))?;
    }
    Ok(())
}

fn require_seed(cfg: &ExperimentConfig) -> Result<u64> {
    if cfg.runs < 1 {
        bail!("--runs must be at least 1");
    }
    cfg.seed
        .context("--seed is required for simulation commands")
}

fn wrote(path: &Path) {
    eprintln!("wrote {}", path.display());
}

pub fn cmd_stats(cfg: &ExperimentConfig) -> Result<()> {
    require_networks(cfg)?;
    for path in &cfg.networks {
        let net = load_network(path)?;
        let stats = summary_stats(&net.graph)
            .with_context(|| format!("computing summary statistics for {}", net.name))?;
        let out = cfg.out.join(format!("stats_{}.csv", net.name));
        output::write_atomic(&out, &output::stats_csv(&net.name, &stats)?)?;
        wrote(&out);
    }
    Ok(())
}

fn pagerank_config(cfg: &ExperimentConfig) -> PageRankConfig {
    PageRankConfig {
        variant: cfg.pagerank_variant,
        damping: cfg.pagerank_damping,
    }
}

pub fn cmd_centrality(cfg: &ExperimentConfig) -> Result<()> {
    require_networks(cfg)?;
    for path in &cfg.networks {
        let net = load_network(path)?;
        for &measure in &cfg.measures {
            let scores = centrality::compute_measure(&net.graph, measure, pagerank_config(cfg))
                .with_context(|| format!("computing {measure} on {}", net.name))?;
            let ranking = centrality::rank_nodes(&scores);
            let out = cfg
                .out
                .join(format!("centrality_{}_{}.csv", net.name, measure.as_str()));
            output::write_atomic(&out, &output::centrality_csv(&net.graph, &scores, &ranking)?)?;
            wrote(&out);
        }
    }
    Ok(())
}

/// A resolved transmission probability plus the filename-friendly token of
/// the flag value that produced it.
struct ResolvedBeta {
    suffix: String,
    beta: InfectionProbability,
}

fn resolve_betas(cfg: &ExperimentConfig, g: &Graph) -> Result<Vec<ResolvedBeta>> {
    if !cfg.beta_percent.is_empty() && !cfg.beta_multiple.is_empty() {
        bail!("give either --beta-percent or --beta-multiple, not both");
    }
    if !cfg.beta_percent.is_empty() {
        return cfg
            .beta_percent
            .iter()
            .map(|&pct| {
                Ok(ResolvedBeta {
                    suffix: format!("bp{pct}"),
                    beta: InfectionProbability::from_percent(pct)?,
                })
            })
            .collect();
    }
    if !cfg.beta_multiple.is_empty() {
        let threshold = epidemic_threshold(&g.degree_histogram())?;
        return cfg
            .beta_multiple
            .iter()
            .map(|&mult| {
                let beta = InfectionProbability::from_fraction(mult * threshold.fraction)
                    .with_context(|| {
                        format!(
                            "{mult} x threshold {:.4}% leaves the unit interval",
                            threshold.percent
                        )
                    })?;
                Ok(ResolvedBeta {
                    suffix: format!("bm{mult}"),
                    beta,
                })
            })
            .collect();
    }
    bail!("no transmission probability given (--beta-percent or --beta-multiple)");
}

pub fn cmd_spread(cfg: &ExperimentConfig) -> Result<()> {
    require_networks(cfg)?;
    let seed = require_seed(cfg)?;
    let cache = SpreadCache::new(&cfg.out);
    for path in &cfg.networks {
        let net = load_network(path)?;
        for resolved in resolve_betas(cfg, &net.graph)? {
            eprintln!(
                "{}: simulating at beta = {}% ({} runs per node)",
                net.name,
                resolved.beta.percent(),
                cfg.runs
            );
            let est = cache.load_or_compute(&net.graph, &net.bytes, resolved.beta, cfg.runs, seed)?;
            let out = cfg
                .out
                .join(format!("spread_{}_{}.csv", net.name, resolved.suffix));
            output::write_atomic(&out, &output::spread_csv(&net.graph, &est)?)?;
            wrote(&out);
        }
    }
    Ok(())
}

pub fn cmd_oracle(cfg: &ExperimentConfig) -> Result<()> {
    require_networks(cfg)?;
    if cfg.beta_percent.len() != 1 {
        bail!("oracle needs exactly one --beta-percent value");
    }
    let beta = InfectionProbability::from_percent(cfg.beta_percent[0])?;
    for path in &cfg.networks {
        let net = load_network(path)?;
        let spreads = match &cfg.node {
            Some(label) => {
                let node = net
                    .graph
                    .labels()
                    .iter()
                    .position(|l| l == label)
                    .with_context(|| {
                        format!("node label `{label}` not found in the GCC of {}", net.name)
                    })?;
                vec![oracle::exact_influence_spread(&net.graph, node, beta)?]
            }
            None => oracle::exact_all_spreads(&net.graph, beta)?,
        };
        let out = cfg.out.join(format!(
            "oracle_{}_bp{}.csv",
            net.name, cfg.beta_percent[0]
        ));
        output::write_atomic(&out, &output::oracle_csv(&net.graph, &spreads)?)?;
        wrote(&out);
    }
    Ok(())
}

/// Per-network curves for one network at every resolved beta, in
/// (beta, measure) order, plus the requested difference curves.
fn network_curves(
    cfg: &ExperimentConfig,
    cache: &SpreadCache,
    net: &LoadedNetwork,
    seed: u64,
) -> Result<Vec<(usize, ImprecisionCurve)>> {
    let scores: Vec<CentralityScores> = cfg
        .measures
        .iter()
        .map(|&m| {
            centrality::compute_measure(&net.graph, m, pagerank_config(cfg))
                .with_context(|| format!("computing {m} on {}", net.name))
        })
        .collect::<Result<_>>()?;
    let betas = resolve_betas(cfg, &net.graph)?;

    let mut curves: Vec<(usize, ImprecisionCurve)> = Vec::new();
    match cfg.x {
        XAxis::P => {
            for (bi, resolved) in betas.iter().enumerate() {
                let est =
                    cache.load_or_compute(&net.graph, &net.bytes, resolved.beta, cfg.runs, seed)?;
                for s in &scores {
                    curves.push((bi, imprecision_curve(&est, s, &cfg.p_grid, &net.name)?));
                }
            }
        }
        XAxis::Beta => {
            let mut sweep: Vec<ImprecisionCurve> = scores
                .iter()
                .map(|s| ImprecisionCurve {
                    network: net.name.clone(),
                    measure: s.measure.as_str().to_string(),
                    beta_percent: None,
                    runs: cfg.runs,
                    master_seed: seed,
                    x_kind: XKind::BetaPercent,
                    points: Vec::with_capacity(betas.len()),
                })
                .collect();
            for resolved in &betas {
                let est =
                    cache.load_or_compute(&net.graph, &net.bytes, resolved.beta, cfg.runs, seed)?;
                for (curve, s) in sweep.iter_mut().zip(&scores) {
                    curve.points.push((resolved.beta.percent(), imprecision(&est, s, cfg.p)?));
                }
            }
            curves.extend(sweep.into_iter().map(|c| (0, c)));
        }
    }
    Ok(curves)
}

fn diff_curves(
    cfg: &ExperimentConfig,
    curves: &[(usize, ImprecisionCurve)],
) -> Result<Vec<ImprecisionCurve>> {
    let mut out = Vec::new();
    for &(a, b) in &cfg.diff {
        let group_count = curves.iter().map(|(bi, _)| bi).max().map_or(0, |m| m + 1);
        for bi in 0..group_count {
            let find = |m: spreadnet::Measure| {
                curves
                    .iter()
                    .find(|(i, c)| *i == bi && c.measure == m.as_str())
                    .map(|(_, c)| c)
            };
            match (find(a), find(b)) {
                (Some(ca), Some(cb)) => out.push(pairwise_difference(ca, cb)?),
                _ => bail!(
                    "difference {}-{} needs both measures in --measures",
                    a.as_str(),
                    b.as_str()
                ),
            }
        }
    }
    Ok(out)
}

pub fn cmd_imprecision(cfg: &ExperimentConfig) -> Result<()> {
    require_networks(cfg)?;
    let seed = require_seed(cfg)?;
    let cache = SpreadCache::new(&cfg.out);

    // (beta group, measure, network) -> curve, insertion-ordered
    let mut all: Vec<(usize, ImprecisionCurve)> = Vec::new();
    for path in &cfg.networks {
        let net = load_network(path)?;
        let curves = network_curves(cfg, &cache, &net, seed)?;
        let diffs = diff_curves(cfg, &curves)?;
        let mut file_curves: Vec<ImprecisionCurve> =
            curves.iter().map(|(_, c)| c.clone()).collect();
        file_curves.extend(diffs);
        let out = cfg.out.join(format!("imprecision_{}.csv", net.name));
        output::write_atomic(&out, &output::curves_csv(&file_curves)?)?;
        wrote(&out);
        all.extend(curves);
    }

    // cross-network averages need a shared x grid: always true over a p
    // grid, true over a beta grid only for explicit percentages (multiples
    // resolve against each network's own threshold)
    if cfg.x == XAxis::Beta && cfg.beta_percent.is_empty() && cfg.networks.len() > 1 {
        eprintln!(
            "note: skipping cross-network averages (beta multiples give each network its own grid)"
        );
        return Ok(());
    }
    let group_count = all.iter().map(|(bi, _)| bi).max().map_or(0, |m| m + 1);
    for bi in 0..group_count {
        let mut averaged: Vec<ImprecisionCurve> = Vec::new();
        for &measure in &cfg.measures {
            let group: Vec<ImprecisionCurve> = all
                .iter()
                .filter(|(i, c)| *i == bi && c.measure == measure.as_str())
                .map(|(_, c)| c.clone())
                .collect();
            if !group.is_empty() {
                averaged.push(average_curves(&group)?);
            }
        }
        if averaged.is_empty() {
            continue;
        }
        // one file per beta group so averages at different betas stay apart
        let out = if group_count == 1 {
            cfg.out.join("imprecision_average.csv")
        } else {
            cfg.out
                .join(format!("imprecision_average_{}.csv", beta_group_token(cfg, bi)))
        };
        output::write_atomic(&out, &output::curves_csv(&averaged)?)?;
        wrote(&out);
    }
    Ok(())
}

fn beta_group_token(cfg: &ExperimentConfig, group: usize) -> String {
    if !cfg.beta_percent.is_empty() {
        format!("bp{}", cfg.beta_percent[group])
    } else {
        format!("bm{}", cfg.beta_multiple[group])
    }
}
