//! CSV serialization and atomic file writes. Every file is staged to a
//! `.tmp` sibling and renamed into place, so interrupted runs never leave a
//! truncated output behind.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use spreadnet::centrality::{CentralityScores, Ranking};
use spreadnet::epidemic::SpreadEstimate;
use spreadnet::graph::{Graph, NetworkStats};
use spreadnet::imprecision::ImprecisionCurve;
use spreadnet::oracle::ExactSpread;

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .with_context(|| format!("creating directory {}", parent.display()))?;
    }
    let tmp = path.with_extension("tmp");
    let result = fs::write(&tmp, bytes)
        .with_context(|| format!("writing {}", tmp.display()))
        .and_then(|()| {
            fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))
        });
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

fn csv_bytes(rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.write_record(&row)?;
    }
    Ok(writer.into_inner()?)
}

fn fmt(x: f64) -> String {
    x.to_string()
}

pub fn stats_csv(name: &str, stats: &NetworkStats) -> Result<Vec<u8>> {
    let header = [
        "name",
        "nodes",
        "edges",
        "density",
        "beta_prime",
        "lambda",
        "r_squared",
        "mean_degree",
        "second_moment",
        "max_shell",
    ]
    .map(str::to_string)
    .to_vec();
    let row = vec![
        name.to_string(),
        stats.nodes.to_string(),
        stats.edges.to_string(),
        fmt(stats.density),
        fmt(stats.beta_prime),
        fmt(stats.lambda),
        fmt(stats.r_squared),
        fmt(stats.mean_degree),
        fmt(stats.second_moment),
        stats.max_shell.to_string(),
    ];
    csv_bytes(vec![header, row])
}

/// `node_label,score` rows in ranking order.
pub fn centrality_csv(g: &Graph, scores: &CentralityScores, ranking: &Ranking) -> Result<Vec<u8>> {
    let mut rows = vec![vec!["node_label".to_string(), "score".to_string()]];
    for &v in ranking.order() {
        rows.push(vec![
            g.label(v as usize).to_string(),
            fmt(scores.values[v as usize]),
        ]);
    }
    csv_bytes(rows)
}

fn spread_header() -> Vec<String> {
    [
        "node_label",
        "mean_spread",
        "std_error",
        "runs",
        "beta_percent",
    ]
    .map(str::to_string)
    .to_vec()
}

/// `node_label,mean_spread,std_error,runs,beta_percent` rows in node order.
pub fn spread_csv(g: &Graph, est: &SpreadEstimate) -> Result<Vec<u8>> {
    let mut rows = vec![spread_header()];
    for v in 0..g.node_count() {
        rows.push(vec![
            g.label(v).to_string(),
            fmt(est.means[v]),
            fmt(est.std_errors[v]),
            est.runs.to_string(),
            fmt(est.beta.percent()),
        ]);
    }
    csv_bytes(rows)
}

/// Spread-shaped CSV for exact values: std_error 0, runs 0.
pub fn oracle_csv(g: &Graph, spreads: &[ExactSpread]) -> Result<Vec<u8>> {
    let mut rows = vec![spread_header()];
    for s in spreads {
        rows.push(vec![
            g.label(s.node).to_string(),
            fmt(s.value),
            "0".to_string(),
            "0".to_string(),
            fmt(s.beta.percent()),
        ]);
    }
    csv_bytes(rows)
}

/// `network,measure,beta_percent,runs,master_seed,x_kind,x,epsilon`; on
/// beta-sweep rows the beta_percent column repeats x, on averages whose
/// inputs disagree it is empty.
pub fn curves_csv(curves: &[ImprecisionCurve]) -> Result<Vec<u8>> {
    let mut rows = vec![[
        "network",
        "measure",
        "beta_percent",
        "runs",
        "master_seed",
        "x_kind",
        "x",
        "epsilon",
    ]
    .map(str::to_string)
    .to_vec()];
    for curve in curves {
        for &(x, eps) in &curve.points {
            let beta_percent = match (curve.x_kind, curve.beta_percent) {
                (spreadnet::XKind::BetaPercent, _) => fmt(x),
                (spreadnet::XKind::P, Some(b)) => fmt(b),
                (spreadnet::XKind::P, None) => String::new(),
            };
            rows.push(vec![
                curve.network.clone(),
                curve.measure.clone(),
                beta_percent,
                curve.runs.to_string(),
                curve.master_seed.to_string(),
                curve.x_kind.as_str().to_string(),
                fmt(x),
                fmt(eps),
            ]);
        }
    }
    csv_bytes(rows)
}
