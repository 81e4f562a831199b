//! Imprecision scoring: how much spreading power is lost by trusting a
//! centrality ranking instead of the true top spreaders.
//!
//! For a percentage p, the efficiency set holds the top p% of nodes by
//! estimated spread and the candidate set holds the top p% by the measure;
//! the imprecision is 1 - (mean spread of candidates) / (mean spread of the
//! efficiency set). Zero means the measure identified the top spreaders
//! perfectly at that p. Both means divide by the same selected-set size, so
//! any common normalization of the two sums cancels in the ratio.

use crate::centrality::{CentralityScores, Ranking};
use crate::epidemic::{all_spreads, epidemic_threshold, InfectionProbability, SpreadEstimate};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// The top-p% node set drawn from a deterministic ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct TopSet {
    pub p: f64,
    /// Node indices in ranking order.
    pub members: Vec<u32>,
}

/// round(p * n / 100) with a floor of one member, half rounding up.
pub fn top_set_size(p: f64, n: usize) -> usize {
    ((p * n as f64 / 100.0).round() as usize).max(1)
}

/// First `max(1, round(p*N/100))` entries of the ranking.
pub fn top_set(ranking: &Ranking, p: f64, n: usize) -> Result<TopSet> {
    if !(p > 0.0 && p <= 100.0) {
        return Err(Error::InvalidPercent(p));
    }
    let size = top_set_size(p, n).min(n);
    Ok(TopSet {
        p,
        members: ranking.order()[..size].to_vec(),
    })
}

fn mean_over(means: &[f64], set: &TopSet) -> f64 {
    // accumulate in ascending index order so that equal sets produce
    // bit-identical means no matter which ranking selected them (and the
    // p = 100 imprecision is exactly zero)
    let mut members = set.members.clone();
    members.sort_unstable();
    let total: f64 = members.iter().map(|&v| means[v as usize]).sum();
    total / members.len() as f64
}

fn imprecision_from_rankings(
    means: &[f64],
    eff_ranking: &Ranking,
    measure_ranking: &Ranking,
    p: f64,
) -> Result<f64> {
    let n = means.len();
    let eff = top_set(eff_ranking, p, n)?;
    let candidate = top_set(measure_ranking, p, n)?;
    let m_eff = mean_over(means, &eff);
    let m_c = mean_over(means, &candidate);
    Ok(1.0 - m_c / m_eff)
}

/// Imprecision of one measure at one p.
pub fn imprecision(spreads: &SpreadEstimate, scores: &CentralityScores, p: f64) -> Result<f64> {
    if spreads.means.len() != scores.values.len() {
        return Err(Error::NodeSetMismatch {
            spread_nodes: spreads.means.len(),
            score_nodes: scores.values.len(),
        });
    }
    let eff_ranking = Ranking::from_scores(&spreads.means);
    let measure_ranking = Ranking::from_scores(&scores.values);
    imprecision_from_rankings(&spreads.means, &eff_ranking, &measure_ranking, p)
}

/// Which quantity varies along a curve's x axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XKind {
    P,
    BetaPercent,
}

impl XKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            XKind::P => "p",
            XKind::BetaPercent => "beta_percent",
        }
    }
}

/// One imprecision curve: epsilon sampled over a p-grid at fixed beta, or
/// over a beta-grid at fixed p. Carries the simulation provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct ImprecisionCurve {
    pub network: String,
    pub measure: String,
    /// The fixed beta for p-curves; None when beta varies or inputs disagree.
    pub beta_percent: Option<f64>,
    pub runs: u64,
    pub master_seed: u64,
    pub x_kind: XKind,
    pub points: Vec<(f64, f64)>,
}

pub const AVERAGE_NETWORK: &str = "__average__";
pub const DIFF_NETWORK: &str = "__diff__";

/// Imprecision of one measure over a p-grid.
pub fn imprecision_curve(
    spreads: &SpreadEstimate,
    scores: &CentralityScores,
    p_grid: &[f64],
    network: &str,
) -> Result<ImprecisionCurve> {
    if spreads.means.len() != scores.values.len() {
        return Err(Error::NodeSetMismatch {
            spread_nodes: spreads.means.len(),
            score_nodes: scores.values.len(),
        });
    }
    if p_grid.is_empty() {
        return Err(Error::CurveMismatch("empty p grid".to_string()));
    }
    let eff_ranking = Ranking::from_scores(&spreads.means);
    let measure_ranking = Ranking::from_scores(&scores.values);
    let mut points = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let eps = imprecision_from_rankings(&spreads.means, &eff_ranking, &measure_ranking, p)?;
        points.push((p, eps));
    }
    Ok(ImprecisionCurve {
        network: network.to_string(),
        measure: scores.measure.as_str().to_string(),
        beta_percent: Some(spreads.beta.percent()),
        runs: spreads.runs,
        master_seed: spreads.master_seed,
        x_kind: XKind::P,
        points,
    })
}

/// Default p grid {1, 2, ..., 10}.
pub fn default_p_grid() -> Vec<f64> {
    (1..=10).map(|p| p as f64).collect()
}

/// Default beta-multiple grid {1.1, 1.2, ..., 2.0}.
pub fn default_beta_multiples() -> Vec<f64> {
    (11..=20).map(|m| m as f64 / 10.0).collect()
}

/// Imprecision versus beta at fixed p: for each multiple of the epidemic
/// threshold, estimate every node's spread and score every measure. The
/// centrality scores are computed once by the caller; they do not depend on
/// beta. Returns one curve per score vector, in the same order.
pub fn beta_sweep(
    g: &Graph,
    network: &str,
    scores: &[CentralityScores],
    beta_multiples: &[f64],
    p: f64,
    runs: u64,
    master_seed: u64,
) -> Result<Vec<ImprecisionCurve>> {
    let threshold = epidemic_threshold(&g.degree_histogram())?;
    let mut curves: Vec<ImprecisionCurve> = scores
        .iter()
        .map(|s| ImprecisionCurve {
            network: network.to_string(),
            measure: s.measure.as_str().to_string(),
            beta_percent: None,
            runs,
            master_seed,
            x_kind: XKind::BetaPercent,
            points: Vec::with_capacity(beta_multiples.len()),
        })
        .collect();

    for &multiple in beta_multiples {
        let beta = InfectionProbability::from_fraction(multiple * threshold.fraction)?;
        let spreads = all_spreads(g, beta, runs, master_seed);
        for (curve, score) in curves.iter_mut().zip(scores) {
            let eps = imprecision(&spreads, score, p)?;
            curve.points.push((beta.percent(), eps));
        }
    }
    Ok(curves)
}

fn check_same_grid(curves: &[&ImprecisionCurve]) -> Result<()> {
    let first = curves[0];
    for c in &curves[1..] {
        if c.x_kind != first.x_kind {
            return Err(Error::CurveMismatch(format!(
                "x kinds differ: {} vs {}",
                first.x_kind.as_str(),
                c.x_kind.as_str()
            )));
        }
        if c.points.len() != first.points.len()
            || c.points
                .iter()
                .zip(&first.points)
                .any(|(a, b)| a.0 != b.0)
        {
            return Err(Error::CurveMismatch("x grids differ".to_string()));
        }
    }
    Ok(())
}

fn common_f64(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let mut out = None;
    for v in values {
        match (out, v) {
            (None, Some(x)) => out = Some(x),
            (Some(prev), Some(x)) if prev == x => {}
            _ => return None,
        }
    }
    out
}

/// Pointwise equal-weight mean of curves for the same measure on the same
/// grid, one per network.
pub fn average_curves(curves: &[ImprecisionCurve]) -> Result<ImprecisionCurve> {
    if curves.is_empty() {
        return Err(Error::CurveMismatch("nothing to average".to_string()));
    }
    let refs: Vec<&ImprecisionCurve> = curves.iter().collect();
    check_same_grid(&refs)?;
    let first = &curves[0];
    if curves.iter().any(|c| c.measure != first.measure) {
        return Err(Error::CurveMismatch("measures differ".to_string()));
    }
    let points = first
        .points
        .iter()
        .enumerate()
        .map(|(i, &(x, base))| {
            // mean as base + mean of offsets: averaging n copies of one
            // curve reproduces it bit-exactly
            let offset_sum: f64 = curves.iter().map(|c| c.points[i].1 - base).sum();
            (x, base + offset_sum / curves.len() as f64)
        })
        .collect();
    Ok(ImprecisionCurve {
        network: AVERAGE_NETWORK.to_string(),
        measure: first.measure.clone(),
        beta_percent: common_f64(curves.iter().map(|c| c.beta_percent)),
        runs: first.runs,
        master_seed: first.master_seed,
        x_kind: first.x_kind,
        points,
    })
}

/// Pointwise epsilon_a - epsilon_b on a shared grid. Positive values mean
/// the first measure has the higher imprecision (performs worse).
pub fn pairwise_difference(
    a: &ImprecisionCurve,
    b: &ImprecisionCurve,
) -> Result<ImprecisionCurve> {
    check_same_grid(&[a, b])?;
    let points = a
        .points
        .iter()
        .zip(&b.points)
        .map(|(&(x, ea), &(_, eb))| (x, ea - eb))
        .collect();
    Ok(ImprecisionCurve {
        network: DIFF_NETWORK.to_string(),
        measure: format!("{}-{}", a.measure, b.measure),
        beta_percent: common_f64([a.beta_percent, b.beta_percent].into_iter()),
        runs: a.runs,
        master_seed: a.master_seed,
        x_kind: a.x_kind,
        points,
    })
}
