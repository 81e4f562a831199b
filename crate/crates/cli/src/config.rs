//! Effective experiment configuration: defaults, a flat key=value config
//! file, `SPREADNET_*` environment variables, and command-line flags, merged
//! in that order (later wins).
//!
//! The file format is one `key = value` pair per line, `#` comments allowed.
//! Every key mirrors a flag; lists are comma-separated. `dump` writes the
//! effective settings in a form that loads back identically.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};

use spreadnet::centrality::{Measure, PageRankVariant};

/// Which quantity the imprecision command sweeps on the x axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XAxis {
    P,
    Beta,
}

impl XAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            XAxis::P => "p",
            XAxis::Beta => "beta",
        }
    }

    pub fn parse(s: &str) -> Result<XAxis> {
        match s {
            "p" => Ok(XAxis::P),
            "beta" => Ok(XAxis::Beta),
            _ => bail!("x axis must be `p` or `beta`, got `{s}`"),
        }
    }
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub networks: Vec<PathBuf>,
    pub measures: Vec<Measure>,
    /// Explicit transmission probabilities, in percent.
    pub beta_percent: Vec<f64>,
    /// Multiples of the per-network epidemic threshold; used when
    /// `beta_percent` is empty.
    pub beta_multiple: Vec<f64>,
    pub p_grid: Vec<f64>,
    /// Fixed p for beta sweeps.
    pub p: f64,
    pub x: XAxis,
    pub runs: u64,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: PathBuf,
    pub pagerank_variant: PageRankVariant,
    pub pagerank_damping: f64,
    /// Measure pairs to difference, e.g. kshell-eigenvector.
    pub diff: Vec<(Measure, Measure)>,
    /// Node label filter for the oracle command.
    pub node: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            networks: Vec::new(),
            measures: Measure::ALL.to_vec(),
            beta_percent: Vec::new(),
            beta_multiple: Vec::new(),
            p_grid: spreadnet::imprecision::default_p_grid(),
            p: 5.0,
            x: XAxis::P,
            runs: 1000,
            seed: None,
            workers: None,
            out: PathBuf::from("out"),
            pagerank_variant: PageRankVariant::Damped,
            pagerank_damping: spreadnet::centrality::DEFAULT_DAMPING,
            diff: Vec::new(),
            node: None,
        }
    }
}

pub fn parse_measures(tokens: &[String]) -> Result<Vec<Measure>> {
    let mut out = Vec::new();
    for tok in tokens {
        if tok == "all" {
            out.extend(Measure::ALL);
        } else {
            out.push(tok.parse::<Measure>()?);
        }
    }
    if out.is_empty() {
        bail!("measure list is empty");
    }
    Ok(out)
}

pub fn parse_diff_pair(token: &str) -> Result<(Measure, Measure)> {
    let Some((a, b)) = token.split_once('-') else {
        bail!("diff pair must look like `kshell-eigenvector`, got `{token}`");
    };
    Ok((a.parse::<Measure>()?, b.parse::<Measure>()?))
}

fn parse_f64_list(value: &str, key: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .with_context(|| format!("bad number `{t}` in `{key}`"))
        })
        .collect()
}

impl ExperimentConfig {
    /// Parses the flat key=value format, overlaying `self`.
    pub fn apply_kv_text(&mut self, text: &str, source: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("{source}:{}: expected `key = value`, got `{line}`", lineno + 1);
            };
            let key = key.trim();
            let value = value.trim();
            self.apply_kv(key, value)
                .with_context(|| format!("{source}:{} ({key})", lineno + 1))?;
        }
        Ok(())
    }

    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "networks" => {
                self.networks = value
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| PathBuf::from(t.trim()))
                    .collect();
            }
            "measures" => {
                let tokens: Vec<String> = value
                    .split(',')
                    .map(|t| t.trim().to_string())
                    .filter(|t| !t.is_empty())
                    .collect();
                self.measures = parse_measures(&tokens)?;
            }
            "beta_percent" => self.beta_percent = parse_f64_list(value, key)?,
            "beta_multiple" => self.beta_multiple = parse_f64_list(value, key)?,
            "p_grid" => self.p_grid = parse_f64_list(value, key)?,
            "p" => self.p = value.parse().context("bad p")?,
            "x" => self.x = XAxis::parse(value)?,
            "runs" => self.runs = value.parse().context("bad runs")?,
            "seed" => self.seed = Some(value.parse().context("bad seed")?),
            "workers" => self.workers = Some(value.parse().context("bad workers")?),
            "out" => self.out = PathBuf::from(value),
            "pagerank_variant" => self.pagerank_variant = value.parse()?,
            "pagerank_damping" => {
                self.pagerank_damping = value.parse().context("bad damping")?
            }
            "diff" => {
                self.diff = value
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| parse_diff_pair(t.trim()))
                    .collect::<Result<Vec<_>>>()?;
            }
            "node" => self.node = Some(value.to_string()),
            _ => bail!("unknown config key `{key}`"),
        }
        Ok(())
    }

    /// Environment overrides: `SPREADNET_<KEY>` for every config key.
    pub fn apply_env(&mut self) -> Result<()> {
        for key in [
            "networks",
            "measures",
            "beta_percent",
            "beta_multiple",
            "p_grid",
            "p",
            "x",
            "runs",
            "seed",
            "workers",
            "out",
            "pagerank_variant",
            "pagerank_damping",
            "diff",
            "node",
        ] {
            let var = format!("SPREADNET_{}", key.to_uppercase());
            if let Ok(value) = std::env::var(&var) {
                self.apply_kv(key, &value)
                    .with_context(|| format!("environment variable {var}"))?;
            }
        }
        Ok(())
    }

    /// Serializes the effective settings; `apply_kv_text` on the output
    /// reproduces this configuration exactly.
    pub fn dump(&self) -> String {
        let mut kv: BTreeMap<&str, String> = BTreeMap::new();
        kv.insert(
            "networks",
            self.networks
                .iter()
                .map(|p| p.display().to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        kv.insert(
            "measures",
            self.measures
                .iter()
                .map(|m| m.as_str().to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        let join = |xs: &[f64]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        kv.insert("beta_percent", join(&self.beta_percent));
        kv.insert("beta_multiple", join(&self.beta_multiple));
        kv.insert("p_grid", join(&self.p_grid));
        kv.insert("p", self.p.to_string());
        kv.insert("x", self.x.as_str().to_string());
        kv.insert("runs", self.runs.to_string());
        if let Some(seed) = self.seed {
            kv.insert("seed", seed.to_string());
        }
        if let Some(workers) = self.workers {
            kv.insert("workers", workers.to_string());
        }
        kv.insert("out", self.out.display().to_string());
        kv.insert("pagerank_variant", self.pagerank_variant.as_str().to_string());
        kv.insert("pagerank_damping", self.pagerank_damping.to_string());
        kv.insert(
            "diff",
            self.diff
                .iter()
                .map(|(a, b)| format!("{}-{}", a.as_str(), b.as_str()))
                .collect::<Vec<_>>()
                .join(","),
        );
        if let Some(node) = &self.node {
            kv.insert("node", node.clone());
        }

        let mut out = String::new();
        for (k, v) in kv {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dump_load_round_trip() {
        let cfg = ExperimentConfig {
            networks: vec![PathBuf::from("a.txt"), PathBuf::from("b.txt")],
            measures: vec![Measure::Degree, Measure::KShell],
            beta_multiple: vec![1.1, 1.5],
            seed: Some(42),
            workers: Some(4),
            diff: vec![(Measure::KShell, Measure::Eigenvector)],
            node: Some("v17".to_string()),
            ..ExperimentConfig::default()
        };

        let dumped = cfg.dump();
        let mut reloaded = ExperimentConfig::default();
        reloaded.apply_kv_text(&dumped, "test").unwrap();
        assert_eq!(reloaded.dump(), dumped);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let mut cfg = ExperimentConfig::default();
        assert!(cfg.apply_kv_text("bogus = 1", "test").is_err());
    }

    #[test]
    fn measures_all_token_expands() {
        let m = parse_measures(&["all".to_string()]).unwrap();
        assert_eq!(m.len(), 10);
    }

    #[test]
    fn diff_pair_parses() {
        let (a, b) = parse_diff_pair("kshell-eigenvector").unwrap();
        assert_eq!(a, Measure::KShell);
        assert_eq!(b, Measure::Eigenvector);
        assert!(parse_diff_pair("kshell").is_err());
        assert!(parse_diff_pair("kshell-katz").is_err());
    }
}
