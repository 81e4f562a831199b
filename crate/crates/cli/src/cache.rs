//! Content-addressed cache for spread estimates, the dominant cost of every
//! experiment. A cache entry is an ordinary spread CSV whose name hashes
//! (network bytes, beta, runs, seed); beta sweeps re-run across measures or
//! p-grids reuse the simulations for free.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};

use spreadnet::epidemic::{all_spreads, InfectionProbability, SpreadEstimate};
use spreadnet::graph::Graph;

use crate::output::{spread_csv, write_atomic};

pub struct SpreadCache {
    dir: PathBuf,
}

impl SpreadCache {
    pub fn new(out_dir: &Path) -> Self {
        SpreadCache {
            dir: out_dir.join("cache"),
        }
    }

    fn key(network_bytes: &[u8], beta: InfectionProbability, runs: u64, seed: u64) -> String {
        let mut hasher = Sha256::new();
        hasher.update(network_bytes);
        hasher.update(beta.fraction().to_bits().to_le_bytes());
        hasher.update(runs.to_le_bytes());
        hasher.update(seed.to_le_bytes());
        let digest = hasher.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn entry_path(
        &self,
        network_bytes: &[u8],
        beta: InfectionProbability,
        runs: u64,
        seed: u64,
    ) -> PathBuf {
        self.dir
            .join(format!("spread-{}.csv", Self::key(network_bytes, beta, runs, seed)))
    }

    /// Returns the cached estimate when a valid entry exists, otherwise
    /// simulates, stores, and returns. Unreadable or stale entries are
    /// recomputed and overwritten.
    pub fn load_or_compute(
        &self,
        g: &Graph,
        network_bytes: &[u8],
        beta: InfectionProbability,
        runs: u64,
        seed: u64,
    ) -> Result<SpreadEstimate> {
        let path = self.entry_path(network_bytes, beta, runs, seed);
        if let Ok(text) = fs::read_to_string(&path) {
            if let Some(est) = parse_spread_csv(&text, g, beta, runs, seed) {
                return Ok(est);
            }
        }
        let est = all_spreads(g, beta, runs, seed);
        let bytes = spread_csv(g, &est)?;
        write_atomic(&path, &bytes).context("storing spread cache entry")?;
        Ok(est)
    }
}

/// Strict parse of a cached spread CSV; any mismatch against the expected
/// graph and parameters invalidates the entry.
fn parse_spread_csv(
    text: &str,
    g: &Graph,
    beta: InfectionProbability,
    runs: u64,
    seed: u64,
) -> Option<SpreadEstimate> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut means = Vec::with_capacity(g.node_count());
    let mut std_errors = Vec::with_capacity(g.node_count());
    for (v, record) in reader.records().enumerate() {
        let record = record.ok()?;
        if record.len() != 5 || v >= g.node_count() || record.get(0)? != g.label(v) {
            return None;
        }
        means.push(record.get(1)?.parse::<f64>().ok()?);
        std_errors.push(record.get(2)?.parse::<f64>().ok()?);
        if record.get(3)?.parse::<u64>().ok()? != runs {
            return None;
        }
        let pct = record.get(4)?.parse::<f64>().ok()?;
        if pct != beta.percent() {
            return None;
        }
    }
    if means.len() != g.node_count() {
        return None;
    }
    Some(SpreadEstimate {
        means,
        std_errors,
        runs,
        beta,
        master_seed: seed,
    })
}
