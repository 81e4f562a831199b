//! spreadnet: estimate every node's SIR spreading power and score how well
//! centrality measures identify the top spreaders.

mod cache;
mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::{ExperimentConfig, XAxis};

/// Benchmark centrality measures as spreader predictors under the SIR model.
///
/// Every key below can also come from a --config file (`key = value` lines)
/// or a SPREADNET_<KEY> environment variable; precedence is defaults <
/// config file < environment < flags.
#[derive(Debug, Parser)]
#[command(name = "spreadnet", version, about)]
struct Cli {
    /// Master seed for all simulations (required by spread/imprecision)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for parallel sections (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output directory for CSVs (default: out)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Flat key=value config file; flags override file values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the effective configuration to this path, then run
    #[arg(long, global = true)]
    dump_config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Summary statistics of each network's greatest connected component
    Stats {
        /// Edge-list files (one `<label> <label>` pair per line)
        networks: Vec<PathBuf>,
    },
    /// Write per-measure score CSVs in ranking order
    Centrality {
        networks: Vec<PathBuf>,
        /// Comma-separated measure tokens, or `all`
        #[arg(long, value_delimiter = ',')]
        measures: Option<Vec<String>>,
        /// `pure` (no teleport) or `damped`
        #[arg(long)]
        pagerank_variant: Option<String>,
        #[arg(long)]
        pagerank_damping: Option<f64>,
    },
    /// Monte Carlo influence spread of every node
    Spread {
        networks: Vec<PathBuf>,
        /// Transmission probabilities in percent (comma-separated)
        #[arg(long, value_delimiter = ',')]
        beta_percent: Option<Vec<f64>>,
        /// Multiples of each network's epidemic threshold
        #[arg(long, value_delimiter = ',')]
        beta_multiple: Option<Vec<f64>>,
        /// Replications per node
        #[arg(long)]
        runs: Option<u64>,
    },
    /// Exact influence spread by edge-subset enumeration (|E| <= 24)
    Oracle {
        networks: Vec<PathBuf>,
        /// Transmission probability in percent
        #[arg(long)]
        beta_percent: Option<f64>,
        /// Restrict to a single node label
        #[arg(long)]
        node: Option<String>,
    },
    /// Imprecision curves per measure, with cross-network averages
    Imprecision {
        networks: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        measures: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',')]
        beta_percent: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        beta_multiple: Option<Vec<f64>>,
        /// x axis: `p` (curve over the p grid) or `beta` (sweep at fixed p)
        #[arg(long)]
        x: Option<String>,
        /// Percentages for the p grid
        #[arg(long, value_delimiter = ',')]
        p_grid: Option<Vec<f64>>,
        /// Fixed p for beta sweeps
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        runs: Option<u64>,
        /// Measure pair to difference, e.g. kshell-eigenvector (repeatable)
        #[arg(long)]
        diff: Option<Vec<String>>,
        #[arg(long)]
        pagerank_variant: Option<String>,
        #[arg(long)]
        pagerank_damping: Option<f64>,
    },
}

fn effective_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();

    let config_path = cli
        .config
        .clone()
        .or_else(|| std::env::var("SPREADNET_CONFIG").ok().map(PathBuf::from));
    if let Some(path) = &config_path {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        cfg.apply_kv_text(&text, &path.display().to_string())?;
    }
    cfg.apply_env()?;

    if let Some(seed) = cli.seed {
        cfg.seed = Some(seed);
    }
    if let Some(workers) = cli.workers {
        cfg.workers = Some(workers);
    }
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }

    let networks = |cfg: &mut ExperimentConfig, nets: &[PathBuf]| {
        if !nets.is_empty() {
            cfg.networks = nets.to_vec();
        }
    };
    let measures = |cfg: &mut ExperimentConfig, m: &Option<Vec<String>>| -> Result<()> {
        if let Some(tokens) = m {
            cfg.measures = config::parse_measures(tokens)?;
        }
        Ok(())
    };
    let pagerank = |cfg: &mut ExperimentConfig,
                    variant: &Option<String>,
                    damping: &Option<f64>|
     -> Result<()> {
        if let Some(v) = variant {
            cfg.pagerank_variant = v.parse()?;
        }
        if let Some(d) = damping {
            cfg.pagerank_damping = *d;
        }
        Ok(())
    };

    match &cli.command {
        Command::Stats { networks: nets } => networks(&mut cfg, nets),
        Command::Centrality {
            networks: nets,
            measures: m,
            pagerank_variant,
            pagerank_damping,
        } => {
            networks(&mut cfg, nets);
            measures(&mut cfg, m)?;
            pagerank(&mut cfg, pagerank_variant, pagerank_damping)?;
        }
        Command::Spread {
            networks: nets,
            beta_percent,
            beta_multiple,
            runs,
        } => {
            networks(&mut cfg, nets);
            if let Some(b) = beta_percent {
                cfg.beta_percent = b.clone();
            }
            if let Some(b) = beta_multiple {
                cfg.beta_multiple = b.clone();
            }
            if let Some(r) = runs {
                cfg.runs = *r;
            }
        }
        Command::Oracle {
            networks: nets,
            beta_percent,
            node,
        } => {
            networks(&mut cfg, nets);
            if let Some(b) = beta_percent {
                cfg.beta_percent = vec![*b];
            }
            if let Some(n) = node {
                cfg.node = Some(n.clone());
            }
        }
        Command::Imprecision {
            networks: nets,
            measures: m,
            beta_percent,
            beta_multiple,
            x,
            p_grid,
            p,
            runs,
            diff,
            pagerank_variant,
            pagerank_damping,
        } => {
            networks(&mut cfg, nets);
            measures(&mut cfg, m)?;
            pagerank(&mut cfg, pagerank_variant, pagerank_damping)?;
            if let Some(b) = beta_percent {
                cfg.beta_percent = b.clone();
            }
            if let Some(b) = beta_multiple {
                cfg.beta_multiple = b.clone();
            }
            if let Some(x) = x {
                cfg.x = XAxis::parse(x)?;
            }
            if let Some(grid) = p_grid {
                cfg.p_grid = grid.clone();
            }
            if let Some(p) = p {
                cfg.p = *p;
            }
            if let Some(r) = runs {
                cfg.runs = *r;
            }
            if let Some(pairs) = diff {
                cfg.diff = pairs
                    .iter()
                    .map(|t| config::parse_diff_pair(t))
                    .collect::<Result<Vec<_>>>()?;
            }
            // the sweep default follows the protocol grid 1.1..2.0; p-curves
            // default to 1.1 x threshold
            if cfg.beta_percent.is_empty() && cfg.beta_multiple.is_empty() {
                cfg.beta_multiple = match cfg.x {
                    XAxis::P => vec![1.1],
                    XAxis::Beta => spreadnet::imprecision::default_beta_multiples(),
                };
            }
        }
    }
    Ok(cfg)
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    let cfg = effective_config(&cli)?;

    if let Some(path) = &cli.dump_config {
        output::write_atomic(path, cfg.dump().as_bytes())?;
        eprintln!("wrote {}", path.display());
    }

    if let Some(workers) = cfg.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .context("configuring the worker pool")?;
    }

    match &cli.command {
        Command::Stats { .. } => commands::cmd_stats(&cfg),
        Command::Centrality { .. } => commands::cmd_centrality(&cfg),
        Command::Spread { .. } => commands::cmd_spread(&cfg),
        Command::Oracle { .. } => commands::cmd_oracle(&cfg),
        Command::Imprecision { .. } => commands::cmd_imprecision(&cfg),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
