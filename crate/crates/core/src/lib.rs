//! Spreading power under the network SIR model.
//!
//! This crate estimates every node's influence spread by Monte Carlo
//! simulation of susceptible-infected-recovered dynamics, computes the
//! classical centrality measures used to predict top spreaders, and scores
//! each measure's imprecision: the fraction of spreading power lost by
//! trusting the measure's top-p% picks instead of the true top spreaders.
//!
//! Modules:
//! - [`graph`]: edge-list ingestion, greatest connected component, degree
//!   statistics, and the per-network summary row.
//! - [`centrality`]: degree, shell number, betweenness, closeness,
//!   eigenvector, PageRank, and q-neighborhood scores with deterministic
//!   rankings.
//! - [`epidemic`]: the SIR engine, per-node spread estimates, and the
//!   epidemic threshold.
//! - [`oracle`]: exact influence spread on tiny graphs by exhaustive
//!   bond-percolation enumeration; the simulator's ground truth.
//! - [`imprecision`]: imprecision curves over p-grids and beta-sweeps,
//!   cross-network averages, and curve differences.
//! - [`synthetic`]: seeded graph generators for tests and benchmarks.
//!
//! Every simulation result is bit-reproducible given the same master seed,
//! independent of worker count.

pub mod centrality;
pub mod epidemic;
pub mod error;
pub mod graph;
pub mod imprecision;
pub mod oracle;
pub mod synthetic;

pub use centrality::{
    CentralityScores, Measure, PageRankConfig, PageRankVariant, Ranking,
};
pub use epidemic::{EpidemicThreshold, InfectionProbability, SpreadEstimate};
pub use error::{Error, Result};
pub use graph::{DegreeHistogram, Graph, NetworkStats};
pub use imprecision::{ImprecisionCurve, TopSet, XKind};
pub use oracle::ExactSpread;
