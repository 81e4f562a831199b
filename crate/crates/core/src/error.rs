use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by graph ingestion, centrality computation, simulation,
/// and imprecision scoring.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: expected two whitespace-separated node labels, found {found} token(s)")]
    MalformedEdgeLine { line: usize, found: usize },

    #[error("edge list contains no usable lines")]
    EmptyEdgeList,

    #[error("operation requires a non-empty graph")]
    EmptyGraph,

    #[error("node index {index} out of range for a graph with {nodes} nodes")]
    NodeOutOfRange { index: usize, nodes: usize },

    #[error("summary statistics are undefined for a graph with no edges")]
    EdgelessGraph,

    #[error("{context} requires a connected graph")]
    Disconnected { context: &'static str },

    #[error("power-law fit needs at least two distinct degrees k >= 1 with nonzero count, found {found}")]
    DegenerateFit { found: usize },

    #[error(
        "no finite epidemic threshold: second moment {second_moment} does not exceed mean degree {mean_degree}"
    )]
    NoFiniteThreshold { mean_degree: f64, second_moment: f64 },

    #[error("infection probability must lie in [0, 1], got {0}")]
    InvalidProbability(f64),

    #[error("damping factor must lie in (0, 1], got {0}")]
    InvalidDamping(f64),

    #[error("power iteration did not converge within {iterations} iterations (last residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error(
        "pure pagerank did not converge within {iterations} iterations (last residual {residual:.3e}); \
         the recurrence oscillates on bipartite graphs, use the damped variant instead"
    )]
    PureRankOscillation { iterations: usize, residual: f64 },

    #[error("pagerank requires every node to have degree >= 1 (node {node} is isolated)")]
    IsolatedNode { node: usize },

    #[error("exact enumeration supports at most {bound} edges (2^{bound} subsets), graph has {edges}")]
    EdgeBoundExceeded { edges: usize, bound: u32 },

    #[error("unknown measure `{token}`; valid tokens: {valid}")]
    UnknownMeasure { token: String, valid: &'static str },

    #[error("top-set percentage must lie in (0, 100], got {0}")]
    InvalidPercent(f64),

    #[error("spread estimate covers {spread_nodes} nodes but scores cover {score_nodes}")]
    NodeSetMismatch {
        spread_nodes: usize,
        score_nodes: usize,
    },

    #[error("curve mismatch: {0}")]
    CurveMismatch(String),
}
