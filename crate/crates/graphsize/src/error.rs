use thiserror::Error;

/// Errors shared across the library.
#[derive(Error, Debug)]
pub enum Error {
    #[error("node index {0} out of range (n = {1})")]
    InvalidNode(usize, usize),

    #[error("edge ({0}, {1}) references a node outside [0, {2})")]
    InvalidEdge(usize, usize, usize),

    #[error("graph declared simple but contains a self-loop at node {0}")]
    SelfLoop(usize),

    #[error("graph declared simple but edge ({0}, {1}) is repeated")]
    RepeatedEdge(usize, usize),

    #[error("graph is not strongly connected: no path from {from} to {to}")]
    NotStronglyConnected { from: usize, to: usize },

    #[error("distribution lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("probabilities sum to {0}, expected 1 within 1e-12")]
    NotNormalized(f64),

    #[error("negative probability {0} at index {1}")]
    NegativeProbability(f64, usize),

    #[error("iteration did not converge within {0} steps")]
    NoConvergence(u64),

    #[error("n = {n} exceeds the cap {cap} for {what}; use a sampling-based upper bound instead")]
    CapExceeded {
        n: usize,
        cap: usize,
        what: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degree sum {0} is odd; the configuration model needs an even number of stubs")]
    OddDegreeSum(usize),

    #[error("degree sequence is not graphical")]
    NotGraphical,

    #[error("input graph is a tree; the degree-preserving swap needs a cycle edge")]
    TreeInput,

    #[error("oracle already initialized")]
    DoubleInit,

    #[error("oracle not initialized")]
    NotInitialized,

    #[error("operation requires oracle kind {expected}, got {got}")]
    WrongOracleKind {
        expected: &'static str,
        got: &'static str,
    },

    #[error("no collision in {r} samples; enlarge the sample size")]
    NoCollision { r: usize },

    #[error("walk reached a node with degree 0; the graph is not connected")]
    DisconnectedWalk,

    #[error("could not generate a connected simple graph in {0} attempts")]
    GenerationFailed(usize),

    #[error("graph file parse error at line {line}: {msg}")]
    ParseGraph { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
