use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for digraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("digraph would have {requested} vertices, cap is {cap}")]
    TooManyVertices { requested: usize, cap: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(usize, usize),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("digraph has a sink (vertex {0}) but a sink-free digraph is required")]
    NotSinkFree(usize),

    #[error("vertex set is not kernel-perfect")]
    NotKernelPerfect,

    #[error("vertex set is not a quasi-kernel")]
    NotQuasiKernel,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A constructive step produced output that fails its own guarantee.
    /// For the conjecture-reduction pipelines this is exactly what a
    /// counterexample would look like, so it is never swallowed.
    #[error("postcondition violated in {context}: {detail}")]
    Postcondition { context: &'static str, detail: String },

    /// An injected oracle returned something outside its contract.
    #[error("oracle violated its contract: {0}")]
    OracleViolation(String),
}

impl Error {
    pub(crate) fn post(context: &'static str, detail: impl Into<String>) -> Self {
        Error::Postcondition {
            context,
            detail: detail.into(),
        }
    }
}
