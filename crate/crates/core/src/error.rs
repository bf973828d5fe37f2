use thiserror::Error;

/// Errors raised by network construction and the algorithms in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input document, with the parser's line/column diagnostic.
    #[error("malformed input: {0}")]
    Parse(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid components: {0}")]
    InvalidComponents(String),

    #[error("index {index} out of range for network with {len} nodes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("subset must be nonempty")]
    EmptySubset,

    #[error("operation requires declared components")]
    MissingComponents,

    #[error("network weights are not a dissimilarity")]
    NotDissimilarity,

    #[error("invalid correspondence: {0}")]
    InvalidCorrespondence(String),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("invalid ultrametric: {0}")]
    InvalidUltrametric(String),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A computation would exceed a configured size guard.
    #[error("budget exceeded ({guard}): required {required}, allowed {allowed}")]
    BudgetExceeded {
        guard: &'static str,
        required: f64,
        allowed: f64,
    },
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
