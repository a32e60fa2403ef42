use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("count table holds p(0..={limit}) but p({requested}) was needed")]
    TableTooSmall { requested: u64, limit: u64 },

    #[error("{what} = {requested} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u64,
        cap: u64,
    },

    #[error("rejection sampler gave up after {trials} trials ({accepted} accepted)")]
    RetryLimitExceeded { trials: u64, accepted: u64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("saddle-point bracket failed for n = {n}")]
    BracketFailure { n: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by a resource limit rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. }
                | Error::RetryLimitExceeded { .. }
                | Error::TableTooSmall { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
