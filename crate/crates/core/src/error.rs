use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Arguments outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// No tolerance in (0, 1] brings the bound down to the target confidence.
    #[error("infeasible inversion: {bound} at N={n}, d={d}, r={r} exceeds beta={beta} even at epsilon=1")]
    Infeasible {
        bound: &'static str,
        n: u64,
        d: u64,
        r: u64,
        beta: f64,
    },

    #[error("resource limit: no sample size up to {limit} reaches the target")]
    ResourceLimit { limit: u64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    /// The geometry solver produced something it cannot account for.
    #[error("solver error: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
