use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("p must be an odd integer >= 3, got {0}")]
    InvalidPeriod(u64),

    #[error("non-finite floating value")]
    NonFinite,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid interval: lo {lo} > hi {hi}")]
    InvalidInterval { lo: String, hi: String },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("{what} {value} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain {
        what: &'static str,
        value: String,
        lo: String,
        hi: String,
    },

    #[error("lambda = {lambda} is below lambda_{p} ~ {lambda_p}")]
    LambdaBelowMinimum { p: u64, lambda: String, lambda_p: String },

    #[error("branch cap {cap} exceeded at n = {failed}; last completed n = {completed}")]
    BranchCapExceeded {
        cap: usize,
        failed: usize,
        completed: usize,
    },

    #[error("branch of slope +1 with a fixed point: continuum of periodic points")]
    UnitSlope,

    #[error("not a pseudo-partition: {0}")]
    Partition(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
