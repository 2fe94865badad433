use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("size budget exceeded: {what} needs about {needed} entries, cap is {cap}")]
    Budget {
        what: String,
        needed: u128,
        cap: u128,
    },

    #[error("exact rational elimination exceeded the entry-size budget ({bits} bits > {max_bits}); retry modularly")]
    ResourceLimit { bits: u64, max_bits: u64 },

    #[error("not enough annihilators: requested {requested} extra, only {available} available")]
    NotEnoughAnnihilators { requested: usize, available: usize },

    #[error("table is not in the pure cone: {0}")]
    NotInPureCone(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}
