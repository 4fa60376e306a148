use thiserror::Error;

/// Errors produced by the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite amplitude at frequency {xi}")]
    NonFinite { xi: f64 },

    #[error("spectral grids do not match: {0}")]
    GridMismatch(String),

    #[error("enumeration budget exceeded: {needed} > {limit} {what}")]
    Budget {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("empty output window")]
    EmptyWindow,

    #[error("simulation diverged at t = {t}")]
    Diverged { t: f64 },

    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    /// True for errors caused by exhausting a combinatorial or quadrature budget.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
