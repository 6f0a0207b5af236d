use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A declared precondition was violated by the caller.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An exhaustive scan or enumeration would exceed the configured budget.
    /// `last_complete` carries the largest boundary that fits the budget,
    /// when one is meaningful.
    #[error("budget exceeded in {op}: needed {needed}, limit {limit}")]
    Budget {
        op: String,
        needed: u128,
        limit: u64,
        last_complete: Option<u64>,
    },

    /// An exact polynomial identity failed during verification of a
    /// factored system; `which` names the offending component.
    #[error("factored-form mismatch at {which}: {detail}")]
    Mismatch { which: String, detail: String },

    /// An unconditional internal invariant failed. Indicates a bug in this
    /// crate, never a property of the inputs.
    #[error("internal check failed: {0}")]
    CheckFailed(String),

    /// Integer overflow in a derived quantity (products, periods, powers).
    #[error("overflow computing {0}")]
    Overflow(String),

    /// A cache file was malformed, truncated or corrupt.
    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn budget(op: impl Into<String>, needed: u128, limit: u64) -> Self {
        Error::Budget {
            op: op.into(),
            needed,
            limit,
            last_complete: None,
        }
    }

    /// True when the error is a budget rejection (used by drivers to map
    /// exit codes).
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
