//! Error type shared by every module in the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the reduced-space calculus.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A caller-supplied value violates a precondition (dimension mismatch,
    /// k out of range, rank-0 input where Θ_k semantics require nonzero, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested operation exists mathematically but is not supported at
    /// this scale or for this input class (e.g. brute-force beyond the
    /// dimension cap, the product join-prime construction for n < 3).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A meet of two local Hamiltonians produced a rank-0 kernel component;
    /// the meet-semilattice has no zero element, so the meet is undefined.
    #[error("meet undefined: {0}")]
    MeetUndefined(String),

    /// A constructive search (join-prime witness) exhausted every candidate
    /// without numerically validating its post-conditions.
    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    /// Malformed JSON input: parse or schema violation.
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<Error> for String {
    fn from(e: Error) -> String {
        e.to_string()
    }
}

impl Error {
    /// Process exit code for the CLI: 2 for usage/parse errors, 3 for
    /// numerical-degeneracy outcomes (undefined meet, exhausted search).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::Parse(_) | Error::Unsupported(_) => 2,
            Error::MeetUndefined(_) | Error::SearchExhausted(_) => 3,
        }
    }
}
