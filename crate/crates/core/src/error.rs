use thiserror::Error;

/// Error type shared by every module of the crate.
///
/// Variants are split into two classes for the CLI exit-code contract:
/// violations of a documented hypothesis (bad input, formula not applicable)
/// and internal failures (precision exhaustion, broken invariants).
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("input rejected: {0}")]
    Data(String),
    #[error("no {degree}-th root of {value} in F_{p}")]
    MissingRoot { value: u64, degree: u64, p: u64 },
    #[error("precision {have} too small: {why}")]
    Precision { have: usize, why: String },
    #[error("oracle dimension did not stabilize: got {first} then {second}")]
    StabilizationFailure { first: usize, second: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn precision(have: usize, why: impl Into<String>) -> Self {
        Error::Precision { have, why: why.into() }
    }

    /// True for errors that mean "the requested computation does not apply
    /// to this input", as opposed to a defect inside the library.
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            Error::Hypothesis(_)
                | Error::Data(_)
                | Error::MissingRoot { .. }
                | Error::ModulusMismatch(_, _)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
