use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("contexts differ")]
    ContextMismatch,
    #[error("residue equation needs an extension of degree {0}")]
    ExtensionRequired(usize),
    #[error("no root found in any extension up to the search limit")]
    ExtensionSearchLimit,
    #[error("no solution at this precision")]
    NoSolution,
    #[error("empty window")]
    EmptyWindow,
    #[error("not a unit: {0}")]
    NotUnit(String),
    #[error("zero series")]
    ZeroSeries,
    #[error("series is not prepared: reduction mod p vanishes on the window")]
    NotPrepared,
    #[error("no split: {0}")]
    NoSplit(String),
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("output window collapsed")]
    WindowCollapse,
    #[error("Frobenius lift is not zero-centered")]
    NotZeroCentered,
    #[error("not an isogeny: {0}")]
    NotIsogeny(String),
    #[error("matrix at t = 0 is not an isogeny")]
    NotIsogenyAtOrigin,
    #[error("not diagonalizable: {0}")]
    NotDiagonalizable(String),
    #[error("certified precision exhausted at order {0}")]
    PrecisionExhausted(usize),
    #[error("tower depth would exceed the cap of {0}")]
    DepthExceeded(usize),
    #[error("exponent {exponent} not divisible by {divisor} in a required root")]
    RootDivisibility { exponent: i64, divisor: u64 },
    #[error("Witt length exhausted")]
    LengthExhausted,
    #[error("Laurent window exhausted")]
    WindowExhausted,
    #[error("enumeration of {0} candidates exceeds the configured bound")]
    Infeasible(u64),
    #[error("malformed document: {0}")]
    Malformed(String),
}

impl Error {
    /// Errors caused by the input rather than by the computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::InvariantViolation(_)
                | Error::ContextMismatch
                | Error::NotZeroCentered
                | Error::Malformed(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
