use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("index {index} out of range 1..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("h0 is indeterminate for summand j={j} (degree {degree}, genus {genus})")]
    IndeterminateH0 { j: usize, degree: i64, genus: i64 },

    #[error("degenerate equation: {0}")]
    Degenerate(String),

    #[error("precision exhausted at stage {stage}; rerun with larger N (have {have}, need {need})")]
    PrecisionExhausted { stage: usize, have: usize, need: usize },

    #[error("no generic characteristic found (base may be too small): {0}")]
    SamplingExhausted(String),

    #[error("zeta fit failed: {0}")]
    ZetaFit(String),

    #[error("Prym L-division failed: {0}")]
    PrymDivision(String),

    #[error("evaluate at a perfect power or keep symbolic: {0}")]
    FractionalPower(String),

    #[error("missing sector data: {0}")]
    MissingSectorData(String),

    #[error("resource limit: {0}")]
    Resource(String),
}

impl Error {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionExhausted { .. } | Error::SamplingExhausted(_) | Error::Resource(_) => 3,
            _ => 2,
        }
    }
}
