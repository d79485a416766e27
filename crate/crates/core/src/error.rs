use thiserror::Error;

/// Errors raised by semigroup computations, closed forms and sweeps.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("generators {0:?} are not coprime (gcd = {1}); the semigroup has an infinite complement")]
    NonCoprime(Vec<u64>, u64),

    #[error("generators {0:?} do not form a minimal generating set")]
    NotMinimal(Vec<u64>),

    #[error("invalid generator tuple: {0}")]
    InvalidGenerators(String),

    #[error("semigroup {0:?} is symmetric; the (u,w) standard form exists only for non-symmetric semigroups")]
    SymmetricInput(Vec<u64>),

    #[error("inconsistent relation matrix for {gens:?}: {reason}")]
    InconsistentMatrix { gens: Vec<u64>, reason: String },

    #[error("invalid (u,w) pair: {0}")]
    InvalidUw(String),

    #[error("closed-form genus numerator {0} is odd")]
    ParityViolation(i128),

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("empty search grid")]
    EmptyGrid,

    #[error("radius r = {r} must be smaller than the scaling N = {n}")]
    RadiusTooLarge { r: u64, n: u64 },

    #[error("invalid neighborhood: {0}")]
    InvalidNeighborhood(String),

    #[error("sweep has no admissible points")]
    EmptyAdmissibleSet,

    #[error("exhaustive sweep of {points} points exceeds the budget of {budget}; use sampled mode")]
    SampledModeRequired { points: u128, budget: u128 },

    #[error("conductor {conductor} is smaller than the bin count {bins}")]
    DegenerateRange { conductor: u64, bins: usize },

    #[error("records of different kinds cannot share one CSV table: {0} vs {1}")]
    MixedKinds(String, String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
