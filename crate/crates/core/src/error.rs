use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: usize, right: usize },

    #[error("invalid modulus {0}: must be at least 1")]
    InvalidModulus(usize),

    #[error("length {len} does not match modulus {modulus}")]
    LengthMismatch { len: usize, modulus: usize },

    #[error("non-finite input: {0}")]
    NonFinite(f64),

    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("invalid circle map: {0}")]
    InvalidCircleMap(String),

    #[error("work budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("exact phase arithmetic overflowed; use the float-tolerance variant")]
    PhaseOverflow,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no witness found: {0}")]
    NoWitness(String),

    #[error("quadrature did not converge after {refinements} refinements (last change {last_change:e})")]
    NoConvergence { refinements: u32, last_change: f64 },

    #[error("unknown experiment {0:?}")]
    UnknownExperiment(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
