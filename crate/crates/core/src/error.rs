use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid occupation: {0}")]
    InvalidOccupation(String),

    #[error("dimension mismatch: expected {expected} modes, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("mode index {index} out of range for {modes} modes")]
    ModeIndex { index: usize, modes: usize },

    #[error("matrix is not unitary (max deviation from identity {0:e})")]
    NotUnitary(f64),

    #[error("gamma = {0} lies outside [0, pi/2]")]
    GammaOutOfRange(f64),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("missing parameter: {0}")]
    MissingParameter(&'static str),

    #[error("scenario `{0}` has no Fock-state model")]
    UnsupportedScenario(&'static str),

    #[error("projector is not normalized (<xi|xi> = {0})")]
    UnnormalizedProjector(f64),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("probability {value} outside [-1e-9, 1 + 1e-9] ({context})")]
    InvariantViolation { value: f64, context: String },

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
