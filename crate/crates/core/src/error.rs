use thiserror::Error;

/// Errors raised by the belief-function algebra and mass construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DstError {
    #[error("duplicate class label `{0}`")]
    DuplicateLabel(String),

    #[error("a frame needs at least 2 classes, got {0}")]
    TooFewClasses(usize),

    #[error("frame of size {size} exceeds the general-engine bound of {max}")]
    FrameTooLarge { size: usize, max: usize },

    #[error("operands are defined over different frames")]
    FrameMismatch,

    #[error("class index {index} out of range for a frame of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("positive mass assigned to the empty set")]
    MassOnEmptySet,

    #[error("negative mass {0}")]
    NegativeMass(f64),

    #[error("mass values must be finite")]
    NonFiniteMass,

    #[error("masses sum to {total}, expected 1")]
    NotNormalized { total: f64 },

    #[error("no positive mass on a non-empty subset; normalization is undefined")]
    AllZeroMass,

    #[error("commonality is not defined for the empty set")]
    EmptySetQuery,

    #[error("total conflict (K = {k}) at combination step {step}")]
    TotalConflict { step: usize, k: f64 },

    #[error("cannot combine an empty list of mass functions")]
    EmptyList,

    #[error("model `{model_id}` has a non-finite score at class {index}")]
    NonFiniteScore { model_id: String, index: usize },

    #[error("model `{model_id}` has {found} scores, expected {expected}")]
    LengthMismatch {
        model_id: String,
        expected: usize,
        found: usize,
    },

    #[error("theta floor must lie in [0, 0.5), got {0}")]
    InvalidThetaFloor(f64),
}

pub type Result<T, E = DstError> = std::result::Result<T, E>;
