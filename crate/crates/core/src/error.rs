use thiserror::Error;

use crate::lie_algebra::BasisKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported basis: {kind} requires n = {required}, got n = {n}")]
    UnsupportedBasis { kind: BasisKind, n: usize, required: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not traceless (|Tr| = {trace:.3e}); decompose it first")]
    NotTraceless { trace: f64 },

    #[error("matrix is not unitary (‖U†U − 1‖ = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis mismatch: expected {expected}, found {found}")]
    BasisMismatch { expected: BasisKind, found: BasisKind },

    #[error("control direction must be non-zero")]
    ZeroDirection,

    #[error("invalid envelope: {0}")]
    InvalidEnvelope(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("time {t} outside the envelope domain [0, {duration}]")]
    TimeOutOfRange { t: f64, duration: f64 },

    #[error(
        "rotation target unreachable under amplitude bound {bound}: \
         requested duration {requested} but at least {min_duration} is needed"
    )]
    Unreachable {
        bound: f64,
        requested: f64,
        min_duration: f64,
    },

    #[error("trajectory is empty")]
    EmptyTrajectory,

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("generating set does not generate the group; unreached elements: {unreached:?}")]
    NotGenerating { unreached: Vec<String> },

    #[error("not an Eulerian cycle: {0}")]
    NotEulerian(String),

    #[error("no pulse design for generator `{0}`")]
    MissingPulse(String),

    #[error("pulse design for `{label}` misses its target unitary by {deviation:.3e}")]
    PulseMismatch { label: String, deviation: f64 },

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("unresolved bath operator `{0}`")]
    UnresolvedBathLabel(String),

    #[error("schedule is not cyclic: U_c(T_c) differs from a phase times identity by {deviation:.3e}")]
    NonCyclic { deviation: f64 },

    #[error("time step too large: dt·‖H‖ = {product:.3e} exceeds 0.1")]
    StepTooLarge { product: f64 },

    #[error("bath operators are linearly dependent; coupling sectors cannot be separated")]
    DependentBathOperators,

    #[error("unknown preset `{name}`; available presets: {available}")]
    UnknownPreset { name: String, available: String },

    #[error("unknown operator preset `{0}`")]
    UnknownOperator(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
