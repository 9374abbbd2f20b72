use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid block spec: {0}")]
    InvalidBlock(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid is incompatible with its identification: {0}")]
    IncompatibleGrid(String),

    #[error("complex failed validation: {0}")]
    InvalidComplex(String),

    #[error("tetrahedron is not realizable in Euclidean space (Cayley-Menger = {cm:e})")]
    NonRealizable { cm: f64 },

    #[error("tetrahedron {tet} is not realizable (Cayley-Menger = {cm:e})")]
    DegenerateTet { tet: usize, cm: f64 },

    #[error("tetrahedron {tet} became non-realizable at step {step}")]
    FlowNonRealizable { tet: usize, step: usize },

    #[error("edge {edge} has non-positive length {length} at step {step}")]
    NonPositiveLength { edge: usize, length: f64, step: usize },

    #[error("body diagonal {edge} could not be flattened: {reason}")]
    NonFlattenable { edge: usize, reason: String },

    #[error("edges do not belong to the same tetrahedron or share no vertex")]
    EdgesNotAdjacent,

    #[error("no axis-aligned edge cycle along axis {axis}")]
    NoAlignedCycle { axis: usize },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("outside the domain of the analytic solution: {0}")]
    Domain(String),

    #[error("fit did not converge: {0}")]
    FitFailed(String),

    #[error("PDE integration blew up at t = {t}")]
    PdeBlowUp { t: f64 },

    #[error("requested time {0} is not available")]
    MissingTime(f64),

    #[error("invalid configuration: {0}")]
    Config(String),
}
