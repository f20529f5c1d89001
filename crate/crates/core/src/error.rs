use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // kinematics
    #[error("mass must be non-negative, got {0}")]
    NegativeMass(f64),
    #[error("a massless quantum needs non-zero spatial momentum")]
    MasslessAtRest,
    #[error("mass must be strictly positive here, got {0}")]
    NonPositiveMass(f64),
    #[error("momentum is off shell: k^2 = {k2}, mass^2 = {m2}")]
    OffShell { k2: f64, m2: f64 },
    #[error("inner momentum must satisfy K^2 > 0, got K^2 = {0}")]
    InnerNotTimelike(f64),
    #[error("spin label must be 1 or 2, got {0}")]
    BadSpin(u8),

    // algebra and labels
    #[error("gauge inner polarization must lie in 1..=3, got {0}")]
    InnerPolarizationZero(u8),
    #[error("polarization label out of range: {0}")]
    BadPolarization(String),
    #[error("operator mixes symbolic and bound labels: {0}")]
    MixedLabels(String),
    #[error("inconsistent bindings: {0}")]
    InconsistentBindings(String),
    #[error("label {0} must be bound to a number")]
    SymbolicLabel(String),
    #[error("inner momentum {0} lies outside the time- and light-like cones")]
    SpacelikeInner(String),
    #[error("state contains an annihilation operator: {0}")]
    NotAKet(String),

    // gravitational limit
    #[error("inner label {0} cannot be tied to an on-shell momentum")]
    UnresolvedInner(String),
    #[error("inner delta {0} is not linked to a momentum delta")]
    UnlinkedInnerDelta(String),
    #[error("invalid regularization: {0}")]
    Regularization(String),

    // smatrix
    #[error("invalid propagator: {0}")]
    Propagator(String),
    #[error("invalid LSZ input: {0}")]
    Lsz(String),
    #[error("invalid toy S-matrix: {0}")]
    Toy(String),

    // text interfaces
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("config error: {0}")]
    Config(String),
}
