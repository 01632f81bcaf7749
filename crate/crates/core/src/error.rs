use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate state: cannot normalize a zero vector")]
    DegenerateState,

    #[error("level index {0} out of range 1..=3")]
    LevelOutOfRange(usize),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (Frobenius defect {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("bright state undefined: both couplings are zero")]
    BrightStateUndefined,

    #[error("direct 1-3 coupling must be zero for the dressed basis (got |omega13| = {0:.3e})")]
    DirectCouplingPresent(f64),

    #[error("envelope duration must be positive (got {0})")]
    NonPositiveDuration(f64),

    #[error("envelope amplitude must be non-negative (got {0})")]
    NegativeAmplitude(f64),

    #[error("target pulse area must be non-negative (got {0})")]
    NegativeArea(f64),

    #[error("pulse segment has no envelopes")]
    EmptySegment,

    #[error("envelopes within a segment must share t_start and duration")]
    MisalignedEnvelopes,

    #[error("segments overlap in time (segment {0} starts before segment {1} ends)")]
    OverlappingSegments(usize, usize),

    #[error("collapse channel source and target must differ")]
    SelfCollapse,

    #[error("collapse rate must be finite and non-negative (got {0})")]
    InvalidRate(f64),

    #[error("non-commuting segment; use evolve_rk4")]
    NonCommutingSegment,

    #[error("step too large: {step:.3e} exceeds one tenth of the shortest interval {limit:.3e}")]
    StepTooLarge { step: f64, limit: f64 },

    #[error("integration step must be positive and finite (got {0})")]
    InvalidStep(f64),

    #[error("evolution window end precedes start ({0} > {1})")]
    InvalidWindow(f64, f64),
}

pub type Result<T> = std::result::Result<T, Error>;
