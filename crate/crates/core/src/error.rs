use thiserror::Error;

/// Reasons a vector is rejected as a cyclic point.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclicViolation {
    #[error("theta must lie in (0, 1/2], got {0}")]
    Theta(String),
    #[error("edge {edge} has value {value}, expected one of theta, 1-theta, 1")]
    ValueSet { edge: usize, value: String },
    #[error("vertex {0} has support degree above 3")]
    NotSubcubic(usize),
    #[error("vertex {0} has no incident 1-edge")]
    NoOneEdge(usize),
    #[error("vertex {vertex} has x(delta) = {value}, expected 2")]
    Degree { vertex: usize, value: String },
    #[error("cut {side:?} has value {value}, below 2")]
    CutBelowTwo { side: Vec<usize>, value: String },
    #[error("fractional cycle through vertex {0} has odd length while theta < 1/2")]
    OddCycle(usize),
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("not a cyclic point: {0}")]
    NotCyclic(#[from] CyclicViolation),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("target not in the family hull: {0}")]
    Infeasible(String),
    #[error("zeta {zeta} outside the admissible range [0, {max}] at vertex {vertex}: {context}")]
    ZetaOutOfRange {
        zeta: String,
        max: String,
        vertex: usize,
        context: String,
    },
    #[error("pattern profiles differ at coordinate {coordinate}: {left} vs {right} ({context})")]
    ProfileMismatch {
        coordinate: String,
        left: String,
        right: String,
        context: String,
    },
    #[error("connectivity violated: {0}")]
    Connectivity(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
