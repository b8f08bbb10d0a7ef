use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("incomparable data")]
    Incomparable,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("action is not faithful on the projective torus")]
    NotFaithful,
    #[error("element is not in the group: {0}")]
    NotInGroup(String),
    #[error("small support: no frame edge at vertex {0}")]
    SmallSupport(usize),
    #[error("Euler obstruction: p = {p} divides d = {d}")]
    EulerObstruction { p: u64, d: u32 },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("unknown catalog label: {0}")]
    UnknownLabel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
