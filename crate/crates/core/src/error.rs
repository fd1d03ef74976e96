use thiserror::Error;

use crate::density::Basis;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid spin value {0}: expected a non-negative half-integer")]
    InvalidSpin(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("wrong basis: expected {expected:?}, found {found:?}")]
    WrongBasis { expected: Basis, found: Basis },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unphysical anomalous correlation: |m|^2 = {m_sq} exceeds n(n+1) = {bound}")]
    UnphysicalCorrelation { m_sq: f64, bound: f64 },

    #[error("biorthogonal eigenbasis is singular at r = 0; use the generic null-space path")]
    SingularAtZeroSqueezing,

    #[error(
        "ambiguous null space for sector block ({j}, {k}): singular-value gap ratio {gap:.3e}"
    )]
    AmbiguousNullSpace { j: f64, k: f64, gap: f64 },

    #[error("step size underflow at t = {t}: h = {h:e}")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("steady state not reached by t = {0}")]
    NotConverged(f64),

    #[error("series too short: {0} points, need at least 3")]
    SeriesTooShort(usize),

    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),
}

pub type Result<T> = std::result::Result<T, Error>;
