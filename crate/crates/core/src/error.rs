use thiserror::Error;

use crate::operator::Space;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid deformation parameter: {0}")]
    InvalidParameter(String),

    #[error("deformation parameter invalid up to n = {n_max}: [n]_q fails at n = {violations:?}")]
    ParameterOutOfDomain { n_max: u32, violations: Vec<u32> },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("sector too large: dimension {dimension} exceeds cap {cap}")]
    DimensionOverflow { dimension: u128, cap: usize },

    #[error("mode {mode} out of range for {n_modes} modes")]
    ModeOutOfRange { mode: usize, n_modes: usize },

    #[error("incompatible spaces: {left} vs {right}")]
    SpaceMismatch { left: Space, right: Space },

    #[error("relation check failed: {0}")]
    RelationFailure(String),

    #[error("input is not an sl(2) representation: {0}")]
    NotSl2(String),

    #[error("missing tensor component m = {two_m}/2")]
    MissingComponent { two_m: i32 },

    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("radicand sign violation at diagonal entries {0:?}")]
    RadicandSign(Vec<usize>),

    #[error("unknown invariant: {0}")]
    UnknownInvariant(String),

    #[error("term does not conserve the sector or L0: {0}")]
    NonConserving(String),

    #[error("underdetermined fit: {0}")]
    Underdetermined(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
