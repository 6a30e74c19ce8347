//! Jacobians of polynomial transition maps and the transformation law of
//! (p,q)-tensor ω-densities, including chained transformations.

mod field;
mod format;
mod jacobian;
mod transition;

use thiserror::Error;

use crate::deriv::DerivError;
use crate::interp::InterpError;
use crate::lang::SyntaxError;

pub use field::{
    chain_transform, kronecker_check, transform_components, ChainResult, ComponentField, Direction, KroneckerPoint,
    KroneckerReport, MultiIndex, TensorDensitySpec,
};
pub use format::{parse_field, parse_transition};
pub use jacobian::{determinant, jacobian, JacobianMatrix, MAX_DET_DIM};
pub use transition::TransitionMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("invalid tensor spec: {0}")]
    InvalidSpec(String),
    #[error("matrix is {rows}×{cols}, not square")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension {0} is above the supported maximum")]
    TooLarge(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the transformation needs the inverse of map {0}, which was not supplied")]
    MissingInverse(String),
    #[error("the supplied inverse of map {0} is not an inverse")]
    InverseMismatch(String),
    #[error("a negative density weight needs a nonzero constant determinant, found {0}")]
    NonUnitDeterminant(String),
    #[error("chained and collapsed transformations disagree")]
    ChainMismatch,
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Deriv(#[from] DerivError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}
