//! Exact fields, sparse matrices, and the subquotient bookkeeping every cohomology group
//! is stored in.

mod elim;
mod field;
mod matrix;
mod subquotient;

use thiserror::Error;

pub use elim::{kernel_basis, rank, rref, Rref, SpanSolver, DENSE_CUTOFF};
pub use field::{is_reduced, Field, FieldSpec, PrimeField, Rationals, ALT_PRIME, DEFAULT_PRIME};
pub use matrix::{axpy, SparseMatrix, SparseVec};
pub use subquotient::{induced_map, rank_difference, subquotient, Subquotient};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a prime in [2^20, 2^32)")]
    InvalidPrime(u64),
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("boundary column {column} lies outside the cycle span")]
    ContainmentViolation { column: usize },
    #[error("induced map not well defined: {reason}")]
    NotWellDefined { reason: String },
}
