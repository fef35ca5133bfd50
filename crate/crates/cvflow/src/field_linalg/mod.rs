//! Linear algebra over a runtime-selected field: elimination, solving and
//! elementary column operations.

mod column_ops;
mod elimination;
mod field;
mod matrix;

pub use column_ops::{apply_column_ops, ColumnOp};
pub use elimination::{residual_ok, rref, solve, solve_columns, Rref};
pub use field::{is_prime, Field, PrimeField, Reals, MAX_MODULUS};
pub use matrix::Matrix;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("column index {index} out of range for {len} columns")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("add_scaled with a zero scalar")]
    ZeroScalar,
    #[error("add_scaled adds column {0} to itself")]
    SelfAddition(usize),
    #[error("rows have different lengths")]
    Ragged,
    #[error("modulus {0} is not a supported prime")]
    NotPrime(u64),
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
}
