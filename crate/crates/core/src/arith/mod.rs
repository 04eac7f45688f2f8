//! Exact arithmetic: scalars over Q or GF(p), sparse linear combinations,
//! and sparse row reduction.

mod combination;
mod matrix;
mod scalar;

pub use combination::Combination;
pub use matrix::{invert_dense, rank_of_rows, small_integer, Echelon, SparseMatrix, SparseRow};
pub use scalar::{Field, Scalar, MAX_PRIME};
