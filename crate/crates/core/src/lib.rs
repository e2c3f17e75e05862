//! Exact computations for finitely generated matrix group representations.

pub mod algebra;
pub mod error;
pub mod field;
pub mod identity;
pub mod integral;
pub mod linalg;
pub mod matrix;
pub mod rep;
pub mod words;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use linalg::{assemble_flag_basis, fixed_space, kernel, quotient_action, rref, Echelon, Flag, Subspace};
pub use matrix::Matrix;
