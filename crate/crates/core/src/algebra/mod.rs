//! Exact arithmetic: number fields, matrices, lattices.

pub mod field;
pub mod lattice;
pub mod linform;
pub mod matrix;
pub(crate) mod poly;

pub use field::{exact_compare, parse_rational, rational_string, FieldScalar, NumberField};
pub use lattice::{det_int, hnf_and_index, hnf_rows, integer_kernel, Index, Lattice};
pub use linform::{rat_f64, LinForm};
pub use matrix::{dot, field_rank, q, FieldMatrix, QMatrix};
