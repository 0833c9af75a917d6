//! Exact analysis of polytopal cut-and-project schemes.
pub mod algebra;
pub mod complexity;
pub mod diophantine;
pub mod empirics;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod io;
pub mod report;
pub mod scheme;
pub use error::{Error, Result};
