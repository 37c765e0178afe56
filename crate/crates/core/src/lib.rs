//! Restricted equivalence functions, similarity-based approximate reasoning
//! in flat and hierarchical form, and operation-count benchmarking.

pub mod algebra;
pub mod bench;
pub mod equivalence;
pub mod error;
pub mod fuzzyset;
pub mod hier;
pub mod render;
pub mod reproduce;
pub mod sample;
pub mod sbar;
pub mod suites;
pub mod system;
pub mod unit;

pub use error::{Error, ErrorClass, Result};
pub use unit::{grid, UnitValue};
